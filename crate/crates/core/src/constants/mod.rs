//! Dimensional constants of random and best polytopal approximation of the ball, the known
//! tiling numbers, and a numerical audit of the elementary Gamma-function estimates that
//! bound them.

mod suite;

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::measures::ball::{ball_intrinsic_volume, ln_ball_intrinsic_volume, ln_ball_volume};

pub use suite::{inequality_suite, CheckRecord, CheckSummary, SuiteReport, Verdict, KNOWN_FINDINGS, MAX_SUITE_DIM};

fn check_nj(n: usize, j: usize) -> Result<()> {
    if n < 2 || j == 0 || j > n {
        return Err(Error::InvalidArgument(format!("need n >= 2 and 1 <= j <= n, got n = {n}, j = {j}")));
    }
    Ok(())
}

/// `ln Γ(j + 1 + 2/(n-1)) - ln Γ(j + 1)`.
pub(crate) fn ln_gamma_ratio(n: usize, j: usize) -> f64 {
    let s = 2.0 / (n as f64 - 1.0);
    ln_gamma(j as f64 + 1.0 + s) - ln_gamma(j as f64 + 1.0)
}

/// `ln |∂D_n|^{2/(n-1)}`.
pub(crate) fn ln_sphere_power(n: usize) -> f64 {
    2.0 / (n as f64 - 1.0) * ((n as f64).ln() + ln_ball_volume(n as f64))
}

pub fn ln_alpha(n: usize, j: usize) -> Result<f64> {
    check_nj(n, j)?;
    let nf = n as f64;
    let lead = (1.0 - 2.0 / (nf + 1.0)).ln();
    let v1 = nf.ln() + ln_ball_volume(nf) - ln_ball_volume(nf - 1.0);
    Ok(lead + 2.0 / (nf - 1.0) * v1 + ln_gamma_ratio(n, j))
}

/// Constant of the random inscribed polytope limit for `V_j` of the ball.
pub fn alpha(n: usize, j: usize) -> Result<f64> {
    Ok(ln_alpha(n, j)?.exp())
}

pub fn ln_beta(n: usize, j: usize) -> Result<f64> {
    let la = ln_alpha(n, j)?;
    let nf = n as f64;
    Ok(la + (j as f64).ln() + ln_ball_intrinsic_volume(n, j)
        - (2.0 * nf).ln()
        - ln_ball_volume(nf)
        - ln_sphere_power(n))
}

/// `β(n, j) = α(n, j) j V_j(D_n) / (2n |D_n|) · |∂D_n|^{-2/(n-1)}`.
pub fn beta(n: usize, j: usize) -> Result<f64> {
    Ok(ln_beta(n, j)?.exp())
}

/// Closed form of `β(n, n)` that avoids `α`.
pub fn beta_top(n: usize) -> Result<f64> {
    check_nj(n, n)?;
    let nf = n as f64;
    Ok((0.5f64.ln() + (1.0 - 2.0 / (nf + 1.0)).ln() - 2.0 / (nf - 1.0) * ln_ball_volume(nf - 1.0)
        + ln_gamma_ratio(n, n))
    .exp())
}

/// Recovers `α(n, j)` from `β(n, j)`.
pub fn alpha_from_beta(n: usize, j: usize, beta_value: f64) -> Result<f64> {
    check_nj(n, j)?;
    let nf = n as f64;
    let scale =
        (j as f64).ln() + ln_ball_intrinsic_volume(n, j) - (2.0 * nf).ln() - ln_ball_volume(nf) - ln_sphere_power(n);
    Ok((beta_value.ln() - scale).exp())
}

/// Limit of `N^{2/(n-1)} E Δ_j(D_n, P_N)` for `N` uniform random points on the sphere.
pub fn random_inscribed_limit(n: usize, j: usize) -> Result<f64> {
    Ok(0.5 * j as f64 * ball_intrinsic_volume(n, j) * alpha(n, j)?)
}

/// A tiling number, either known exactly or only bracketed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TilingValue {
    Exact {
        value: f64,
    },
    /// Unknown value. `lower`/`upper` are rigorous where given; `asymptotic` marks bounds
    /// that only hold up to `o(1)` or unspecified absolute constants.
    Interval {
        lower: Option<f64>,
        upper: Option<f64>,
        asymptotic: bool,
    },
}

impl TilingValue {
    pub fn value(&self) -> Option<f64> {
        match self {
            TilingValue::Exact { value } => Some(*value),
            TilingValue::Interval { .. } => None,
        }
    }
}

/// Delone, Dirichlet-Voronoi and the two Laguerre tiling numbers in `R^{n-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TilingNumbers {
    pub n: usize,
    pub del: TilingValue,
    pub div: TilingValue,
    pub ldel: TilingValue,
    pub ldiv: TilingValue,
}

/// Two-sided bracket for `del_{n-1}` from the ball-volume bounds of Mankiewicz and Schütt.
pub fn delone_bracket(n: usize) -> (f64, f64) {
    let nf = n as f64;
    let lo = ((nf - 1.0) / (nf + 1.0)).ln() - 2.0 / (nf - 1.0) * ln_ball_volume(nf - 1.0);
    (lo.exp(), (lo + ln_gamma_ratio(n, n)).exp())
}

pub fn known_tiling_numbers(n: usize) -> Result<TilingNumbers> {
    let s3 = 3f64.sqrt();
    let exact = |value: f64| TilingValue::Exact { value };
    match n {
        0 | 1 => Err(Error::InvalidArgument("tiling numbers start at n = 2".into())),
        2 => Ok(TilingNumbers {
            n,
            del: exact(1.0 / 6.0),
            div: exact(1.0 / 12.0),
            ldel: exact(1.0 / 16.0),
            ldiv: exact(1.0 / 16.0),
        }),
        3 => Ok(TilingNumbers {
            n,
            del: exact(1.0 / (2.0 * s3)),
            div: exact(5.0 / (18.0 * s3)),
            ldel: exact(1.0 / (6.0 * s3) - 1.0 / (8.0 * PI)),
            ldiv: exact(5.0 / (18.0 * s3) - 1.0 / (4.0 * PI)),
        }),
        _ => {
            let (lo, hi) = delone_bracket(n);
            Ok(TilingNumbers {
                n,
                del: TilingValue::Interval { lower: Some(lo), upper: Some(hi), asymptotic: false },
                // div <= del, lower order terms carry unknown constants
                div: TilingValue::Interval { lower: None, upper: Some(hi), asymptotic: false },
                ldel: TilingValue::Interval { lower: None, upper: None, asymptotic: true },
                ldiv: TilingValue::Interval {
                    lower: Some(0.25 / (PI * E)),
                    upper: Some(0.97 / (PI * E)),
                    asymptotic: true,
                },
            })
        }
    }
}

/// `Ŵ(D_n) = Σ_j j V_j(D_n)` summed directly and through `V_1(D_n) W(D_{n-1})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WHat {
    pub n: usize,
    pub direct: f64,
    pub factored: f64,
    pub relative_gap: f64,
}

pub fn what_hat(n: usize) -> Result<WHat> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let direct: f64 = (1..=n).map(|j| j as f64 * ball_intrinsic_volume(n, j)).sum();
    let wills_lower: f64 = (0..n).map(|j| ball_intrinsic_volume(n - 1, j)).sum();
    let factored = ball_intrinsic_volume(n, 1) * wills_lower;
    Ok(WHat { n, direct, factored, relative_gap: (direct - factored).abs() / factored })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_alpha_values() {
        for j in 1..=3 {
            assert!((alpha(3, j).unwrap() - 2.0 * (j as f64 + 1.0)).abs() < 1e-12);
        }
        assert!((alpha(2, 2).unwrap() - 4.0 * PI * PI).abs() < 1e-11);
        assert!((random_inscribed_limit(2, 2).unwrap() - 4.0 * PI.powi(3)).abs() < 1e-10);
        assert!((random_inscribed_limit(3, 1).unwrap() - 8.0).abs() < 1e-12);
        assert!((random_inscribed_limit(3, 2).unwrap() - 12.0 * PI).abs() < 1e-11);
        assert!((random_inscribed_limit(3, 3).unwrap() - 16.0 * PI).abs() < 1e-11);
    }

    #[test]
    fn beta_top_agrees_with_general_formula() {
        for n in 2..=60 {
            let a = beta(n, n).unwrap();
            let b = beta_top(n).unwrap();
            assert!((a - b).abs() <= 1e-12 * b, "n={n}");
        }
    }

    #[test]
    fn tiling_numbers_order() {
        for n in [2, 3] {
            let t = known_tiling_numbers(n).unwrap();
            assert!(t.div.value().unwrap() <= t.del.value().unwrap());
            assert!(t.ldel.value().unwrap() <= t.del.value().unwrap());
            assert!(t.ldiv.value().unwrap() <= t.div.value().unwrap());
        }
        assert!(matches!(known_tiling_numbers(5).unwrap().del, TilingValue::Interval { .. }));
    }

    #[test]
    fn what_hat_identity() {
        for n in 1..=50 {
            assert!(what_hat(n).unwrap().relative_gap < 1e-10, "n={n}");
        }
    }
}
