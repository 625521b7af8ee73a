use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{gaussian_integral, Component, DeviationKind, DeviationReport, MomentSequence, WillsReport};
use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::measures::{ball_volume, dual_constant};
use crate::rng::{derive_seed, par_samples, sphere_point};
use crate::stats::EstimatorResult;
use crate::Body;

/// `ρ_K(u), ρ_L(u)` on common random directions.
fn radial_pairs(k: &Body, l: &Body, samples: usize, seed: u64) -> Result<Vec<(f64, f64)>> {
    for b in [k, l] {
        if !b.contains_origin_interior() {
            return Err(Error::OriginNotInterior);
        }
    }
    let n = k.dim();
    par_samples(samples, seed, |rng, _| {
        let u = sphere_point(rng, n);
        Ok((k.radial(&u)?, l.radial(&u)?))
    })
    .into_iter()
    .collect()
}

fn power_gap(a: f64, b: f64, q: f64) -> f64 {
    if q == 0.0 {
        (a.ln() - b.ln()).abs()
    } else {
        (a.powf(q) - b.powf(q)).abs()
    }
}

/// Factor in front of `∫_{K△L} |x|^{q-n} dx`. In polar coordinates this integral equals
/// `(n|D_n|/|q|) ∫ |ρ_K^q - ρ_L^q| dσ` (`n|D_n| ∫ |ln ρ_K - ln ρ_L| dσ` for `q = 0`).
fn weighted_factor(n: usize, q: f64) -> f64 {
    let area = n as f64 * ball_volume(n);
    if q == 0.0 {
        1.0 / area
    } else {
        q.abs() * dual_constant(n, q) / area
    }
}

/// `Δ̃_q(K, L)` evaluated on the sphere and, independently, as a weighted volume of `K △ L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualDeviation {
    pub spherical: DeviationReport,
    pub weighted: DeviationReport,
}

impl DualDeviation {
    pub fn z_score(&self) -> f64 {
        self.spherical.as_estimate().z_score(self.weighted.value, self.weighted.std_error)
    }
}

/// `Δ̃_q(K, L) = c_q ∫ |ρ_K^q - ρ_L^q| dσ`; for `q = 0` the log deviation
/// `Δ̂_0 = ∫ |ln(ρ_K / ρ_L)| dσ`.
pub fn dual_delta(k: &Body, l: &Body, q: f64, samples: usize, seed: u64) -> Result<DualDeviation> {
    let n = k.dim();
    let kind = if q == 0.0 { DeviationKind::DualLog } else { DeviationKind::Dual { q } };
    let factor = if q == 0.0 { 1.0 } else { dual_constant(n, q) };
    let pairs = radial_pairs(k, l, samples, seed)?;
    let draws: Vec<f64> = pairs.iter().map(|&(a, b)| power_gap(a, b, q)).collect();
    let spherical = DeviationReport::single(kind.clone(), EstimatorResult::from_draws(&draws, factor, seed));

    // uniform points in the common bounding box; only K △ L contributes
    let (klo, khi) = k.bounding_box();
    let (llo, lhi) = l.bounding_box();
    let lo: Vec<f64> = klo.iter().zip(&llo).map(|(a, b)| a.min(*b) - 1e-6).collect();
    let hi: Vec<f64> = khi.iter().zip(&lhi).map(|(a, b)| a.max(*b) + 1e-6).collect();
    let volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let wseed = derive_seed(seed, 2);
    let wdraws: Vec<f64> = par_samples(samples, wseed, |rng, _| {
        let x: Vec<f64> = lo.iter().zip(&hi).map(|(&a, &b)| a + (b - a) * rng.random::<f64>()).collect();
        if k.contains(&x) == l.contains(&x) {
            0.0
        } else {
            norm(&x).powf(q - n as f64)
        }
    });
    let weighted =
        DeviationReport::single(kind, EstimatorResult::from_draws(&wdraws, volume * weighted_factor(n, q), wseed));
    Ok(DualDeviation { spherical, weighted })
}

/// `Δ̃_j` for `j = 1..=n` from one set of radial samples.
fn dual_components(k: &Body, l: &Body, samples: usize, seed: u64) -> Result<Vec<Component>> {
    let n = k.dim();
    let pairs = radial_pairs(k, l, samples, seed)?;
    Ok((1..=n)
        .map(|j| {
            let q = j as f64;
            let draws: Vec<f64> = pairs.iter().map(|&(a, b)| power_gap(a, b, q)).collect();
            let r = EstimatorResult::from_draws(&draws, dual_constant(n, q), seed);
            Component { j, value: r.value, std_error: r.std_error }
        })
        .collect())
}

/// `Σ_j` of per-direction sums, so the error of the total accounts for correlations.
fn paired_total(k: &Body, l: &Body, weights: &[f64], samples: usize, seed: u64) -> Result<EstimatorResult> {
    let n = k.dim();
    let pairs = radial_pairs(k, l, samples, seed)?;
    let draws: Vec<f64> = pairs
        .iter()
        .map(|&(a, b)| (1..=n).map(|j| weights[j] * dual_constant(n, j as f64) * power_gap(a, b, j as f64)).sum())
        .collect();
    Ok(EstimatorResult::from_draws(&draws, 1.0, seed))
}

/// `Δ̃_Σ(K, L) = Σ_{j=1}^n Δ̃_j(K, L)`.
pub fn dual_delta_sigma(k: &Body, l: &Body, samples: usize, seed: u64) -> Result<DeviationReport> {
    let n = k.dim();
    let total = paired_total(k, l, &vec![1.0; n + 1], samples, seed)?;
    let mut rep = DeviationReport::single(DeviationKind::DualWills, total);
    rep.components = dual_components(k, l, samples, seed)?;
    Ok(rep)
}

/// `Δ̃_Λ(K, L) = Σ_{j=1}^n Δ̃_j(K, L) |D_{n-j}| E Λ^{n-j}`.
pub fn dual_delta_lambda(
    k: &Body,
    l: &Body,
    lambda: &MomentSequence,
    samples: usize,
    seed: u64,
) -> Result<DeviationReport> {
    let n = k.dim();
    let weights: Vec<f64> = (0..=n).map(|j| lambda.weight(n, j)).collect::<Result<_>>()?;
    let total = paired_total(k, l, &weights, samples, seed)?;
    let mut rep = DeviationReport::single(DeviationKind::DualLambda { moments: lambda.label().to_string() }, total);
    rep.components = dual_components(k, l, samples, seed)?;
    Ok(rep)
}

/// `W̃(K)` both as `Σ_j Ṽ_j(K)` and as `∫ e^{-π rdist(x, K)^2} dx`.
pub fn dual_wills(body: &Body, samples: usize, seed: u64) -> Result<WillsReport> {
    if !body.contains_origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let n = body.dim();
    let draws: Vec<f64> = par_samples(samples, seed, |rng, _| {
        let u = sphere_point(rng, n);
        let rho = body.radial(&u)?;
        Ok((0..=n).map(|j| dual_constant(n, j as f64) * rho.powi(j as i32)).sum())
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let sum = EstimatorResult::from_draws(&draws, 1.0, seed);
    let integral = gaussian_integral(body, |x| body.rdist(x), samples, derive_seed(seed, 1))?;
    Ok(WillsReport { sum, integral })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::make_cube;

    #[test]
    fn ball_has_no_dual_deviation_from_itself() {
        let d = Body::unit_ball(3);
        for q in [-1.0, 0.0, 1.0, 2.5, 5.0] {
            let r = dual_delta(&d, &d, q, 500, 4).unwrap();
            assert_eq!(r.spherical.value, 0.0);
            assert_eq!(r.weighted.value, 0.0);
        }
    }

    #[test]
    fn dual_wills_of_ball_matches_wills() {
        let d = Body::unit_ball(2);
        let w = dual_wills(&d, 2000, 9).unwrap();
        assert!((w.sum.value - (1.0 + 2.0 * std::f64::consts::PI)).abs() < 1e-12);
    }

    #[test]
    fn origin_outside_is_rejected() {
        let sq = Body::Polytope(make_cube(2, 1.0).unwrap());
        let shifted = sq.translated(&[3.0, 0.0]).unwrap();
        assert_eq!(dual_delta(&sq, &shifted, 1.0, 10, 0).unwrap_err(), Error::OriginNotInterior);
    }
}
