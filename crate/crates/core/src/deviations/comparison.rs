use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{delta_j, relate, Relation, VolumeMethod};
use crate::bodies::{make_cap, make_triangle};
use crate::error::{Error, Result};
use crate::measures::ball_intrinsic_volume;
use crate::rng::{derive_seed, par_samples, sphere_point};
use crate::stats::EstimatorResult;
use crate::Body;

/// `Δ_1(K, L)` next to `V_1(D_n) δ_1(K, L)`, with `δ_1` the mean of `|h_K - h_L|` over the
/// sphere. Both come from the same directions, so `gap = Δ_1 - V_1(D_n) δ_1` has its own
/// (much smaller) error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Delta1Comparison {
    pub delta1: EstimatorResult,
    pub v1_delta_l1: EstimatorResult,
    pub gap: EstimatorResult,
    /// Whether `K ∪ L` looked convex on sampled segments.
    pub union_convex: bool,
}

const UNION_PROBES: usize = 2000;

fn support_pair(body: &Body, u: &[f64]) -> Result<(f64, f64)> {
    let neg: Vec<f64> = u.iter().map(|x| -x).collect();
    Ok((body.support(u)?, body.support(&neg)?))
}

/// Uniform point of `body` by rejection from its bounding box.
fn point_in(body: &Body, rng: &mut impl Rng) -> Option<Vec<f64>> {
    let (lo, hi) = body.bounding_box();
    (0..10_000).find_map(|_| {
        let x: Vec<f64> = lo.iter().zip(&hi).map(|(&a, &b)| a + (b - a) * rng.random::<f64>()).collect();
        body.contains(&x).then_some(x)
    })
}

fn union_looks_convex(k: &Body, l: &Body, seed: u64) -> bool {
    par_samples(UNION_PROBES, seed, |rng, _| {
        let (Some(a), Some(b)) = (point_in(k, rng), point_in(l, rng)) else {
            return true;
        };
        [0.25, 0.5, 0.75].iter().all(|&t| {
            let x: Vec<f64> = a.iter().zip(&b).map(|(p, q)| (1.0 - t) * p + t * q).collect();
            k.contains(&x) || l.contains(&x)
        })
    })
    .into_iter()
    .all(|ok| ok)
}

pub fn delta1_comparison(k: &Body, l: &Body, samples: usize, seed: u64) -> Result<Delta1Comparison> {
    let n = k.dim();
    let relation = relate(k, l)?;
    let inter = match &relation {
        Relation::SecondInside => Some(l),
        Relation::FirstInside => Some(k),
        Relation::Overlap(b) => Some(b),
        Relation::Disjoint => None,
    };
    let half = ball_intrinsic_volume(n, 1) / 2.0;
    let draws: Vec<(f64, f64)> = par_samples(samples, seed, |rng, _| {
        let u = sphere_point(rng, n);
        let (kp, km) = support_pair(k, &u)?;
        let (lp, lm) = support_pair(l, &u)?;
        let common = match inter {
            Some(b) => {
                let (ip, im) = support_pair(b, &u)?;
                ip + im
            }
            None => 0.0,
        };
        let dev = (kp + km) + (lp + lm) - 2.0 * common;
        let l1 = (kp - lp).abs() + (km - lm).abs();
        Ok((dev, l1))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let dev: Vec<f64> = draws.iter().map(|d| d.0).collect();
    let l1: Vec<f64> = draws.iter().map(|d| d.1).collect();
    let gap: Vec<f64> = draws.iter().map(|d| d.0 - d.1).collect();
    Ok(Delta1Comparison {
        delta1: EstimatorResult::from_draws(&dev, half, seed),
        v1_delta_l1: EstimatorResult::from_draws(&l1, half, seed),
        gap: EstimatorResult::from_draws(&gap, half, seed),
        union_convex: union_looks_convex(k, l, derive_seed(seed, 3)),
    })
}

/// Both sides of `Δ_j(L_ε, L_{-ε}) <= Δ_j(L_ε, D) + Δ_j(D, L_{-ε})`, where `L_{±ε}` are the
/// opposite caps of the unit ball cut at height `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleViolation {
    pub n: usize,
    pub j: usize,
    pub eps: f64,
    /// `Δ_j(D, L_ε) + Δ_j(D, L_{-ε})`.
    pub lhs: f64,
    /// `Δ_j(L_ε, L_{-ε})`.
    pub rhs: f64,
    /// Error of `rhs - lhs`.
    pub std_error: f64,
    /// `rhs - lhs` exceeds three standard errors.
    pub violated: bool,
}

pub fn triangle_violation(
    n: usize,
    j: usize,
    eps: f64,
    method: VolumeMethod,
    samples: usize,
    seed: u64,
) -> Result<TriangleViolation> {
    if j == 0 || j >= n {
        return Err(Error::InvalidArgument(format!("need 1 <= j <= n - 1 = {}, got {j}", n.saturating_sub(1))));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("cap height must lie in (0, 1), got {eps}")));
    }
    let ball = Body::unit_ball(n);
    let up = make_cap(n, eps, 1)?;
    let down = make_cap(n, eps, -1)?;
    let a = delta_j(&ball, &up, j, method, samples, seed)?;
    let b = delta_j(&ball, &down, j, method, samples, seed)?;
    let c = delta_j(&up, &down, j, method, samples, seed)?;
    let lhs = a.value + b.value;
    let rhs = c.value;
    let std_error = (a.std_error.powi(2) + b.std_error.powi(2) + c.std_error.powi(2)).sqrt();
    Ok(TriangleViolation { n, j, eps, lhs, rhs, std_error, violated: rhs - lhs > 3.0 * std_error.max(1e-12) })
}

/// How the triangle of circumradius `1 + h` sits relative to the unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscTriangleBranch {
    /// Triangle inside the disc (`h <= 0`).
    Inside,
    /// Boundaries cross (`0 < h < 1`).
    Crossing,
    /// Disc inside the triangle (`h >= 1`).
    Containing,
}

/// `(π δ_1, Δ_1)` from the formula of `branch`, evaluated at `h` even outside the branch's
/// own range (so that neighbouring branches can be compared at their common endpoint).
pub fn disc_triangle_branch_values(branch: DiscTriangleBranch, h: f64) -> (f64, f64) {
    use std::f64::consts::PI;
    let half_perimeter = 1.5 * 3f64.sqrt() * (1.0 + h);
    match branch {
        DiscTriangleBranch::Inside => (PI - half_perimeter, PI - half_perimeter),
        DiscTriangleBranch::Containing => (half_perimeter - PI, half_perimeter - PI),
        DiscTriangleBranch::Crossing => {
            let l1 = -2.0 * PI - half_perimeter + 6.0 * (2.0 * h + h * h).sqrt() + 6.0 * (1.0 / (1.0 + h)).asin();
            let root = (9.0 - 6.0 * h - 3.0 * h * h).sqrt();
            let dev = PI + half_perimeter - 3f64.sqrt() * root - 6.0 * ((1.0 + h + root) / 4.0).acos();
            (l1, dev)
        }
    }
}

/// `(branch, π δ_1, Δ_1)` for the unit disc against the triangle of circumradius `1 + h`.
pub fn disc_triangle_closed_form(h: f64) -> Result<(DiscTriangleBranch, f64, f64)> {
    if h <= -1.0 || !h.is_finite() {
        return Err(Error::InvalidArgument(format!("triangle needs h > -1, got {h}")));
    }
    let branch = if h <= 0.0 {
        DiscTriangleBranch::Inside
    } else if h >= 1.0 {
        DiscTriangleBranch::Containing
    } else {
        DiscTriangleBranch::Crossing
    };
    let (l1, dev) = disc_triangle_branch_values(branch, h);
    Ok((branch, l1, dev))
}

/// The grid `h = k / 100` for `k = -90..=300`.
pub fn disc_triangle_grid() -> Vec<f64> {
    (-90..=300).map(|k| k as f64 / 100.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscTriangleRow {
    pub h: f64,
    pub branch: DiscTriangleBranch,
    pub pi_delta1_exact: f64,
    pub delta1_exact: f64,
    pub pi_delta1_mc: f64,
    pub pi_delta1_se: f64,
    pub delta1_mc: f64,
    pub delta1_se: f64,
}

/// Closed forms and Monte Carlo estimates of `π δ_1` and `Δ_1` between the unit disc and
/// the triangle of circumradius `1 + h`, for each `h` of the grid.
pub fn disc_triangle_curves(h_grid: &[f64], samples: usize, seed: u64) -> Result<Vec<DiscTriangleRow>> {
    let disc = Body::unit_ball(2);
    h_grid
        .iter()
        .enumerate()
        .map(|(i, &h)| {
            let (branch, pi_delta1_exact, delta1_exact) = disc_triangle_closed_form(h)?;
            let tri = Body::Polytope(make_triangle(h)?);
            let cmp = delta1_comparison(&disc, &tri, samples, derive_seed(seed, i as u64))?;
            Ok(DiscTriangleRow {
                h,
                branch,
                pi_delta1_exact,
                delta1_exact,
                pi_delta1_mc: cmp.v1_delta_l1.value,
                pi_delta1_se: cmp.v1_delta_l1.std_error,
                delta1_mc: cmp.delta1.value,
                delta1_se: cmp.delta1.std_error,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_branch_meets_the_others() {
        let (a, b) = disc_triangle_branch_values(DiscTriangleBranch::Crossing, 0.0);
        let (a0, b0) = disc_triangle_branch_values(DiscTriangleBranch::Inside, 0.0);
        assert!((a - a0).abs() < 1e-12 && (b - b0).abs() < 1e-12);
        let (a, b) = disc_triangle_branch_values(DiscTriangleBranch::Crossing, 1.0);
        let (a1, b1) = disc_triangle_branch_values(DiscTriangleBranch::Containing, 1.0);
        assert!((a - a1).abs() < 1e-12 && (b - b1).abs() < 1e-12);
    }

    #[test]
    fn nested_bodies_have_no_gap() {
        let disc = Body::unit_ball(2);
        let tri = Body::Polytope(make_triangle(-0.3).unwrap());
        let c = delta1_comparison(&disc, &tri, 400, 5).unwrap();
        assert!(c.gap.value.abs() < 1e-9);
        assert!(c.union_convex);
    }

    #[test]
    fn caps_break_the_triangle_inequality() {
        let t = triangle_violation(2, 1, 0.05, VolumeMethod::Auto, 4000, 1).unwrap();
        assert!(t.violated, "{t:?}");
        assert!(triangle_violation(2, 2, 0.05, VolumeMethod::Auto, 10, 1).is_err());
    }
}
