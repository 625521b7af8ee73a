//! Deviation functionals between convex bodies: intrinsic volume deviations, Wills and
//! stochastic Wills deviations, their radial (dual) counterparts, and the comparisons with
//! the `L^1` metric.

mod comparison;
mod dual;
mod volumes;

use serde::{Deserialize, Serialize};

use crate::bodies::{intersect, Intersected};
use crate::error::{Error, Result};
use crate::measures::ball_volume;
use crate::rng::par_samples;
use crate::stats::EstimatorResult;
use crate::Body;

pub use comparison::{
    delta1_comparison, disc_triangle_branch_values, disc_triangle_closed_form, disc_triangle_curves,
    disc_triangle_grid, triangle_violation, Delta1Comparison, DiscTriangleBranch, DiscTriangleRow, TriangleViolation,
};
pub use dual::{dual_delta, dual_delta_lambda, dual_delta_sigma, dual_wills, DualDeviation};
pub use volumes::{intrinsic_volume, intrinsic_volume_vector, VolumeEstimate, VolumeMethod};

use volumes::{linear_combination, Operand};

/// Moments `m_k = E Λ^k`, `k = 0..=n`, of a nonnegative random radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence {
    moments: Vec<f64>,
    label: String,
}

impl MomentSequence {
    /// Checks `m_0 = 1`, nonnegativity and log-convexity `m_k^2 <= m_{k-1} m_{k+1}`, which
    /// every nonnegative random variable satisfies.
    pub fn new(moments: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if moments.first() != Some(&1.0) {
            return Err(Error::InvalidArgument("moment sequence must start with m_0 = 1".into()));
        }
        if moments.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::InvalidArgument("moments must be finite and nonnegative".into()));
        }
        for k in 1..moments.len().saturating_sub(1) {
            let (a, b, c) = (moments[k - 1], moments[k], moments[k + 1]);
            if b * b > a * c * (1.0 + 1e-12) {
                return Err(Error::InvalidArgument(format!("moments are not log-convex at k = {k}")));
            }
        }
        Ok(MomentSequence { moments, label: label.into() })
    }

    /// `Λ ≡ r`.
    pub fn constant(r: f64, n: usize) -> Result<Self> {
        if !(r >= 0.0) {
            return Err(Error::InvalidArgument("radius must be nonnegative".into()));
        }
        Self::new((0..=n).map(|k| r.powi(k as i32)).collect(), format!("constant {r}"))
    }

    /// Weibull variable with density `2πt e^{-πt^2}`, whose moments are `1/|D_k|`.
    pub fn weibull_sigma(n: usize) -> Self {
        MomentSequence {
            moments: (0..=n).map(|k| 1.0 / ball_volume(k)).collect(),
            label: "Weibull(2, sqrt(1/pi))".into(),
        }
    }

    pub fn moments(&self) -> &[f64] {
        &self.moments
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Coefficient `|D_{n-j}| m_{n-j}` of `V_j` in the Λ-Wills functional.
    pub fn weight(&self, n: usize, j: usize) -> Result<f64> {
        let k = n - j;
        self.moments
            .get(k)
            .map(|m| ball_volume(k) * m)
            .ok_or_else(|| Error::InvalidArgument(format!("moment of order {k} not given")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeviationKind {
    Intrinsic { j: usize },
    Wills,
    Lambda { moments: String },
    L1Gap,
    Dual { q: f64 },
    DualLog,
    DualWills,
    DualLambda { moments: String },
}

/// One term of a summed deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub j: usize,
    pub value: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    #[serde(flatten)]
    pub kind: DeviationKind,
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub components: Vec<Component>,
}

impl DeviationReport {
    fn single(kind: DeviationKind, r: EstimatorResult) -> Self {
        DeviationReport {
            kind,
            value: r.value,
            std_error: r.std_error,
            samples: r.samples,
            seed: r.seed,
            components: vec![],
        }
    }

    fn summed(kind: DeviationKind, components: Vec<Component>, weights: &[f64], samples: usize, seed: u64) -> Self {
        let value = components.iter().zip(weights).map(|(c, w)| w * c.value).sum();
        let std_error = components.iter().zip(weights).map(|(c, w)| (w * c.std_error).powi(2)).sum::<f64>().sqrt();
        DeviationReport { kind, value, std_error, samples, seed, components }
    }

    /// `value >= -sigmas * std_error`.
    pub fn is_nonnegative(&self, sigmas: f64) -> bool {
        self.value >= -sigmas * self.std_error - 1e-12 * self.value.abs().max(1.0)
    }

    pub fn as_estimate(&self) -> EstimatorResult {
        EstimatorResult { value: self.value, std_error: self.std_error, samples: self.samples, seed: self.seed }
    }
}

/// How two bodies sit relative to each other.
pub(crate) enum Relation {
    /// `L ⊆ K`.
    SecondInside,
    /// `K ⊆ L`.
    FirstInside,
    Overlap(Body),
    Disjoint,
}

pub(crate) fn relate(k: &Body, l: &Body) -> Result<Relation> {
    if k.dim() != l.dim() {
        return Err(Error::InvalidArgument("bodies live in different dimensions".into()));
    }
    if l.is_subset_of(k)? {
        return Ok(Relation::SecondInside);
    }
    if k.is_subset_of(l)? {
        return Ok(Relation::FirstInside);
    }
    Ok(match intersect(k, l)? {
        Intersected::Body(b) => Relation::Overlap(b),
        Intersected::Empty => Relation::Disjoint,
    })
}

struct Pair<'a> {
    k: Operand<'a>,
    l: Operand<'a>,
    inter: Option<Operand<'a>>,
    relation: &'a Relation,
}

impl<'a> Pair<'a> {
    fn new(k: &'a Body, l: &'a Body, relation: &'a Relation) -> Self {
        let inter = match relation {
            Relation::Overlap(b) => Some(Operand::new(b)),
            _ => None,
        };
        Pair { k: Operand::new(k), l: Operand::new(l), inter, relation }
    }

    fn delta(&self, j: usize, method: VolumeMethod, samples: usize, seed: u64) -> Result<EstimatorResult> {
        if j == 0 {
            let v = if matches!(self.relation, Relation::Disjoint) { 2.0 } else { 0.0 };
            return Ok(EstimatorResult::exact(v));
        }
        let terms: Vec<(f64, &Operand)> = match self.relation {
            Relation::SecondInside => vec![(1.0, &self.k), (-1.0, &self.l)],
            Relation::FirstInside => vec![(1.0, &self.l), (-1.0, &self.k)],
            Relation::Overlap(_) => vec![(1.0, &self.k), (1.0, &self.l), (-2.0, self.inter.as_ref().unwrap())],
            Relation::Disjoint => vec![(1.0, &self.k), (1.0, &self.l)],
        };
        Ok(linear_combination(&terms, j, method, samples, seed)?.0)
    }

    fn components(&self, from: usize, method: VolumeMethod, samples: usize, seed: u64) -> Result<Vec<Component>> {
        (from..=self.k.body.dim())
            .map(|j| {
                let r = self.delta(j, method, samples, seed)?;
                Ok(Component { j, value: r.value, std_error: r.std_error })
            })
            .collect()
    }
}

fn check_j(n: usize, j: usize) -> Result<()> {
    if j == 0 || j > n {
        return Err(Error::InvalidArgument(format!("need 1 <= j <= {n}, got {j}")));
    }
    Ok(())
}

/// `Δ_j(K, L) = V_j(K) + V_j(L) - 2 V_j(K ∩ L)`.
pub fn delta_j(
    k: &Body,
    l: &Body,
    j: usize,
    method: VolumeMethod,
    samples: usize,
    seed: u64,
) -> Result<DeviationReport> {
    check_j(k.dim(), j)?;
    let relation = relate(k, l)?;
    let r = Pair::new(k, l, &relation).delta(j, method, samples, seed)?;
    Ok(DeviationReport::single(DeviationKind::Intrinsic { j }, r))
}

/// `Δ_Σ(K, L) = W(K) + W(L) - 2 W(K ∩ L)`, with the per-`j` deviations as components.
pub fn delta_sigma(k: &Body, l: &Body, method: VolumeMethod, samples: usize, seed: u64) -> Result<DeviationReport> {
    let relation = relate(k, l)?;
    let comps = Pair::new(k, l, &relation).components(0, method, samples, seed)?;
    let w = vec![1.0; comps.len()];
    Ok(DeviationReport::summed(DeviationKind::Wills, comps, &w, samples, seed))
}

/// `Δ_Λ(K, L) = Σ_j Δ_j(K, L) |D_{n-j}| E Λ^{n-j}`.
pub fn delta_lambda(
    k: &Body,
    l: &Body,
    lambda: &MomentSequence,
    method: VolumeMethod,
    samples: usize,
    seed: u64,
) -> Result<DeviationReport> {
    let n = k.dim();
    let weights: Vec<f64> = (0..=n).map(|j| lambda.weight(n, j)).collect::<Result<_>>()?;
    let relation = relate(k, l)?;
    let comps = Pair::new(k, l, &relation).components(0, method, samples, seed)?;
    Ok(DeviationReport::summed(
        DeviationKind::Lambda { moments: lambda.label().to_string() },
        comps,
        &weights,
        samples,
        seed,
    ))
}

/// The Wills functional computed as `Σ_j V_j` and as a Gaussian integral of the distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WillsReport {
    pub sum: EstimatorResult,
    pub integral: EstimatorResult,
}

impl WillsReport {
    pub fn z_score(&self) -> f64 {
        self.sum.z_score(self.integral.value, self.integral.std_error)
    }
}

/// Beyond this distance `e^{-π d^2}` is below `3e-9`.
const GAUSS_CUTOFF: f64 = 2.5;

pub(crate) fn gaussian_integral(
    body: &Body,
    distance: impl Fn(&[f64]) -> Result<f64> + Sync,
    samples: usize,
    seed: u64,
) -> Result<EstimatorResult> {
    use rand::Rng;
    let (lo, hi) = body.bounding_box();
    let lo: Vec<f64> = lo.iter().map(|x| x - GAUSS_CUTOFF).collect();
    let hi: Vec<f64> = hi.iter().map(|x| x + GAUSS_CUTOFF).collect();
    let volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let draws: Vec<f64> = par_samples(samples, seed, |rng, _| {
        let x: Vec<f64> = lo.iter().zip(&hi).map(|(&a, &b)| a + (b - a) * rng.random::<f64>()).collect();
        distance(&x).map(|d| (-std::f64::consts::PI * d * d).exp())
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok(EstimatorResult::from_draws(&draws, volume, seed))
}

/// `W(K)` both as `Σ_j V_j(K)` and as `∫ e^{-π dist(x, K)^2} dx`.
pub fn wills(body: &Body, method: VolumeMethod, samples: usize, seed: u64) -> Result<WillsReport> {
    let v = intrinsic_volume_vector(body, method, samples, seed)?;
    let (value, std_error) = v.wills();
    let sampled = v.methods.iter().any(|m| *m != crate::measures::Method::Exact);
    let sum = EstimatorResult { value, std_error, samples: if sampled { samples } else { 0 }, seed };
    let integral = gaussian_integral(body, |x| body.dist(x), samples, crate::rng::derive_seed(seed, 1))?;
    Ok(WillsReport { sum, integral })
}

/// `W_Λ(K) = Σ_j V_j(K) |D_{n-j}| E Λ^{n-j}`.
pub fn stochastic_wills(
    body: &Body,
    lambda: &MomentSequence,
    method: VolumeMethod,
    samples: usize,
    seed: u64,
) -> Result<EstimatorResult> {
    let n = body.dim();
    let v = intrinsic_volume_vector(body, method, samples, seed)?;
    let mut value = 0.0;
    let mut var = 0.0;
    for j in 0..=n {
        let w = lambda.weight(n, j)?;
        value += w * v.values[j];
        var += (w * v.std_errors[j]).powi(2);
    }
    Ok(EstimatorResult { value, std_error: var.sqrt(), samples, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{inscribed_polygon, make_cap, make_unit_cube};
    use std::f64::consts::PI;

    #[test]
    fn moment_sequences_are_validated() {
        assert!(MomentSequence::new(vec![1.0, 2.0, 1.0], "bad").is_err());
        assert!(MomentSequence::new(vec![0.5, 1.0], "bad").is_err());
        assert!(MomentSequence::constant(0.7, 4).is_ok());
        let w = MomentSequence::weibull_sigma(6);
        assert!(MomentSequence::new(w.moments().to_vec(), "copy").is_ok());
    }

    #[test]
    fn hexagon_deviation_is_exact() {
        let d = Body::unit_ball(2);
        let hex = Body::Polytope(inscribed_polygon(6).unwrap());
        let r = delta_j(&d, &hex, 2, VolumeMethod::Auto, 1000, 1).unwrap();
        assert_eq!(r.std_error, 0.0);
        assert!((r.value - (PI - 1.5 * 3f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn self_deviation_vanishes() {
        let cube = Body::Polytope(make_unit_cube(3).unwrap());
        for j in 1..=3 {
            assert_eq!(delta_j(&cube, &cube, j, VolumeMethod::Auto, 1000, 3).unwrap().value, 0.0);
        }
        let cap = make_cap(3, 0.2, 1).unwrap();
        let r = delta_j(&cap, &cap, 1, VolumeMethod::Kubota, 2000, 3).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn disjoint_caps_add_up() {
        let a = make_cap(2, 0.1, 1).unwrap();
        let b = make_cap(2, 0.1, -1).unwrap();
        let r = delta_j(&a, &b, 1, VolumeMethod::Auto, 1000, 1).unwrap();
        let half = 0.1f64.acos();
        assert!((r.value - 2.0 * (half + half.sin())).abs() < 1e-12);
    }
}
