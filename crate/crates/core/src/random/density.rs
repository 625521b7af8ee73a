use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::curvature::{area_jacobian, curvature_h, gauss_curvature, quadric_axes};
use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::measures::sphere_area;
use crate::rng::{par_samples, sphere_point};
use crate::stats::EstimatorResult;
use crate::Body;

/// Surface Monte Carlo samples behind the normalizing constant.
const NORMALIZATION_SAMPLES: usize = 20_000;
/// Envelopes accepting less often than this are refused.
const MIN_ACCEPTANCE: f64 = 1e-4;
/// Hard cap on proposals for a single draw.
const MAX_PROPOSALS: usize = 10_000_000;

/// Unnormalized densities on `∂K` with respect to surface area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityKind {
    Uniform,
    /// `H_{n-j}^{(n-1)/(n+1)} H_{n-1}^{1/(n+1)}`, optimal for `Δ_j` of inscribed polytopes.
    OptimalIntrinsic {
        j: usize,
    },
    /// `|x|^{(q-n)(n-1)/(n+1)} H_{n-1}^{1/(n+1)}`, optimal for the dual deviation `Δ̃_q`.
    OptimalDual {
        q: f64,
    },
    /// `ψ^{(n-1)/(n+1)} H_{n-1}^{1/(n+1)}` for the weight `ψ(x) = |x|^exponent`.
    OptimalWeighted {
        exponent: f64,
    },
}

impl DensityKind {
    /// Exponent of `|x|` in the weight `ψ`, when there is one.
    fn norm_exponent(self, n: usize) -> Option<f64> {
        match self {
            DensityKind::OptimalDual { q } => Some(q - n as f64),
            DensityKind::OptimalWeighted { exponent } => Some(exponent),
            _ => None,
        }
    }
}

/// A probability density on the boundary of a ball or axis-aligned ellipsoid, sampled by
/// rejection from the uniform distribution of the parameter `u ∈ S^{n-1}` of
/// `x = c + diag(a) u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDensity {
    center: Vec<f64>,
    axes: Vec<f64>,
    kind: DensityKind,
    /// `∫_{∂K}` of the unnormalized density.
    normalization: EstimatorResult,
    /// Upper bound of the proposal weight.
    envelope: f64,
    acceptance: f64,
}

impl BoundaryDensity {
    pub fn new(body: &Body, kind: DensityKind, seed: u64) -> Result<Self> {
        let (center, axes) = quadric_axes(body, "boundary density")?;
        let n = center.len();
        if let DensityKind::OptimalIntrinsic { j } = kind {
            if j == 0 || j > n {
                return Err(Error::InvalidArgument(format!("need 1 <= j <= {n}, got {j}")));
            }
        }
        if kind.norm_exponent(n).is_some_and(|e| e < 0.0) && !body.contains_origin_interior() {
            return Err(Error::OriginNotInterior);
        }
        let mut d = BoundaryDensity {
            center,
            axes,
            kind,
            normalization: EstimatorResult::exact(0.0),
            envelope: 0.0,
            acceptance: 0.0,
        };
        d.envelope = d.weight_bound();
        let draws: Vec<f64> = par_samples(NORMALIZATION_SAMPLES, seed, |rng, _| d.weight(&sphere_point(rng, n)))
            .into_iter()
            .collect::<Result<_>>()?;
        d.normalization = EstimatorResult::from_draws(&draws, sphere_area(n), seed);
        d.acceptance = d.normalization.value / (sphere_area(n) * d.envelope);
        if d.acceptance < MIN_ACCEPTANCE {
            return Err(Error::RejectionStall(d.acceptance));
        }
        Ok(d)
    }

    pub fn uniform(body: &Body, seed: u64) -> Result<Self> {
        Self::new(body, DensityKind::Uniform, seed)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn kind(&self) -> DensityKind {
        self.kind
    }

    pub fn normalization(&self) -> EstimatorResult {
        self.normalization
    }

    /// Expected fraction of accepted proposals.
    pub fn acceptance(&self) -> f64 {
        self.acceptance
    }

    pub fn point(&self, u: &[f64]) -> Vec<f64> {
        self.center.iter().zip(&self.axes).zip(u).map(|((c, a), x)| c + a * x).collect()
    }

    /// Parameter `u` of a boundary point, or `OffBoundary`.
    fn parameter(&self, x: &[f64]) -> Result<Vec<f64>> {
        let u: Vec<f64> = x.iter().zip(&self.center).zip(&self.axes).map(|((x, c), a)| (x - c) / a).collect();
        let level = norm(&u);
        if (level - 1.0).abs() > 1e-8 {
            return Err(Error::OffBoundary(level - 1.0));
        }
        Ok(u)
    }

    /// Outward unit normal at the point with parameter `u`.
    pub fn normal(&self, u: &[f64]) -> Vec<f64> {
        let g: Vec<f64> = u.iter().zip(&self.axes).map(|(x, a)| x / a).collect();
        let s = norm(&g);
        g.iter().map(|x| x / s).collect()
    }

    fn unnormalized(&self, x: &[f64], u: &[f64]) -> Result<f64> {
        let n = self.dim();
        let nf = n as f64;
        let gauss = gauss_curvature(&self.axes, u);
        let damp = (nf - 1.0) / (nf + 1.0);
        Ok(match self.kind {
            DensityKind::Uniform => 1.0,
            DensityKind::OptimalIntrinsic { j } => {
                let hk = match n - j {
                    0 => 1.0,
                    k if k == n - 1 => gauss,
                    k => {
                        let body = Body::Ellipsoid { center: self.center.clone(), semi_axes: self.axes.clone() };
                        curvature_h(&body, x, k)?
                    }
                };
                hk.powf(damp) * gauss.powf(1.0 / (nf + 1.0))
            }
            kind => {
                let e = kind.norm_exponent(n).expect("weighted kinds carry an exponent");
                norm(x).powf(e * damp) * gauss.powf(1.0 / (nf + 1.0))
            }
        })
    }

    /// Proposal weight: unnormalized density times the area element of the parametrization.
    fn weight(&self, u: &[f64]) -> Result<f64> {
        Ok(self.unnormalized(&self.point(u), u)? * area_jacobian(&self.axes, u))
    }

    fn weight_bound(&self) -> f64 {
        let n = self.dim();
        let nf = n as f64;
        let lo = self.axes.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.axes.iter().copied().fold(0.0, f64::max);
        let kappa_max = hi / (lo * lo);
        let jac_max = self.axes.iter().product::<f64>() / lo;
        let damp = (nf - 1.0) / (nf + 1.0);
        let gauss = kappa_max.powf((nf - 1.0) / (nf + 1.0));
        let density = match self.kind {
            DensityKind::Uniform => 1.0,
            DensityKind::OptimalIntrinsic { j } => kappa_max.powf((n - j) as f64 * damp) * gauss,
            kind => {
                let e = kind.norm_exponent(n).expect("weighted kinds carry an exponent");
                let c = norm(&self.center);
                let extreme = if e >= 0.0 {
                    c + hi
                } else {
                    // every y with |y| below this lies inside, since |diag(a)^{-1}(y - c)| < 1
                    let offset: f64 = self.center.iter().zip(&self.axes).map(|(c, a)| (c / a).powi(2)).sum();
                    (1.0 - offset.sqrt()) * lo
                };
                extreme.powf(e * damp) * gauss
            }
        };
        // slack for rounding in the exactly tight ball case
        density * jac_max * (1.0 + 1e-12)
    }

    /// Normalized density at a boundary point.
    pub fn pdf(&self, x: &[f64]) -> Result<f64> {
        let u = self.parameter(x)?;
        Ok(self.unnormalized(x, &u)? / self.normalization.value)
    }

    /// Parameter of one draw; the boundary point is `self.point(&u)`.
    pub fn draw_parameter(&self, rng: &mut impl Rng) -> Result<Vec<f64>> {
        let n = self.dim();
        for _ in 0..MAX_PROPOSALS {
            let u = sphere_point(rng, n);
            if rng.random::<f64>() * self.envelope < self.weight(&u)? {
                return Ok(u);
            }
        }
        Err(Error::RejectionStall(self.acceptance))
    }

    pub fn draw(&self, rng: &mut impl Rng) -> Result<Vec<f64>> {
        Ok(self.point(&self.draw_parameter(rng)?))
    }
}
