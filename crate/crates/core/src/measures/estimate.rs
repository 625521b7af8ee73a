use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ball::{ball_intrinsic_volume, ball_volume, dual_constant, sphere_area};
use super::{IntrinsicVolumeVector, Method};
use crate::bodies::{convex_hull, Body};
use crate::curvature::{area_jacobian, gauss_curvature, quadric_axes};
use crate::error::{Error, Result};
use crate::linalg::{dot, orthonormalize};
use crate::rng::{gaussian_vec, par_samples, sphere_point};
use crate::scalar::{from_f64_vec, to_f64_vec, Scalar};
use crate::stats::EstimatorResult;

pub const MAX_CONDITION: f64 = 1e8;

fn collect<R>(draws: Vec<Result<R>>) -> Result<Vec<R>> {
    draws.into_iter().collect()
}

/// Per-sample Kubota draws and the factor turning their mean into `V_j`. Every body sees the
/// same random frames for a given seed, so draws of different bodies can be paired.
pub(crate) fn kubota_draws<T: Scalar>(body: &Body<T>, j: usize, samples: usize, seed: u64) -> Result<(Vec<f64>, f64)> {
    let n = body.dim();
    if j == 0 || j > n {
        return Err(Error::InvalidArgument(format!("kubota estimate needs 1 <= j <= {n}, got {j}")));
    }
    let factor = ball_intrinsic_volume(n, j) / ball_volume(j);
    let draws: Vec<f64> = match body {
        Body::Polytope(p) => {
            let verts: Vec<Vec<f64>> = p.vertices().iter().map(|v| to_f64_vec(v)).collect();
            collect(par_samples(samples, seed, |rng, _| {
                let frame: Vec<Vec<f64>> = (0..j).map(|_| gaussian_vec(rng, n)).collect();
                let basis = orthonormalize(&frame, 1e-12);
                let proj: Vec<Vec<f64>> = verts.iter().map(|v| basis.iter().map(|b| dot(v, b)).collect()).collect();
                if j == 1 {
                    let lo = proj.iter().map(|x| x[0]).fold(f64::INFINITY, f64::min);
                    let hi = proj.iter().map(|x| x[0]).fold(f64::NEG_INFINITY, f64::max);
                    Ok(hi - lo)
                } else {
                    Ok(convex_hull(&proj)?.volume())
                }
            }))?
        }
        _ if j == 1 => collect(par_samples(samples, seed, |rng, _| {
            let u: Vec<T> = from_f64_vec(&sphere_point(rng, n));
            let neg: Vec<T> = u.iter().map(|&x| -x).collect();
            Ok((body.support(&u)? + body.support(&neg)?).as_f64())
        }))?,
        other => {
            return Err(Error::UnsupportedBodyKind { op: "kubota estimate for j > 1", kind: other.kind().as_str() })
        }
    };
    Ok((draws, factor))
}

/// `V_j` through Kubota's formula: a scaled mean of `j`-volumes of projections onto
/// uniformly random `j`-planes. Polytopes support every `j`; other bodies only `j = 1`,
/// where the projection length is the width `h(u) + h(-u)`.
pub fn kubota_estimate<T: Scalar>(body: &Body<T>, j: usize, samples: usize, seed: u64) -> Result<EstimatorResult> {
    let n = body.dim();
    if j == 0 {
        return Ok(EstimatorResult::exact(1.0));
    }
    if j > n {
        return Err(Error::InvalidArgument(format!("j = {j} exceeds the dimension {n}")));
    }
    if let (Body::Polytope(p), true) = (body, j == n) {
        return Ok(EstimatorResult::exact(p.volume().as_f64()));
    }
    let (draws, factor) = kubota_draws(body, j, samples, seed)?;
    Ok(EstimatorResult::from_draws(&draws, factor, seed))
}

/// Volume by hit-or-miss sampling of the bounding box.
pub fn volume_hit_or_miss<T: Scalar>(body: &Body<T>, samples: usize, seed: u64) -> Result<EstimatorResult> {
    parallel_volume(body, 0.0, samples, seed)
}

/// `|K + rD_n|` by hit-or-miss sampling of the bounding box enlarged by `r`.
pub fn parallel_volume<T: Scalar>(body: &Body<T>, r: f64, samples: usize, seed: u64) -> Result<EstimatorResult> {
    if !(r >= 0.0) {
        return Err(Error::InvalidArgument("parallel radius must be nonnegative".into()));
    }
    let (lo, hi) = body.bounding_box();
    let lo: Vec<f64> = to_f64_vec(&lo).iter().map(|x| x - r).collect();
    let hi: Vec<f64> = to_f64_vec(&hi).iter().map(|x| x + r).collect();
    let box_volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let draws = collect(par_samples(samples, seed, |rng, _| {
        let x: Vec<T> = lo.iter().zip(&hi).map(|(&a, &b)| T::lit(a + (b - a) * rng.random::<f64>())).collect();
        let hit = if r == 0.0 { body.contains(&x) } else { body.dist(&x)?.as_f64() <= r };
        Ok(if hit { 1.0 } else { 0.0 })
    }))?;
    Ok(EstimatorResult::from_draws(&draws, box_volume, seed))
}

/// Least-squares fit of a Steiner-type polynomial `|K + rD| = Σ_k r^k |D_k| V_{n-k}` to
/// Monte Carlo volumes of parallel bodies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SteinerFit {
    /// `V_0, ..., V_n` (dual volumes for the radial variant). `V_0 = 1` is imposed.
    pub volumes: IntrinsicVolumeVector,
    /// Covariance of `V_1, ..., V_n`.
    pub covariance: Vec<Vec<f64>>,
    pub radii: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub condition_number: f64,
}

/// `count` Chebyshev nodes on `[0.1 d, d]`, ascending.
pub fn chebyshev_radii(count: usize, diameter: f64) -> Vec<f64> {
    let (a, b) = (0.1 * diameter, diameter);
    let mut r: Vec<f64> = (0..count)
        .map(|i| {
            let t = ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * count) as f64).cos();
            0.5 * (a + b) + 0.5 * (b - a) * t
        })
        .collect();
    r.sort_by(|x, y| x.partial_cmp(y).unwrap());
    r
}

fn diameter_estimate<T: Scalar>(body: &Body<T>) -> f64 {
    match body {
        Body::Ball { radius, .. } => 2.0 * radius.as_f64(),
        Body::Ellipsoid { semi_axes, .. } => 2.0 * semi_axes.iter().fold(T::zero(), |m, &a| m.max(a)).as_f64(),
        Body::Polytope(p) => p.diameter().as_f64(),
        _ => body.diameter_bound().as_f64(),
    }
}

fn fit_polynomial(
    n: usize,
    radii: &[f64],
    counts: &[usize],
    box_volume: f64,
    samples: usize,
) -> Result<(Vec<f64>, Vec<Vec<f64>>, f64)> {
    let m = radii.len();
    let m_f = samples as f64;
    let p: Vec<f64> = counts.iter().map(|&c| c as f64 / m_f).collect();
    // subtract the known leading term r^n |D_n| V_0
    let y = DVector::from_fn(m, |i, _| box_volume * p[i] - radii[i].powi(n as i32) * ball_volume(n));
    let x = DMatrix::from_fn(m, n, |i, k| radii[i].powi(k as i32) * ball_volume(k));
    let sv = x.clone().svd(false, false).singular_values;
    let cond = sv.max() / sv.min();
    if !(cond <= MAX_CONDITION) {
        return Err(Error::IllConditioned(cond));
    }
    let qr = x.qr();
    let (q, r) = (qr.q(), qr.r());
    let a = r.solve_upper_triangular(&q.transpose()).ok_or(Error::IllConditioned(f64::INFINITY))?;
    let theta = &a * y;
    let sigma = DMatrix::from_fn(m, m, |i, l| {
        let lo = p[i.min(l)];
        box_volume * box_volume * (lo - p[i] * p[l]) / m_f
    });
    let cov = &a * sigma * a.transpose();
    // theta[k] multiplies r^k |D_k|, i.e. it estimates V_{n-k}
    let values: Vec<f64> = (1..=n).map(|j| theta[n - j]).collect();
    let cov_j: Vec<Vec<f64>> = (1..=n).map(|i| (1..=n).map(|l| cov[(n - i, n - l)]).collect()).collect();
    Ok((values, cov_j, cond))
}

fn steiner_generic<T: Scalar>(
    body: &Body<T>,
    radii: Option<&[f64]>,
    samples: usize,
    seed: u64,
    distance: impl Fn(&[T]) -> Result<T> + Sync,
    method: Method,
) -> Result<SteinerFit> {
    let n = body.dim();
    let radii: Vec<f64> = match radii {
        Some(r) => {
            let mut r = r.to_vec();
            r.sort_by(|a, b| a.partial_cmp(b).unwrap());
            r
        }
        None => chebyshev_radii(n + 3, diameter_estimate(body)),
    };
    if radii.len() < n || radii.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::InvalidArgument("need at least n positive radii".into()));
    }
    let r_max = *radii.last().unwrap();
    let (lo, hi) = body.bounding_box();
    let lo: Vec<f64> = to_f64_vec(&lo).iter().map(|x| x - r_max).collect();
    let hi: Vec<f64> = to_f64_vec(&hi).iter().map(|x| x + r_max).collect();
    let box_volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let dists: Vec<f64> = collect(par_samples(samples, seed, |rng, _| {
        let x: Vec<T> = lo.iter().zip(&hi).map(|(&a, &b)| T::lit(a + (b - a) * rng.random::<f64>())).collect();
        Ok(distance(&x)?.as_f64())
    }))?;
    let counts: Vec<usize> = radii.iter().map(|&r| dists.iter().filter(|&&d| d <= r).count()).collect();
    let (values, covariance, cond) = fit_polynomial(n, &radii, &counts, box_volume, samples)?;
    let mut all = vec![1.0];
    all.extend(&values);
    let mut errs = vec![0.0];
    errs.extend((0..n).map(|i| covariance[i][i].max(0.0).sqrt()));
    let mut methods = vec![Method::Exact];
    methods.extend(std::iter::repeat_n(method, n));
    Ok(SteinerFit {
        volumes: IntrinsicVolumeVector { values: all, std_errors: errs, methods },
        covariance,
        radii,
        samples,
        seed,
        condition_number: cond,
    })
}

/// All intrinsic volumes of any body from the volumes of its parallel bodies.
pub fn steiner_fit<T: Scalar>(body: &Body<T>, radii: Option<&[f64]>, samples: usize, seed: u64) -> Result<SteinerFit> {
    steiner_generic(body, radii, samples, seed, |x| body.dist(x), Method::SteinerFit)
}

/// Dual volumes `Ṽ_0, ..., Ṽ_n` from the volumes of radial parallel bodies.
pub fn radial_steiner_fit<T: Scalar>(
    body: &Body<T>,
    radii: Option<&[f64]>,
    samples: usize,
    seed: u64,
) -> Result<SteinerFit> {
    if !body.contains_origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    steiner_generic(body, radii, samples, seed, |x| body.rdist(x), Method::RadialSteinerFit)
}

/// Dual volume `Ṽ_q(K) = c_q ∫ ρ_K^q dσ`. For `q = 0` this returns `V̂_0 = ∫ ln ρ_K dσ`.
pub fn dual_volume<T: Scalar>(body: &Body<T>, q: f64, samples: usize, seed: u64) -> Result<EstimatorResult> {
    if !body.contains_origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let n = body.dim();
    let draws = collect(par_samples(samples, seed, |rng, _| {
        let u: Vec<T> = from_f64_vec(&sphere_point(rng, n));
        let rho = body.radial(&u)?.as_f64();
        Ok(if q == 0.0 { rho.ln() } else { rho.powf(q) })
    }))?;
    let factor = if q == 0.0 { 1.0 } else { dual_constant(n, q) };
    Ok(EstimatorResult::from_draws(&draws, factor, seed))
}

/// `Ω_q(K) = ∫_{∂K} |x|^{(q-n)(n-1)/(n+1)} H_{n-1}^{1/(n+1)} dμ` for balls and ellipsoids,
/// sampling the boundary as the image of the unit sphere.
pub fn omega_q<T: Scalar>(body: &Body<T>, q: f64, samples: usize, seed: u64) -> Result<EstimatorResult> {
    let (c, a) = quadric_axes(body, "omega_q")?;
    let n = c.len();
    let nf = n as f64;
    let power = (q - nf) * (nf - 1.0) / (nf + 1.0);
    let draws: Vec<f64> = par_samples(samples, seed, |rng, _| {
        let u = sphere_point(rng, n);
        let x: Vec<f64> = c.iter().zip(&a).zip(&u).map(|((ci, ai), ui)| ci + ai * ui).collect();
        let r = crate::linalg::norm(&x);
        let weight = if power == 0.0 { 1.0 } else { r.powf(power) };
        weight * gauss_curvature(&a, &u).powf(1.0 / (nf + 1.0)) * area_jacobian(&a, &u)
    });
    Ok(EstimatorResult::from_draws(&draws, sphere_area(n), seed))
}

/// `∫ |h_K - h_L| dσ`.
pub fn l1_metric<T: Scalar>(k: &Body<T>, l: &Body<T>, samples: usize, seed: u64) -> Result<EstimatorResult> {
    let n = k.dim();
    let draws = collect(par_samples(samples, seed, |rng, _| {
        let u: Vec<T> = from_f64_vec(&sphere_point(rng, n));
        Ok((k.support(&u)? - l.support(&u)?).abs().as_f64())
    }))?;
    Ok(EstimatorResult::from_draws(&draws, 1.0, seed))
}
