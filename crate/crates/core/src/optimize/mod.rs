//! Best approximation of a convex body by inscribed polytopes with at most `N` vertices or
//! circumscribed polytopes with at most `N` facets.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bodies::{convex_hull, halfspace_intersection, Halfspace, PolytopeRecord};
use crate::curvature::quadric_axes;
use crate::deviations::{delta_j, intrinsic_volume, VolumeMethod};
use crate::error::{Error, Result};
use crate::linalg::{norm, orthonormalize, unit};
use crate::measures::{dual_constant, kubota_estimate, polytope_intrinsic_volume};
use crate::rng::{derive_seed, par_samples, sphere_point, SampleRng};
use crate::stats::EstimatorResult;
use crate::{Body, Polytope};

/// Largest dimension the optimizer accepts.
pub const MAX_OPT_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `P ⊆ K` with at most `N` vertices.
    Inscribed,
    /// `K ⊆ P` with at most `N` facets.
    Circumscribed,
}

/// Deviation minimized against the fixed body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Objective {
    Intrinsic {
        j: usize,
    },
    /// `Δ_Σ = Σ_j Δ_j`.
    Wills,
    /// `Δ̃_q` through radial functions about the origin.
    Dual {
        q: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub steps: usize,
    /// Initial perturbation of a touch point, in radians.
    pub initial_step: f64,
    /// Geometric cooling factor per step.
    pub cooling: f64,
    /// Relative objective change below which polishing halves its step.
    pub tolerance: f64,
    /// Samples per Monte Carlo objective evaluation; the final value uses ten times as many.
    pub samples: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 8,
            steps: 3000,
            initial_step: 0.3,
            cooling: 0.998,
            tolerance: 1e-13,
            samples: 4000,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 || !(self.cooling > 0.0 && self.cooling < 1.0) || !(self.initial_step > 0.0) {
            return Err(Error::InvalidArgument("need restarts >= 1, 0 < cooling < 1 and a positive step".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct BestApproxResult {
    pub polytope: Polytope,
    pub objective: f64,
    pub std_error: f64,
    /// Best objective of each restart.
    pub history: Vec<f64>,
    pub budget: usize,
    pub mode: Mode,
}

/// Serializable view of a [`BestApproxResult`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BestApproxRecord {
    pub polytope: PolytopeRecord,
    pub objective: f64,
    pub std_error: f64,
    pub history: Vec<f64>,
    pub budget: usize,
    pub mode: Mode,
}

impl BestApproxResult {
    pub fn to_record(&self) -> BestApproxRecord {
        BestApproxRecord {
            polytope: self.polytope.to_record(),
            objective: self.objective,
            std_error: self.std_error,
            history: self.history.clone(),
            budget: self.budget,
            mode: self.mode,
        }
    }

    /// Fraction of restarts within `rel` of the best one.
    pub fn restart_agreement(&self, rel: f64) -> f64 {
        let scale = self.objective.abs().max(1e-300);
        let best = self.history.iter().copied().fold(f64::INFINITY, f64::min);
        let close = self.history.iter().filter(|&&v| (v - best).abs() <= rel * scale).count();
        close as f64 / self.history.len() as f64
    }
}

/// Fixed data of one optimization: the body, how touch points map to it, and the
/// precomputed parts of the objective.
struct Problem<'a> {
    body: &'a Body,
    n: usize,
    mode: Mode,
    objective: Objective,
    /// Center and semi-axes when the body is a ball or ellipsoid.
    quadric: Option<(Vec<f64>, Vec<f64>)>,
    /// Body shifted so that an interior point sits at the origin, for radial maps.
    shifted: Option<(Body, Vec<f64>)>,
    /// `V_j(K)`, `j = 0..=n`, for intrinsic objectives.
    body_volumes: Vec<EstimatorResult>,
    /// Directions and `ρ_K` on them for dual objectives.
    radial: Vec<(Vec<f64>, f64)>,
}

impl<'a> Problem<'a> {
    fn new(body: &'a Body, mode: Mode, objective: Objective, config: &OptimizerConfig) -> Result<Self> {
        let n = body.dim();
        if n > MAX_OPT_DIM {
            return Err(Error::UnsupportedDimension { dim: n, what: "best approximation" });
        }
        let quadric = quadric_axes(body, "best approximation").ok();
        if quadric.is_none() && !matches!(body, Body::Polytope(_)) {
            return Err(Error::UnsupportedBodyKind { op: "best approximation", kind: body.kind().as_str() });
        }
        let shifted = match body {
            Body::Polytope(p) => {
                let c = p.interior_point().to_vec();
                let minus: Vec<f64> = c.iter().map(|x| -x).collect();
                Some((body.translated(&minus)?, c))
            }
            _ => None,
        };
        let big = config.samples * 10;
        let seed = derive_seed(config.seed, 77);
        let body_volumes = match objective {
            Objective::Intrinsic { j } if j == 0 || j > n => {
                return Err(Error::InvalidArgument(format!("need 1 <= j <= {n}, got {j}")));
            }
            Objective::Dual { .. } => Vec::new(),
            _ => (0..=n)
                .map(|j| Ok(intrinsic_volume(body, j, VolumeMethod::Auto, big, seed)?.result))
                .collect::<Result<_>>()?,
        };
        let radial = match objective {
            Objective::Dual { .. } => {
                if !body.contains_origin_interior() {
                    return Err(Error::OriginNotInterior);
                }
                par_samples(config.samples, derive_seed(config.seed, 78), |rng, _| {
                    let u = sphere_point(rng, n);
                    let r = body.radial(&u)?;
                    Ok((u, r))
                })
                .into_iter()
                .collect::<Result<_>>()?
            }
            _ => Vec::new(),
        };
        Ok(Problem { body, n, mode, objective, quadric, shifted, body_volumes, radial })
    }

    /// Touch point of the unit parameter `u`: a boundary point (inscribed) or an outer
    /// normal (circumscribed).
    fn boundary_point(&self, u: &[f64]) -> Result<Vec<f64>> {
        if let Some((c, a)) = &self.quadric {
            return Ok(c.iter().zip(a).zip(u).map(|((c, a), x)| c + a * x).collect());
        }
        let (shifted, c) = self.shifted.as_ref().expect("polytope bodies carry a shifted copy");
        let r = shifted.radial(u)?;
        Ok(c.iter().zip(u).map(|(c, x)| c + r * x).collect())
    }

    fn build(&self, params: &[Vec<f64>]) -> Result<Polytope> {
        match self.mode {
            Mode::Inscribed => {
                let pts: Vec<Vec<f64>> = params.iter().map(|u| self.boundary_point(u)).collect::<Result<_>>()?;
                convex_hull(&pts)
            }
            Mode::Circumscribed => {
                let hs: Vec<Halfspace<f64>> = params
                    .iter()
                    .map(|u| Ok(Halfspace::new(u.clone(), self.body.support(u)?)))
                    .collect::<Result<_>>()?;
                halfspace_intersection(&hs, None)
            }
        }
    }

    fn polytope_volume(&self, p: &Polytope, j: usize, samples: usize, seed: u64) -> Result<EstimatorResult> {
        match polytope_intrinsic_volume(p, j) {
            Some(v) => Ok(EstimatorResult::exact(v)),
            None => kubota_estimate(&Body::Polytope(p.clone()), j, samples, seed),
        }
    }

    /// Objective of a candidate. Every candidate respects containment by construction, so
    /// `Δ_j` reduces to a difference of intrinsic volumes.
    fn evaluate(&self, p: &Polytope, samples: usize, seed: u64) -> Result<EstimatorResult> {
        let sign = match self.mode {
            Mode::Inscribed => 1.0,
            Mode::Circumscribed => -1.0,
        };
        let single = |j: usize| -> Result<(f64, f64)> {
            let k = self.body_volumes[j];
            let v = self.polytope_volume(p, j, samples, seed)?;
            Ok((sign * (k.value - v.value), k.std_error.hypot(v.std_error)))
        };
        let (value, std_error) = match self.objective {
            Objective::Intrinsic { j } => single(j)?,
            Objective::Wills => (1..=self.n)
                .map(single)
                .try_fold((0.0, 0.0), |acc, r| r.map(|(v, s)| (acc.0 + v, acc.1 + s * s)))
                .map(|(v, var)| (v, var.sqrt()))?,
            Objective::Dual { q } => {
                let body = Body::Polytope(p.clone());
                if !body.contains_origin_interior() {
                    return Err(Error::OriginNotInterior);
                }
                let draws: Vec<f64> = self
                    .radial
                    .iter()
                    .take(samples)
                    .map(|(u, rk)| {
                        let rp = body.radial(u)?;
                        Ok(if q == 0.0 { (rk.ln() - rp.ln()).abs() } else { (rk.powf(q) - rp.powf(q)).abs() })
                    })
                    .collect::<Result<_>>()?;
                let factor = if q == 0.0 { 1.0 } else { dual_constant(self.n, q) };
                let r = EstimatorResult::from_draws(&draws, factor, seed);
                (r.value, r.std_error)
            }
        };
        Ok(EstimatorResult { value, std_error, samples, seed })
    }

    fn is_exact(&self) -> bool {
        let n = self.n;
        match self.objective {
            Objective::Intrinsic { j } => n <= 3 || j + 1 >= n,
            Objective::Wills => n <= 3,
            Objective::Dual { .. } => false,
        }
    }

    /// Objective used inside the search, `+∞` for degenerate or unbounded candidates.
    fn score(&self, params: &[Vec<f64>], samples: usize, seed: u64) -> f64 {
        self.build(params).and_then(|p| self.evaluate(&p, samples, seed)).map(|r| r.value).unwrap_or(f64::INFINITY)
    }
}

fn perturb(u: &[f64], step: f64, rng: &mut SampleRng) -> Vec<f64> {
    let g = crate::rng::gaussian_vec(rng, u.len());
    let v: Vec<f64> = u.iter().zip(&g).map(|(a, b)| a + step * b).collect();
    let s = norm(&v);
    v.iter().map(|x| x / s).collect()
}

/// Rotation of `u` by `angle` towards the tangent direction `t`.
fn rotate(u: &[f64], t: &[f64], angle: f64) -> Vec<f64> {
    u.iter().zip(t).map(|(a, b)| a * angle.cos() + b * angle.sin()).collect()
}

fn tangents(u: &[f64]) -> Vec<Vec<f64>> {
    let n = u.len();
    let mut cand = vec![u.to_vec()];
    cand.extend((0..n).map(|k| unit::<f64>(n, k)));
    orthonormalize(&cand, 1e-9).into_iter().skip(1).collect()
}

/// One annealing chain followed by coordinate polishing. Returns the touch parameters and
/// their objective under the chain's common random numbers.
fn chain(
    problem: &Problem,
    budget: usize,
    config: &OptimizerConfig,
    rng: &mut SampleRng,
    crn: u64,
) -> (Vec<Vec<f64>>, f64) {
    let n = problem.n;
    let samples = config.samples;
    let mut state: Vec<Vec<f64>> = Vec::new();
    let mut current = f64::INFINITY;
    for _ in 0..200 {
        state = (0..budget).map(|_| sphere_point(rng, n)).collect();
        current = problem.score(&state, samples, crn);
        if current.is_finite() {
            break;
        }
    }
    if !current.is_finite() {
        return (state, current);
    }
    let mut best = (state.clone(), current);
    let t0 = 0.05 * current.abs().max(1e-9);
    let mut temp = t0;
    for _ in 0..config.steps {
        let step = config.initial_step * (temp / t0).sqrt().max(1e-3);
        let i = rng.random_range(0..budget);
        let old = std::mem::take(&mut state[i]);
        state[i] = perturb(&old, step, rng);
        let f = problem.score(&state, samples, crn);
        if f < current || (f.is_finite() && rng.random::<f64>() < (-(f - current) / temp).exp()) {
            current = f;
            if f < best.1 {
                best = (state.clone(), f);
            }
        } else {
            state[i] = old;
        }
        temp *= config.cooling;
    }
    let (mut state, mut current) = best;
    let mut step = 0.1 * config.initial_step;
    while step > 1e-12 {
        let before = current;
        for i in 0..budget {
            for t in tangents(&state[i]) {
                for angle in [step, -step] {
                    let cand = rotate(&state[i], &t, angle);
                    let old = std::mem::replace(&mut state[i], cand);
                    let f = problem.score(&state, samples, crn);
                    if f < current {
                        current = f;
                    } else {
                        state[i] = old;
                    }
                }
            }
        }
        if before - current <= config.tolerance * current.abs().max(1e-300) {
            step *= 0.5;
        }
    }
    (state, current)
}

fn best_approximation(
    body: &Body,
    budget: usize,
    mode: Mode,
    objective: Objective,
    config: &OptimizerConfig,
) -> Result<BestApproxResult> {
    config.validate()?;
    let n = body.dim();
    if budget < n + 1 {
        return Err(Error::BudgetTooSmall { budget, min: n + 1 });
    }
    let problem = Problem::new(body, mode, objective, config)?;
    let crn = derive_seed(config.seed, 1);
    let runs: Vec<(Vec<Vec<f64>>, f64)> =
        par_samples(config.restarts, config.seed, |rng, _| chain(&problem, budget, config, rng, crn));
    let history: Vec<f64> = runs.iter().map(|r| r.1).collect();
    let (params, _) = runs
        .into_iter()
        .filter(|r| r.1.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or(Error::NonConvergence { iterations: config.steps, residual: f64::INFINITY })?;
    let polytope = problem.build(&params)?;
    let final_est = if problem.is_exact() {
        problem.evaluate(&polytope, 0, 0)?
    } else {
        problem.evaluate(&polytope, config.samples * 10, derive_seed(config.seed, 2))?
    };
    Ok(BestApproxResult { polytope, objective: final_est.value, std_error: final_est.std_error, history, budget, mode })
}

/// Best inscribed polytope with at most `budget` vertices, all on the boundary of `body`.
pub fn best_inscribed(
    body: &Body,
    budget: usize,
    objective: Objective,
    config: &OptimizerConfig,
) -> Result<BestApproxResult> {
    best_approximation(body, budget, Mode::Inscribed, objective, config)
}

/// Best circumscribed polytope with at most `budget` facets, all supporting `body`.
pub fn best_circumscribed(
    body: &Body,
    budget: usize,
    objective: Objective,
    config: &OptimizerConfig,
) -> Result<BestApproxResult> {
    best_approximation(body, budget, Mode::Circumscribed, objective, config)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimultaneousRatio {
    /// `max_j Δ_j(D_n, P) / V_j(D_n)`.
    pub ratio: f64,
    pub maximizing_j: usize,
    /// `Δ_j(D_n, P) / V_j(D_n)` for `j = 1..=n`.
    pub per_j: Vec<f64>,
    pub std_errors: Vec<f64>,
}

/// How well one polytope approximates the unit ball in every intrinsic volume at once.
pub fn simultaneous_ratio(polytope: &Polytope, samples: usize, seed: u64) -> Result<SimultaneousRatio> {
    let n = polytope.dim();
    let ball = Body::unit_ball(n);
    let p = Body::Polytope(polytope.clone());
    if !(p.is_subset_of(&ball)? || ball.is_subset_of(&p)?) {
        return Err(Error::InvalidArgument("polytope is neither inscribed in nor circumscribed about the ball".into()));
    }
    let mut per_j = Vec::with_capacity(n);
    let mut std_errors = Vec::with_capacity(n);
    for j in 1..=n {
        let vj = crate::measures::ball_intrinsic_volume(n, j);
        let d = delta_j(&ball, &p, j, VolumeMethod::Auto, samples, seed)?;
        per_j.push(d.value / vj);
        std_errors.push(d.std_error / vj);
    }
    let (k, ratio) = per_j.iter().copied().enumerate().max_by(|a, b| a.1.total_cmp(&b.1)).expect("n >= 1");
    Ok(SimultaneousRatio { ratio, maximizing_j: k + 1, per_j, std_errors })
}

/// `Δ_2(D_2, ·)` for the regular `N`-gon inscribed in or circumscribed about the unit disc.
pub fn oracle_2d(budget: usize, mode: Mode) -> Result<f64> {
    if budget < 3 {
        return Err(Error::BudgetTooSmall { budget, min: 3 });
    }
    let m = budget as f64;
    Ok(match mode {
        Mode::Inscribed => PI - 0.5 * m * (2.0 * PI / m).sin(),
        Mode::Circumscribed => m * (PI / m).tan() - PI,
    })
}
