use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use polyapprox::constants::{
    alpha, beta, inequality_suite, known_tiling_numbers, ln_alpha, random_inscribed_limit, what_hat,
};
use polyapprox::corpus::invariant_corpus;
use polyapprox::deviations::{
    delta1_comparison, delta_j, delta_lambda, delta_sigma, disc_triangle_closed_form, disc_triangle_curves,
    disc_triangle_grid, dual_delta, dual_delta_lambda, dual_delta_sigma, intrinsic_volume, intrinsic_volume_vector,
    triangle_violation, MomentSequence, VolumeMethod,
};
use polyapprox::measures::{
    ball_intrinsic_volume, ball_volume, dual_volume, kubota_estimate, polytope_intrinsic_volume,
};
use polyapprox::optimize::{best_circumscribed, best_inscribed, oracle_2d, Objective, OptimizerConfig};
use polyapprox::random::{
    expectation_harness, random_circumscribed, random_inscribed, BoundaryDensity, DensityKind, HarnessConfig,
};
use polyapprox::rng::derive_seed;
use polyapprox::Body;

use crate::body::parse_body;
use crate::config::{Density, DeviationKind, Format, ObjectiveKind, RunConfig, Side, Task};
use crate::error::CliError;

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

#[derive(Serialize)]
struct Record<'a, R: Serialize> {
    config: &'a RunConfig,
    result: R,
}

fn emit_json<R: Serialize>(cfg: &RunConfig, result: R) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(&Record { config: cfg, result }).map_err(|e| input(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// CSV with the run configuration on a leading comment line.
fn emit_csv(cfg: &RunConfig, body: &str) -> Result<String, CliError> {
    let config = serde_json::to_string(cfg).map_err(|e| input(e.to_string()))?;
    Ok(format!("# config: {config}\n{body}"))
}

fn moments(spec: &str, n: usize) -> Result<MomentSequence, CliError> {
    Ok(match spec {
        "weibull" => MomentSequence::weibull_sigma(n),
        s if s.starts_with("constant:") => {
            let r: f64 = s["constant:".len()..].parse().map_err(|e| input(format!("moments `{s}`: {e}")))?;
            MomentSequence::constant(r, n)?
        }
        s => {
            let m: Vec<f64> = s
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| input(format!("moments `{s}`: {e}")))?;
            if m.len() != n + 1 {
                return Err(input(format!("need {} moments m_0..m_{n}, got {}", n + 1, m.len())));
            }
            MomentSequence::new(m, s)?
        }
    })
}

fn need<T>(value: Option<T>, flag: &str, what: &str) -> Result<T, CliError> {
    value.ok_or_else(|| input(format!("{what} needs {flag}")))
}

fn is_unit_ball(b: &Body) -> bool {
    matches!(b, Body::Ball { center, radius } if *radius == 1.0 && center.iter().all(|c| *c == 0.0))
}

fn check_index(j: usize, n: usize) -> Result<(), CliError> {
    if j == 0 || j > n {
        return Err(input(format!("--j must lie in 1..={n}, got {j}")));
    }
    Ok(())
}

pub fn execute(cfg: &RunConfig) -> Result<String, CliError> {
    if cfg.format == Format::Csv && !cfg.task.has_csv() {
        return Err(input(format!(
            "{} has no CSV output; CSV is offered for curves and harness runs",
            cfg.task.name()
        )));
    }
    let (samples, seed) = (cfg.samples, cfg.seed);
    match &cfg.task {
        Task::Constants { dim, j } => {
            let n = *dim;
            if n < 2 {
                return Err(input("--dim must be at least 2"));
            }
            let indices: Vec<usize> = match j {
                Some(j) => {
                    check_index(*j, n)?;
                    vec![*j]
                }
                None => (1..=n).collect(),
            };
            let rows = indices
                .iter()
                .map(|&j| {
                    Ok(json!({
                        "j": j,
                        "ball_intrinsic_volume": ball_intrinsic_volume(n, j),
                        "alpha": alpha(n, j)?,
                        "ln_alpha": ln_alpha(n, j)?,
                        "beta": beta(n, j)?,
                        "random_inscribed_limit": random_inscribed_limit(n, j)?,
                    }))
                })
                .collect::<Result<Vec<_>, polyapprox::Error>>()?;
            emit_json(
                cfg,
                json!({
                    "n": n,
                    "ball_volume": ball_volume(n),
                    "indices": rows,
                    "tiling_numbers": known_tiling_numbers(n)?,
                    "w_hat": what_hat(n)?,
                }),
            )
        }
        Task::Estimate { dim, body, j, q, method } => {
            let k = parse_body(body, *dim)?;
            let method = VolumeMethod::from(*method);
            if let Some(q) = q {
                return emit_json(cfg, json!({ "dual_volume": dual_volume(&k, *q, samples, seed)?, "q": q }));
            }
            match j {
                Some(j) => {
                    check_index(*j, k.dim())?;
                    emit_json(cfg, json!({ "j": j, "estimate": intrinsic_volume(&k, *j, method, samples, seed)? }))
                }
                None => emit_json(cfg, intrinsic_volume_vector(&k, method, samples, seed)?),
            }
        }
        Task::Deviation { dim, kind, j, q, body, other, moments: m, method } => {
            let k = parse_body(body, *dim)?;
            let l = parse_body(other, Some(k.dim()))?;
            let n = k.dim();
            let method = VolumeMethod::from(*method);
            match kind {
                DeviationKind::Delta => {
                    let j = need(*j, "--j", "delta")?;
                    check_index(j, n)?;
                    emit_json(cfg, delta_j(&k, &l, j, method, samples, seed)?)
                }
                DeviationKind::Sigma => emit_json(cfg, delta_sigma(&k, &l, method, samples, seed)?),
                DeviationKind::Lambda => emit_json(cfg, delta_lambda(&k, &l, &moments(m, n)?, method, samples, seed)?),
                DeviationKind::Delta1 => emit_json(cfg, delta1_comparison(&k, &l, samples, seed)?),
                DeviationKind::Dual => emit_json(cfg, dual_delta(&k, &l, need(*q, "--q", "dual")?, samples, seed)?),
                DeviationKind::DualSigma => emit_json(cfg, dual_delta_sigma(&k, &l, samples, seed)?),
                DeviationKind::DualLambda => emit_json(cfg, dual_delta_lambda(&k, &l, &moments(m, n)?, samples, seed)?),
            }
        }
        Task::RandomLimit { dim, j, budgets, trials, body, density, mode } => {
            random_limit(cfg, *dim, *j, budgets, *trials, body, *density, *mode)
        }
        Task::Optimize { dim, budget, kind, j, q, body, mode, restarts, steps } => {
            let k = parse_body(body, Some(*dim))?;
            let objective = match kind {
                ObjectiveKind::Intrinsic => {
                    let j = need(*j, "--j", "the intrinsic objective")?;
                    check_index(j, *dim)?;
                    Objective::Intrinsic { j }
                }
                ObjectiveKind::Wills => Objective::Wills,
                ObjectiveKind::Dual => Objective::Dual { q: need(*q, "--q", "the dual objective")? },
            };
            let config =
                OptimizerConfig { restarts: *restarts, steps: *steps, samples, seed, ..OptimizerConfig::default() };
            let r = match mode {
                Side::Inscribed => best_inscribed(&k, *budget, objective, &config)?,
                Side::Circumscribed => best_circumscribed(&k, *budget, objective, &config)?,
            };
            let oracle = (*dim == 2 && is_unit_ball(&k) && objective == Objective::Intrinsic { j: 2 })
                .then(|| oracle_2d(*budget, (*mode).into()))
                .transpose()?;
            emit_json(
                cfg,
                json!({
                    "best": r.to_record(),
                    "restart_agreement": r.restart_agreement(1e-4),
                    "regular_polygon_value": oracle,
                }),
            )
        }
        Task::Counterexample { dim, j, eps, method } => {
            emit_json(cfg, triangle_violation(*dim, *j, *eps, (*method).into(), samples, seed)?)
        }
        Task::DiscTriangle => {
            let grid = disc_triangle_grid();
            if samples == 0 {
                let rows = grid
                    .iter()
                    .map(|&h| {
                        disc_triangle_closed_form(h)
                            .map(|(b, a, d)| json!({"h": h, "branch": b, "pi_delta1": a, "delta1": d}))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                return match cfg.format {
                    Format::Json => emit_json(cfg, rows),
                    Format::Csv => {
                        let mut s = String::from("h,pi_delta1,delta1\n");
                        for r in &rows {
                            let _ = writeln!(s, "{},{},{}", r["h"], r["pi_delta1"], r["delta1"]);
                        }
                        emit_csv(cfg, &s)
                    }
                };
            }
            let rows = disc_triangle_curves(&grid, samples, seed)?;
            match cfg.format {
                Format::Json => emit_json(cfg, rows),
                Format::Csv => {
                    let mut s = String::from("h,pi_delta1,delta1,pi_delta1_mc,pi_delta1_se,delta1_mc,delta1_se\n");
                    for r in &rows {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{},{}",
                            r.h,
                            r.pi_delta1_exact,
                            r.delta1_exact,
                            r.pi_delta1_mc,
                            r.pi_delta1_se,
                            r.delta1_mc,
                            r.delta1_se
                        );
                    }
                    emit_csv(cfg, &s)
                }
            }
        }
        Task::Verify { dim, count } => {
            let suite = inequality_suite(*dim)?;
            let unexpected = suite.unexpected_failures();
            let corpus = invariant_corpus(*count, seed)?;
            let passed = unexpected.is_empty() && corpus.passed();
            let out = emit_json(
                cfg,
                json!({
                    "passed": passed,
                    "suite": suite.summary(),
                    "unexpected_failures": unexpected,
                    "corpus": corpus,
                }),
            )?;
            if passed {
                Ok(out)
            } else {
                Err(CliError::Verification(out))
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn random_limit(
    cfg: &RunConfig,
    n: usize,
    j: Option<usize>,
    budgets: &[usize],
    trials: usize,
    body: &str,
    density: Density,
    side: Side,
) -> Result<String, CliError> {
    let j = j.unwrap_or(n);
    check_index(j, n)?;
    let k = parse_body(body, Some(n))?;
    let kind = match density {
        Density::Uniform => DensityKind::Uniform,
        Density::Optimal => DensityKind::OptimalIntrinsic { j },
    };
    let dens = BoundaryDensity::new(&k, kind, derive_seed(cfg.seed, 1))?;
    let reference = intrinsic_volume(&k, j, VolumeMethod::Auto, cfg.samples, derive_seed(cfg.seed, 2))?.result;
    let kubota_seed = derive_seed(cfg.seed, 3);
    let samples = cfg.samples;
    let config = HarnessConfig { dim: n, budgets: budgets.to_vec(), trials, seed: cfg.seed };
    let construct = |budget: usize, s: u64| match side {
        Side::Inscribed => random_inscribed(&dens, budget, s),
        Side::Circumscribed => random_circumscribed(&dens, budget, None, s),
    };
    let functional = |p: &polyapprox::Polytope| {
        let v = match polytope_intrinsic_volume(p, j) {
            Some(v) => v,
            None => kubota_estimate(&Body::Polytope(p.clone()), j, samples, kubota_seed)?.value,
        };
        Ok(vec![match side {
            Side::Inscribed => reference.value - v,
            Side::Circumscribed => v - reference.value,
        }])
    };
    let label = format!("delta_{j}");
    let report = expectation_harness(&config, &[label.as_str()], construct, functional)?.remove(0);
    let known = (side == Side::Inscribed && is_unit_ball(&k)).then(|| random_inscribed_limit(n, j)).transpose()?;
    match cfg.format {
        Format::Json => emit_json(
            cfg,
            json!({
                "report": report,
                "limit": report.fit.limit,
                "limit_std_error": report.fit.limit_std_error(),
                "body_intrinsic_volume": reference,
                "known_limit": known,
            }),
        ),
        Format::Csv => emit_csv(cfg, &report.to_csv()),
    }
}
