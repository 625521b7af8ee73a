//! Acceptance criteria. Each criterion prints one `PASS` or `FAIL` line; the process exits
//! with a failure status if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use polyapprox::bodies::{circumscribed_polygon, inscribed_polygon, make_unit_cube};
use polyapprox::constants::{inequality_suite, what_hat};
use polyapprox::corpus::invariant_corpus;
use polyapprox::deviations::{
    delta_j, disc_triangle_branch_values, disc_triangle_closed_form, disc_triangle_curves, disc_triangle_grid,
    dual_delta, intrinsic_volume, stochastic_wills, triangle_violation, wills, DiscTriangleBranch, MomentSequence,
    VolumeMethod,
};
use polyapprox::measures::{ball_intrinsic_volume, dual_volume, intrinsic_volumes_exact};
use polyapprox::optimize::{best_inscribed, oracle_2d, Mode, Objective, OptimizerConfig};
use polyapprox::quad::integrate;
use polyapprox::random::{expectation_harness, random_inscribed, BoundaryDensity, HarnessConfig};
use polyapprox::rng::derive_seed;
use polyapprox::{Body, Polytope};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Distance to `want` in standard errors, with the error floored at rounding level.
fn z_or_exact(est: &polyapprox::EstimatorResult, want: f64) -> f64 {
    (est.value - want).abs() / est.std_error.max(1e-12 * want.abs())
}

fn inscribed_limit_2d() -> Outcome {
    let n = 256usize;
    let d = Body::unit_ball(2);
    let p = Body::Polytope(inscribed_polygon(n).map_err(|e| e.to_string())?);
    let dev = delta_j(&d, &p, 2, VolumeMethod::Exact, 0, 0).map_err(|e| e.to_string())?.value;
    let oracle = oracle_2d(n, Mode::Inscribed).map_err(|e| e.to_string())?;
    let scaled = (n * n) as f64 * dev;
    let target = 2.0 * PI.powi(3) / 3.0;
    check(
        rel(scaled, target) < 5e-3 && rel(dev, oracle) < 1e-9,
        format!("N^2 Δ_2 = {scaled:.5}, target {target:.5}, rel {:.2e}", rel(scaled, target)),
    )
}

fn circumscribed_limit_2d() -> Outcome {
    let n = 256usize;
    let d = Body::unit_ball(2);
    let p = Body::Polytope(circumscribed_polygon(n).map_err(|e| e.to_string())?);
    let dev = delta_j(&d, &p, 2, VolumeMethod::Exact, 0, 0).map_err(|e| e.to_string())?.value;
    let oracle = oracle_2d(n, Mode::Circumscribed).map_err(|e| e.to_string())?;
    let scaled = (n * n) as f64 * dev;
    let target = PI.powi(3) / 3.0;
    check(
        rel(scaled, target) < 5e-3 && rel(dev, oracle) < 1e-9,
        format!("N^2 Δ_2 = {scaled:.5}, target {target:.5}, rel {:.2e}", rel(scaled, target)),
    )
}

/// `E Σ_i (θ_i - sin θ_i) / 2` over the arcs cut by `N` uniform points on the circle; each arc
/// is `2π B` with `B ~ Beta(1, N - 1)`.
fn circle_gap_oracle(n: usize) -> f64 {
    let m = n as f64;
    let per_gap = integrate(
        |b| {
            let t = 2.0 * PI * b;
            (m - 1.0) * (1.0 - b).powf(m - 2.0) * (t - t.sin())
        },
        0.0,
        1.0,
        1e-14,
    );
    0.5 * m * per_gap
}

fn random_polygons() -> Outcome {
    let disc = Body::unit_ball(2);
    let density = BoundaryDensity::uniform(&disc, 1).map_err(|e| e.to_string())?;
    let cfg = HarnessConfig { dim: 2, budgets: vec![64, 128, 256], trials: 2000, seed: 2024 };
    let reports = expectation_harness(
        &cfg,
        &["delta_2"],
        |budget, seed| random_inscribed(&density, budget, seed),
        |p| Ok(vec![PI - p.volume()]),
    )
    .map_err(|e| e.to_string())?;
    let r = &reports[0];
    let target = 4.0 * PI.powi(3);
    let mc = r.row(128).expect("budget 128 was run").raw_mean;
    let oracle = circle_gap_oracle(128);
    check(
        rel(r.fit.limit, target) < 0.05 && rel(mc, oracle) < 0.02,
        format!(
            "limit {:.3} ± {:.3} vs 4π^3 = {target:.3} (rel {:.2e}); N=128 mean {mc:.4e} vs gap oracle {oracle:.4e}",
            r.fit.limit,
            r.fit.limit_std_error(),
            rel(r.fit.limit, target)
        ),
    )
}

fn random_polytopes_3d() -> Outcome {
    let ball = Body::unit_ball(3);
    let density = BoundaryDensity::uniform(&ball, 1).map_err(|e| e.to_string())?;
    let cfg = HarnessConfig { dim: 3, budgets: vec![100, 200, 400], trials: 500, seed: 3033 };
    let vols: Vec<f64> = (1..=3).map(|j| ball_intrinsic_volume(3, j)).collect();
    let reports = expectation_harness(
        &cfg,
        &["delta_1", "delta_2", "delta_3"],
        |budget, seed| random_inscribed(&density, budget, seed),
        |p| {
            let v = intrinsic_volumes_exact(p)?;
            Ok((1..=3).map(|j| vols[j - 1] - v.values[j]).collect())
        },
    )
    .map_err(|e| e.to_string())?;
    let targets = [8.0, 12.0 * PI, 16.0 * PI];
    let mut ok = true;
    let mut parts = Vec::new();
    for (r, t) in reports.iter().zip(targets) {
        ok &= rel(r.fit.limit, t) < 0.05;
        parts.push(format!("{} {:.3}±{:.3} vs {t:.3}", r.label, r.fit.limit, r.fit.limit_std_error()));
    }
    check(ok, parts.join("; "))
}

fn dual_circumscribed_2d() -> Outcome {
    let n = 256usize;
    let a = PI / n as f64;
    // mean of sec θ - 1 over |θ| < π/N, times c_1 = V_1(D_2) = π
    let closed = PI * (((1.0 / a.cos()) + a.tan()).ln() - a) / a;
    let scaled = (n * n) as f64 * closed;
    let target = PI.powi(3) / 6.0;
    let d = Body::unit_ball(2);
    let p = Body::Polytope(circumscribed_polygon(n).map_err(|e| e.to_string())?);
    let est = dual_delta(&d, &p, 1.0, 2_000_000, 5).map_err(|e| e.to_string())?;
    let z_sphere = est.spherical.as_estimate().z_score(closed, 0.0);
    let z_weighted = est.weighted.as_estimate().z_score(closed, 0.0);
    check(
        rel(scaled, target) < 0.01 && z_sphere < 3.0 && z_weighted < 3.0,
        format!(
            "N^2 Δ̃_1 = {scaled:.5} vs π^3/6 = {target:.5}; spherical MC z = {z_sphere:.2}, weighted-volume MC z = {z_weighted:.2}"
        ),
    )
}

fn triangle_failure() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, j) in [(2, 1), (3, 1), (3, 2)] {
        let method = if n == 2 { VolumeMethod::Exact } else { VolumeMethod::SteinerFit };
        let t = triangle_violation(n, j, 0.1, method, 200_000, 7).map_err(|e| e.to_string())?;
        let margin = (t.rhs - t.lhs) / t.std_error.max(1e-300);
        ok &= t.violated;
        parts.push(format!(
            "(n={n}, j={j}) rhs {:.4} > lhs {:.4} [{}]",
            t.rhs,
            t.lhs,
            if t.std_error == 0.0 { "exact".to_string() } else { format!("{margin:.1}σ") }
        ));
    }
    check(ok, parts.join("; "))
}

fn disc_triangle() -> Outcome {
    let (a0, b0) = disc_triangle_branch_values(DiscTriangleBranch::Crossing, 0.0);
    let (c0, d0) = disc_triangle_branch_values(DiscTriangleBranch::Inside, 0.0);
    let (a1, b1) = disc_triangle_branch_values(DiscTriangleBranch::Crossing, 1.0);
    let (c1, d1) = disc_triangle_branch_values(DiscTriangleBranch::Containing, 1.0);
    let jump = [a0 - c0, b0 - d0, a1 - c1, b1 - d1].iter().map(|x| x.abs()).fold(0.0, f64::max);
    let rows = disc_triangle_curves(&[-0.5, 0.0, 0.5, 1.0, 2.0], 20_000, 11).map_err(|e| e.to_string())?;
    let worst_z = rows
        .iter()
        .flat_map(|r| {
            [
                (r.pi_delta1_mc - r.pi_delta1_exact).abs() / r.pi_delta1_se,
                (r.delta1_mc - r.delta1_exact).abs() / r.delta1_se,
            ]
        })
        .fold(0.0, f64::max);
    let grid = disc_triangle_grid();
    let exact: Vec<(f64, f64, f64)> = grid
        .iter()
        .map(|&h| disc_triangle_closed_form(h).map(|(_, a, b)| (h, a, b)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let argmin_l1 = exact.iter().min_by(|x, y| x.1.total_cmp(&y.1)).unwrap().0;
    let argmin_dev = exact.iter().min_by(|x, y| x.2.total_cmp(&y.2)).unwrap().0;
    check(
        jump < 1e-9 && worst_z < 3.0 && argmin_l1 > 0.0 && argmin_l1 < 1.0 && argmin_dev == 0.0,
        format!(
            "branch jump {jump:.1e}; worst MC z {worst_z:.2}; argmin πδ_1 at h = {argmin_l1}, argmin Δ_1 at h = {argmin_dev}"
        ),
    )
}

fn inequality_suite_check() -> Outcome {
    let report = inequality_suite(1000).map_err(|e| e.to_string())?;
    let unexpected = report.unexpected_failures();
    let summary = report.summary();
    let findings: Vec<String> =
        summary.iter().filter(|s| s.failed > 0).map(|s| format!("{} ({}/{})", s.label, s.failed, s.checked)).collect();
    check(
        unexpected.is_empty(),
        format!(
            "{} records over n = 2..1000, {} labels; unexpected failures: {:?}; reported findings: {}",
            report.records.len(),
            summary.len(),
            unexpected,
            findings.join(", ")
        ),
    )
}

fn random_polytope(n: usize, count: usize, seed: u64) -> Polytope {
    polyapprox::corpus::random_polytope(n, count, seed).expect("random hull")
}

fn estimator_agreement() -> Outcome {
    let samples = 100_000;
    let mut worst: f64 = 0.0;
    let cube = Body::Polytope(make_unit_cube(3).map_err(|e| e.to_string())?);
    for (j, want) in [(1usize, 3.0), (2, 3.0), (3, 1.0)] {
        for method in [VolumeMethod::Kubota, VolumeMethod::SteinerFit] {
            let est = intrinsic_volume(&cube, j, method, samples, 100 + j as u64).map_err(|e| e.to_string())?;
            worst = worst.max(z_or_exact(&est.result, want));
        }
    }
    let disc = Body::unit_ball(2);
    for (j, method) in [(1usize, VolumeMethod::Kubota), (1, VolumeMethod::SteinerFit), (2, VolumeMethod::SteinerFit)] {
        let est = intrinsic_volume(&disc, j, method, samples, 200 + j as u64).map_err(|e| e.to_string())?;
        worst = worst.max(z_or_exact(&est.result, PI));
    }
    let mut worst_dual: f64 = 0.0;
    for k in 0..20u64 {
        let n = 2 + (k % 2) as usize;
        let p = random_polytope(n, 8 + k as usize, derive_seed(9, k));
        let est = dual_volume(&Body::Polytope(p.clone()), n as f64, samples, k).map_err(|e| e.to_string())?;
        worst_dual = worst_dual.max(est.z_score(p.volume(), 0.0));
    }
    check(
        worst < 3.0 && worst_dual < 3.0,
        format!("worst z: cube/disc {worst:.2}, dual volume vs volume on 20 polytopes {worst_dual:.2}"),
    )
}

fn wills_identities() -> Outcome {
    let cube = Body::Polytope(make_unit_cube(3).map_err(|e| e.to_string())?);
    let ball = Body::unit_ball(3);
    let mut zs = Vec::new();
    let mut weibull_gap: f64 = 0.0;
    for (body, seed) in [(&cube, 1u64), (&ball, 2)] {
        let w = wills(body, VolumeMethod::Exact, 400_000, seed).map_err(|e| e.to_string())?;
        zs.push(w.z_score());
        let sigma = stochastic_wills(body, &MomentSequence::weibull_sigma(3), VolumeMethod::Exact, 0, 0)
            .map_err(|e| e.to_string())?;
        weibull_gap = weibull_gap.max(rel(sigma.value, w.sum.value));
    }
    let factored_gap = (2..=50)
        .map(|n| what_hat(n).map(|w| w.relative_gap))
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .fold(0.0, f64::max);
    check(
        zs.iter().all(|z| *z < 3.0) && weibull_gap < 1e-10 && factored_gap < 1e-10,
        format!(
            "sum vs Gaussian integral z = {:.2} (cube), {:.2} (ball); Weibull W_Σ gap {weibull_gap:.1e}; Ŵ factorization gap {factored_gap:.1e} for n ≤ 50",
            zs[0], zs[1]
        ),
    )
}

fn optimizer_oracles() -> Outcome {
    let disc = Body::unit_ball(2);
    let cfg = OptimizerConfig { seed: 17, ..OptimizerConfig::default() };
    let mut worst: f64 = 0.0;
    for budget in 3..=12 {
        let r = best_inscribed(&disc, budget, Objective::Intrinsic { j: 2 }, &cfg).map_err(|e| e.to_string())?;
        let want = oracle_2d(budget, Mode::Inscribed).map_err(|e| e.to_string())?;
        worst = worst.max(rel(r.objective, want));
    }
    let ball = Body::unit_ball(3);
    let r = best_inscribed(&ball, 4, Objective::Intrinsic { j: 3 }, &cfg).map_err(|e| e.to_string())?;
    let tetra = 4.0 * PI / 3.0 - 8.0 * 3f64.sqrt() / 27.0;
    let rel3 = rel(r.objective, tetra);
    check(worst < 1e-6 && rel3 < 0.01, format!("2D N = 3..12 worst rel {worst:.1e}; tetrahedron rel {rel3:.1e}"))
}

fn property_corpus() -> Outcome {
    let report = invariant_corpus(50, 4242).map_err(|e| e.to_string())?;
    check(report.passed(), format!("{} checks on 50 bodies; failures: {:?}", report.checks, report.failures))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("2D best-inscribed limit", inscribed_limit_2d),
        ("2D best-circumscribed limit", circumscribed_limit_2d),
        ("random inscribed polygons (n = 2)", random_polygons),
        ("random inscribed polytopes (n = 3)", random_polytopes_3d),
        ("dual circumscribed limit", dual_circumscribed_2d),
        ("triangle inequality failure", triangle_failure),
        ("disc-triangle curves", disc_triangle),
        ("Gamma and tiling-constant inequality suite", inequality_suite_check),
        ("estimator cross-agreement", estimator_agreement),
        ("Wills identities", wills_identities),
        ("optimizer oracles", optimizer_oracles),
        ("property corpus", property_corpus),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.iter().any(|o| name.contains(o.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({secs:.1} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {detail} ({secs:.1} s)", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
