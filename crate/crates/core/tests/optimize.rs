use polyapprox::deviations::{delta_j, VolumeMethod};
use polyapprox::measures::ball_intrinsic_volume;
use polyapprox::optimize::{best_circumscribed, best_inscribed, Objective, OptimizerConfig};
use polyapprox::random::{random_inscribed, respects_containment, BoundaryDensity};
use polyapprox::{Body, Polytope};

fn quick(seed: u64) -> OptimizerConfig {
    OptimizerConfig { restarts: 6, steps: 1500, seed, ..OptimizerConfig::default() }
}

#[test]
fn more_vertices_never_hurt() {
    let disc = Body::unit_ball(2);
    let values: Vec<(f64, f64)> = (4..=12)
        .map(|n| {
            let r = best_inscribed(&disc, n, Objective::Intrinsic { j: 2 }, &quick(n as u64)).unwrap();
            assert!(r.polytope.vertices().len() <= n);
            assert!(respects_containment(&disc, &r.polytope, true, 1e-9).unwrap());
            (r.objective, r.std_error)
        })
        .collect();
    for (k, w) in values.windows(2).enumerate() {
        assert!(w[1].0 <= w[0].0 + 3.0 * w[0].1.hypot(w[1].1) + 1e-12, "N = {}: {w:?}", k + 5);
    }
}

#[test]
fn restarts_find_the_same_optimum() {
    let disc = Body::unit_ball(2);
    let ellipse = Body::Ellipsoid { center: vec![0.0, 0.0], semi_axes: vec![1.4, 0.8] };
    for (body, objective) in [(&disc, Objective::Intrinsic { j: 2 }), (&ellipse, Objective::Intrinsic { j: 1 })] {
        let r = best_inscribed(body, 7, objective, &quick(3)).unwrap();
        assert!(r.restart_agreement(1e-4) >= 0.9, "{objective:?}: {:?}", r.history);
        let c = best_circumscribed(body, 7, objective, &quick(4)).unwrap();
        assert!(c.polytope.facets().len() <= 7);
        assert!(respects_containment(body, &c.polytope, false, 1e-9).unwrap());
    }
}

/// `1 - (1 - Δ_1/V_1)^j <= Δ_j/V_j <= 1 - (1 - Δ_n/V_n)^{j/n}` for `P` inscribed in the ball.
fn sandwich_holds(p: &Polytope) -> bool {
    let n = p.dim();
    let ball = Body::unit_ball(n);
    let body = Body::Polytope(p.clone());
    let rel: Vec<(f64, f64)> = (1..=n)
        .map(|j| {
            let v = ball_intrinsic_volume(n, j);
            let d = delta_j(&ball, &body, j, VolumeMethod::Auto, 40_000, 9).unwrap();
            (d.value / v, d.std_error / v)
        })
        .collect();
    (1..=n).all(|j| {
        let (x, s) = rel[j - 1];
        let lower = 1.0 - (1.0 - rel[0].0).powi(j as i32);
        let upper = 1.0 - (1.0 - rel[n - 1].0).powf(j as f64 / n as f64);
        let slack = 3.0 * (s + rel[0].1 * j as f64 + rel[n - 1].1) + 1e-12;
        lower <= x + slack && x <= upper + slack
    })
}

#[test]
fn inscribed_candidates_satisfy_the_isoperimetric_sandwich() {
    for n in [2, 3] {
        let ball = Body::unit_ball(n);
        let cfg = OptimizerConfig { restarts: 2, steps: 400, ..OptimizerConfig::default() };
        for objective in [Objective::Intrinsic { j: 1 }, Objective::Intrinsic { j: n }] {
            let r = best_inscribed(&ball, n + 5, objective, &cfg).unwrap();
            assert!(sandwich_holds(&r.polytope), "n {n}, {objective:?}");
        }
        let density = BoundaryDensity::uniform(&ball, 0).unwrap();
        for s in 0..5 {
            let p = random_inscribed(&density, n + 3 + s as usize, s).unwrap();
            assert!(sandwich_holds(&p), "n {n}, random polytope {s}");
        }
    }
}
