use std::f64::consts::PI;

use polyapprox::quad::integrate;
use polyapprox::random::{
    expectation_harness, random_circumscribed, random_inscribed, respects_containment, sample_sphere, BoundaryDensity,
    DensityKind, HarnessConfig,
};
use polyapprox::rng::substream;
use polyapprox::Body;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// p-value of Pearson's statistic for `observed` counts against `expected` probabilities.
fn chi_squared_p(observed: &[usize], expected: &[f64]) -> f64 {
    let total: usize = observed.iter().sum();
    let stat: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    1.0 - ChiSquared::new((observed.len() - 1) as f64).unwrap().cdf(stat)
}

fn octant(x: &[f64]) -> usize {
    x.iter().enumerate().map(|(k, &v)| usize::from(v > 0.0) << k).sum()
}

#[test]
fn sphere_points_fill_the_octants_evenly() {
    let mut counts = [0usize; 8];
    for s in 0..16_000 {
        counts[octant(&sample_sphere(3, s))] += 1;
    }
    assert!(chi_squared_p(&counts, &[0.125; 8]) > 0.01, "{counts:?}");

    let d = BoundaryDensity::uniform(&Body::unit_ball(3), 0).unwrap();
    let mut rng = substream(1, 0);
    let mut counts = [0usize; 8];
    for _ in 0..16_000 {
        counts[octant(&d.draw(&mut rng).unwrap())] += 1;
    }
    assert!(chi_squared_p(&counts, &[0.125; 8]) > 0.01, "{counts:?}");
}

#[test]
fn curvature_density_on_an_ellipse_matches_arc_integrals() {
    let (a, b) = (2.0, 1.0);
    let ellipse = Body::Ellipsoid { center: vec![0.0, 0.0], semi_axes: vec![a, b] };
    let d = BoundaryDensity::new(&ellipse, DensityKind::OptimalIntrinsic { j: 2 }, 0).unwrap();
    // κ^{1/3} ds along x = (a cos t, b sin t)
    let weight = |t: f64| {
        let speed = (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt();
        (a * b / speed.powi(3)).cbrt() * speed
    };
    let bins = 12;
    let edges: Vec<f64> = (0..=bins).map(|k| 2.0 * PI * k as f64 / bins as f64).collect();
    let mass: Vec<f64> = edges.windows(2).map(|w| integrate(weight, w[0], w[1], 1e-12)).collect();
    let total: f64 = mass.iter().sum();
    let expected: Vec<f64> = mass.iter().map(|m| m / total).collect();
    assert!((d.normalization().value - total).abs() <= 3.0 * d.normalization().std_error + 1e-9 * total);

    let mut rng = substream(2, 0);
    let mut counts = vec![0usize; bins];
    for _ in 0..24_000 {
        let x = d.draw(&mut rng).unwrap();
        let t = (x[1] / b).atan2(x[0] / a).rem_euclid(2.0 * PI);
        counts[((t / (2.0 * PI) * bins as f64) as usize).min(bins - 1)] += 1;
    }
    assert!(chi_squared_p(&counts, &expected) > 0.01, "{counts:?} vs {expected:?}");
}

fn disc_area_gap(trials: usize, budgets: Vec<usize>) -> polyapprox::random::HarnessReport {
    let disc = Body::unit_ball(2);
    let density = BoundaryDensity::uniform(&disc, 0).unwrap();
    let config = HarnessConfig { dim: 2, budgets, trials, seed: 21 };
    expectation_harness(&config, &["area"], |n, s| random_inscribed(&density, n, s), |p| Ok(vec![PI - p.volume()]))
        .unwrap()
        .remove(0)
}

#[test]
fn scaled_area_gap_settles_and_exceeds_the_best_polygon() {
    let report = disc_area_gap(300, vec![50, 100, 200]);
    let (a, b) = (report.row(50).unwrap().scaled_mean, report.row(200).unwrap().scaled_mean);
    assert!((a - b).abs() < 0.1 * b, "{a} vs {b}");
    // best inscribed polygons approach 2π³/3
    let ratio = report.fit.limit / (2.0 * PI.powi(3) / 3.0);
    assert!(ratio > 1.0, "{ratio}");
}

#[test]
fn harness_is_reproducible_across_pool_sizes() {
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| disc_area_gap(40, vec![20, 40]))
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one.to_csv(), disc_area_gap(40, vec![20, 40]).to_csv());
}

#[test]
fn constructions_respect_containment() {
    let bodies = [
        Body::Ellipsoid { center: vec![0.3, -0.2], semi_axes: vec![1.5, 0.7] },
        Body::Ellipsoid { center: vec![0.0; 3], semi_axes: vec![1.0, 0.6, 1.3] },
        Body::unit_ball(3),
    ];
    let kinds = [DensityKind::Uniform, DensityKind::OptimalIntrinsic { j: 1 }, DensityKind::OptimalDual { q: 1.0 }];
    for (k, body) in bodies.iter().enumerate() {
        for kind in kinds {
            let d = BoundaryDensity::new(body, kind, 0).unwrap();
            for s in 0..3 {
                let inner = random_inscribed(&d, 30, s).unwrap();
                assert!(respects_containment(body, &inner, true, 1e-9).unwrap(), "body {k}, {kind:?}");
                let outer = random_circumscribed(&d, 30, None, s).unwrap();
                assert!(respects_containment(body, &outer, false, 1e-9).unwrap(), "body {k}, {kind:?}");
            }
        }
    }
}
