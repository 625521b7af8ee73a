use std::f64::consts::PI;

use polyapprox::bodies::{convex_hull, make_cap, make_cube, make_regular_simplex};
use polyapprox::deviations::{intrinsic_volume, VolumeMethod};
use polyapprox::measures::{
    ball_intrinsic_volume, dual_volume, kubota_estimate, polytope_intrinsic_volume, steiner_fit,
};
use polyapprox::rng::{gaussian_vec, substream};
use polyapprox::{Body, Polytope};

fn corpus() -> Vec<Polytope> {
    let mut out = vec![make_cube(3, 0.8).unwrap(), make_regular_simplex(3).unwrap(), make_cube(4, 0.5).unwrap()];
    for k in 0..5u64 {
        let n = 2 + (k % 3) as usize;
        let mut rng = substream(k, 0);
        let pts: Vec<Vec<f64>> = (0..n + 6).map(|_| gaussian_vec(&mut rng, n)).collect();
        out.push(convex_hull(&pts).unwrap());
    }
    out
}

#[test]
fn estimators_agree_with_exact_values() {
    let mut within = 0;
    let mut total = 0;
    let mut report = Vec::new();
    for (k, p) in corpus().iter().enumerate() {
        let n = p.dim();
        let body = Body::Polytope(p.clone());
        let fit = steiner_fit(&body, None, 4000, 10 + k as u64).unwrap();
        for j in 1..n {
            let Some(exact) = polytope_intrinsic_volume(p, j) else {
                continue;
            };
            let kub = kubota_estimate(&body, j, 4000, k as u64).unwrap();
            let z_kub = (kub.value - exact).abs() / kub.std_error;
            let z_fit = (fit.volumes.values[j] - exact).abs() / fit.volumes.std_errors[j];
            for z in [z_kub, z_fit] {
                total += 1;
                if z <= 3.0 {
                    within += 1;
                }
            }
            report.push((k, j, z_kub, z_fit));
        }
    }
    assert!(within as f64 >= 0.99 * total as f64, "{within}/{total}: {report:?}");
}

#[test]
fn nested_bodies_are_ordered() {
    let pairs = [
        (Body::Polytope(make_cube(3, 0.5).unwrap()), Body::unit_ball(3)),
        (
            Body::Ellipsoid { center: vec![0.0; 3], semi_axes: vec![0.4, 0.6, 0.9] },
            Body::Ellipsoid { center: vec![0.0; 3], semi_axes: vec![0.5, 0.7, 1.0] },
        ),
        (Body::Polytope(make_regular_simplex(2).unwrap()), Body::Polytope(make_cube(2, 1.0).unwrap())),
    ];
    for (inner, outer) in &pairs {
        assert!(inner.is_subset_of(outer).unwrap());
        for j in 1..=inner.dim() {
            let a = intrinsic_volume(inner, j, VolumeMethod::Auto, 20_000, 1).unwrap().result;
            let b = intrinsic_volume(outer, j, VolumeMethod::Auto, 20_000, 2).unwrap().result;
            assert!(a.value <= b.value + 3.0 * a.std_error.hypot(b.std_error), "j = {j}: {a:?} vs {b:?}");
        }
    }
}

#[test]
fn thin_caps_approach_two_half_discs() {
    // half perimeters of the two caps tend to π/2 + 1 each, losing about ε each
    let want = PI + 2.0;
    let mut previous = f64::INFINITY;
    for eps in [0.2, 0.05, 0.01] {
        let up = make_cap(2, eps, 1).unwrap();
        let down = make_cap(2, eps, -1).unwrap();
        let a = intrinsic_volume(&up, 1, VolumeMethod::Auto, 40_000, 3).unwrap().result;
        let b = intrinsic_volume(&down, 1, VolumeMethod::Auto, 40_000, 4).unwrap().result;
        let gap = (a.value + b.value - want).abs();
        let se = a.std_error.hypot(b.std_error);
        assert!(gap <= 3.0 * eps + 3.0 * se, "eps {eps}: {}", a.value + b.value);
        assert!(gap <= previous + 3.0 * se);
        previous = gap;
    }
}

#[test]
fn dual_volumes_of_the_ball_are_its_intrinsic_volumes() {
    for n in 2..=6 {
        let ball = Body::unit_ball(n);
        for j in 1..=n {
            let r = dual_volume(&ball, j as f64, 200, 0).unwrap();
            let want = ball_intrinsic_volume(n, j);
            assert!((r.value - want).abs() <= 1e-12 * want, "n {n}, j {j}: {} vs {want}", r.value);
            assert!(r.std_error <= 1e-12 * want);
        }
    }
}
