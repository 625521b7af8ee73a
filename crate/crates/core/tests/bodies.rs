use minilp::{ComparisonOp, OptimizationDirection, Problem};
use polyapprox::bodies::{convex_hull, make_cube};
use polyapprox::rng::{gaussian_vec, sphere_point, substream};
use polyapprox::{Body, Polytope};
use proptest::prelude::*;
use rand::Rng;

fn gaussian_cloud(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = substream(seed, 0);
    (0..count).map(|_| gaussian_vec(&mut rng, n)).collect()
}

fn same_vertices(a: &Polytope, b: &Polytope) -> bool {
    a.vertices().len() == b.vertices().len()
        && a.vertices().iter().zip(b.vertices()).all(|(x, y)| x.iter().zip(y).all(|(p, q)| (p - q).abs() < 1e-12))
}

/// `max u·x` over the facet inequalities.
fn lp_support(p: &Polytope, u: &[f64]) -> f64 {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = u.iter().map(|&c| lp.add_var(c, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    for f in p.facets() {
        let row: Vec<_> = vars.iter().copied().zip(f.normal.iter().copied()).collect();
        lp.add_constraint(row.as_slice(), ComparisonOp::Le, f.offset);
    }
    lp.solve().expect("bounded polytope").objective()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hull_is_idempotent(n in 2usize..=4, count in 8usize..40, seed in any::<u64>()) {
        let p = convex_hull(&gaussian_cloud(n, count, seed)).unwrap();
        let q = convex_hull(p.vertices()).unwrap();
        prop_assert!(same_vertices(&p, &q));
    }

    #[test]
    fn vertex_and_facet_descriptions_agree(n in 2usize..=4, count in 8usize..30, seed in any::<u64>()) {
        let p = convex_hull(&gaussian_cloud(n, count, seed)).unwrap();
        let mut rng = substream(seed, 1);
        for _ in 0..100 {
            let u = sphere_point(&mut rng, n);
            let v = p.support(&u);
            prop_assert!((v - lp_support(&p, &u)).abs() <= 1e-8 * v.abs().max(1.0));
        }
    }

    #[test]
    fn support_and_radial_scale(n in 2usize..=4, factor in 0.1f64..5.0, seed in any::<u64>()) {
        let mut rng = substream(seed, 2);
        let axes: Vec<f64> = (0..n).map(|_| 0.5 + rng.random_range(0.0..1.5)).collect();
        let bodies = [
            Body::unit_ball(n),
            Body::Ellipsoid { center: vec![0.0; n], semi_axes: axes },
            Body::Polytope(make_cube(n, 0.7).unwrap()),
        ];
        for b in &bodies {
            let s = b.scaled(factor).unwrap();
            for _ in 0..20 {
                let u = sphere_point(&mut rng, n);
                let (h, hs) = (b.support(&u).unwrap(), s.support(&u).unwrap());
                let (r, rs) = (b.radial(&u).unwrap(), s.radial(&u).unwrap());
                prop_assert!((hs - factor * h).abs() <= 1e-10 * hs.abs().max(1.0));
                prop_assert!((rs - factor * r).abs() <= 1e-10 * rs.abs().max(1.0));
            }
        }
    }
}

#[test]
fn face_numbers_of_random_hulls() {
    for k in 0..50u64 {
        let n = 3 + (k % 2) as usize;
        let p = convex_hull(&gaussian_cloud(n, 20 + k as usize, 100 + k)).unwrap();
        let f = p.face_counts();
        assert_eq!(f.euler_characteristic(), f.expected_euler(), "set {k}: {f:?}");
        assert!(p.is_simplicial(), "set {k}");
        assert_eq!(n * f.0[n - 1], 2 * f.0[n - 2], "set {k}: {f:?}");
    }
}

#[test]
fn points_on_the_sphere_are_all_extreme() {
    let mut rng = substream(30, 0);
    let points: Vec<Vec<f64>> = (0..30).map(|_| sphere_point(&mut rng, 3)).collect();
    let p = convex_hull(&points).unwrap();
    assert_eq!(p.vertices().len(), 30);
    // each point is the unique maximizer of its own direction
    for x in &points {
        let best = points.iter().filter(|y| *y != x).map(|y| y.iter().zip(x).map(|(a, b)| a * b).sum::<f64>());
        assert!(best.fold(f64::NEG_INFINITY, f64::max) < 1.0);
    }
    let f = p.face_counts();
    assert_eq!(f.euler_characteristic(), 2);
    assert_eq!(3 * f.0[2], 2 * f.0[1]);
}
