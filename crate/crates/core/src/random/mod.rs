//! Random inscribed and circumscribed polytopes and the harness estimating their scaled
//! expected deviations.

mod density;
mod harness;

pub use density::{BoundaryDensity, DensityKind};
pub use harness::{expectation_harness, HarnessConfig, HarnessReport, LimitFit, TrialSummary};

pub use crate::curvature::curvature_h;

use crate::bodies::{convex_hull, halfspace_intersection, Halfspace, MAX_DIM};
use crate::error::{Error, Result};
use crate::rng::{par_samples, sphere_point, substream};
use crate::{Body, Polytope};

/// Uniform point of `S^{n-1}`.
pub fn sample_sphere(n: usize, seed: u64) -> Vec<f64> {
    sphere_point(&mut substream(seed, 0), n)
}

/// One boundary point drawn from `density`.
pub fn sample_boundary(density: &BoundaryDensity, seed: u64) -> Result<Vec<f64>> {
    density.draw(&mut substream(seed, 0))
}

fn check_budget(n: usize, budget: usize) -> Result<()> {
    if n > MAX_DIM {
        return Err(Error::UnsupportedDimension { dim: n, what: "random polytopes" });
    }
    if budget < n + 1 {
        return Err(Error::BudgetTooSmall { budget, min: n + 1 });
    }
    Ok(())
}

/// `conv{X_1, ..., X_N}` for i.i.d. boundary points `X_i ~ density`.
pub fn random_inscribed(density: &BoundaryDensity, budget: usize, seed: u64) -> Result<Polytope> {
    check_budget(density.dim(), budget)?;
    let points: Vec<Vec<f64>> =
        par_samples(budget, seed, |rng, _| density.draw(rng)).into_iter().collect::<Result<_>>()?;
    convex_hull(&points)
}

/// Intersection of the supporting halfspaces at `N` i.i.d. boundary points, cut by `clip`
/// (by default the bounding box of `K + D_n`, which keeps the result bounded).
pub fn random_circumscribed(
    density: &BoundaryDensity,
    budget: usize,
    clip: Option<&Polytope>,
    seed: u64,
) -> Result<Polytope> {
    let n = density.dim();
    check_budget(n, budget)?;
    let mut halfspaces: Vec<Halfspace<f64>> = par_samples(budget, seed, |rng, _| {
        let u = density.draw_parameter(rng)?;
        let x = density.point(&u);
        let normal = density.normal(&u);
        let offset = normal.iter().zip(&x).map(|(a, b)| a * b).sum();
        Ok(Halfspace::new(normal, offset))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    match clip {
        Some(p) => {
            halfspaces.extend(p.facets().iter().map(|f| Halfspace::new(f.normal.clone(), f.offset)));
            halfspace_intersection(&halfspaces, None)
        }
        None => {
            let (lo, hi) = clip_box(density);
            halfspace_intersection(&halfspaces, Some((&lo, &hi)))
        }
    }
}

/// Bounding box of `K + D_n`.
fn clip_box(density: &BoundaryDensity) -> (Vec<f64>, Vec<f64>) {
    let n = density.dim();
    (0..n)
        .map(|k| {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            let hi = density.point(&e)[k];
            e[k] = -1.0;
            let lo = density.point(&e)[k];
            (lo - 1.0, hi + 1.0)
        })
        .unzip()
}

/// Containment check used by the tests and the CLI: `P ⊆ K` for inscribed, `K ⊆ P` for
/// circumscribed polytopes, up to `tol`.
pub fn respects_containment(body: &Body, polytope: &Polytope, inscribed: bool, tol: f64) -> Result<bool> {
    if inscribed {
        Ok(polytope.vertices().iter().all(|v| body.dist(v).map(|d| d <= tol).unwrap_or(false)))
    } else {
        let n = body.dim();
        Ok(crate::rng::fixed_directions::<f64>(n, 2000)
            .iter()
            .map(|u| Ok(body.support(u)? <= polytope.support(u) + tol))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|ok| ok))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simplex_from_minimal_budget() {
        let d = BoundaryDensity::uniform(&Body::unit_ball(3), 0).unwrap();
        let p = random_inscribed(&d, 4, 11).unwrap();
        assert_eq!(p.vertices().len(), 4);
        for v in p.vertices() {
            assert!((crate::linalg::norm(v) - 1.0).abs() < 1e-9);
        }
        assert!(matches!(random_inscribed(&d, 3, 0), Err(Error::BudgetTooSmall { budget: 3, min: 4 })));
    }

    #[test]
    fn circumscribed_contains_the_body() {
        let e = Body::Ellipsoid { center: vec![0.0, 0.0], semi_axes: vec![1.5, 1.0] };
        let d = BoundaryDensity::uniform(&e, 0).unwrap();
        let p = random_circumscribed(&d, 40, None, 5).unwrap();
        assert!(respects_containment(&e, &p, false, 1e-9).unwrap());
        let q = random_inscribed(&d, 40, 5).unwrap();
        assert!(respects_containment(&e, &q, true, 1e-9).unwrap());
    }

    #[test]
    fn uniform_angles_average_out() {
        let d = BoundaryDensity::uniform(&Body::unit_ball(2), 0).unwrap();
        let pts: Vec<Vec<f64>> = (0..4000).map(|s| sample_boundary(&d, s).unwrap()).collect();
        for k in 0..2 {
            let xs: Vec<f64> = pts.iter().map(|p| p[k]).collect();
            let (m, se) = crate::stats::mean_and_se(&xs);
            assert!(m.abs() < 3.5 * se, "coordinate {k}: {m} ± {se}");
        }
        let p = random_inscribed(&d, 500, 2).unwrap();
        assert!(PI - p.volume() < 1e-3);
    }
}
