use minilp::{ComparisonOp, OptimizationDirection, Problem};

use super::polytope::{convex_hull, Polytope};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::scalar::{to_f64_vec, Scalar};

/// Closed halfspace `{x : normal . x <= offset}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace<T> {
    pub normal: Vec<T>,
    pub offset: T,
}

impl<T: Scalar> Halfspace<T> {
    pub fn new(normal: Vec<T>, offset: T) -> Self {
        Halfspace { normal, offset }
    }

    pub fn contains(&self, x: &[T], tol: T) -> bool {
        dot(&self.normal, x) <= self.offset + tol * norm(&self.normal)
    }

    pub fn project(&self, x: &[T]) -> Vec<T> {
        let excess = dot(&self.normal, x) - self.offset;
        if excess <= T::zero() {
            return x.to_vec();
        }
        let s = excess / dot(&self.normal, &self.normal);
        x.iter().zip(&self.normal).map(|(&xi, &a)| xi - s * a).collect()
    }
}

/// Center and inradius of the largest ball inside `{a_i . x <= b_i}`; `None` if the
/// system is infeasible or unbounded.
pub(crate) fn chebyshev_center(rows: &[(Vec<f64>, f64)], radius_cap: f64) -> Option<(Vec<f64>, f64)> {
    let n = rows.first()?.0.len();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let xs: Vec<_> = (0..n).map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    let t = lp.add_var(1.0, (0.0, radius_cap));
    for (a, b) in rows {
        let mut expr: Vec<_> = xs.iter().zip(a).map(|(&v, &c)| (v, c)).collect();
        expr.push((t, norm(a)));
        lp.add_constraint(expr.as_slice(), ComparisonOp::Le, *b);
    }
    let sol = lp.solve().ok()?;
    Some((xs.iter().map(|&v| sol[v]).collect(), sol[t]))
}

/// Intersection of halfspaces, optionally clipped to the box `[lo, hi]`, computed by
/// polarity about a strictly interior point.
pub fn halfspace_intersection<T: Scalar>(
    halfspaces: &[Halfspace<T>],
    bounding_box: Option<(&[T], &[T])>,
) -> Result<Polytope<T>> {
    let n = halfspaces
        .first()
        .map(|h| h.normal.len())
        .or(bounding_box.map(|b| b.0.len()))
        .ok_or_else(|| Error::InvalidArgument("no halfspaces".into()))?;
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for h in halfspaces {
        if h.normal.len() != n {
            return Err(Error::InvalidArgument("halfspace dimension mismatch".into()));
        }
        let a = to_f64_vec(&h.normal);
        let b = h.offset.as_f64();
        if norm(&a) == 0.0 {
            if b < 0.0 {
                return Err(Error::EmptyIntersection);
            }
            continue;
        }
        rows.push((a, b));
    }
    if let Some((lo, hi)) = bounding_box {
        for k in 0..n {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            rows.push((e.clone(), hi[k].as_f64()));
            e[k] = -1.0;
            rows.push((e, -lo[k].as_f64()));
        }
    }
    let scale = rows.iter().map(|(a, b)| b.abs() / norm(a)).fold(0.0, f64::max).max(1e-300);
    let (center, radius) = chebyshev_center(&rows, 1e6 * scale).ok_or(Error::EmptyIntersection)?;
    if radius <= 1e-10 * scale {
        return Err(Error::EmptyIntersection);
    }
    if radius >= 1e6 * scale * (1.0 - 1e-9) {
        return Err(Error::InvalidArgument("halfspace intersection is unbounded".into()));
    }

    let dual: Vec<Vec<f64>> = rows
        .iter()
        .map(|(a, b)| {
            let slack = b - dot(a, &center);
            a.iter().map(|&x| x / slack).collect()
        })
        .collect();
    let dual_hull =
        convex_hull(&dual).map_err(|_| Error::InvalidArgument("halfspace intersection is unbounded".into()))?;
    let mut primal: Vec<Vec<T>> = Vec::with_capacity(dual_hull.facets().len());
    for f in dual_hull.facets() {
        if f.offset <= 1e-12 * norm(&f.normal) {
            return Err(Error::InvalidArgument("halfspace intersection is unbounded".into()));
        }
        primal.push(center.iter().zip(&f.normal).map(|(&c, &m)| T::lit(c + m / f.offset)).collect());
    }
    convex_hull(&primal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_from_four_halfplanes() {
        let hs: Vec<Halfspace<f64>> = vec![
            Halfspace::new(vec![1.0, 0.0], 1.0),
            Halfspace::new(vec![-1.0, 0.0], 1.0),
            Halfspace::new(vec![0.0, 1.0], 1.0),
            Halfspace::new(vec![0.0, -1.0], 1.0),
            Halfspace::new(vec![1.0, 1.0], 5.0),
        ];
        let p = halfspace_intersection(&hs, None).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert!((p.volume() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_halfspaces_are_empty() {
        let hs: Vec<Halfspace<f64>> = vec![Halfspace::new(vec![1.0, 0.0], -1.0), Halfspace::new(vec![-1.0, 0.0], -1.0)];
        let lo = [-5.0, -5.0];
        let hi = [5.0, 5.0];
        assert_eq!(halfspace_intersection(&hs, Some((&lo, &hi))).unwrap_err(), Error::EmptyIntersection);
    }

    #[test]
    fn box_clips_an_open_wedge() {
        let hs: Vec<Halfspace<f64>> = vec![Halfspace::new(vec![-1.0, 0.0], 0.0), Halfspace::new(vec![0.0, -1.0], 0.0)];
        let lo = [-2.0, -2.0];
        let hi = [1.0, 3.0];
        let p = halfspace_intersection(&hs, Some((&lo, &hi))).unwrap();
        assert!((p.volume() - 3.0).abs() < 1e-12);
    }
}
