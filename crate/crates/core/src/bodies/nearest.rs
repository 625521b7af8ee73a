//! Euclidean projections: Wolfe's minimum-norm-point method for vertex-described
//! polytopes and Dykstra's alternating projections for intersections.

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm, solve, sub};
use crate::scalar::Scalar;

pub const DYKSTRA_MAX_ITER: usize = 10_000;
pub const DYKSTRA_TOL: f64 = 1e-10;
/// Accepted step size once the iteration cap is reached.
const DYKSTRA_LOOSE_TOL: f64 = 1e-6;

/// Affine combination of `pts[s]` with minimal norm.
fn affine_minimizer<T: Scalar>(pts: &[&[T]]) -> Option<Vec<T>> {
    let k = pts.len();
    let mut m = vec![vec![T::zero(); k + 1]; k + 1];
    for i in 0..k {
        for j in 0..k {
            m[i][j] = dot(pts[i], pts[j]);
        }
        m[i][k] = T::one();
        m[k][i] = T::one();
    }
    let mut rhs = vec![T::zero(); k + 1];
    rhs[k] = T::one();
    let sol = solve(m, rhs)?;
    Some(sol[..k].to_vec())
}

fn combine<T: Scalar>(pts: &[Vec<T>], set: &[usize], w: &[T]) -> Vec<T> {
    let mut x = vec![T::zero(); pts[0].len()];
    for (&i, &wi) in set.iter().zip(w) {
        x = axpy(&x, wi, &pts[i]);
    }
    x
}

/// Point of `conv(points)` closest to `x`.
pub fn nearest_in_hull<T: Scalar>(points: &[Vec<T>], x: &[T]) -> Result<Vec<T>> {
    let pts: Vec<Vec<T>> = points.iter().map(|p| sub(p, x)).collect();
    let big = pts.iter().map(|p| dot(p, p)).fold(T::zero(), T::max);
    if big == T::zero() {
        return Ok(x.to_vec());
    }
    let eps_stop = T::epsilon() * T::lit(64.0) * big;
    let eps_w = T::epsilon() * T::lit(1e3);

    let start =
        (0..pts.len()).min_by(|&a, &b| dot(&pts[a], &pts[a]).partial_cmp(&dot(&pts[b], &pts[b])).unwrap()).unwrap();
    let mut set = vec![start];
    let mut w = vec![T::one()];
    let mut y = pts[start].clone();
    let limit = 50 * (pts.len() + pts[0].len()) + 100;
    for _ in 0..limit {
        let j = (0..pts.len()).min_by(|&a, &b| dot(&y, &pts[a]).partial_cmp(&dot(&y, &pts[b])).unwrap()).unwrap();
        if dot(&y, &y) - dot(&y, &pts[j]) <= eps_stop || set.contains(&j) || set.len() > pts[0].len() {
            return Ok(axpy(x, T::one(), &y));
        }
        set.push(j);
        w.push(T::zero());
        loop {
            let refs: Vec<&[T]> = set.iter().map(|&i| pts[i].as_slice()).collect();
            let Some(alpha) = affine_minimizer(&refs) else {
                // affinely dependent support; drop the newest point and stop refining
                set.pop();
                w.pop();
                return Ok(axpy(x, T::one(), &combine(&pts, &set, &w)));
            };
            if alpha.iter().all(|&a| a > eps_w) {
                w = alpha;
                y = combine(&pts, &set, &w);
                break;
            }
            let theta = w
                .iter()
                .zip(&alpha)
                .filter(|(_, &a)| a <= eps_w)
                .map(|(&wi, &a)| if wi - a > T::zero() { wi / (wi - a) } else { T::zero() })
                .fold(T::one(), T::min);
            for (wi, &a) in w.iter_mut().zip(&alpha) {
                *wi = theta * a + (T::one() - theta) * *wi;
            }
            let mut k = 0;
            let mut dropped = false;
            while k < set.len() {
                if w[k] <= eps_w {
                    set.remove(k);
                    w.remove(k);
                    dropped = true;
                } else {
                    k += 1;
                }
            }
            if !dropped {
                let k = (0..w.len()).min_by(|&a, &b| w[a].partial_cmp(&w[b]).unwrap()).unwrap();
                set.remove(k);
                w.remove(k);
            }
            let total: T = w.iter().copied().sum();
            w.iter_mut().for_each(|wi| *wi = *wi / total);
        }
    }
    Err(Error::NonConvergence { iterations: limit, residual: norm(&y).as_f64() })
}

/// Nearest-point map of a closed convex set.
pub type Projection<'a, T> = dyn Fn(&[T]) -> Result<Vec<T>> + 'a;

/// Projection onto the intersection of closed convex sets, each given by its own
/// projection map.
pub fn dykstra<T: Scalar>(x0: &[T], projections: &[&Projection<'_, T>], max_iter: usize, tol: T) -> Result<Vec<T>> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut incr = vec![vec![T::zero(); n]; projections.len()];
    let scale = T::one() + norm(x0);
    let mut change = T::infinity();
    for _ in 0..max_iter {
        let before = x.clone();
        for (proj, p) in projections.iter().zip(incr.iter_mut()) {
            let shifted = axpy(&x, T::one(), p);
            let y = proj(&shifted)?;
            *p = sub(&shifted, &y);
            x = y;
        }
        change = norm(&sub(&x, &before));
        if change <= tol * scale {
            return Ok(x);
        }
    }
    // slow linear convergence near tangential contact; a tiny last step is still usable
    if change <= T::lit(DYKSTRA_LOOSE_TOL) * scale {
        return Ok(x);
    }
    Err(Error::NonConvergence { iterations: max_iter, residual: change.as_f64() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_point_of_square() {
        let sq: Vec<Vec<f64>> = vec![vec![-1.0, -1.0], vec![1.0, -1.0], vec![1.0, 1.0], vec![-1.0, 1.0]];
        let p = nearest_in_hull(&sq, &[3.0, 0.5]).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
        let q = nearest_in_hull(&sq, &[2.0, 3.0]).unwrap();
        assert!((q[0] - 1.0).abs() < 1e-12 && (q[1] - 1.0).abs() < 1e-12);
        let inside = nearest_in_hull(&sq, &[0.2, -0.3]).unwrap();
        assert!((inside[0] - 0.2).abs() < 1e-12 && (inside[1] + 0.3).abs() < 1e-12);
    }

    #[test]
    fn nearest_point_on_tetrahedron_face() {
        let t: Vec<Vec<f64>> = vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let p = nearest_in_hull(&t, &[1.0, 1.0, 1.0]).unwrap();
        for c in p {
            assert!((c - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dykstra_on_two_halfplanes() {
        let h1 = |x: &[f64]| Ok(vec![x[0].min(0.0), x[1]]);
        let h2 = |x: &[f64]| Ok(vec![x[0], x[1].min(0.0)]);
        let p = dykstra(&[1.0, 2.0], &[&h1, &h2], DYKSTRA_MAX_ITER, DYKSTRA_TOL).unwrap();
        assert!(p[0].abs() < 1e-12 && p[1].abs() < 1e-12);
    }
}
