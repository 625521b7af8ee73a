//! Curvature of ellipsoid boundaries, the only smooth bodies the crate integrates over.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::bodies::Body;
use crate::error::{Error, Result};
use crate::linalg::orthonormalize;
use crate::scalar::{to_f64_vec, Scalar};

/// Center and semi-axes of a ball or an axis-aligned ellipsoid.
pub(crate) fn quadric_axes<T: Scalar>(body: &Body<T>, op: &'static str) -> Result<(Vec<f64>, Vec<f64>)> {
    match body {
        Body::Ball { center, radius } => Ok((to_f64_vec(center), vec![radius.as_f64(); center.len()])),
        Body::Ellipsoid { center, semi_axes } => Ok((to_f64_vec(center), to_f64_vec(semi_axes))),
        other => Err(Error::UnsupportedBodyKind { op, kind: other.kind().as_str() }),
    }
}

/// Gauss-Kronecker curvature `H_{n-1}` at the boundary point `c + diag(a) u`.
pub(crate) fn gauss_curvature(axes: &[f64], u: &[f64]) -> f64 {
    let n = axes.len() as f64;
    let prod_sq: f64 = axes.iter().map(|a| a * a).product();
    // y = diag(a) u, so y_i / a_i^2 = u_i / a_i
    let s: f64 = u.iter().zip(axes).map(|(ui, a)| (ui / a).powi(2)).sum();
    1.0 / (prod_sq * s.powf(0.5 * (n + 1.0)))
}

/// Surface-area density of `u -> c + diag(a) u` relative to the sphere's area element.
pub(crate) fn area_jacobian(axes: &[f64], u: &[f64]) -> f64 {
    let det: f64 = axes.iter().product();
    det * u.iter().zip(axes).map(|(ui, a)| (ui / a).powi(2)).sum::<f64>().sqrt()
}

/// Principal curvatures at a boundary point of a ball or ellipsoid, in increasing order.
pub fn principal_curvatures<T: Scalar>(body: &Body<T>, x: &[T]) -> Result<Vec<f64>> {
    let (c, a) = quadric_axes(body, "principal curvatures")?;
    let x = to_f64_vec(x);
    let n = c.len();
    let y: Vec<f64> = x.iter().zip(&c).map(|(xi, ci)| xi - ci).collect();
    let level: f64 = y.iter().zip(&a).map(|(yi, ai)| (yi / ai).powi(2)).sum();
    if (level - 1.0).abs() > 1e-8 {
        return Err(Error::OffBoundary(level - 1.0));
    }
    // gradient of sum (y_i / a_i)^2, up to the factor 2
    let grad: Vec<f64> = y.iter().zip(&a).map(|(yi, ai)| yi / (ai * ai)).collect();
    let gnorm = crate::linalg::norm(&grad);
    let normal: Vec<f64> = grad.iter().map(|g| g / gnorm).collect();
    let mut candidates = vec![normal];
    candidates.extend((0..n).map(|k| crate::linalg::unit::<f64>(n, k)));
    let tangent: Vec<Vec<f64>> = orthonormalize(&candidates, 1e-9).into_iter().skip(1).collect();
    let m = tangent.len();
    let shape = DMatrix::from_fn(m, m, |i, j| {
        tangent[i].iter().zip(&tangent[j]).zip(&a).map(|((p, q), ak)| p * q / (ak * ak)).sum::<f64>() / gnorm
    });
    let mut ev: Vec<f64> = SymmetricEigen::new(shape).eigenvalues.iter().copied().collect();
    ev.sort_by(|p, q| p.partial_cmp(q).unwrap());
    Ok(ev)
}

/// Normalized elementary symmetric function `H_k = e_k(κ) / C(n-1, k)` of the principal
/// curvatures at `x`.
pub fn curvature_h<T: Scalar>(body: &Body<T>, x: &[T], k: usize) -> Result<f64> {
    let kappa = principal_curvatures(body, x)?;
    let m = kappa.len();
    if k > m {
        return Err(Error::InvalidArgument(format!("curvature order {k} exceeds {m}")));
    }
    let mut e = vec![0.0; m + 1];
    e[0] = 1.0;
    for &kv in &kappa {
        for j in (1..=m).rev() {
            e[j] += kv * e[j - 1];
        }
    }
    let binom = (0..k).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64);
    Ok(e[k] / binom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipse_vertex_curvature() {
        let e: Body<f64> = Body::Ellipsoid { center: vec![0.0, 0.0], semi_axes: vec![2.0, 1.0] };
        let k = curvature_h(&e, &[2.0, 0.0], 1).unwrap();
        assert!((k - 2.0).abs() < 1e-12);
        let k = curvature_h(&e, &[0.0, 1.0], 1).unwrap();
        assert!((k - 0.25).abs() < 1e-12);
        assert!((gauss_curvature(&[2.0, 1.0], &[1.0, 0.0]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_curvatures() {
        let b: Body<f64> = Body::ball(vec![0.0; 3], 2.0);
        for k in 0..=2 {
            let h = curvature_h(&b, &[0.0, 2.0, 0.0], k).unwrap();
            assert!((h - 0.5f64.powi(k as i32)).abs() < 1e-12);
        }
        assert!(matches!(curvature_h(&b, &[0.0, 1.0, 0.0], 1), Err(Error::OffBoundary(_))));
    }
}
