//! Small dense linear algebra on `Vec<T>` rows, enough for hyperplanes and simplices in
//! dimension at most eight.

use crate::scalar::Scalar;

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

/// `a + s * b`
pub fn axpy<T: Scalar>(a: &[T], s: T, b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + s * y).collect()
}

pub fn scale<T: Scalar>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|&x| x * s).collect()
}

pub fn dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y)).sqrt()
}

pub fn normalized<T: Scalar>(a: &[T]) -> Option<Vec<T>> {
    let r = norm(a);
    (r > T::zero() && r.is_finite()).then(|| scale(a, T::one() / r))
}

pub fn unit<T: Scalar>(n: usize, k: usize) -> Vec<T> {
    let mut e = vec![T::zero(); n];
    e[k] = T::one();
    e
}

/// Gaussian elimination with partial pivoting. `None` when the matrix is singular to
/// working precision.
pub fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    let scale = a.iter().flat_map(|r| r.iter()).fold(T::zero(), |m, &x| m.max(x.abs()));
    if scale == T::zero() {
        return None;
    }
    let tiny = scale * T::epsilon() * T::lit(n as f64);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() <= tiny {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != T::zero() {
                for k in col..n {
                    let v = a[col][k];
                    a[row][k] = a[row][k] - f * v;
                }
                b[row] = b[row] - f * b[col];
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let s = (row + 1..n).fold(b[row], |s, k| s - a[row][k] * x[k]);
        x[row] = s / a[row][row];
    }
    Some(x)
}

pub fn det<T: Scalar>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    let mut d = T::one();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()).unwrap();
        if a[piv][col] == T::zero() {
            return T::zero();
        }
        if piv != col {
            a.swap(col, piv);
            d = -d;
        }
        d = d * a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] = a[row][k] - f * v;
            }
        }
    }
    d
}

/// Modified Gram-Schmidt. Vectors whose residual falls below `tol` times their own length
/// are dropped, so the output length is the numerical rank.
pub fn orthonormalize<T: Scalar>(vectors: &[Vec<T>], tol: T) -> Vec<Vec<T>> {
    let mut basis: Vec<Vec<T>> = Vec::new();
    for v in vectors {
        let len = norm(v);
        if len == T::zero() {
            continue;
        }
        let mut r = v.clone();
        // two passes keep the basis orthogonal to working precision
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&r, b);
                r = axpy(&r, -c, b);
            }
        }
        let rl = norm(&r);
        if rl > tol * len {
            basis.push(scale(&r, T::one() / rl));
        }
    }
    basis
}

/// Unit vector orthogonal to an orthonormal family of `n - 1` vectors in `R^n`.
pub fn complement<T: Scalar>(basis: &[Vec<T>], n: usize) -> Option<Vec<T>> {
    let best = (0..n)
        .map(|k| {
            let mut r = unit::<T>(n, k);
            for _ in 0..2 {
                for b in basis {
                    let c = dot(&r, b);
                    r = axpy(&r, -c, b);
                }
            }
            r
        })
        .max_by(|a, b| norm(a).partial_cmp(&norm(b)).unwrap())?;
    normalized(&best)
}

/// Unit normal and offset of the hyperplane through `n` affinely independent points of
/// `R^n`. The sign of the normal is arbitrary.
pub fn hyperplane<T: Scalar>(points: &[&[T]]) -> Option<(Vec<T>, T)> {
    hyperplane_with_tol(points, T::lit(1e-9).max(T::epsilon() * T::lit(1e3)))
}

/// [`hyperplane`] with an explicit relative rank tolerance.
pub fn hyperplane_with_tol<T: Scalar>(points: &[&[T]], tol: T) -> Option<(Vec<T>, T)> {
    let n = points[0].len();
    if points.len() != n {
        return None;
    }
    let diffs: Vec<Vec<T>> = points[1..].iter().map(|p| sub(p, points[0])).collect();
    let basis = orthonormalize(&diffs, tol);
    if basis.len() != n - 1 {
        return None;
    }
    let normal = complement(&basis, n)?;
    let offset = dot(&normal, points[0]);
    Some((normal, offset))
}

/// Affine rank of a point set (0 for a single point).
pub fn affine_rank<T: Scalar>(points: &[&[T]], tol: T) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let diffs: Vec<Vec<T>> = points[1..].iter().map(|p| sub(p, points[0])).collect();
    orthonormalize(&diffs, tol).len()
}

/// k-dimensional volume of the simplex spanned by `k + 1` points in `R^n`, through the Gram
/// determinant of its edge vectors.
pub fn simplex_volume<T: Scalar>(points: &[&[T]]) -> T {
    let k = points.len() - 1;
    if k == 0 {
        return T::one();
    }
    let edges: Vec<Vec<T>> = points[1..].iter().map(|p| sub(p, points[0])).collect();
    let gram: Vec<Vec<T>> = edges.iter().map(|a| edges.iter().map(|b| dot(a, b)).collect()).collect();
    let g = det(gram).max(T::zero());
    g.sqrt() / factorial::<T>(k)
}

/// Signed volume of an `n`-simplex in `R^n`.
pub fn signed_simplex_volume<T: Scalar>(points: &[&[T]]) -> T {
    let n = points.len() - 1;
    let m: Vec<Vec<T>> = points[1..].iter().map(|p| sub(p, points[0])).collect();
    det(m) / factorial::<T>(n)
}

pub fn factorial<T: Scalar>(k: usize) -> T {
    (1..=k).fold(T::one(), |acc, i| acc * T::lit(i as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_recovers_known_solution() {
        let a = vec![vec![2.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 4.0]];
        let x = vec![1.0, -2.0, 0.5];
        let b: Vec<f64> = a.iter().map(|r| dot(r, &x)).collect();
        let got = solve(a, b).unwrap();
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).abs() < 1e-13);
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve(a, vec![1.0, 2.0]).is_none());
    }

    #[test]
    fn gram_volume_matches_determinant() {
        let p: [&[f64]; 4] = [&[0.0, 0.0, 0.0], &[2.0, 0.0, 0.0], &[0.0, 3.0, 0.0], &[0.0, 0.0, 1.0]];
        assert!((simplex_volume(&p) - 1.0).abs() < 1e-14);
        assert!((signed_simplex_volume(&p) - 1.0).abs() < 1e-14);
        // a triangle embedded in R^3
        let t: [&[f64]; 3] = [&[0.0, 0.0, 1.0], &[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]];
        assert!((simplex_volume(&t) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn hyperplane_through_points() {
        let p: [&[f32]; 3] = [&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]];
        let (nrm, off) = hyperplane(&p).unwrap();
        let s = nrm[0].signum();
        for c in &nrm {
            assert!((c * s - 1.0 / 3f32.sqrt()).abs() < 1e-6);
        }
        assert!((off * s - 1.0 / 3f32.sqrt()).abs() < 1e-6);
    }
}
