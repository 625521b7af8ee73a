//! Standard bodies used throughout the crate.

use super::body::{Body, Cap};
use super::polytope::{convex_hull, Polytope};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `D_n ∩ {x_n >= eps}` for `sign = +1`, and its mirror image `D_n ∩ {x_n <= -eps}` for
/// `sign = -1`.
pub fn make_cap<T: Scalar>(n: usize, eps: T, sign: i8) -> Result<Body<T>> {
    if n < 2 || eps.abs() >= T::one() || sign == 0 {
        return Err(Error::InvalidArgument("cap needs n >= 2, |eps| < 1 and a nonzero sign".into()));
    }
    let mut axis = vec![T::zero(); n];
    axis[n - 1] = if sign > 0 { T::one() } else { -T::one() };
    Ok(Body::Cap(Cap { center: vec![T::zero(); n], radius: T::one(), axis, height: eps }))
}

/// Equilateral triangle with circumradius `1 + h`, vertices at 90, 210 and 330 degrees.
pub fn make_triangle<T: Scalar>(h: T) -> Result<Polytope<T>> {
    if h <= -T::one() {
        return Err(Error::InvalidArgument("triangle needs h > -1".into()));
    }
    let r = T::one() + h;
    let pts: Vec<Vec<T>> = [90.0f64, 210.0, 330.0]
        .iter()
        .map(|deg| {
            let a = T::lit(deg.to_radians());
            vec![r * a.cos(), r * a.sin()]
        })
        .collect();
    convex_hull(&pts)
}

/// Regular `count`-gon with circumradius `radius` and a vertex at angle `phase`.
pub fn make_regular_polygon<T: Scalar>(count: usize, radius: T, phase: T) -> Result<Polytope<T>> {
    if count < 3 {
        return Err(Error::InvalidArgument("a polygon needs at least three vertices".into()));
    }
    let pts: Vec<Vec<T>> = (0..count)
        .map(|k| {
            let a = phase + T::lit(2.0 * std::f64::consts::PI * k as f64 / count as f64);
            vec![radius * a.cos(), radius * a.sin()]
        })
        .collect();
    convex_hull(&pts)
}

/// Regular polygon inscribed in the unit disk.
pub fn inscribed_polygon<T: Scalar>(count: usize) -> Result<Polytope<T>> {
    make_regular_polygon(count, T::one(), T::zero())
}

/// Regular polygon circumscribed about the unit disk.
pub fn circumscribed_polygon<T: Scalar>(count: usize) -> Result<Polytope<T>> {
    let half = T::lit(std::f64::consts::PI / count as f64);
    make_regular_polygon(count, T::one() / half.cos(), half)
}

/// `[-half, half]^n`.
pub fn make_cube<T: Scalar>(n: usize, half: T) -> Result<Polytope<T>> {
    let pts: Vec<Vec<T>> =
        (0..1usize << n).map(|m| (0..n).map(|k| if m >> k & 1 == 1 { half } else { -half }).collect()).collect();
    convex_hull(&pts)
}

/// `[0, side]^n`, the cube whose intrinsic volumes are binomial coefficients for `side = 1`.
pub fn make_unit_cube<T: Scalar>(n: usize) -> Result<Polytope<T>> {
    let pts: Vec<Vec<T>> = (0..1usize << n)
        .map(|m| (0..n).map(|k| if m >> k & 1 == 1 { T::one() } else { T::zero() }).collect())
        .collect();
    convex_hull(&pts)
}

/// Regular simplex centred at the origin with vertices on the unit sphere.
pub fn make_regular_simplex<T: Scalar>(n: usize) -> Result<Polytope<T>> {
    // standard basis of R^(n+1) projected onto the hyperplane sum x = 0
    let m = n + 1;
    let raw: Vec<Vec<f64>> =
        (0..m).map(|i| (0..m).map(|k| if k == i { 1.0 } else { 0.0 } - 1.0 / m as f64).collect()).collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in 0..n {
        let mut e: Vec<f64> = vec![0.0; m];
        e[k] = 1.0;
        e[k + 1] = -1.0;
        basis.push(e);
    }
    let basis = crate::linalg::orthonormalize(&basis, 1e-12);
    let pts: Vec<Vec<T>> = raw
        .iter()
        .map(|v| {
            let c: Vec<f64> = basis.iter().map(|b| crate::linalg::dot(v, b)).collect();
            let r = crate::linalg::norm(&c);
            c.iter().map(|&x| T::lit(x / r)).collect()
        })
        .collect();
    convex_hull(&pts)
}
