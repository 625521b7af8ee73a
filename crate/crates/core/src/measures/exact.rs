use std::f64::consts::PI;

use super::ball::ball_intrinsic_volume;
use super::IntrinsicVolumeVector;
use crate::bodies::{Body, Polytope};
use crate::error::{Error, Result};
use crate::linalg::{dist, dot};
use crate::scalar::{to_f64_vec, Scalar};

/// `V_1` of a 3-polytope: `(1/2π) Σ_e ℓ_e θ_e` with `θ_e` the angle between the outward
/// normals of the two facets meeting at edge `e`.
fn mean_width_3d<T: Scalar>(p: &Polytope<T>) -> f64 {
    let mut total = 0.0;
    for ((a, b), (f, g)) in p.edges_with_facets() {
        let len = dist(&to_f64_vec(&p.vertices()[a]), &to_f64_vec(&p.vertices()[b]));
        let n1 = to_f64_vec(&p.facets()[f].normal);
        let n2 = to_f64_vec(&p.facets()[g].normal);
        let cross = [n1[1] * n2[2] - n1[2] * n2[1], n1[2] * n2[0] - n1[0] * n2[2], n1[0] * n2[1] - n1[1] * n2[0]];
        let angle = crate::linalg::norm(&cross).atan2(dot(&n1, &n2));
        total += len * angle;
    }
    total / (2.0 * PI)
}

/// Intrinsic volume `V_j` of a polytope when a closed form is available: `j = 0`,
/// `j = n` (volume), `j = n - 1` (half the surface area), and `j = 1` for `n = 3`.
pub fn polytope_intrinsic_volume<T: Scalar>(p: &Polytope<T>, j: usize) -> Option<f64> {
    let n = p.dim();
    match j {
        0 => Some(1.0),
        _ if j == n => Some(p.volume().as_f64()),
        _ if j == n - 1 => Some(0.5 * p.surface_area().as_f64()),
        1 if n == 3 => Some(mean_width_3d(p)),
        _ => None,
    }
}

/// All intrinsic volumes of a polytope in dimension 2 or 3.
pub fn intrinsic_volumes_exact<T: Scalar>(p: &Polytope<T>) -> Result<IntrinsicVolumeVector> {
    let n = p.dim();
    if n > 3 {
        return Err(Error::UnsupportedDimension { dim: n, what: "exact intrinsic volume vector" });
    }
    let values: Vec<f64> = (0..=n).map(|j| polytope_intrinsic_volume(p, j).unwrap()).collect();
    Ok(IntrinsicVolumeVector::exact(values))
}

fn ellipse_half_perimeter(a: f64, b: f64) -> f64 {
    0.5 * crate::quad::integrate(|t| (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt(), 0.0, 2.0 * PI, 1e-13)
}

/// Closed-form `V_j` of a body, where one is implemented.
pub fn intrinsic_volume_closed_form<T: Scalar>(body: &Body<T>, j: usize) -> Option<f64> {
    let n = body.dim();
    if j == 0 {
        return Some(1.0);
    }
    match body {
        Body::Ball { radius, .. } => Some(radius.as_f64().powi(j as i32) * ball_intrinsic_volume(n, j)),
        Body::Polytope(p) => polytope_intrinsic_volume(p, j),
        Body::Cap(cap) if n == 2 => {
            let r = cap.radius.as_f64();
            let half_angle = (cap.height.as_f64() / r).clamp(-1.0, 1.0).acos();
            match j {
                1 => Some(r * (half_angle + half_angle.sin())),
                2 => Some(r * r * (half_angle - half_angle.sin() * half_angle.cos())),
                _ => None,
            }
        }
        Body::Ellipsoid { semi_axes, .. } if n == 2 => {
            let (a, b) = (semi_axes[0].as_f64(), semi_axes[1].as_f64());
            match j {
                1 => Some(ellipse_half_perimeter(a, b)),
                2 => Some(PI * a * b),
                _ => None,
            }
        }
        _ => None,
    }
}
