//! Intrinsic volumes, dual volumes and related functionals: closed forms where they exist and
//! seeded Monte Carlo estimators otherwise.

pub mod ball;
mod estimate;
mod exact;

use serde::{Deserialize, Serialize};

pub use ball::{
    ball_intrinsic_volume, ball_volume, ball_volume_analytic, ball_wills, dual_constant, ln_ball_intrinsic_volume,
    ln_ball_volume, sphere_area,
};
pub(crate) use estimate::kubota_draws;
pub use estimate::{
    chebyshev_radii, dual_volume, kubota_estimate, l1_metric, omega_q, parallel_volume, radial_steiner_fit,
    steiner_fit, volume_hit_or_miss, SteinerFit, MAX_CONDITION,
};
pub use exact::{intrinsic_volume_closed_form, intrinsic_volumes_exact, polytope_intrinsic_volume};

/// How an intrinsic volume was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Kubota,
    SteinerFit,
    RadialSteinerFit,
    Spherical,
    HitOrMiss,
}

/// `V_0, ..., V_n` with standard errors and a method tag per entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicVolumeVector {
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub methods: Vec<Method>,
}

impl IntrinsicVolumeVector {
    pub fn exact(values: Vec<f64>) -> Self {
        let k = values.len();
        IntrinsicVolumeVector { values, std_errors: vec![0.0; k], methods: vec![Method::Exact; k] }
    }

    pub fn dim(&self) -> usize {
        self.values.len() - 1
    }

    /// `Σ_j V_j`.
    pub fn wills(&self) -> (f64, f64) {
        let v = self.values.iter().sum();
        let e = self.std_errors.iter().map(|s| s * s).sum::<f64>().sqrt();
        (v, e)
    }
}
