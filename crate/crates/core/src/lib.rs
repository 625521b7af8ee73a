//! Deviations between convex bodies and polytopes measured through intrinsic volumes, dual
//! volumes and Wills functionals, together with the ball constants, random-polytope
//! simulations and best-approximation searches built on them.
//!
//! The geometry kernel (`bodies`, exact measures) is generic over [`Scalar`]; estimators
//! and everything downstream work in `f64`.

pub mod bodies;
pub mod constants;
pub mod corpus;
pub mod curvature;
pub mod deviations;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod optimize;
pub mod quad;
pub mod random;
pub mod rng;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use stats::EstimatorResult;

pub type Polytope = bodies::Polytope<f64>;
pub type Body = bodies::Body<f64>;
pub type Polytope32 = bodies::Polytope<f32>;
pub type Body32 = bodies::Body<f32>;
