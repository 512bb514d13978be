//! Concrete target models: diagonal quadratic perturbations with exact
//! smoothness constants, and transition-path-sampling targets built on the
//! dyadic midpoint-displacement transform.

mod quadratic;
mod schauder;
mod tps;

pub use quadratic::{make_quadratic_model, QuadraticConstants};
pub use schauder::SchauderTransform;
pub use tps::{make_tps_model, DoubleWell, LinearRamp, ScalarPotential, TpsBundle, TpsConfig, ZeroPotential};
