//! Metropolis-Hastings sampling for targets of the form
//! `mu ∝ exp(-|x|^2/2 - V(x))`.
//!
//! The crate covers three proposal families (Ornstein-Uhlenbeck, semi-implicit
//! Euler, explicit Euler) with closed-form acceptance log-ratios, the
//! synchronous coupling that shares the Gaussian innovation and the acceptance
//! uniform between two chains, closed-form calculators for contraction,
//! rejection, exit and convergence bounds, concrete models (diagonal quadratic
//! perturbations and transition-path-sampling targets over Schauder
//! coefficients), and the Monte Carlo estimators that confront the bounds with
//! simulation.

pub mod acceptance;
pub mod bounds;
pub mod chain;
pub mod coupling;
pub mod error;
pub mod estimators;
pub mod models;
pub mod norm;
pub mod proposal;
pub mod stream;
pub mod target;

pub use error::{Error, Result};
pub use norm::{NormKind, NormSpace};
pub use proposal::{ProposalKind, ProposalSpec};
pub use stream::RandomStream;
pub use target::{SmoothnessConstants, TargetModel};
