//! The three Gaussian proposal kernels.
//!
//! All three share the mean structure `(1 - h/2) x - (h/2) grad V(x)` (the
//! OU kernel drops the `grad V` term). OU and semi-implicit Euler proposals
//! use noise variance `h - h^2/4` per coordinate, which puts the kernel in
//! detailed balance with the standard Gaussian when `V == 0`; the explicit
//! Euler scheme keeps variance `h` and loses that exactness.

use crate::error::{Error, Result};
use crate::target::TargetModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProposalKind {
    OrnsteinUhlenbeck,
    SemiImplicit,
    ExplicitEuler,
}

impl ProposalKind {
    pub fn label(&self) -> &'static str {
        match self {
            ProposalKind::OrnsteinUhlenbeck => "ou",
            ProposalKind::SemiImplicit => "semi-implicit",
            ProposalKind::ExplicitEuler => "explicit-euler",
        }
    }
}

/// Proposal family plus step size `h` in `(0, 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProposalSpec {
    kind: ProposalKind,
    h: f64,
}

impl ProposalSpec {
    /// The explicit Euler scheme would allow any `h > 0`, but it is restricted
    /// to the same `(0, 2)` range as the other two for comparability.
    pub fn new(kind: ProposalKind, h: f64) -> Result<Self> {
        if !(h > 0.0 && h < 2.0) || !h.is_finite() {
            return Err(Error::InvalidStepSize(h));
        }
        Ok(ProposalSpec { kind, h })
    }

    pub fn kind(&self) -> ProposalKind {
        self.kind
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Per-coordinate standard deviation of the proposal noise.
    pub fn noise_scale(&self) -> f64 {
        match self.kind {
            ProposalKind::OrnsteinUhlenbeck | ProposalKind::SemiImplicit => {
                (self.h - 0.25 * self.h * self.h).sqrt()
            }
            ProposalKind::ExplicitEuler => self.h.sqrt(),
        }
    }

    /// Mean of the proposal distribution started at `x`.
    pub fn mean(&self, model: &TargetModel, x: &[f64]) -> Result<Vec<f64>> {
        let a = 1.0 - 0.5 * self.h;
        match self.kind {
            ProposalKind::OrnsteinUhlenbeck => {
                model.check_point(x)?;
                Ok(x.iter().map(|xi| a * xi).collect())
            }
            ProposalKind::SemiImplicit | ProposalKind::ExplicitEuler => {
                let grad = model.grad_v(x)?;
                Ok(x.iter()
                    .zip(&grad)
                    .map(|(xi, gi)| a * xi - 0.5 * self.h * gi)
                    .collect())
            }
        }
    }
}

/// Proposed point for the standard-normal draw `z`.
///
/// The noise is an explicit argument so couplings can feed the same draw to
/// two chains.
pub fn propose(spec: &ProposalSpec, model: &TargetModel, x: &[f64], z: &[f64]) -> Result<Vec<f64>> {
    if z.len() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), got: z.len() });
    }
    let mut y = spec.mean(model, x)?;
    let s = spec.noise_scale();
    for (yi, zi) in y.iter_mut().zip(z) {
        *yi += s * zi;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_bad_step_sizes() {
        assert!(ProposalSpec::new(ProposalKind::OrnsteinUhlenbeck, 0.0).is_err());
        assert!(ProposalSpec::new(ProposalKind::SemiImplicit, 2.0).is_err());
        assert!(ProposalSpec::new(ProposalKind::ExplicitEuler, -0.1).is_err());
        assert!(ProposalSpec::new(ProposalKind::ExplicitEuler, f64::NAN).is_err());
    }

    #[test]
    fn ou_mean_and_scale() {
        let spec = ProposalSpec::new(ProposalKind::OrnsteinUhlenbeck, 1.0).unwrap();
        let model = TargetModel::standard_gaussian(2);
        let y = propose(&spec, &model, &[2.0, 0.0], &[0.0, 0.0]).unwrap();
        assert_eq!(y, vec![1.0, 0.0]);
        assert_relative_eq!(spec.noise_scale(), 3.0f64.sqrt() / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn semi_implicit_matches_ou_for_zero_v() {
        let spec = ProposalSpec::new(ProposalKind::SemiImplicit, 1.0).unwrap();
        let model = TargetModel::standard_gaussian(2);
        let y = propose(&spec, &model, &[2.0, 0.0], &[0.0, 0.0]).unwrap();
        assert_eq!(y, vec![1.0, 0.0]);
    }

    #[test]
    fn explicit_euler_mean_and_scale() {
        let spec = ProposalSpec::new(ProposalKind::ExplicitEuler, 0.5).unwrap();
        let model = TargetModel::standard_gaussian(2);
        let y = propose(&spec, &model, &[4.0, 0.0], &[1.0, 0.0]).unwrap();
        assert_relative_eq!(y[0], 3.0 + 0.5f64.sqrt(), max_relative = 1e-15);
        assert_eq!(y[1], 0.0);
    }

    #[test]
    fn noise_dimension_is_checked() {
        let spec = ProposalSpec::new(ProposalKind::OrnsteinUhlenbeck, 0.5).unwrap();
        let model = TargetModel::standard_gaussian(2);
        assert!(propose(&spec, &model, &[0.0, 0.0], &[0.0]).is_err());
    }
}
