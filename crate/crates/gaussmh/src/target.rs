//! Target measures of the form `mu ∝ exp(-|x|^2/2 - V(x))`.
//!
//! The full log-density is `U(x) = |x|^2/2 + V(x)`, so the standard Gaussian
//! part is always handled exactly and a model only has to supply `V`, its
//! gradient, and optionally the action of its Hessian.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Growth constants `C_1..C_4`, `p_1..p_4` for the derivatives of `V`
/// measured against the minus norm, plus the optional strong-convexity
/// constant `K` of `U` (clamped to `(0, 1]` by construction).
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessConstants {
    pub c: [f64; 4],
    pub p: [u32; 4],
    pub k_convexity: Option<f64>,
}

impl SmoothnessConstants {
    pub fn new(c: [f64; 4], p: [u32; 4], k_convexity: Option<f64>) -> Result<Self> {
        if c.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::invalid("smoothness constants C_n must be finite and nonnegative"));
        }
        if let Some(k) = k_convexity {
            if !(k > 0.0 && k <= 1.0) {
                return Err(Error::invalid(format!("k_convexity = {k} must lie in (0, 1]")));
            }
        }
        Ok(SmoothnessConstants { c, p, k_convexity })
    }
}

type ValueFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradientFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
type HessianApplyFn = dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync;

/// The perturbation `V` of the standard Gaussian, with `grad U(x) = x + grad V(x)`.
///
/// Evaluation functions must be pure; the model is `Clone` and safe to share
/// across threads.
#[derive(Clone)]
pub struct TargetModel {
    dim: usize,
    v: Arc<ValueFn>,
    grad_v: Arc<GradientFn>,
    hess_v: Option<Arc<HessianApplyFn>>,
    constants: Option<SmoothnessConstants>,
}

impl fmt::Debug for TargetModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TargetModel")
            .field("dim", &self.dim)
            .field("has_hessian", &self.hess_v.is_some())
            .field("constants", &self.constants)
            .finish()
    }
}

impl TargetModel {
    pub fn new(
        dim: usize,
        v: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        grad_v: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        assert!(dim >= 1, "model dimension must be at least 1");
        TargetModel {
            dim,
            v: Arc::new(v),
            grad_v: Arc::new(grad_v),
            hess_v: None,
            constants: None,
        }
    }

    /// `V == 0`: the target is the standard Gaussian itself.
    pub fn standard_gaussian(dim: usize) -> Self {
        let mut model = TargetModel::new(dim, |_| 0.0, |x| vec![0.0; x.len()]);
        model.hess_v = Some(Arc::new(|_: &[f64], eta: &[f64]| vec![0.0; eta.len()]));
        model.constants = Some(
            SmoothnessConstants::new([0.0; 4], [0; 4], Some(1.0)).expect("valid constants"),
        );
        model
    }

    pub fn with_hessian(
        mut self,
        hess_v: impl Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.hess_v = Some(Arc::new(hess_v));
        self
    }

    pub fn with_constants(mut self, constants: SmoothnessConstants) -> Self {
        self.constants = Some(constants);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constants(&self) -> Option<&SmoothnessConstants> {
        self.constants.as_ref()
    }

    pub fn has_hessian(&self) -> bool {
        self.hess_v.is_some()
    }

    /// Validates dimension and finiteness of a state vector.
    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("state vector"));
        }
        Ok(())
    }

    pub fn v(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        let value = (self.v)(x);
        if !value.is_finite() {
            return Err(Error::NonFinite("V(x)"));
        }
        Ok(value)
    }

    pub fn grad_v(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        let g = (self.grad_v)(x);
        debug_assert_eq!(g.len(), self.dim);
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("grad V(x)"));
        }
        Ok(g)
    }

    /// `grad U(x) = x + grad V(x)`.
    pub fn grad_u(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut g = self.grad_v(x)?;
        for (gi, xi) in g.iter_mut().zip(x) {
            *gi += xi;
        }
        Ok(g)
    }

    /// `U(x) = |x|^2/2 + V(x)`.
    pub fn u(&self, x: &[f64]) -> Result<f64> {
        let sq: f64 = x.iter().map(|v| v * v).sum();
        Ok(0.5 * sq + self.v(x)?)
    }

    /// Action `eta -> hess V(x) . eta`; errors if the model has none.
    pub fn hess_v_apply(&self, x: &[f64], eta: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        if eta.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: eta.len() });
        }
        let hess = self.hess_v.as_ref().ok_or(Error::MissingHessian)?;
        let out = hess(x, eta);
        debug_assert_eq!(out.len(), self.dim);
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("hess V(x) . eta"));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grad_u_is_identity_for_zero_v() {
        let m = TargetModel::standard_gaussian(2);
        assert_eq!(m.grad_u(&[1.0, -2.0]).unwrap(), vec![1.0, -2.0]);
    }

    #[test]
    fn grad_u_scales_for_quadratic_v() {
        // V(x) = b|x|^2/2 with b = 0.25 gives grad U = (1 + b) x
        let b = 0.25;
        let m = TargetModel::new(
            2,
            move |x| 0.5 * b * x.iter().map(|v| v * v).sum::<f64>(),
            move |x| x.iter().map(|v| b * v).collect(),
        );
        assert_eq!(m.grad_u(&[2.0, 0.0]).unwrap(), vec![2.5, 0.0]);
    }

    #[test]
    fn non_finite_gradient_is_an_error() {
        let m = TargetModel::new(1, |_| 0.0, |_| vec![f64::NAN]);
        assert!(matches!(m.grad_v(&[0.0]), Err(Error::NonFinite(_))));
    }

    #[test]
    fn missing_hessian_fails_loudly() {
        let m = TargetModel::new(1, |_| 0.0, |_| vec![0.0]);
        assert!(matches!(m.hess_v_apply(&[0.0], &[1.0]), Err(Error::MissingHessian)));
    }

    #[test]
    fn dimension_checks() {
        let m = TargetModel::standard_gaussian(2);
        assert!(m.v(&[1.0]).is_err());
        assert!(m.check_point(&[1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn constants_validation() {
        assert!(SmoothnessConstants::new([0.0; 4], [0; 4], Some(1.5)).is_err());
        assert!(SmoothnessConstants::new([-1.0, 0.0, 0.0, 0.0], [0; 4], None).is_err());
        assert!(SmoothnessConstants::new([1.0; 4], [1; 4], Some(0.5)).is_ok());
    }
}
