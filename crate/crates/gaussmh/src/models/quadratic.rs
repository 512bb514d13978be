//! Diagonal quadratic perturbations `V(x) = (1/2) sum b_i x_i^2`.
//!
//! Everything about these targets is exact: `grad V = diag(b) x`,
//! `hess V = diag(b)`, and because diagonal matrices commute with the
//! diagonal norm weights, the operator-norm constants do not depend on the
//! radius.

use crate::error::{Error, Result};
use crate::target::{SmoothnessConstants, TargetModel};

/// Exact bound inputs for a diagonal quadratic perturbation.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticConstants {
    /// `1 + min b_i` — the true lower bound on `hess U`.
    pub k_raw: f64,
    /// `k_raw` clamped to `(0, 1]` (the convexity assumption's range), absent
    /// when `k_raw <= 0`.
    pub k: Option<f64>,
    /// `max |1 + b_i|`: operator norm of `hess U`, radius-free.
    pub m: f64,
    /// `max |b_i|`: operator norm of `hess V`, radius-free.
    pub n: f64,
    /// `C_1..C_4`: `C_1 = |grad V(0)|_+ = 0`, `C_2 = max |b_i|`, higher
    /// derivatives vanish.
    pub c: [f64; 4],
    pub p: [u32; 4],
}

impl QuadraticConstants {
    /// `sup { |grad U(x)|_- : |x|_- <= r }`, exact for any diagonal weights.
    pub fn grad_u_sup(&self, r: f64) -> f64 {
        self.m * r
    }
}

/// Builds the model together with its exact constants fragment.
pub fn make_quadratic_model(b: &[f64]) -> Result<(TargetModel, QuadraticConstants)> {
    if b.is_empty() {
        return Err(Error::invalid("quadratic coefficient vector must be nonempty"));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("quadratic coefficients"));
    }
    let d = b.len();
    let min_b = b.iter().cloned().fold(f64::INFINITY, f64::min);
    let k_raw = 1.0 + min_b;
    let k = if k_raw > 0.0 { Some(k_raw.min(1.0)) } else { None };
    let m = b.iter().map(|bi| (1.0 + bi).abs()).fold(0.0, f64::max);
    let n = b.iter().map(|bi| bi.abs()).fold(0.0, f64::max);
    let constants = QuadraticConstants {
        k_raw,
        k,
        m,
        n,
        c: [0.0, n, 0.0, 0.0],
        p: [1, 0, 0, 0],
    };

    let b_v = b.to_vec();
    let b_g = b.to_vec();
    let b_h = b.to_vec();
    let model = TargetModel::new(
        d,
        move |x| 0.5 * b_v.iter().zip(x).map(|(bi, xi)| bi * xi * xi).sum::<f64>(),
        move |x| b_g.iter().zip(x).map(|(bi, xi)| bi * xi).collect(),
    )
    .with_hessian(move |_, eta| b_h.iter().zip(eta).map(|(bi, ei)| bi * ei).collect())
    .with_constants(SmoothnessConstants::new(constants.c, constants.p, k)?);

    Ok((model, constants))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_perturbation() {
        let (model, c) = make_quadratic_model(&[0.0, 0.0]).unwrap();
        assert_eq!((c.k_raw, c.k, c.m, c.n), (1.0, Some(1.0), 1.0, 0.0));
        assert_eq!(model.v(&[3.0, 4.0]).unwrap(), 0.0);
    }

    #[test]
    fn convex_case_caps_k() {
        let (_, c) = make_quadratic_model(&[0.25]).unwrap();
        assert_eq!(c.k_raw, 1.25);
        assert_eq!(c.k, Some(1.0));
        assert_eq!(c.m, 1.25);
        assert_eq!(c.c[1], 0.25);
    }

    #[test]
    fn concave_case_drops_convexity() {
        let (model, c) = make_quadratic_model(&[-1.5]).unwrap();
        assert_eq!(c.k_raw, -0.5);
        assert_eq!(c.k, None);
        assert!(model.constants().unwrap().k_convexity.is_none());
        // model still evaluates
        assert_eq!(model.grad_u(&[1.0]).unwrap(), vec![-0.5]);
    }

    #[test]
    fn hessian_action_is_diagonal() {
        let (model, _) = make_quadratic_model(&[0.5, -0.25]).unwrap();
        assert_eq!(
            model.hess_v_apply(&[9.0, 9.0], &[2.0, 4.0]).unwrap(),
            vec![1.0, -1.0]
        );
    }

    #[test]
    fn grad_u_sup_scales_with_radius() {
        let (_, c) = make_quadratic_model(&[0.25, -0.1]).unwrap();
        assert_eq!(c.grad_u_sup(2.0), 2.5);
    }
}
