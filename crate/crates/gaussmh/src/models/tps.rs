//! Transition-path-sampling targets over Schauder coefficients.
//!
//! A diffusion bridge for `dY = -grad H(Y) dt + dB` conditioned on endpoints
//! has, relative to the Brownian bridge, the Girsanov density
//! `exp(-(1/2) int phi(y_s) ds)` with `phi = |grad H|^2 - laplacian H`. In
//! coefficient space the Brownian bridge becomes the standard Gaussian, so
//! the discretized target fits the `exp(-|x|^2/2 - V(x))` form with
//!
//! `V(x) = 2^{-m-1} ( phi(y_0)/2 + sum_{k=1}^{2^m-1} phi(y_k) + phi(y_1)/2 )`
//!
//! evaluated on the polygonal path `y = to_path(x)` (trapezoidal quadrature,
//! endpoint weights 1/2). Gradients chain through the transpose of the path
//! transform, giving `O(d)` cost per evaluation.
//!
//! `H` acts coordinatewise: `H(z) = sum_i eta(z_i)` for a scalar potential
//! `eta` supplied with four derivatives, which yields `phi`, `grad phi`, and
//! the diagonal `hess phi` in closed form.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::norm::NormSpace;
use crate::target::TargetModel;

use super::schauder::SchauderTransform;

/// Scalar potential `eta` with derivatives `[eta, eta', eta'', eta''', eta'''']`.
pub trait ScalarPotential: Send + Sync {
    fn derivatives(&self, z: f64) -> [f64; 5];
}

/// `eta(z) = (z^2 - 1)^2 / 4`: two wells at -1 and +1.
#[derive(Debug, Clone, Copy, Default)]
pub struct DoubleWell;

impl ScalarPotential for DoubleWell {
    fn derivatives(&self, z: f64) -> [f64; 5] {
        let z2 = z * z;
        [
            0.25 * (z2 - 1.0) * (z2 - 1.0),
            z * (z2 - 1.0),
            3.0 * z2 - 1.0,
            6.0 * z,
            6.0,
        ]
    }
}

/// `eta(z) = z`: drift with constant `phi = 1` per coordinate.
#[derive(Debug, Clone, Copy, Default)]
pub struct LinearRamp;

impl ScalarPotential for LinearRamp {
    fn derivatives(&self, z: f64) -> [f64; 5] {
        [z, 1.0, 0.0, 0.0, 0.0]
    }
}

/// `eta == 0`: the bridge itself, `V == 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroPotential;

impl ScalarPotential for ZeroPotential {
    fn derivatives(&self, _z: f64) -> [f64; 5] {
        [0.0; 5]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TpsConfig {
    /// Dyadic truncation level `m`; the coefficient dimension is `(2^m - 1) * ell`.
    pub levels: u32,
    /// Ambient dimension of the diffusion.
    pub ell: usize,
    /// Bridge start point.
    pub start: Vec<f64>,
    /// Bridge end point.
    pub end: Vec<f64>,
    /// Norm exponent: level-`n` coefficients get weight `2^{-2 alpha n}`.
    pub alpha: f64,
}

impl TpsConfig {
    /// Window `(1/2, 1/2 + 1/q)` in which the norm both dominates the path
    /// norms dimension-freely and stays finite on bridge paths; `q = 8`
    /// matches the default quartic potential growth.
    pub fn recommended_alpha_window(q: f64) -> (f64, f64) {
        (0.5, 0.5 + 1.0 / q)
    }

    pub fn alpha_in_recommended_window(&self) -> bool {
        let (lo, hi) = Self::recommended_alpha_window(8.0);
        self.alpha > lo && self.alpha < hi
    }
}

/// Model, norm space, and the underlying transform (kept for diagnostics and
/// path export).
#[derive(Debug, Clone)]
pub struct TpsBundle {
    pub model: TargetModel,
    pub norm: NormSpace,
    pub transform: SchauderTransform,
}

fn phi_at_node(potential: &dyn ScalarPotential, node: &[f64]) -> f64 {
    node.iter()
        .map(|&z| {
            let d = potential.derivatives(z);
            d[1] * d[1] - d[2]
        })
        .sum()
}

/// Builds the coefficient-space target for the given bridge.
pub fn make_tps_model(
    config: &TpsConfig,
    potential: Arc<dyn ScalarPotential>,
) -> Result<TpsBundle> {
    if !(config.alpha >= 0.0) {
        return Err(Error::invalid(format!("alpha = {} must be nonnegative", config.alpha)));
    }
    let transform = SchauderTransform::new(
        config.levels,
        config.ell,
        config.start.clone(),
        config.end.clone(),
    )?;
    let dim = transform.dim();
    let ell = config.ell;
    let n_nodes = transform.n_nodes();
    let quad = 2f64.powi(-(config.levels as i32) - 1);

    let mut weights = Vec::with_capacity(dim);
    for n in 0..config.levels {
        let w = 2f64.powf(-2.0 * config.alpha * n as f64);
        for _ in 0..(1usize << n) * ell {
            weights.push(w);
        }
    }
    let norm = NormSpace::from_weights(weights)?;

    let t_v = Arc::new(transform.clone());
    let t_g = Arc::clone(&t_v);
    let t_h = Arc::clone(&t_v);
    let p_v = Arc::clone(&potential);
    let p_g = Arc::clone(&potential);
    let p_h = Arc::clone(&potential);

    let node_weight = move |k: usize| if k == 0 || k == n_nodes - 1 { 0.5 } else { 1.0 };

    let model = TargetModel::new(
        dim,
        move |x| {
            let path = t_v.to_path(x).expect("dimension checked by the model");
            let mut v = 0.0;
            for k in 0..n_nodes {
                let node = &path[k * ell..(k + 1) * ell];
                v += node_weight(k) * phi_at_node(p_v.as_ref(), node);
            }
            quad * v
        },
        move |x| {
            let path = t_g.to_path(x).expect("dimension checked by the model");
            let mut cotangent = vec![0.0; n_nodes * ell];
            for k in 0..n_nodes {
                let w = quad * if k == 0 || k == n_nodes - 1 { 0.5 } else { 1.0 };
                for i in 0..ell {
                    let d = p_g.derivatives(path[k * ell + i]);
                    cotangent[k * ell + i] = w * (2.0 * d[1] * d[2] - d[3]);
                }
            }
            t_g.adjoint(&cotangent).expect("cotangent sized to the node grid")
        },
    )
    .with_hessian(move |x, eta| {
        let path = t_h.to_path(x).expect("dimension checked by the model");
        let disp = t_h.linear_map(eta).expect("dimension checked by the model");
        let mut cotangent = vec![0.0; n_nodes * ell];
        for k in 0..n_nodes {
            let w = quad * if k == 0 || k == n_nodes - 1 { 0.5 } else { 1.0 };
            for i in 0..ell {
                let d = p_h.derivatives(path[k * ell + i]);
                let curv = 2.0 * d[2] * d[2] + 2.0 * d[1] * d[3] - d[4];
                cotangent[k * ell + i] = w * curv * disp[k * ell + i];
            }
        }
        t_h.adjoint(&cotangent).expect("cotangent sized to the node grid")
    });

    Ok(TpsBundle { model, norm, transform })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::RandomStream;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn config(m: u32, ell: usize, alpha: f64) -> TpsConfig {
        TpsConfig {
            levels: m,
            ell,
            start: vec![-1.0; ell],
            end: vec![1.0; ell],
            alpha,
        }
    }

    fn random_coeffs(d: usize, rng: &mut RandomStream) -> Vec<f64> {
        (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
    }

    #[test]
    fn zero_potential_reduces_to_gaussian() {
        let bundle = make_tps_model(&config(3, 1, 0.6), Arc::new(ZeroPotential)).unwrap();
        let mut rng = RandomStream::new(1);
        let x = random_coeffs(bundle.model.dim(), &mut rng);
        assert_eq!(bundle.model.v(&x).unwrap(), 0.0);
        assert!(bundle.model.grad_v(&x).unwrap().iter().all(|&g| g == 0.0));
    }

    #[test]
    fn constant_phi_gives_half_per_coordinate() {
        // phi == ell everywhere, quadrature weights sum to 2^m, so V = ell/2
        for ell in [1usize, 2] {
            let bundle = make_tps_model(&config(4, ell, 0.6), Arc::new(LinearRamp)).unwrap();
            let mut rng = RandomStream::new(2);
            for _ in 0..5 {
                let x = random_coeffs(bundle.model.dim(), &mut rng);
                let v = bundle.model.v(&x).unwrap();
                assert!((v - 0.5 * ell as f64).abs() <= 1e-12, "v = {v}");
                let g = bundle.model.grad_v(&x).unwrap();
                assert!(g.iter().all(|&gi| gi.abs() <= 1e-14));
            }
        }
    }

    #[test]
    fn alpha_weights_are_level_constant_and_bounded() {
        let bundle = make_tps_model(&config(4, 1, 0.6), Arc::new(DoubleWell)).unwrap();
        let w = bundle.norm.weights();
        assert_eq!(w.len(), 15);
        assert_eq!(w[0], 1.0);
        // level 1 occupies indices 1..3, level 2 indices 3..7, level 3 indices 7..15
        let close = |a: f64, b: f64| (a / b - 1.0).abs() <= 1e-14;
        assert!(w[1..3].iter().all(|&x| close(x, 2f64.powf(-1.2))));
        assert!(w[3..7].iter().all(|&x| close(x, 2f64.powf(-2.4))));
        assert!(w[7..].iter().all(|&x| close(x, 2f64.powf(-3.6))));
        assert!(w.iter().all(|&x| x <= 1.0));
        assert!(w[1..3].windows(2).all(|p| p[0] == p[1]));
    }

    #[test]
    fn double_well_gradient_matches_finite_differences() {
        let bundle = make_tps_model(&config(4, 1, 0.6), Arc::new(DoubleWell)).unwrap();
        let model = &bundle.model;
        let mut rng = RandomStream::new(3);
        let eps = 1e-5;
        for _ in 0..5 {
            let x = random_coeffs(model.dim(), &mut rng);
            let grad = model.grad_v(&x).unwrap();
            let mut fd = vec![0.0; model.dim()];
            for j in 0..model.dim() {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += eps;
                xm[j] -= eps;
                fd[j] = (model.v(&xp).unwrap() - model.v(&xm).unwrap()) / (2.0 * eps);
            }
            let err: f64 = grad
                .iter()
                .zip(&fd)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let scale: f64 = fd.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
            assert!(err / scale <= 1e-6, "relative error {}", err / scale);
        }
    }

    #[test]
    fn gradient_matches_directional_quadrature_formula() {
        // second analytic route: the directional derivative is the quadrature
        // of grad phi against the polygonal path of the direction
        let cfg = config(4, 2, 0.6);
        let bundle = make_tps_model(&cfg, Arc::new(DoubleWell)).unwrap();
        let model = &bundle.model;
        let t = &bundle.transform;
        let quad = 2f64.powi(-(cfg.levels as i32) - 1);
        let n_nodes = t.n_nodes();
        let pot = DoubleWell;
        let mut rng = RandomStream::new(6);
        for _ in 0..20 {
            let x = random_coeffs(model.dim(), &mut rng);
            let xi = random_coeffs(model.dim(), &mut rng);
            let lhs: f64 = model
                .grad_v(&x)
                .unwrap()
                .iter()
                .zip(&xi)
                .map(|(g, v)| g * v)
                .sum();
            let path = t.to_path(&x).unwrap();
            let direction = t.linear_map(&xi).unwrap();
            let mut rhs = 0.0;
            for k in 0..n_nodes {
                let w = if k == 0 || k == n_nodes - 1 { 0.5 } else { 1.0 };
                for i in 0..cfg.ell {
                    let d = pot.derivatives(path[k * cfg.ell + i]);
                    let phi_prime = 2.0 * d[1] * d[2] - d[3];
                    rhs += w * phi_prime * direction[k * cfg.ell + i];
                }
            }
            rhs *= quad;
            assert!(
                (lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()),
                "{lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn gradient_is_adjoint_consistent() {
        let bundle = make_tps_model(&config(5, 1, 0.6), Arc::new(DoubleWell)).unwrap();
        let model = &bundle.model;
        let mut rng = RandomStream::new(4);
        let eps = 1e-6;
        for _ in 0..50 {
            let x = random_coeffs(model.dim(), &mut rng);
            let xi = random_coeffs(model.dim(), &mut rng);
            let grad = model.grad_v(&x).unwrap();
            let inner: f64 = grad.iter().zip(&xi).map(|(a, b)| a * b).sum();
            let xp: Vec<f64> = x.iter().zip(&xi).map(|(a, b)| a + eps * b).collect();
            let xm: Vec<f64> = x.iter().zip(&xi).map(|(a, b)| a - eps * b).collect();
            let directional = (model.v(&xp).unwrap() - model.v(&xm).unwrap()) / (2.0 * eps);
            assert!(
                (inner - directional).abs() <= 1e-6 * (1.0 + directional.abs()),
                "{inner} vs {directional}"
            );
        }
    }

    #[test]
    fn hessian_action_matches_gradient_differences() {
        let bundle = make_tps_model(&config(3, 1, 0.6), Arc::new(DoubleWell)).unwrap();
        let model = &bundle.model;
        let mut rng = RandomStream::new(5);
        let eps = 1e-5;
        for _ in 0..10 {
            let x = random_coeffs(model.dim(), &mut rng);
            let eta = random_coeffs(model.dim(), &mut rng);
            let h = model.hess_v_apply(&x, &eta).unwrap();
            let xp: Vec<f64> = x.iter().zip(&eta).map(|(a, b)| a + eps * b).collect();
            let xm: Vec<f64> = x.iter().zip(&eta).map(|(a, b)| a - eps * b).collect();
            let gp = model.grad_v(&xp).unwrap();
            let gm = model.grad_v(&xm).unwrap();
            for j in 0..model.dim() {
                let fd = (gp[j] - gm[j]) / (2.0 * eps);
                assert!((h[j] - fd).abs() <= 1e-6 * (1.0 + fd.abs()), "{} vs {}", h[j], fd);
            }
        }
    }

    #[test]
    fn alpha_window_check() {
        let mut cfg = config(3, 1, 0.6);
        assert!(cfg.alpha_in_recommended_window());
        cfg.alpha = 0.9;
        assert!(!cfg.alpha_in_recommended_window());
        cfg.alpha = -0.1;
        assert!(make_tps_model(&cfg, Arc::new(DoubleWell)).is_err());
    }
}
