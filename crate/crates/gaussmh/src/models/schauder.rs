//! Dyadic midpoint-displacement transform between hat-basis coefficients and
//! polygonal path values.
//!
//! A path `y: [0,1] -> R^ell` with endpoints `a`, `b` is expanded as the
//! affine segment `(1-t) a + t b` plus hat functions
//! `2^{-n/2} g(2^n t - k) e^i` with `g(s) = min(s, 1-s)^+`, levels
//! `0 <= n < m`, offsets `0 <= k < 2^n`. Truncation at level `m` is exact on
//! the dyadic grid `t_j = j 2^{-m}`: adding the level-`n` coefficient moves
//! the midpoint of its segment by `2^{-n/2 - 1}` times the coefficient, so
//! both directions of the transform run level by level in `O(d)` and invert
//! each other exactly. With standard normal coefficients and zero endpoints
//! the grid values have the Brownian bridge covariance `min(s,t) - s t`.
//!
//! Coefficients are stored level-major: index `((2^n - 1) + k) * ell + i`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SchauderTransform {
    levels: u32,
    ell: usize,
    start: Vec<f64>,
    end: Vec<f64>,
}

impl SchauderTransform {
    pub fn new(levels: u32, ell: usize, start: Vec<f64>, end: Vec<f64>) -> Result<Self> {
        if levels == 0 || levels > 24 {
            return Err(Error::invalid(format!("dyadic level {levels} out of range 1..=24")));
        }
        if ell == 0 {
            return Err(Error::invalid("ambient dimension ell must be at least 1"));
        }
        if start.len() != ell || end.len() != ell {
            return Err(Error::DimensionMismatch { expected: ell, got: start.len().max(end.len()) });
        }
        if start.iter().chain(&end).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("path endpoints"));
        }
        Ok(SchauderTransform { levels, ell, start, end })
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Coefficient-space dimension `(2^m - 1) * ell`.
    pub fn dim(&self) -> usize {
        ((1usize << self.levels) - 1) * self.ell
    }

    /// Number of dyadic grid nodes including both endpoints, `2^m + 1`.
    pub fn n_nodes(&self) -> usize {
        (1usize << self.levels) + 1
    }

    /// Path values at all dyadic nodes (node-major layout, `n_nodes * ell`),
    /// endpoints included.
    pub fn to_path(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: coeffs.len() });
        }
        let segments = 1usize << self.levels;
        let ell = self.ell;
        let mut path = vec![0.0; (segments + 1) * ell];
        path[..ell].copy_from_slice(&self.start);
        path[segments * ell..].copy_from_slice(&self.end);
        let mut offset = 0usize; // coefficient offset of level n
        for n in 0..self.levels {
            let blocks = 1usize << n;
            let stride = segments >> n;
            let half = stride / 2;
            let disp = 0.5 * 2f64.powf(-0.5 * n as f64);
            for k in 0..blocks {
                let left = k * stride;
                let right = left + stride;
                let mid = left + half;
                let coeff = &coeffs[(offset + k) * ell..(offset + k + 1) * ell];
                for i in 0..ell {
                    path[mid * ell + i] =
                        0.5 * (path[left * ell + i] + path[right * ell + i]) + disp * coeff[i];
                }
            }
            offset += blocks;
        }
        Ok(path)
    }

    /// Inverse of [`Self::to_path`]: recovers the coefficients from the path
    /// values at the interior nodes (`(2^m - 1) * ell` values; endpoints are
    /// the transform's own).
    pub fn to_coeffs(&self, interior: &[f64]) -> Result<Vec<f64>> {
        if interior.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: interior.len() });
        }
        let segments = 1usize << self.levels;
        let ell = self.ell;
        let mut path = vec![0.0; (segments + 1) * ell];
        path[..ell].copy_from_slice(&self.start);
        path[ell..segments * ell].copy_from_slice(interior);
        path[segments * ell..].copy_from_slice(&self.end);

        let mut coeffs = vec![0.0; self.dim()];
        let mut offset = 0usize;
        for n in 0..self.levels {
            let blocks = 1usize << n;
            let stride = segments >> n;
            let half = stride / 2;
            let scale = 2.0 * 2f64.powf(0.5 * n as f64);
            for k in 0..blocks {
                let left = k * stride;
                let right = left + stride;
                let mid = left + half;
                for i in 0..ell {
                    coeffs[(offset + k) * ell + i] = scale
                        * (path[mid * ell + i]
                            - 0.5 * (path[left * ell + i] + path[right * ell + i]));
                }
            }
            offset += blocks;
        }
        Ok(coeffs)
    }

    /// Linear part of [`Self::to_path`] (endpoints treated as zero).
    pub fn linear_map(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        let zeroed = SchauderTransform {
            levels: self.levels,
            ell: self.ell,
            start: vec![0.0; self.ell],
            end: vec![0.0; self.ell],
        };
        zeroed.to_path(coeffs)
    }

    /// Adjoint of the linear part: maps a cotangent over all nodes to
    /// coefficient space. Runs the midpoint recursion backwards, finest level
    /// first; endpoint entries have no coefficient dependence and drop out.
    pub fn adjoint(&self, node_cotangent: &[f64]) -> Result<Vec<f64>> {
        let segments = 1usize << self.levels;
        let ell = self.ell;
        if node_cotangent.len() != (segments + 1) * ell {
            return Err(Error::DimensionMismatch {
                expected: (segments + 1) * ell,
                got: node_cotangent.len(),
            });
        }
        let mut bar = node_cotangent.to_vec();
        let mut coeffs = vec![0.0; self.dim()];
        for n in (0..self.levels).rev() {
            let blocks = 1usize << n;
            let offset = blocks - 1;
            let stride = segments >> n;
            let half = stride / 2;
            let disp = 0.5 * 2f64.powf(-0.5 * n as f64);
            for k in 0..blocks {
                let left = k * stride;
                let right = left + stride;
                let mid = left + half;
                for i in 0..ell {
                    let m = bar[mid * ell + i];
                    coeffs[(offset + k) * ell + i] = disp * m;
                    bar[left * ell + i] += 0.5 * m;
                    bar[right * ell + i] += 0.5 * m;
                }
            }
        }
        Ok(coeffs)
    }
}
