//! Diagonal weighted inner-product norms.
//!
//! A `NormSpace` carries per-coordinate weights `g_i` in `(0, 1]` and defines
//! the inner product `<x, y> = sum g_i x_i y_i`. The induced norm (the "minus"
//! norm) is dominated by the Euclidean norm, and its dual (the "plus" norm,
//! `(sum xi_i^2 / g_i)^(1/2)`) dominates it, so
//! `minus(x) <= |x| <= plus(x)` for every vector.

use crate::error::{Error, Result};

/// Which norm to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Minus,
    Plus,
    Euclidean,
}

/// Diagonal inner-product space with weights in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpace {
    weights: Vec<f64>,
}

impl NormSpace {
    /// All weights equal to 1; minus, plus and Euclidean norms coincide.
    pub fn euclidean(dim: usize) -> Self {
        NormSpace { weights: vec![1.0; dim] }
    }

    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|&g| !(g > 0.0 && g <= 1.0)) {
            return Err(Error::InvalidWeights);
        }
        Ok(NormSpace { weights })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(sum g_i x_i^2)^(1/2)`.
    pub fn minus_norm(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.weights.len());
        self.weights
            .iter()
            .zip(x)
            .map(|(g, xi)| g * xi * xi)
            .sum::<f64>()
            .sqrt()
    }

    /// Dual norm `(sum x_i^2 / g_i)^(1/2)`.
    pub fn plus_norm(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.weights.len());
        self.weights
            .iter()
            .zip(x)
            .map(|(g, xi)| xi * xi / g)
            .sum::<f64>()
            .sqrt()
    }

    /// Weighted inner product `sum g_i x_i y_i`.
    pub fn minus_inner(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.weights.len());
        debug_assert_eq!(y.len(), self.weights.len());
        self.weights
            .iter()
            .zip(x.iter().zip(y))
            .map(|(g, (xi, yi))| g * xi * yi)
            .sum()
    }

    /// Minus-norm distance between two points.
    pub fn minus_distance(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), y.len());
        self.weights
            .iter()
            .zip(x.iter().zip(y))
            .map(|(g, (xi, yi))| {
                let d = xi - yi;
                g * d * d
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Plain Euclidean norm.
pub fn euclidean_norm(x: &[f64]) -> f64 {
    x.iter().map(|xi| xi * xi).sum::<f64>().sqrt()
}

/// Euclidean dot product.
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Checked evaluation of the requested norm.
pub fn norm_eval(space: &NormSpace, x: &[f64], which: NormKind) -> Result<f64> {
    if x.len() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), got: x.len() });
    }
    Ok(match which {
        NormKind::Minus => space.minus_norm(x),
        NormKind::Plus => space.plus_norm(x),
        NormKind::Euclidean => euclidean_norm(x),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_weights_reduce_to_euclidean() {
        let s = NormSpace::euclidean(2);
        let x = [3.0, 4.0];
        assert_eq!(norm_eval(&s, &x, NormKind::Minus).unwrap(), 5.0);
        assert_eq!(norm_eval(&s, &x, NormKind::Plus).unwrap(), 5.0);
        assert_eq!(norm_eval(&s, &x, NormKind::Euclidean).unwrap(), 5.0);
    }

    #[test]
    fn weighted_minus_and_plus() {
        let s = NormSpace::from_weights(vec![0.25, 1.0]).unwrap();
        let x = [2.0, 0.0];
        assert_eq!(s.minus_norm(&x), 1.0);
        assert_eq!(s.plus_norm(&x), 4.0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s = NormSpace::euclidean(3);
        assert!(norm_eval(&s, &[1.0], NormKind::Minus).is_err());
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(NormSpace::from_weights(vec![]).is_err());
        assert!(NormSpace::from_weights(vec![0.0]).is_err());
        assert!(NormSpace::from_weights(vec![1.5]).is_err());
        assert!(NormSpace::from_weights(vec![f64::NAN]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        // minus <= euclidean <= plus for random vectors and random weights
        #[test]
        fn norm_sandwich(
            pairs in prop::collection::vec((0.01f64..=1.0, -100.0f64..100.0), 1..20)
        ) {
            let (weights, coords): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let s = NormSpace::from_weights(weights).unwrap();
            let minus = s.minus_norm(&coords);
            let plus = s.plus_norm(&coords);
            let euclid = euclidean_norm(&coords);
            prop_assert!(minus <= euclid * (1.0 + 1e-12));
            prop_assert!(euclid <= plus * (1.0 + 1e-12));
        }

        // Cauchy-Schwarz in the weighted inner product
        #[test]
        fn cauchy_schwarz(
            triples in prop::collection::vec(
                (0.01f64..=1.0, -10.0f64..10.0, -10.0f64..10.0), 1..20)
        ) {
            let mut w = Vec::new();
            let mut x = Vec::new();
            let mut y = Vec::new();
            for (g, a, b) in triples {
                w.push(g);
                x.push(a);
                y.push(b);
            }
            let s = NormSpace::from_weights(w).unwrap();
            let lhs = s.minus_inner(&x, &y).abs();
            let rhs = s.minus_norm(&x) * s.minus_norm(&y);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-12);
        }
    }
}
