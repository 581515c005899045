//! Quadrature rules on the unit circle for the integral states.

use crate::error::{Error, Result};

/// Nodes `e^{iθ}` with nonnegative weights summing to 1.
///
/// `resolution` is the largest half-gap (in angle) between the measure
/// and the node set: zero-resolution rules (atomic measures represented
/// by their own atoms) carry `None` and contribute no quadrature error.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleQuadrature {
    angles: Vec<f64>,
    weights: Vec<f64>,
    resolution: Option<f64>,
}

impl CircleQuadrature {
    pub fn new(angles: Vec<f64>, weights: Vec<f64>, resolution: Option<f64>) -> Result<Self> {
        if angles.len() != weights.len() || angles.is_empty() {
            return Err(Error::InvalidQuadrature);
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidQuadrature);
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidQuadrature);
        }
        Ok(CircleQuadrature {
            angles,
            weights,
            resolution,
        })
    }

    /// Uniform rule with `n` nodes for normalized arc-length measure;
    /// every point of the circle lies within `π/n` of a node.
    pub fn lebesgue(n: usize) -> Self {
        assert!(n >= 1);
        let angles = (0..n)
            .map(|k| 2.0 * std::f64::consts::PI * k as f64 / n as f64)
            .collect();
        let weights = vec![1.0 / n as f64; n];
        CircleQuadrature {
            angles,
            weights,
            resolution: Some(std::f64::consts::PI / n as f64),
        }
    }

    /// The point mass at `e^{iθ}`; the rule is the measure itself.
    pub fn point_mass(angle: f64) -> Self {
        CircleQuadrature {
            angles: vec![angle],
            weights: vec![1.0],
            resolution: None,
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.angles.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn resolution(&self) -> Option<f64> {
        self.resolution
    }
}
