use serde::{Deserialize, Serialize};

use crate::params::dot;

/// `f(x) = ⟨w, x⟩`, optionally `+ b` with the bias stored last in the
/// parameter vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub dim: usize,
    #[serde(default)]
    pub bias: bool,
}

impl LinearModel {
    pub fn new(dim: usize) -> Self {
        LinearModel { dim, bias: false }
    }

    pub fn with_bias(dim: usize) -> Self {
        LinearModel { dim, bias: true }
    }

    pub fn num_params(&self) -> usize {
        self.dim + usize::from(self.bias)
    }

    pub(crate) fn output(&self, w: &[f64], x: &[f64]) -> f64 {
        let f = dot(&w[..self.dim], x);
        if self.bias {
            f + w[self.dim]
        } else {
            f
        }
    }

    /// `out += coef * ∂f/∂w`.
    pub(crate) fn add_output_gradient(&self, x: &[f64], coef: f64, out: &mut [f64]) {
        crate::params::axpy(coef, x, &mut out[..self.dim]);
        if self.bias {
            out[self.dim] += coef;
        }
    }
}
