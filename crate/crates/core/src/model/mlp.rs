use rand::Rng;
use serde::{Deserialize, Serialize};

use super::loss::sigmoid;
use crate::data::Instance;
use crate::params::{axpy, dot};
use crate::ParameterVector;

pub const MLP_HIDDEN: usize = 100;
pub const MLP_CLASSES: usize = 10;

/// One fully connected sigmoid hidden layer of 100 units followed by ten
/// softmax outputs.
///
/// Parameter layout (row-major): `W1 [100 × d]`, `b1 [100]`, `W2 [10 × 100]`,
/// `b2 [10]`, so `p = 100·d + 100 + 1000 + 10`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub dim: usize,
}

struct Forward {
    hidden: Vec<f64>,
    logits: Vec<f64>,
}

impl MlpModel {
    pub fn new(dim: usize) -> Self {
        MlpModel { dim }
    }

    pub fn num_params(&self) -> usize {
        MLP_HIDDEN * self.dim + MLP_HIDDEN + MLP_CLASSES * MLP_HIDDEN + MLP_CLASSES
    }

    fn offsets(&self) -> (usize, usize, usize) {
        let b1 = MLP_HIDDEN * self.dim;
        let w2 = b1 + MLP_HIDDEN;
        let b2 = w2 + MLP_CLASSES * MLP_HIDDEN;
        (b1, w2, b2)
    }

    pub(crate) fn init_params(&self, seed: u64) -> ParameterVector {
        let mut rng = crate::data::rng_from_seed(seed);
        let (_, w2, _) = self.offsets();
        let a_in = 1.0 / (self.dim as f64).sqrt();
        let a_hidden = 1.0 / (MLP_HIDDEN as f64).sqrt();
        let w = (0..self.num_params())
            .map(|i| {
                let a = if i < w2 { a_in } else { a_hidden };
                rng.random_range(-a..=a)
            })
            .collect();
        ParameterVector::from_vec(w)
    }

    fn forward(&self, w: &[f64], x: &[f64]) -> Forward {
        let (b1, w2, b2) = self.offsets();
        let d = self.dim;
        let hidden: Vec<f64> = (0..MLP_HIDDEN)
            .map(|j| sigmoid(dot(&w[j * d..(j + 1) * d], x) + w[b1 + j]))
            .collect();
        let logits = (0..MLP_CLASSES)
            .map(|c| {
                dot(&w[w2 + c * MLP_HIDDEN..w2 + (c + 1) * MLP_HIDDEN], &hidden) + w[b2 + c]
            })
            .collect();
        Forward { hidden, logits }
    }

    pub(crate) fn probabilities(&self, w: &[f64], x: &[f64]) -> Vec<f64> {
        softmax(&self.forward(w, x).logits)
    }

    pub(crate) fn cross_entropy(&self, w: &[f64], z: &Instance) -> f64 {
        let fwd = self.forward(w, &z.features);
        log_sum_exp(&fwd.logits) - fwd.logits[z.class()]
    }

    /// Backpropagation of `scale * ∇_w (-log p_y)` into `out`.
    pub(crate) fn add_cross_entropy_gradient(
        &self,
        w: &[f64],
        z: &Instance,
        scale: f64,
        out: &mut [f64],
    ) {
        let (b1, w2, b2) = self.offsets();
        let d = self.dim;
        let fwd = self.forward(w, &z.features);
        let mut delta_out = softmax(&fwd.logits);
        delta_out[z.class()] -= 1.0;

        let mut delta_hidden = vec![0.0; MLP_HIDDEN];
        for (c, &dc) in delta_out.iter().enumerate() {
            let row = w2 + c * MLP_HIDDEN;
            axpy(dc, &w[row..row + MLP_HIDDEN], &mut delta_hidden);
            axpy(scale * dc, &fwd.hidden, &mut out[row..row + MLP_HIDDEN]);
            out[b2 + c] += scale * dc;
        }
        for (j, (dh, h)) in delta_hidden.iter().zip(&fwd.hidden).enumerate() {
            let da = dh * h * (1.0 - h);
            axpy(scale * da, &z.features, &mut out[j * d..(j + 1) * d]);
            out[b1 + j] += scale * da;
        }
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + v.iter().map(|a| (a - m).exp()).sum::<f64>().ln()
}

fn softmax(v: &[f64]) -> Vec<f64> {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = v.iter().map(|a| (a - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|a| a / s).collect()
}
