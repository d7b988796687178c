//! The regularized empirical risk
//!
//! ```text
//! R_S^r(w) = (1/n) Σ_i l(w, z_i) + λ‖w‖²
//! ```
//!
//! together with its gradients and the constants consumed by the bounds.

mod constants;
mod eigen;

use std::sync::atomic::{AtomicU64, Ordering};

use crate::data::Dataset;
use crate::error::{check_dim, Error, Result};
use crate::model::{LossSpec, Model};
use crate::ParameterVector;

pub use constants::{default_domain_radius, estimate_constants, ProblemConstants};
pub use eigen::{extreme_eigenvalues, EigenExtremes, EIGEN_TOLERANCE};
pub(crate) use eigen::largest_eigenvalue;

/// Training set, model, loss and regularization strength.
///
/// Evaluation is pure apart from a relaxed counter of per-instance gradient
/// evaluations, used to audit data-pass accounting.
#[derive(Debug)]
pub struct Objective {
    dataset: Dataset,
    model: Model,
    loss: LossSpec,
    lambda: f64,
    grad_evals: AtomicU64,
}

impl Clone for Objective {
    fn clone(&self) -> Self {
        Objective {
            dataset: self.dataset.clone(),
            model: self.model.clone(),
            loss: self.loss,
            lambda: self.lambda,
            grad_evals: AtomicU64::new(0),
        }
    }
}

impl Objective {
    pub fn new(dataset: Dataset, model: Model, loss: LossSpec, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::arg(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        check_dim(model.input_dim(), dataset.dim())?;
        model.check_compatible(loss, dataset.task())?;
        Ok(Objective {
            dataset,
            model,
            loss,
            lambda,
            grad_evals: AtomicU64::new(0),
        })
    }

    /// Same model, loss and λ on a different training set.
    pub fn with_dataset(&self, dataset: Dataset) -> Result<Objective> {
        Objective::new(dataset, self.model.clone(), self.loss, self.lambda)
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Objective> {
        Objective::new(self.dataset.clone(), self.model.clone(), self.loss, lambda)
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn loss(&self) -> LossSpec {
        self.loss
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n(&self) -> usize {
        self.dataset.len()
    }

    pub fn num_params(&self) -> usize {
        self.model.num_params()
    }

    /// Total per-instance gradient evaluations performed so far.
    pub fn gradient_evaluations(&self) -> u64 {
        self.grad_evals.load(Ordering::Relaxed)
    }

    /// `N(w) = Σ w_k²` over regularized coordinates.
    pub fn penalty(&self, w: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (k, v) in w.iter().enumerate() {
            if self.model.is_regularized(k) {
                acc += v * v;
            }
        }
        acc
    }

    /// Mean loss of `w` over `dataset`. On the held-out set this is the
    /// test-risk estimate of the expected risk.
    pub fn empirical_risk(&self, w: &ParameterVector, dataset: &Dataset) -> Result<f64> {
        check_dim(self.num_params(), w.len())?;
        check_dim(self.model.input_dim(), dataset.dim())?;
        if dataset.is_empty() {
            return Err(Error::arg("empirical risk of an empty dataset"));
        }
        self.model.check_compatible(self.loss, dataset.task())?;
        Ok(self.mean_loss(w, dataset))
    }

    /// `R_S(w)` on the training set.
    pub fn train_risk(&self, w: &ParameterVector) -> Result<f64> {
        check_dim(self.num_params(), w.len())?;
        Ok(self.mean_loss(w, &self.dataset))
    }

    /// `R_S^r(w) = R_S(w) + λ N(w)`.
    pub fn regularized_risk(&self, w: &ParameterVector) -> Result<f64> {
        Ok(self.train_risk(w)? + self.lambda * self.penalty(w))
    }

    fn mean_loss(&self, w: &[f64], dataset: &Dataset) -> f64 {
        let mut acc = 0.0;
        for z in dataset.instances() {
            acc += self.model.loss_unchecked(w, z, self.loss);
        }
        acc / dataset.len() as f64
    }

    /// `∇R_S^r(w)`.
    pub fn full_gradient(&self, w: &ParameterVector) -> Result<ParameterVector> {
        check_dim(self.num_params(), w.len())?;
        let mut g = vec![0.0; w.len()];
        self.full_gradient_into(w, &mut g);
        Ok(ParameterVector::from_vec(g))
    }

    /// `∇_w l(w, z_i) + 2λw`, whose average over `i` is the full gradient.
    pub fn stochastic_gradient(&self, w: &ParameterVector, i: usize) -> Result<ParameterVector> {
        check_dim(self.num_params(), w.len())?;
        if i >= self.n() {
            return Err(Error::arg(format!("instance index {i} out of range for n = {}", self.n())));
        }
        let mut g = vec![0.0; w.len()];
        self.stochastic_gradient_into(w, i, &mut g);
        Ok(ParameterVector::from_vec(g))
    }

    pub(crate) fn full_gradient_into(&self, w: &[f64], out: &mut [f64]) {
        self.gradient_uncounted(w, out);
        self.grad_evals.fetch_add(self.n() as u64, Ordering::Relaxed);
    }

    /// Full gradient for monitoring; not added to the evaluation counter.
    pub(crate) fn gradient_uncounted(&self, w: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let scale = 1.0 / self.n() as f64;
        for z in self.dataset.instances() {
            self.model.add_loss_gradient(w, z, self.loss, scale, out);
        }
        self.add_penalty_gradient(w, out);
    }

    pub(crate) fn stochastic_gradient_into(&self, w: &[f64], i: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let z = &self.dataset.instances()[i];
        self.model.add_loss_gradient(w, z, self.loss, 1.0, out);
        self.add_penalty_gradient(w, out);
        self.grad_evals.fetch_add(1, Ordering::Relaxed);
    }

    fn add_penalty_gradient(&self, w: &[f64], out: &mut [f64]) {
        let two_lambda = 2.0 * self.lambda;
        for (k, (o, v)) in out.iter_mut().zip(w).enumerate() {
            if self.model.is_regularized(k) {
                *o += two_lambda * v;
            }
        }
    }

    /// `R_S^r(w) - R_S^r(reference)`.
    ///
    /// For linear models the difference is accumulated per instance from
    /// `⟨w - reference, x_i⟩`, which keeps it accurate far below the rounding
    /// level of the risks themselves.
    pub fn suboptimality(&self, w: &ParameterVector, reference: &ParameterVector) -> Result<f64> {
        check_dim(self.num_params(), w.len())?;
        check_dim(self.num_params(), reference.len())?;
        let lin = match &self.model {
            Model::Linear(m) => m,
            Model::Mlp(_) => {
                return Ok(self.regularized_risk(w)? - self.regularized_risk(reference)?);
            }
        };
        let diff: Vec<f64> = w.iter().zip(reference.iter()).map(|(a, b)| a - b).collect();
        let mut acc = 0.0;
        for z in self.dataset.instances() {
            let fa = lin.output(w, &z.features);
            let fb = lin.output(reference, &z.features);
            let delta = lin.output(&diff, &z.features);
            acc += self.loss.scalar_difference(fa, fb, delta, z.label);
        }
        let mut pen = 0.0;
        for (k, (a, b)) in w.iter().zip(reference.iter()).enumerate() {
            if self.model.is_regularized(k) {
                pen += (a - b) * (a + b);
            }
        }
        Ok(acc / self.n() as f64 + self.lambda * pen)
    }
}
