//! Prediction models with exact analytic gradients.
//!
//! Two architectures are supported: a linear model `f(x) = ⟨w, x⟩ (+ b)` used
//! with the squared and logistic losses, and a one-hidden-layer perceptron
//! (`d → 100 sigmoid → 10 softmax`) used with the cross-entropy loss.

mod io;
mod linear;
mod loss;
mod mlp;

use serde::{Deserialize, Serialize};

use crate::data::{Instance, Task};
use crate::error::{check_dim, Error, Result};
use crate::ParameterVector;

pub use io::{read_params, write_params};
pub use linear::LinearModel;
pub use loss::LossSpec;
pub use mlp::{MlpModel, MLP_CLASSES, MLP_HIDDEN};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    Linear(LinearModel),
    Mlp(MlpModel),
}

impl Model {
    pub fn linear(dim: usize) -> Self {
        Model::Linear(LinearModel::new(dim))
    }

    pub fn mlp(dim: usize) -> Self {
        Model::Mlp(MlpModel::new(dim))
    }

    pub fn num_params(&self) -> usize {
        match self {
            Model::Linear(m) => m.num_params(),
            Model::Mlp(m) => m.num_params(),
        }
    }

    pub fn input_dim(&self) -> usize {
        match self {
            Model::Linear(m) => m.dim,
            Model::Mlp(m) => m.dim,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            Model::Linear(_) => 1,
            Model::Mlp(_) => MLP_CLASSES,
        }
    }

    /// Whether parameter `idx` is subject to the `λ‖w‖²` penalty. Only the
    /// optional linear bias is exempt.
    pub fn is_regularized(&self, idx: usize) -> bool {
        match self {
            Model::Linear(m) => !(m.bias && idx == m.dim),
            Model::Mlp(_) => true,
        }
    }

    /// Forward pass. Linear models return `[⟨w, x⟩]`, the MLP returns the
    /// softmax probability vector.
    pub fn predict(&self, w: &ParameterVector, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.num_params(), w.len())?;
        check_dim(self.input_dim(), x.len())?;
        Ok(match self {
            Model::Linear(m) => vec![m.output(w, x)],
            Model::Mlp(m) => m.probabilities(w, x),
        })
    }

    /// Checks that `loss` can be used with this model on data of kind `task`.
    pub fn check_compatible(&self, loss: LossSpec, task: Task) -> Result<()> {
        let ok = match (self, loss, task) {
            (Model::Linear(_), LossSpec::Squared, Task::Regression) => true,
            (Model::Linear(_), LossSpec::Logistic, Task::Binary) => true,
            (Model::Mlp(_), LossSpec::CrossEntropy, Task::Multiclass { classes }) => {
                classes <= MLP_CLASSES
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::arg(format!(
                "loss {loss:?} is not compatible with {} model on {task:?} data",
                self.name()
            )))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Linear(_) => "linear",
            Model::Mlp(_) => "mlp",
        }
    }

    /// `l(w, z)`.
    pub fn loss(&self, w: &ParameterVector, z: &Instance, loss: LossSpec) -> Result<f64> {
        self.check_instance(w, z, loss)?;
        Ok(self.loss_unchecked(w, z, loss))
    }

    /// Exact gradient `∇_w l(w, z)`.
    pub fn loss_gradient(
        &self,
        w: &ParameterVector,
        z: &Instance,
        loss: LossSpec,
    ) -> Result<ParameterVector> {
        self.check_instance(w, z, loss)?;
        let mut g = vec![0.0; self.num_params()];
        self.add_loss_gradient(w, z, loss, 1.0, &mut g);
        Ok(ParameterVector::from_vec(g))
    }

    /// Deterministic initial parameters: zeros for linear models, seeded
    /// uniform `[-1/√fan_in, 1/√fan_in]` for the MLP.
    pub fn init_params(&self, seed: u64) -> ParameterVector {
        match self {
            Model::Linear(m) => ParameterVector::zeros(m.num_params()),
            Model::Mlp(m) => m.init_params(seed),
        }
    }

    fn check_instance(&self, w: &ParameterVector, z: &Instance, loss: LossSpec) -> Result<()> {
        check_dim(self.num_params(), w.len())?;
        check_dim(self.input_dim(), z.features.len())?;
        let task = match loss {
            LossSpec::Squared => Task::Regression,
            LossSpec::Logistic => Task::Binary,
            LossSpec::CrossEntropy => Task::Multiclass {
                classes: MLP_CLASSES,
            },
        };
        self.check_compatible(loss, task)?;
        if loss == LossSpec::Logistic && z.label != 1.0 && z.label != -1.0 {
            return Err(Error::arg(format!("logistic loss needs a ±1 label, got {}", z.label)));
        }
        if loss == LossSpec::CrossEntropy
            && !(z.label >= 0.0 && z.label.fract() == 0.0 && (z.label as usize) < MLP_CLASSES)
        {
            return Err(Error::arg(format!("cross-entropy needs a class index, got {}", z.label)));
        }
        Ok(())
    }

    pub(crate) fn loss_unchecked(&self, w: &[f64], z: &Instance, loss: LossSpec) -> f64 {
        match self {
            Model::Linear(m) => loss.scalar_value(m.output(w, &z.features), z.label),
            Model::Mlp(m) => m.cross_entropy(w, z),
        }
    }

    /// `out += scale * ∇_w l(w, z)`.
    pub(crate) fn add_loss_gradient(
        &self,
        w: &[f64],
        z: &Instance,
        loss: LossSpec,
        scale: f64,
        out: &mut [f64],
    ) {
        match self {
            Model::Linear(m) => {
                let f = m.output(w, &z.features);
                let dl = loss.scalar_derivative(f, z.label);
                m.add_output_gradient(&z.features, scale * dl, out);
            }
            Model::Mlp(m) => m.add_cross_entropy_gradient(w, z, scale, out),
        }
    }
}
