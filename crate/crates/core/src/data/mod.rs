//! Datasets and their construction.
//!
//! A [`Dataset`] is an immutable list of [`Instance`]s sharing one feature
//! dimension and one [`Task`]. Labels are stored as `f64`:
//!
//! - regression: any finite real,
//! - binary classification: exactly `-1.0` or `+1.0`,
//! - multiclass with `k` classes: an integral class index in `0..k`.
//!
//! Every randomized constructor takes an explicit `u64` seed and draws from
//! ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`), whose output stream is
//! fixed by its specification and therefore identical on every platform.

mod libsvm;
mod synthetic;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

pub use libsvm::{parse_libsvm, parse_libsvm_as, parse_libsvm_str, to_libsvm_string, write_libsvm, LabelKind};
pub use synthetic::{
    generate_gaussian_mixture, generate_gaussian_regression, generate_logistic_classification,
};

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Regression,
    Binary,
    Multiclass { classes: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub features: Vec<f64>,
    pub label: f64,
}

impl Instance {
    pub fn new(features: Vec<f64>, label: f64) -> Self {
        Instance { features, label }
    }

    /// Class index of a multiclass label.
    pub fn class(&self) -> usize {
        self.label as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    instances: Vec<Instance>,
    dim: usize,
    task: Task,
}

impl Dataset {
    /// Validates and wraps `instances`. The dimension is taken from the first
    /// instance and every other instance must match it.
    pub fn new(instances: Vec<Instance>, task: Task) -> Result<Self> {
        let first = instances
            .first()
            .ok_or_else(|| Error::arg("dataset must contain at least one instance"))?;
        let dim = first.features.len();
        if dim == 0 {
            return Err(Error::arg("feature dimension must be at least 1"));
        }
        if let Task::Multiclass { classes } = task {
            if classes < 2 {
                return Err(Error::arg("multiclass task needs at least two classes"));
            }
        }
        for (i, z) in instances.iter().enumerate() {
            validate_instance(z, dim, task).map_err(|e| match e {
                Error::Data(msg) => Error::Data(format!("instance {i}: {msg}")),
                other => other,
            })?;
        }
        Ok(Dataset {
            instances,
            dim,
            task,
        })
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn task(&self) -> Task {
        self.task
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn instance(&self, i: usize) -> Option<&Instance> {
        self.instances.get(i)
    }

    /// `max_i ‖x_i‖`, the kernel-norm bound for the linear kernel.
    pub fn max_feature_norm(&self) -> f64 {
        self.instances
            .iter()
            .map(|z| crate::params::norm_sq(&z.features).sqrt())
            .fold(0.0, f64::max)
    }

    /// `max_i |y_i|`.
    pub fn max_abs_label(&self) -> f64 {
        self.instances
            .iter()
            .map(|z| z.label.abs())
            .fold(0.0, f64::max)
    }

    /// Copy of the dataset with instance `j` replaced by `z_new` (the set `S^j`).
    pub fn replace_instance(&self, j: usize, z_new: Instance) -> Result<Dataset> {
        if j >= self.len() {
            return Err(Error::arg(format!(
                "replace index {j} out of range for n = {}",
                self.len()
            )));
        }
        check_dim(self.dim, z_new.features.len())?;
        validate_instance(&z_new, self.dim, self.task)?;
        let mut instances = self.instances.clone();
        instances[j] = z_new;
        Ok(Dataset {
            instances,
            dim: self.dim,
            task: self.task,
        })
    }

    /// Copy with features zero-padded to `dim`, for aligning a libsvm test
    /// file whose largest index is below the training file's.
    pub fn with_dim(&self, dim: usize) -> Result<Dataset> {
        if dim < self.dim {
            return Err(Error::arg(format!("cannot shrink dimension {} to {dim}", self.dim)));
        }
        let instances = self
            .instances
            .iter()
            .map(|z| {
                let mut x = z.features.clone();
                x.resize(dim, 0.0);
                Instance::new(x, z.label)
            })
            .collect();
        Ok(Dataset { instances, dim, task: self.task })
    }

    /// Copy of the dataset without instance `j` (the set `S^{\j}`).
    pub fn remove_instance(&self, j: usize) -> Result<Dataset> {
        if j >= self.len() {
            return Err(Error::arg(format!(
                "remove index {j} out of range for n = {}",
                self.len()
            )));
        }
        if self.len() < 2 {
            return Err(Error::arg("cannot remove the only instance"));
        }
        let mut instances = self.instances.clone();
        instances.remove(j);
        Ok(Dataset {
            instances,
            dim: self.dim,
            task: self.task,
        })
    }

    /// Seeded random partition into a training and a test set.
    ///
    /// Indices are shuffled with Fisher-Yates driven by ChaCha8; the first
    /// `floor(train_fraction * n)` shuffled indices form the training set and
    /// the rest the test set. Both parts keep the shuffled order.
    pub fn split(&self, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::arg(format!(
                "train fraction must lie in (0, 1), got {train_fraction}"
            )));
        }
        let n = self.len();
        let n_train = (train_fraction * n as f64).floor() as usize;
        if n_train == 0 || n_train == n {
            return Err(Error::arg(format!(
                "split of n = {n} at fraction {train_fraction} leaves an empty part"
            )));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng_from_seed(seed));
        let pick = |idx: &[usize]| Dataset {
            instances: idx.iter().map(|&i| self.instances[i].clone()).collect(),
            dim: self.dim,
            task: self.task,
        };
        Ok((pick(&order[..n_train]), pick(&order[n_train..])))
    }
}

fn validate_instance(z: &Instance, dim: usize, task: Task) -> Result<()> {
    if z.features.len() != dim {
        return Err(Error::Data(format!(
            "feature length {} differs from dimension {dim}",
            z.features.len()
        )));
    }
    if z.features.iter().any(|v| !v.is_finite()) {
        return Err(Error::Data("non-finite feature value".into()));
    }
    match task {
        Task::Regression if !z.label.is_finite() => {
            Err(Error::Data(format!("non-finite label {}", z.label)))
        }
        Task::Binary if z.label != 1.0 && z.label != -1.0 => Err(Error::Data(format!(
            "binary label must be -1 or +1, got {}",
            z.label
        ))),
        Task::Multiclass { classes }
            if !(z.label >= 0.0 && z.label.fract() == 0.0 && (z.label as usize) < classes) =>
        {
            Err(Error::Data(format!(
                "class label {} is not an index in 0..{classes}",
                z.label
            )))
        }
        _ => Ok(()),
    }
}
