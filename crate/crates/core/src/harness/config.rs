//! TOML experiment configuration.
//!
//! ```toml
//! name = "regression"
//! task = "linreg"            # linreg | logreg | mlp
//! seeds = [1, 2, 3]
//! lambda = "1/sqrt(n)"       # or a number
//! output_dir = "artifacts/regression"
//!
//! [data]
//! source = "synthetic"       # synthetic | libsvm
//! n = 4000
//! d = 100
//!
//! [[algorithms]]
//! kind = "gd"
//! eta = 0.032
//! passes = 30
//!
//! [[algorithms]]
//! kind = "sgd"
//! schedule = { kind = "inverse", c = 0.01 }
//! passes = 30
//!
//! [[algorithms]]
//! kind = "svrg"
//! eta = 0.005
//! inner_factor = 2.0         # inner loop length = inner_factor * n
//! passes = 30
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::{
    generate_gaussian_mixture, generate_gaussian_regression, generate_logistic_classification,
    parse_libsvm_as, Dataset, LabelKind,
};
use crate::error::{Error, Result};
use crate::model::{LinearModel, LossSpec, Model};
use crate::optim::{Algorithm, StepSchedule, SvrgStageOutput};

/// Default threshold grid: decades relative to the initial excess.
pub const DEFAULT_THRESHOLDS: [f64; 8] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Linreg,
    Logreg,
    Mlp,
}

impl TaskKind {
    pub fn loss(self) -> LossSpec {
        match self {
            TaskKind::Linreg => LossSpec::Squared,
            TaskKind::Logreg => LossSpec::Logistic,
            TaskKind::Mlp => LossSpec::CrossEntropy,
        }
    }

    pub fn is_convex(self) -> bool {
        self != TaskKind::Mlp
    }

    fn label_kind(self) -> LabelKind {
        match self {
            TaskKind::Linreg => LabelKind::Regression,
            TaskKind::Logreg => LabelKind::Binary,
            TaskKind::Mlp => LabelKind::Multiclass,
        }
    }
}

fn default_noise() -> f64 {
    0.1
}
fn default_signal() -> f64 {
    2.0
}
fn default_classes() -> usize {
    10
}
fn default_separation() -> f64 {
    3.0
}
fn default_paper_n() -> usize {
    40_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataConfig {
    /// Generated data, split into train and test by `train_fraction`.
    Synthetic {
        n: usize,
        d: usize,
        /// Total size used under `--paper-scale`.
        #[serde(default = "default_paper_n")]
        paper_n: usize,
        #[serde(default = "default_noise")]
        noise_sd: f64,
        #[serde(default = "default_signal")]
        signal: f64,
        #[serde(default = "default_classes")]
        classes: usize,
        #[serde(default = "default_separation")]
        separation: f64,
    },
    /// A libsvm file, relative paths resolved against the config file.
    Libsvm {
        path: PathBuf,
        /// Separate test file; when absent the file is split.
        #[serde(default)]
        test_path: Option<PathBuf>,
    },
}

/// `λ` as a number or the rule `"1/sqrt(n)"` with `n` the training-set size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaConfig {
    Value(f64),
    Rule(String),
}

impl Default for LambdaConfig {
    fn default() -> Self {
        LambdaConfig::Rule("1/sqrt(n)".into())
    }
}

impl LambdaConfig {
    pub fn resolve(&self, n: usize) -> Result<f64> {
        match self {
            LambdaConfig::Value(v) if *v >= 0.0 && v.is_finite() => Ok(*v),
            LambdaConfig::Value(v) => Err(Error::Config(format!("lambda must be >= 0, got {v}"))),
            LambdaConfig::Rule(r) if matches!(r.as_str(), "1/sqrt(n)" | "inv_sqrt_n") => {
                Ok(1.0 / (n as f64).sqrt())
            }
            LambdaConfig::Rule(r) => Err(Error::Config(format!(
                "unknown lambda rule `{r}` (use a number or \"1/sqrt(n)\")"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MethodConfig {
    Gd {
        eta: f64,
    },
    Sgd {
        schedule: StepSchedule,
    },
    Svrg {
        eta: f64,
        /// Inner loop length as a multiple of `n`.
        inner_factor: f64,
        #[serde(default)]
        output: SvrgStageOutput,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmConfig {
    #[serde(flatten)]
    pub method: MethodConfig,
    /// Budget in data passes. GD runs `passes` iterations, SGD `passes·n`
    /// steps and SVRG as many whole stages as fit.
    #[serde(default)]
    pub passes: Option<f64>,
    /// Budget in iterations (stages for SVRG); overrides `passes`.
    #[serde(default)]
    pub iterations: Option<u64>,
    /// Evaluations per data pass (SGD and SVRG) or iterations between
    /// evaluations (GD).
    #[serde(default)]
    pub evals_per_pass: Option<u64>,
}

impl AlgorithmConfig {
    pub fn algorithm(&self) -> Algorithm {
        match self.method {
            MethodConfig::Gd { .. } => Algorithm::Gd,
            MethodConfig::Sgd { .. } => Algorithm::Sgd,
            MethodConfig::Svrg { .. } => Algorithm::Svrg,
        }
    }

    /// SVRG inner loop length for a training set of size `n`.
    pub fn inner_length(&self, n: usize) -> Option<u64> {
        match self.method {
            MethodConfig::Svrg { inner_factor, .. } => Some(((inner_factor * n as f64).round() as u64).max(1)),
            _ => None,
        }
    }

    /// Iterations (GD, SGD) or stages (SVRG) for a training set of size `n`.
    pub fn iterations_for(&self, n: usize) -> Result<u64> {
        if let Some(t) = self.iterations {
            return Ok(t);
        }
        let passes = self
            .passes
            .ok_or_else(|| Error::Config(format!("{}: set `passes` or `iterations`", self.algorithm())))?;
        if !(passes >= 0.0) || !passes.is_finite() {
            return Err(Error::Config(format!("passes must be >= 0, got {passes}")));
        }
        Ok(match self.method {
            MethodConfig::Gd { .. } => passes.floor() as u64,
            MethodConfig::Sgd { .. } => (passes * n as f64).round() as u64,
            MethodConfig::Svrg { .. } => {
                let m = self.inner_length(n).unwrap_or(1) as f64;
                (passes / (1.0 + 2.0 * m / n as f64)).floor() as u64
            }
        })
    }

    pub fn step_description(&self) -> String {
        match &self.method {
            MethodConfig::Gd { eta } | MethodConfig::Svrg { eta, .. } => format!("{eta}"),
            MethodConfig::Sgd { schedule } => schedule.describe(),
        }
    }
}

/// Assumption inputs for the nonconvex bound. They describe the landscape
/// around the reached local minimum and cannot be measured.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonconvexAssumptions {
    pub beta0: f64,
    pub lipschitz: f64,
    pub mu: f64,
    pub epsilon0: f64,
    pub local_gap: f64,
    pub gamma: f64,
}

fn default_delta() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    #[serde(default)]
    pub expected: bool,
    #[serde(default)]
    pub high_prob: bool,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default)]
    pub nonconvex: Option<NonconvexAssumptions>,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig { expected: false, high_prob: false, delta: default_delta(), nonconvex: None }
    }
}

fn default_fraction() -> f64 {
    0.5
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub task: TaskKind,
    pub data: DataConfig,
    /// Seed of data generation and train/test split.
    #[serde(default)]
    pub data_seed: u64,
    #[serde(default = "default_fraction")]
    pub train_fraction: f64,
    #[serde(default)]
    pub lambda: LambdaConfig,
    /// Adds an unregularized bias to linear models.
    #[serde(default)]
    pub bias: bool,
    pub algorithms: Vec<AlgorithmConfig>,
    /// Algorithm seeds (sampling order, MLP initialization). Defaults to `[0]`.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub bounds: BoundsConfig,
    /// Thresholds on the training excess relative to its initial value.
    #[serde(default)]
    pub thresholds: Option<Vec<f64>>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Directory against which relative data paths are resolved.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml_str(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::Config("at least one algorithm is required".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Config(format!("train_fraction must lie in (0, 1), got {}", self.train_fraction)));
        }
        for a in &self.algorithms {
            if a.passes.is_none() && a.iterations.is_none() {
                return Err(Error::Config(format!("{}: set `passes` or `iterations`", a.algorithm())));
            }
            if let Some(p) = a.passes {
                if !(p >= 0.0) {
                    return Err(Error::Config(format!("{}: passes must be >= 0", a.algorithm())));
                }
            }
            match &a.method {
                MethodConfig::Gd { eta } | MethodConfig::Svrg { eta, .. } if !(*eta > 0.0) => {
                    return Err(Error::Config(format!("{}: eta must be > 0", a.algorithm())));
                }
                MethodConfig::Sgd { schedule } => schedule.validate().map_err(|e| Error::Config(e.to_string()))?,
                MethodConfig::Svrg { inner_factor, .. } if !(*inner_factor > 0.0) => {
                    return Err(Error::Config("svrg: inner_factor must be > 0".into()));
                }
                _ => {}
            }
            if a.evals_per_pass == Some(0) {
                return Err(Error::Config("evals_per_pass must be >= 1".into()));
            }
        }
        if self.task == TaskKind::Mlp && self.bias {
            return Err(Error::Config("`bias` applies to linear tasks only".into()));
        }
        let b = &self.bounds;
        if (b.expected || b.high_prob) && self.bias {
            return Err(Error::Config("expected and high_prob bounds need a model without bias".into()));
        }
        if (b.expected || b.high_prob) && !self.task.is_convex() {
            return Err(Error::Config("expected and high_prob bounds need a convex task".into()));
        }
        if !(b.delta > 0.0 && b.delta < 1.0) {
            return Err(Error::Config(format!("bounds.delta must lie in (0, 1), got {}", b.delta)));
        }
        if let Some(ts) = &self.thresholds {
            if ts.is_empty() || ts.iter().any(|t| !(*t > 0.0)) {
                return Err(Error::Config("thresholds must be a non-empty list of positive values".into()));
            }
        }
        Ok(())
    }

    pub fn thresholds(&self) -> Vec<f64> {
        self.thresholds.clone().unwrap_or_else(|| DEFAULT_THRESHOLDS.to_vec())
    }

    pub fn model(&self, dim: usize) -> Model {
        match self.task {
            TaskKind::Mlp => Model::mlp(dim),
            _ if self.bias => Model::Linear(LinearModel::with_bias(dim)),
            _ => Model::linear(dim),
        }
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        match &self.base_dir {
            Some(base) if p.is_relative() => base.join(p),
            _ => p.to_path_buf(),
        }
    }

    /// Training and test sets. `paper_scale` replaces the synthetic size by
    /// `paper_n`.
    pub fn build_data(&self, paper_scale: bool) -> Result<(Dataset, Dataset)> {
        let kind = self.task.label_kind();
        match &self.data {
            DataConfig::Synthetic { n, d, paper_n, noise_sd, signal, classes, separation } => {
                let n = if paper_scale { *paper_n } else { *n };
                let s = self.data_seed;
                let all = match self.task {
                    TaskKind::Linreg => generate_gaussian_regression(n, *d, *noise_sd, s)?.0,
                    TaskKind::Logreg => generate_logistic_classification(n, *d, *signal, s)?.0,
                    TaskKind::Mlp => generate_gaussian_mixture(n, *d, *classes, *separation, s)?,
                };
                all.split(self.train_fraction, s)
            }
            DataConfig::Libsvm { path, test_path } => {
                let train = parse_libsvm_as(self.resolve(path), kind)?;
                match test_path {
                    Some(t) => {
                        let test = parse_libsvm_as(self.resolve(t), kind)?;
                        let dim = train.dim().max(test.dim());
                        Ok((train.with_dim(dim)?, test.with_dim(dim)?))
                    }
                    None => train.split(self.train_fraction, self.data_seed),
                }
            }
        }
    }
}
