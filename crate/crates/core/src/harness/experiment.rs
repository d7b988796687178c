//! End-to-end experiment execution and its on-disk artifacts.
//!
//! An artifact directory holds:
//!
//! - `index.json`: every file below, plus `complete` and the failing stage,
//! - `config.toml`: the effective configuration,
//! - `<alg>_seed<s>.csv`: the trace of one run,
//! - `<alg>_seed<s>.json`: run metadata (schedule, seed, constants, errors),
//! - `<alg>_seed<s>.params`: final parameters in checkpoint format,
//! - `comparison_seed<s>.json`: passes-to-threshold table across algorithms,
//! - `bounds/*.json`: bound reports,
//! - `timings.json`: wall-clock times, the only non-reproducible file.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::thread;

use serde::{Deserialize, Serialize};

use super::compare::{compare_report, ComparisonReport};
use super::config::{AlgorithmConfig, ExperimentConfig, MethodConfig, TaskKind};
use super::oracle::{exact_minimizer, gradient_norm, REFERENCE_TOLERANCE};
use crate::bounds::{
    convergence_errors, expected_bound, high_prob_bound, kernel_stability, nonconvex_bound, t1_reached,
    BoundReport, ConvergenceErrors, NonconvexInputs, RhoSource,
};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::model::write_params;
use crate::objective::{default_domain_radius, estimate_constants, Objective, ProblemConstants};
use crate::optim::{read_records, run_gd, run_sgd, run_svrg, RunOptions, SvrgParams, Trace, TraceRecord};
use crate::ParameterVector;

const DEFAULT_OUTPUT: &str = "rerm-artifacts";

/// Runs one configured algorithm from `w0`.
pub fn run_configured(
    objective: &Objective,
    algo: &AlgorithmConfig,
    w0: &ParameterVector,
    seed: u64,
    opts: RunOptions<'_>,
) -> Result<Trace> {
    let n = objective.n();
    let t = algo.iterations_for(n)?;
    let mut opts = opts;
    if let Some(k) = algo.evals_per_pass {
        opts.eval_every = Some(match algo.method {
            MethodConfig::Gd { .. } => 1,
            MethodConfig::Sgd { .. } => (n as u64 / k).max(1),
            MethodConfig::Svrg { .. } => (n as u64).div_ceil(2 * k).max(1),
        });
    }
    match &algo.method {
        MethodConfig::Gd { eta } => run_gd(objective, w0, *eta, t, opts),
        MethodConfig::Sgd { schedule } => run_sgd(objective, w0, schedule, t, seed, opts),
        MethodConfig::Svrg { eta, output, .. } => {
            let inner = algo.inner_length(n).unwrap_or(1);
            let p = SvrgParams { eta: *eta, inner, stages: t, output: *output };
            run_svrg(objective, w0, &p, seed, opts)
        }
    }
}

/// One (algorithm, seed) run.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub algorithm: String,
    pub seed: u64,
    pub trace: Trace,
    pub errors: Option<ConvergenceErrors>,
}

impl RunOutcome {
    pub fn stem(&self) -> String {
        format!("{}_seed{}", self.algorithm, self.seed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunEntry {
    pub algorithm: String,
    pub seed: u64,
    pub trace: String,
    pub metadata: String,
    pub params: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArtifactIndex {
    pub name: String,
    pub complete: bool,
    pub failed_stage: Option<String>,
    pub error: Option<String>,
    pub config: String,
    pub runs: Vec<RunEntry>,
    pub comparisons: Vec<String>,
    pub bounds: Vec<String>,
    pub timings: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
struct RunMetadata<'a> {
    algorithm: &'a str,
    step: &'a str,
    method: &'a MethodConfig,
    seed: u64,
    data_seed: u64,
    task: TaskKind,
    model: &'a str,
    n_train: usize,
    n_test: usize,
    dim: usize,
    lambda: f64,
    iterations: u64,
    svrg_inner: Option<u64>,
    gradient_evaluations: u64,
    data_passes: f64,
    constants: Option<&'a ProblemConstants>,
    reference_gradient_norm: Option<f64>,
    final_record: &'a TraceRecord,
    convergence: Option<ConvergenceSummary>,
}

#[derive(Clone, Debug, Serialize)]
struct ConvergenceSummary {
    rho0: f64,
    rho1: f64,
    rho2: f64,
    min_rho2: f64,
    train_gap: Option<f64>,
}

/// Everything an experiment produced, in memory and on disk.
#[derive(Clone, Debug)]
pub struct RunArtifact {
    pub dir: PathBuf,
    pub index: ArtifactIndex,
    pub train: Dataset,
    pub test: Dataset,
    pub lambda: f64,
    pub constants: Option<ProblemConstants>,
    pub reference: Option<ParameterVector>,
    pub runs: Vec<RunOutcome>,
    pub comparisons: Vec<(u64, ComparisonReport)>,
    pub bounds: Vec<(String, BoundReport)>,
}

impl RunArtifact {
    pub fn run(&self, algorithm: &str, seed: u64) -> Option<&RunOutcome> {
        self.runs.iter().find(|r| r.algorithm == algorithm && r.seed == seed)
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

fn stage<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.in_stage(name))
}

/// Runs every (algorithm, seed) pair of `config` and writes the artifacts.
///
/// Stages: `data`, `objective`, `constants`, `reference`, `run:<alg>:seed<s>`,
/// `bounds`, `compare`, `write`. A failure aborts the experiment, leaving an
/// `index.json` with `complete = false` and the failing stage.
pub fn run_experiment(config: &ExperimentConfig, paper_scale: bool) -> Result<RunArtifact> {
    config.validate()?;
    let dir = config.output_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT));
    fs::create_dir_all(dir.join("bounds")).map_err(|e| Error::io(&dir, e))?;
    let mut index = ArtifactIndex {
        name: config.name.clone().unwrap_or_else(|| "experiment".into()),
        complete: false,
        failed_stage: None,
        error: None,
        config: "config.toml".into(),
        runs: Vec::new(),
        comparisons: Vec::new(),
        bounds: Vec::new(),
        timings: None,
    };
    let cfg_text = config.to_toml_string()?;
    fs::write(dir.join("config.toml"), cfg_text).map_err(|e| Error::io(dir.join("config.toml"), e))?;
    match execute(config, paper_scale, &dir, &mut index) {
        Ok(mut art) => {
            index.complete = true;
            write_json(&dir.join("index.json"), &index)?;
            art.index = index;
            Ok(art)
        }
        Err(e) => {
            if let Error::Stage { stage, source } = &e {
                index.failed_stage = Some(stage.clone());
                index.error = Some(source.to_string());
            } else {
                index.error = Some(e.to_string());
            }
            write_json(&dir.join("index.json"), &index)?;
            Err(e)
        }
    }
}

fn execute(config: &ExperimentConfig, paper_scale: bool, dir: &Path, index: &mut ArtifactIndex) -> Result<RunArtifact> {
    let (train, test) = stage("data", config.build_data(paper_scale))?;
    let n = train.len();
    let lambda = stage("objective", config.lambda.resolve(n))?;
    let model = config.model(train.dim());
    let objective = stage("objective", Objective::new(train.clone(), model.clone(), config.task.loss(), lambda))?;

    let w_init = model.init_params(0);
    let constants = if config.task.is_convex() && lambda > 0.0 && !config.bias {
        let r = stage("constants", default_domain_radius(&objective, &w_init))?;
        Some(stage("constants", estimate_constants(&objective, r))?)
    } else {
        None
    };
    let reference = if config.task.is_convex() {
        Some(stage("reference", exact_minimizer(&objective, REFERENCE_TOLERANCE))?)
    } else {
        None
    };
    let reference_gn = match &reference {
        Some(r) => Some(stage("reference", gradient_norm(&objective, r))?),
        None => None,
    };

    let jobs: Vec<(&AlgorithmConfig, u64)> =
        config.algorithms.iter().flat_map(|a| config.seeds.iter().map(move |s| (a, *s))).collect();
    let results: Vec<Result<RunOutcome>> = thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(algo, seed)| {
                let (objective, test, reference) = (&objective, &test, reference.as_ref());
                let model = &model;
                scope.spawn(move || {
                    let name = format!("run:{}:seed{seed}", algo.algorithm());
                    let w0 = model.init_params(seed);
                    let mut opts = RunOptions::default().with_test_set(test);
                    if let Some(r) = reference {
                        opts = opts.with_reference(r);
                    }
                    let trace = stage(&name, run_configured(objective, algo, &w0, seed, opts))?;
                    let errors = match reference {
                        Some(r) => Some(stage(&name, convergence_errors(objective, &trace, r))?),
                        None => None,
                    };
                    Ok(RunOutcome { algorithm: algo.algorithm().to_string(), seed, trace, errors })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("run thread panicked")).collect()
    });
    let runs = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut timings = BTreeMap::new();
    for (run, &(algo, _)) in runs.iter().zip(&jobs) {
        let stem = run.stem();
        let csv_path = dir.join(format!("{stem}.csv"));
        let file = File::create(&csv_path).map_err(|e| Error::io(&csv_path, e))?;
        stage("write", run.trace.write_csv(BufWriter::new(file)))?;
        let params_path = dir.join(format!("{stem}.params"));
        let file = File::create(&params_path).map_err(|e| Error::io(&params_path, e))?;
        stage("write", write_params(&model, &run.trace.final_w, BufWriter::new(file)))?;
        let meta = RunMetadata {
            algorithm: &run.algorithm,
            step: &run.trace.step,
            method: &algo.method,
            seed: run.seed,
            data_seed: config.data_seed,
            task: config.task,
            model: model.name(),
            n_train: n,
            n_test: test.len(),
            dim: train.dim(),
            lambda,
            iterations: algo.iterations_for(n)?,
            svrg_inner: algo.inner_length(n),
            gradient_evaluations: run.trace.gradient_evaluations,
            data_passes: run.trace.last().data_passes,
            constants: constants.as_ref(),
            reference_gradient_norm: reference_gn,
            final_record: run.trace.last(),
            convergence: run.errors.as_ref().map(|e| ConvergenceSummary {
                rho0: e.rho0,
                rho1: e.rho1,
                rho2: e.rho2,
                min_rho2: e.min_rho2(),
                train_gap: e.train_gap,
            }),
        };
        write_json(&dir.join(format!("{stem}.json")), &meta)?;
        timings.insert(stem.clone(), run.trace.wall_time);
        index.runs.push(RunEntry {
            algorithm: run.algorithm.clone(),
            seed: run.seed,
            trace: format!("{stem}.csv"),
            metadata: format!("{stem}.json"),
            params: format!("{stem}.params"),
        });
    }

    let bounds = stage("bounds", evaluate_bounds(config, constants.as_ref(), &runs, n))?;
    for (name, report) in &bounds {
        let rel = format!("bounds/{name}.json");
        write_json(&dir.join(&rel), report)?;
        index.bounds.push(rel);
    }

    let mut comparisons = Vec::new();
    if config.algorithms.len() >= 2 {
        for &seed in &config.seeds {
            let traces: Vec<(String, Vec<TraceRecord>)> = runs
                .iter()
                .filter(|r| r.seed == seed)
                .map(|r| (r.algorithm.clone(), r.trace.records.clone()))
                .collect();
            let report = stage("compare", compare_report(&traces, &config.thresholds()))?;
            let rel = format!("comparison_seed{seed}.json");
            write_json(&dir.join(&rel), &report)?;
            index.comparisons.push(rel);
            comparisons.push((seed, report));
        }
    }
    write_json(&dir.join("timings.json"), &timings)?;
    index.timings = Some("timings.json".into());

    Ok(RunArtifact {
        dir: dir.to_path_buf(),
        index: index.clone(),
        train,
        test,
        lambda,
        constants,
        reference,
        runs,
        comparisons,
        bounds,
    })
}

fn evaluate_bounds(
    config: &ExperimentConfig,
    constants: Option<&ProblemConstants>,
    runs: &[RunOutcome],
    n: usize,
) -> Result<Vec<(String, BoundReport)>> {
    let b = &config.bounds;
    let mut out = Vec::new();
    if b.expected || b.high_prob {
        let c = constants.ok_or_else(|| Error::Config("bounds need the convex constants (lambda > 0, no bias)".into()))?;
        let beta = kernel_stability(c.lipschitz, c.kernel_bound, c.lambda, n)?;
        for algo in &config.algorithms {
            let name = algo.algorithm().to_string();
            let errs: Vec<ConvergenceErrors> =
                runs.iter().filter(|r| r.algorithm == name).filter_map(|r| r.errors.clone()).collect();
            if b.expected {
                let mean = ConvergenceErrors::average(&errs)?;
                let source = if errs.len() == 1 { RhoSource::SingleRun } else { RhoSource::SeedAverage { runs: errs.len() } };
                let rep = expected_bound(&beta, &mean, c.lipschitz, c.output_smoothness, n, source)?;
                out.push((format!("{name}_expected"), rep));
            }
            if b.high_prob {
                for r in runs.iter().filter(|r| r.algorithm == name) {
                    let e = r.errors.as_ref().expect("convex runs carry errors");
                    let rep = high_prob_bound(
                        &beta,
                        e,
                        c.lipschitz,
                        c.output_smoothness,
                        c.loss_bound,
                        n,
                        b.delta,
                        RhoSource::SingleRun,
                    )?;
                    out.push((format!("{}_high_prob", r.stem()), rep));
                }
            }
        }
    }
    if let Some(a) = b.nonconvex {
        for r in runs {
            let min_rho2 = r.trace.records.iter().map(|x| x.grad_norm_sq).fold(f64::INFINITY, f64::min);
            let inputs = NonconvexInputs {
                beta0: a.beta0,
                lipschitz: a.lipschitz,
                mu: a.mu,
                min_rho2,
                local_gap: a.local_gap,
                epsilon0: a.epsilon0,
                gamma: a.gamma,
            };
            // An uncertified run is a missing report, not a failed experiment.
            if t1_reached(min_rho2, a.gamma, a.epsilon0) {
                out.push((format!("{}_nonconvex", r.stem()), nonconvex_bound(&inputs, true)?));
            }
        }
    }
    Ok(out)
}

/// Loads `index.json` of an artifact directory and the trace records of
/// every run, keyed by `(algorithm, seed)`.
pub fn load_artifacts(dir: impl AsRef<Path>) -> Result<(ArtifactIndex, Vec<(String, u64, Vec<TraceRecord>)>)> {
    let dir = dir.as_ref();
    let path = dir.join("index.json");
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let index: ArtifactIndex = serde_json::from_str(&text)?;
    let mut traces = Vec::new();
    for run in &index.runs {
        let p = dir.join(&run.trace);
        let file = File::open(&p).map_err(|e| Error::io(&p, e))?;
        traces.push((run.algorithm.clone(), run.seed, read_records(file)?));
    }
    Ok((index, traces))
}

/// Recomputes the comparison of every seed from the CSVs in `dir`.
pub fn compare_artifacts(dir: impl AsRef<Path>, thresholds: &[f64]) -> Result<Vec<(u64, ComparisonReport)>> {
    let (_, traces) = load_artifacts(dir)?;
    let mut seeds: Vec<u64> = traces.iter().map(|t| t.1).collect();
    seeds.sort_unstable();
    seeds.dedup();
    seeds
        .into_iter()
        .map(|s| {
            let group: Vec<(String, Vec<TraceRecord>)> =
                traces.iter().filter(|t| t.1 == s).map(|t| (t.0.clone(), t.2.clone())).collect();
            compare_report(&group, thresholds).map(|r| (s, r))
        })
        .collect()
}
