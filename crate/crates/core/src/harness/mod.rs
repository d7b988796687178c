//! Experiment orchestration: reference oracles, TOML configuration, artifact
//! directories, algorithm comparison and the checks behind the command line.

mod audit;
mod compare;
mod config;
mod experiment;
mod gradcheck;
mod oracle;

pub use audit::{stability_audit, AuditConfig, AuditReport, BoundInputs};
pub use compare::{
    compare_report, passes_to_threshold, ComparisonReport, ExcessMetric, PairRatio, PhaseSummary, ThresholdRow,
};
pub use config::{
    AlgorithmConfig, BoundsConfig, DataConfig, ExperimentConfig, LambdaConfig, MethodConfig,
    NonconvexAssumptions, TaskKind, DEFAULT_THRESHOLDS,
};
pub use experiment::{
    compare_artifacts, load_artifacts, run_configured, run_experiment, ArtifactIndex, RunArtifact, RunEntry,
    RunOutcome,
};
pub use gradcheck::{
    check_gradients, GradientCase, GradientCheckReport, GRADIENT_CHECK_STEP, GRADIENT_CHECK_TOLERANCE,
};
pub use oracle::{
    exact_minimizer, finite_diff_gradient, gradient_norm, logistic_reference, relative_error,
    ridge_closed_form, ridge_solution, REFERENCE_TOLERANCE, RIDGE_RESIDUAL_TOLERANCE,
};
