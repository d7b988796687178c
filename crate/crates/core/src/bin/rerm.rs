//! Command-line front end of the `rerm` library.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rerm::harness::{
    check_gradients, compare_artifacts, run_experiment, stability_audit, AuditConfig, BoundInputs, ExperimentConfig,
    DEFAULT_THRESHOLDS,
};
use rerm::{Error, Result};

#[derive(Parser)]
#[command(name = "rerm", version, about = "Regularized ERM with GD, SGD and SVRG, and stability-based generalization bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed overriding the configured seeds.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory or file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Use the full-size synthetic data (40000 instances by default).
    #[arg(long, global = true)]
    paper_scale: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config file.
    Run { config: PathBuf },
    /// Recompute the passes-to-threshold comparison of an artifact directory.
    Compare {
        artifact_dir: PathBuf,
        /// Comma-separated thresholds relative to the initial excess.
        #[arg(long, value_delimiter = ',')]
        thresholds: Option<Vec<f64>>,
    },
    /// Compare analytic gradients with central finite differences.
    CheckGradients {
        #[arg(long, default_value_t = 30)]
        probes: usize,
    },
    /// Measure leave-one-out stability of logistic regression against the closed-form constants.
    StabilityAudit {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        d: usize,
        #[arg(long, default_value_t = 0.1)]
        lambda: f64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Evaluate a bound from a TOML or JSON input file.
    Bounds { report_inputs: PathBuf },
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    if let Some(p) = out {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| Error::Config(format!("{}: {e}", dir.display())))?;
        }
        fs::write(p, text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Run { config } => {
            let mut cfg = ExperimentConfig::from_file(config)?;
            if let Some(s) = cli.seed {
                cfg.seeds = vec![s];
            }
            if let Some(o) = &cli.out {
                cfg.output_dir = Some(o.clone());
            }
            let art = run_experiment(&cfg, cli.paper_scale)?;
            println!(
                "n_train = {}, n_test = {}, d = {}, lambda = {:.6}",
                art.train.len(),
                art.test.len(),
                art.train.dim(),
                art.lambda
            );
            if let Some(c) = &art.constants {
                println!("kappa = {:.3}, gamma_w = {:.4}, mu = {:.4}", c.kappa, c.smoothness, c.strong_convexity);
            }
            for r in &art.runs {
                let last = r.trace.last();
                let first = r.trace.first();
                println!(
                    "{:>5} seed {:<4} passes {:>9.2}  train {:.6e} -> {:.6e}  test {:.6e} -> {:.6e}",
                    r.algorithm,
                    r.seed,
                    last.data_passes,
                    first.train_risk,
                    last.train_risk,
                    first.test_risk.unwrap_or(f64::NAN),
                    last.test_risk.unwrap_or(f64::NAN)
                );
            }
            for (seed, report) in &art.comparisons {
                println!("\nseed {seed}\n{}", report.to_table());
            }
            for (name, b) in &art.bounds {
                println!("bound {name}: total {:.6e}", b.total_excess);
            }
            println!("artifacts written to {}", art.dir.display());
            Ok(true)
        }
        Command::Compare { artifact_dir, thresholds } => {
            let grid = thresholds.clone().unwrap_or_else(|| DEFAULT_THRESHOLDS.to_vec());
            let reports = compare_artifacts(artifact_dir, &grid)?;
            for (seed, r) in &reports {
                println!("seed {seed}\n{}", r.to_table());
            }
            write_out(cli.out.as_deref(), &serde_json::to_string_pretty(&reports)?)?;
            Ok(true)
        }
        Command::CheckGradients { probes } => {
            let report = check_gradients(cli.seed.unwrap_or(0), *probes)?;
            for c in &report.cases {
                let verdict = if c.passed { "ok" } else { "FAIL" };
                println!("{:<24} {:>3} probes  max rel err {:.3e}  {verdict}", c.name, c.probes, c.max_relative_error);
            }
            write_out(cli.out.as_deref(), &serde_json::to_string_pretty(&report)?)?;
            Ok(report.passed())
        }
        Command::StabilityAudit { n, d, lambda, trials } => {
            let cfg = AuditConfig {
                n: *n,
                d: *d,
                lambda: *lambda,
                trials: *trials,
                seed: cli.seed.unwrap_or(0),
                ..AuditConfig::default()
            };
            let r = stability_audit(&cfg)?;
            println!("K = {:.4}, beta0 = {:.4e}, beta1 = {:.4e}", r.kernel_bound, r.beta.beta0, r.beta.beta1);
            println!("max loss change      {:.4e}  (violations {})", r.max_loss_change, r.loss_violations);
            println!("max output change    {:.4e}  (violations {})", r.max_output_change, r.output_violations);
            println!("max prediction diff  {:.4e}  (K*beta1 = {:.4e})", r.max_prediction_change, r.prediction_bound);
            println!("replace-one loss     {:.4e}", r.replace_max_loss_change);
            write_out(cli.out.as_deref(), &serde_json::to_string_pretty(&r)?)?;
            Ok(r.passed())
        }
        Command::Bounds { report_inputs } => {
            let report = BoundInputs::from_file(report_inputs)?.evaluate()?;
            let json = report.to_json()?;
            println!("{json}");
            write_out(cli.out.as_deref(), &json)?;
            Ok(true)
        }
    }
}
