//! Runs an experiment described by a TOML file, writes its artifact
//! directory and prints the pass-to-threshold comparison.
//!
//! ```text
//! cargo run --release --example run_config [config.toml] [out-dir]
//! ```
//!
//! Without arguments it runs `configs/desk_logistic.toml` into a temporary
//! directory.

use rerm::harness::{run_experiment, ExperimentConfig};

fn main() -> rerm::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/desk_logistic.toml").into());
    let mut config = ExperimentConfig::from_file(&path)?;
    config.output_dir = Some(
        args.next()
            .map(Into::into)
            .unwrap_or_else(|| std::env::temp_dir().join("rerm_run_config")),
    );
    let artifact = run_experiment(&config, false)?;
    println!("{}: n_train = {}, lambda = {:.4}", config.name.as_deref().unwrap_or("experiment"), artifact.train.len(), artifact.lambda);
    for run in &artifact.runs {
        let last = run.trace.last();
        println!("  {:>5} seed {}: {:.1} passes, train {:.5}", run.algorithm, run.seed, last.data_passes, last.train_risk);
    }
    for (seed, report) in &artifact.comparisons {
        print!("\nseed {seed}\n{}", report.to_table());
    }
    println!("\nartifacts in {}", artifact.dir.display());
    Ok(())
}
