//! Saves trained MLP parameters to the text checkpoint format and reads them
//! back.
//!
//! ```text
//! cargo run --release --example checkpoint [path]
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter};

use rerm::data::generate_gaussian_mixture;
use rerm::model::{read_params, write_params, LossSpec, Model};
use rerm::objective::Objective;
use rerm::optim::{run_sgd, RunOptions, StepSchedule};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("rerm_mlp.params"));
    let data = generate_gaussian_mixture(300, 8, 10, 3.0, 1)?;
    let model = Model::mlp(8);
    let objective = Objective::new(data, model.clone(), LossSpec::CrossEntropy, 0.01)?;
    let w0 = model.init_params(1);
    let trace = run_sgd(&objective, &w0, &StepSchedule::inverse_sqrt(0.25), 3000, 1, RunOptions::default())?;

    write_params(&model, &trace.final_w, BufWriter::new(File::create(&path)?))?;
    let (restored_model, restored) = read_params(BufReader::new(File::open(&path)?))?;
    assert_eq!(restored_model, model);
    assert_eq!(restored, trace.final_w);
    println!(
        "wrote {} parameters to {}; reloaded risk {:.6} (trained {:.6})",
        restored.len(),
        path.display(),
        objective.regularized_risk(&restored)?,
        trace.last().reg_risk
    );
    Ok(())
}
