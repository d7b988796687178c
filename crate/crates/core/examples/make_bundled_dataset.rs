//! Regenerates `data/logistic_desk.svm`, the small binary classification set
//! shipped with the crate.
//!
//! Instances come from a well-specified logistic model in d = 30. The first
//! three coordinates are then stretched by 3 and the rest shrunk to 0.5 (the
//! target is rescaled so labels keep their distribution), which gives an
//! objective with a few stiff directions. Values are rounded to 6 decimals.
//!
//! ```text
//! cargo run --example make_bundled_dataset [output-path]
//! ```

use std::fs;

use rerm::data::{generate_logistic_classification, to_libsvm_string, Dataset, Instance, Task};

const N: usize = 1200;
const DIM: usize = 30;
const SIGNAL: f64 = 3.0;
const SEED: u64 = 2024;

fn column_scale(k: usize) -> f64 {
    if k < 3 {
        3.0
    } else {
        0.5
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/logistic_desk.svm").into());
    let (raw, _) = generate_logistic_classification(N, DIM, SIGNAL, SEED)?;
    let rows = raw
        .instances()
        .iter()
        .map(|z| {
            let x = z
                .features
                .iter()
                .enumerate()
                .map(|(k, v)| (v * column_scale(k) * 1e6).round() / 1e6)
                .collect();
            Instance::new(x, z.label)
        })
        .collect();
    let data = Dataset::new(rows, Task::Binary)?;
    let header = format!(
        "# logistic desk set: n = {N}, d = {DIM}, signal = {SIGNAL}, seed = {SEED}\n\
         # regenerate with `cargo run --example make_bundled_dataset`\n"
    );
    fs::write(&out, header + &to_libsvm_string(&data))?;
    println!("wrote {} instances (d = {}) to {out}", data.len(), data.dim());
    Ok(())
}
