//! Finite-difference check of every analytic gradient in the crate.
//!
//! ```text
//! cargo run --release --example gradient_check
//! ```

use rerm::harness::check_gradients;

fn main() -> rerm::Result<()> {
    let report = check_gradients(0, 30)?;
    println!("central differences, h = {:e}, tolerance {:e}", report.step, report.tolerance);
    for case in &report.cases {
        println!(
            "{:<24} probes {:>3}  max relative error {:.2e}  {}",
            case.name,
            case.probes,
            case.max_relative_error,
            if case.passed { "ok" } else { "FAILED" }
        );
    }
    if !report.passed() {
        std::process::exit(1);
    }
    Ok(())
}
