//! Measures the uniform stability of regularized logistic regression and
//! compares it with the closed-form constants `β0 = K²/(2λn)` and
//! `β1 = K/(2λn)`.
//!
//! ```text
//! cargo run --release --example stability_audit
//! ```

use rerm::harness::{stability_audit, AuditConfig};

fn main() -> rerm::Result<()> {
    let cfg = AuditConfig { trials: 100, ..AuditConfig::default() };
    let r = stability_audit(&cfg)?;
    println!("n = {}, d = {}, lambda = {}, K = {:.3}, {} trials", cfg.n, cfg.d, cfg.lambda, r.kernel_bound, cfg.trials);
    println!("loss change       max {:.4e}  vs beta0  {:.4e}", r.max_loss_change, r.beta.beta0);
    println!("parameter change  max {:.4e}  vs beta1  {:.4e}", r.max_output_change, r.beta.beta1);
    println!("prediction change max {:.4e}  vs K*beta1 {:.4e}", r.max_prediction_change, r.prediction_bound);
    println!(
        "replace-one:      loss {:.4e}, parameters {:.4e}",
        r.replace_max_loss_change, r.replace_max_output_change
    );
    println!("violations: loss {}, parameters {}", r.loss_violations, r.output_violations);
    Ok(())
}
