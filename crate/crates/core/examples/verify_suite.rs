//! Runs the three worked examples end to end and prints every check.
//!
//! ```text
//! cargo run --release --example verify_suite
//! ```

use fqtorus::suite::{verify_example, SuiteOptions};

fn main() -> fqtorus::Result<()> {
    for n in 1..=3 {
        let report = verify_example(n, &SuiteOptions::default())?;
        println!("example {n}: {}", if report.passed { "pass" } else { "FAIL" });
        for c in &report.checks {
            println!("  [{}] {:<40} {:.3e}", if c.pass { "ok" } else { "!!" }, c.name, c.measured);
        }
    }
    Ok(())
}
