//! The cycle: a host where the spectral bounds say nothing, so the
//! certificate is expected to fail.

use perc_lab::experiment::{preset, run_experiment};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let outcome = run_experiment(&preset("cycle-negative-control")?)?;
    for r in &outcome.records {
        match &r.result {
            Ok(m) => println!("trial {:>2}: certificate_pass={} failed: {}", r.trial, u8::from(m.certificate_pass), m.failed_conditions.join(", ")),
            Err(e) => println!("trial {:>2}: error {e}", r.trial),
        }
    }
    println!("\n{outcome}");
    Ok(())
}
