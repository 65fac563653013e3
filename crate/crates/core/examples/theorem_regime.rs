//! A random regular host at p = 5c/sqrt(d), with every check enabled.
//!
//! Runs a scaled-down host by default; pass `full` for the 20000-vertex,
//! 256-regular preset (a few minutes on one core).

use perc_lab::experiment::{preset, run_experiment, HostSource};
use perc_lab::generators::{Family, GeneratorSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = preset("random-regular-main")?;
    if std::env::args().nth(1).as_deref() != Some("full") {
        config.host = HostSource::Generate(GeneratorSpec { family: Family::RandomRegular, n: 4000, d: Some(128), seed: 1 });
        config.trials = 4;
        config.samples = 2000;
    }
    let outcome = run_experiment(&config)?;
    print!("{}", outcome.csv());
    println!("{outcome}");
    Ok(())
}
