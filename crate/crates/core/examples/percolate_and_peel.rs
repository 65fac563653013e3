//! Percolates a random regular host, peels it and checks the trace.

use perc_lab::generators::random_regular;
use perc_lab::percolation::{peel, percolate, verify_trace};
use perc_lab::Probability;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = 32;
    let host = random_regular(2000, d, 11)?;
    for p in ["0.3", "0.6", "0.9"] {
        let p: Probability = p.parse()?;
        let gp = percolate(&host, p, 5);
        let trace = peel(&gp, p, d)?;
        let violations = verify_trace(&gp, &trace);
        println!(
            "p={p:<4} kept {:>6} of {} edges, |S0|={:<4} |OUT|={:<5} core={:<5} rounds={} trace violations={}",
            gp.m(),
            host.m(),
            trace.s0.len(),
            trace.out.len(),
            trace.survivors.len(),
            trace.iterations(),
            violations.len()
        );
    }
    Ok(())
}
