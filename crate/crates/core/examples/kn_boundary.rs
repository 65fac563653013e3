//! Complete graph swept through the giant-component window around 1/(n-1).

use perc_lab::experiment::{preset, run_experiment};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let outcome = run_experiment(&preset("kn-boundary")?)?;
    println!("p          giant  second  |S0|  |OUT|");
    for r in &outcome.records {
        if let Ok(m) = &r.result {
            println!("{:<10} {:>5}  {:>6}  {:>4}  {:>5}", r.p.to_string(), m.giant_size, m.second_comp_size, m.s0_size, m.out_size);
        }
    }
    println!("\n{outcome}");
    Ok(())
}
