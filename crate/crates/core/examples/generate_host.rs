//! Builds one host from each family and prints its basic shape.
//!
//! cargo run --example generate_host -- [n] [d] [seed]

use perc_lab::generators::{Family, GeneratorSpec};
use perc_lab::io::write_edge_list;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let n = args.first().copied().unwrap_or(1000) as usize;
    let d = args.get(1).copied().unwrap_or(16) as usize;
    let seed = args.get(2).copied().unwrap_or(1);

    let specs = [
        GeneratorSpec { family: Family::Complete, n: 50, d: None, seed },
        GeneratorSpec { family: Family::Cycle, n, d: None, seed },
        GeneratorSpec { family: Family::RandomRegular, n, d: Some(d), seed },
        GeneratorSpec { family: Family::Paley, n: 101, d: None, seed },
    ];
    for spec in &specs {
        let g = spec.generate()?;
        println!(
            "{:<15} n={:<6} m={:<8} degree={:?}",
            spec.family.to_string(),
            g.n(),
            g.m(),
            g.regular_degree()
        );
    }

    let g = specs[2].generate()?;
    let text = write_edge_list(&g);
    println!("\nfirst lines of the random regular edge list:");
    for line in text.lines().take(4) {
        println!("  {line}");
    }
    Ok(())
}
