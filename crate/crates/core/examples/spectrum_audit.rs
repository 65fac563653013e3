//! Measures lambda and audits the mixing lemma and small-set density.

use perc_lab::generators::{complete_graph, cycle_graph, named, random_regular};
use perc_lab::spectral::{density_bound_check, mixing_lemma_audit, second_eigenvalue_abs, SpectralOptions};
use perc_lab::Graph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hosts: Vec<(&str, Graph)> = vec![
        ("K_50", complete_graph(50)?),
        ("C_100", cycle_graph(100)?),
        ("petersen", named::petersen()),
        ("rr(2048,16)", random_regular(2048, 16, 3)?),
    ];
    let opts = SpectralOptions::default();
    for (name, g) in &hosts {
        let s = second_eigenvalue_abs(g, &opts)?;
        let audit = mixing_lemma_audit(g, s.lambda, 2000, 7)?;
        let density = density_bound_check(g, s.lambda, 1, 200, 7)?;
        println!(
            "{name:<12} lambda={:<12.8} c={:<8.4} via {:<16} max slack {:.3} ({} violations), densest small set {:.2} <= {:.2}",
            s.lambda,
            s.c,
            s.method.as_str(),
            audit.max_normalized_slack,
            audit.violations.len(),
            density.worst_avg_degree,
            density.bound,
        );
    }
    Ok(())
}
