//! Exact edge expansion on small graphs, witness-backed bounds on large ones.

use perc_lab::generators::{complete_graph, cycle_graph, named, random_regular};
use perc_lab::spectral::{second_eigenvalue_abs, spectral_expansion_lower_bound, SpectralOptions};
use perc_lab::structure::{exact_edge_expansion, expansion_upper_bound_with, BoundedSearch, SubsetRule};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, g) in [("K_6", complete_graph(6)?), ("C_12", cycle_graph(12)?), ("petersen", named::petersen())] {
        let exact = exact_edge_expansion(&g, SubsetRule::AtMostHalf)?;
        let strict = exact_edge_expansion(&g, SubsetRule::StrictHalf)?;
        let lambda = second_eigenvalue_abs(&g, &SpectralOptions::default())?.lambda;
        println!(
            "{name:<9} exact {:.4} (strict {:.4}), spectral floor {:.4}, witness {:?}",
            exact.value.unwrap(),
            strict.value.unwrap(),
            spectral_expansion_lower_bound(&g, lambda)?,
            exact.witness.to_vec()
        );
    }

    for (name, g) in [("C_1000", cycle_graph(1000)?), ("rr(1000,8)", random_regular(1000, 8, 2)?)] {
        let lambda = second_eigenvalue_abs(&g, &SpectralOptions::default())?.lambda;
        let search = BoundedSearch { trials: 16, seed: 1, lambda: Some(lambda), ..BoundedSearch::default() };
        let r = expansion_upper_bound_with(&g, &search);
        println!(
            "{name:<11} {:.4} <= c_E <= {:.4} (witness of size {}, boundary {})",
            r.lower_bound,
            r.upper_bound,
            r.witness.len(),
            r.witness_boundary
        );
    }
    Ok(())
}
