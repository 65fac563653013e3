//! Structural analysis of a peeled percolation: the removed set, balanced
//! subtrees, edge expansion and the combined certificate.

pub mod certificate;
pub mod expansion;
pub mod out;
pub mod tree;

pub use certificate::{giant_expansion_certificate, CertificateReport, Condition};
pub use expansion::{
    exact_edge_expansion, expansion_upper_bound, expansion_upper_bound_with, sampled_core_expansion, BoundedSearch,
    CoreExpansionReport, ExpansionError, ExpansionMode, ExpansionReport, SubsetRule,
};
pub use out::{host_density, out_component_report, out_component_report_with, out_density_report, BoundConstants, DensityLine, LogBase, OutComponent, OutReport};
pub use tree::{extract_balanced_subtree, spanning_tree, tree_centroid, Label, LabeledTree, TreeError};
