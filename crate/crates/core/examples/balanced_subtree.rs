//! Extracts balanced subtrees from a labeled spanning tree.

use perc_lab::generators::cycle_graph;
use perc_lab::structure::{extract_balanced_subtree, spanning_tree, tree_centroid, Label};
use perc_lab::VertexSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = cycle_graph(30)?;
    // every third vertex is an S vertex
    let s = VertexSet::from_members(30, (0..30).step_by(3));
    let tree = spanning_tree(&g, &VertexSet::full(30), &s)?;
    println!("spanning tree on {} vertices, {} labeled S, centroid {}", tree.len(), tree.s_count(), tree_centroid(&tree));

    for target in [2, 5, 10, 15] {
        let sub = extract_balanced_subtree(&tree, target, 3)?;
        let ids: Vec<String> = sub
            .vertices()
            .iter()
            .zip(sub.labels())
            .map(|(v, l)| if *l == Label::S { format!("{v}*") } else { v.to_string() })
            .collect();
        println!("target {target:>2}: size {:>2}, S {:>2}: {}", sub.len(), sub.s_count(), ids.join(" "));
    }
    Ok(())
}
