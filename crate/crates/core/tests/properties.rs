mod common;

use perc_lab::generators::random_regular;
use perc_lab::graph::{boundary_edge_count, component_labels, connected_components, directed_pair_count, induced_subgraph};
use perc_lab::io::{parse_edge_list, parse_trace, write_edge_list, write_trace};
use perc_lab::percolation::{peel, peel_with, percolate, verify_trace, PeelOrder, PercolationParams};
use perc_lab::structure::{exact_edge_expansion, expansion_upper_bound, SubsetRule};
use perc_lab::{build_graph, Graph, Probability, VertexSet};
use proptest::prelude::*;

/// A simple graph on up to `max_n` vertices from an arbitrary edge pool.
fn simple_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..4 * n).prop_map(move |pairs| {
            let mut edges: Vec<(usize, usize)> =
                pairs.into_iter().filter(|(u, v)| u != v).map(|(u, v)| (u.min(v), u.max(v))).collect();
            edges.sort();
            edges.dedup();
            build_graph(n, &edges).unwrap()
        })
    })
}

fn graph_and_subset(max_n: usize) -> impl Strategy<Value = (Graph, Vec<bool>, Vec<bool>)> {
    simple_graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), prop::collection::vec(any::<bool>(), n), prop::collection::vec(any::<bool>(), n))
    })
}

fn to_set(mask: &[bool]) -> VertexSet {
    VertexSet::from_members(mask.len(), (0..mask.len()).filter(|&v| mask[v]))
}

fn probability() -> impl Strategy<Value = Probability> {
    (1u64..=1000).prop_map(|k| Probability::from_decimal(k, 3).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn handshake_and_adjacency(g in simple_graph(40)) {
        let degree_sum: usize = (0..g.n()).map(|v| g.degree(v)).sum();
        prop_assert_eq!(degree_sum, 2 * g.m());
        let edges = common::edge_list(&g);
        prop_assert_eq!(edges.len(), g.m());
        prop_assert_eq!(g.edges().collect::<Vec<_>>(), edges.clone());
        for &(u, v) in &edges {
            prop_assert!(g.has_edge(u, v) && g.has_edge(v, u));
        }
        for v in 0..g.n() {
            prop_assert!(g.neighbors(v).windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn pair_counts_match_oracle((g, s, t) in graph_and_subset(30)) {
        let edges = common::edge_list(&g);
        let (ss, ts) = (to_set(&s), to_set(&t));
        prop_assert_eq!(directed_pair_count(&g, &ss, &ts).unwrap(), common::directed_edges(&edges, &s, &t));
        prop_assert_eq!(directed_pair_count(&g, &ss, &ts).unwrap(), directed_pair_count(&g, &ts, &ss).unwrap());
        prop_assert_eq!(boundary_edge_count(&g, &ss).unwrap(), common::boundary(&edges, &s));
        let rest = ss.complement();
        prop_assert_eq!(boundary_edge_count(&g, &ss).unwrap(), directed_pair_count(&g, &ss, &rest).unwrap());
    }

    #[test]
    fn components_partition_vertices(g in simple_graph(50)) {
        let comps = connected_components(&g);
        let oracle = common::components(g.n(), &common::edge_list(&g));
        prop_assert_eq!(comps.iter().map(|c| c.len()).sum::<usize>(), g.n());
        prop_assert!(comps.windows(2).all(|w| (w[0].len(), std::cmp::Reverse(w[0].min())) >= (w[1].len(), std::cmp::Reverse(w[1].min()))));
        let labels = component_labels(&g);
        for u in 0..g.n() {
            for v in 0..g.n() {
                prop_assert_eq!(labels[u] == labels[v], oracle[u] == oracle[v]);
            }
        }
    }

    #[test]
    fn induced_subgraph_keeps_inner_edges((g, s, _t) in graph_and_subset(30)) {
        let keep = to_set(&s);
        let (h, map) = induced_subgraph(&g, &keep).unwrap();
        prop_assert_eq!(h.n(), keep.len());
        let inner = common::edge_list(&g).into_iter().filter(|&(u, v)| s[u] && s[v]).count();
        prop_assert_eq!(h.m(), inner);
        for (a, b) in h.edges() {
            prop_assert!(g.has_edge(map.old_id(a), map.old_id(b)));
        }
    }

    #[test]
    fn edge_list_round_trip(g in simple_graph(40)) {
        let back = parse_edge_list(&write_edge_list(&g)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn probability_text_round_trip(num in 0u64..=1_000_000, scale in 0u32..=6) {
        prop_assume!(num <= 10u64.pow(scale));
        let p = Probability::from_decimal(num, scale).unwrap();
        let back: Probability = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
        prop_assert!((p.as_f64() - num as f64 / 10f64.powi(scale as i32)).abs() < 1e-12);
    }

    #[test]
    fn random_regular_is_simple_and_regular(seed in any::<u64>(), half in 3usize..40, d in 3usize..12) {
        let n = 2 * half;
        prop_assume!(d < n);
        let g = random_regular(n, d, seed).unwrap();
        prop_assert_eq!(g.regular_degree(), Some(d));
        prop_assert_eq!(g.m(), n * d / 2);
        prop_assert_eq!(random_regular(n, d, seed).unwrap(), g);
    }

    #[test]
    fn percolation_is_a_monotone_subgraph(seed in any::<u64>(), p in probability(), q in probability()) {
        let host = random_regular(60, 6, seed ^ 0x55).unwrap();
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        let a = percolate(&host, lo, seed);
        let b = percolate(&host, hi, seed);
        for (u, v) in a.edges() {
            prop_assert!(b.has_edge(u, v));
        }
        for (u, v) in b.edges() {
            prop_assert!(host.has_edge(u, v));
        }
    }

    #[test]
    fn peeling_traces_verify_and_agree(seed in any::<u64>(), p in probability(), order_seed in any::<u64>()) {
        let d = 8;
        let host = random_regular(120, d, seed).unwrap();
        let gp = percolate(&host, p, seed);
        let trace = peel(&gp, p, d).unwrap();
        prop_assert!(verify_trace(&gp, &trace).is_empty());
        prop_assert_eq!(trace.survivors.len() + trace.out.len(), 120);
        prop_assert!(trace.s0.is_subset(&trace.out));
        let params = PercolationParams::new(p, seed, d);
        for order in [PeelOrder::Batch, PeelOrder::Random(order_seed)] {
            let other = peel_with(&gp, params, order).unwrap();
            prop_assert!(verify_trace(&gp, &other).is_empty());
            prop_assert_eq!(&other.survivors, &trace.survivors);
        }
        let text = write_trace(&trace);
        let back = parse_trace(&text, 120, trace.params).unwrap();
        prop_assert_eq!(back, trace);
    }

    #[test]
    fn bounded_search_never_beats_exact(g in simple_graph(12), seed in any::<u64>()) {
        prop_assume!(g.n() >= 2);
        let exact = exact_edge_expansion(&g, SubsetRule::AtMostHalf).unwrap();
        let (b, s) = common::brute_expansion(g.n(), &common::edge_list(&g), g.n() / 2);
        prop_assert!((exact.value.unwrap() - b as f64 / s as f64).abs() < 1e-12);
        let bound = expansion_upper_bound(&g, 4, seed);
        prop_assert!(bound.upper_bound >= exact.value.unwrap() - 1e-12);
        prop_assert_eq!(boundary_edge_count(&g, &bound.witness).unwrap(), bound.witness_boundary);
        prop_assert!((bound.witness_boundary as f64 / bound.witness.len() as f64 - bound.upper_bound).abs() < 1e-12);
        prop_assert!(bound.witness.len() <= g.n() / 2);
    }
}
