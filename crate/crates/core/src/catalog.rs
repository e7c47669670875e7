//! Exhaustive catalogues of small graphs up to isomorphism.

use std::collections::HashSet;

use crate::graph::Graph;
use crate::iso::{canonical_label_unchecked, graph_from_label};

/// Every graph on `n` vertices up to isomorphism, each in canonical labelling.
///
/// Built by adding a vertex with every possible neighbourhood to each graph on
/// `n - 1` vertices and deduplicating by canonical label.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 10, "catalogue generation is meant for at most 10 vertices");
    let mut layer: Vec<Vec<u8>> = vec![canonical_label_unchecked(&Graph::empty(0))];
    for k in 1..=n {
        let mut next: HashSet<Vec<u8>> = HashSet::new();
        for label in &layer {
            let g = graph_from_label(label);
            let mut masks = g.masks().to_vec();
            masks.push(0);
            for nb in 0u64..(1 << (k - 1)) {
                let mut m = masks.clone();
                m[k - 1] = nb;
                for (v, mv) in m.iter_mut().enumerate().take(k - 1) {
                    if nb >> v & 1 == 1 {
                        *mv |= 1 << (k - 1);
                    }
                }
                next.insert(canonical_label_unchecked(&Graph::from_masks(&m)));
            }
        }
        layer = next.into_iter().collect();
        layer.sort();
    }
    layer.iter().map(|l| graph_from_label(l)).collect()
}

/// Connected graphs on exactly `n` vertices up to isomorphism.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs(n).into_iter().filter(Graph::is_connected).collect()
}

/// Connected graphs on `1..=max_n` vertices.
pub fn connected_graphs_up_to(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(connected_graphs).collect()
}
