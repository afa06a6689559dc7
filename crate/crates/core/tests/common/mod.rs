#![allow(dead_code)]

use flownet_core::graph::DirectedGraph;

/// Every labelled simple digraph (no loops, no parallel arcs) on `n`
/// vertices with between 1 and `max_edges` arcs.
pub fn labelled_digraphs(n: usize, max_edges: usize) -> Vec<DirectedGraph> {
    let arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << arcs.len()) {
        if mask.count_ones() as usize > max_edges {
            continue;
        }
        let edges = (0..arcs.len())
            .filter(|&k| mask >> k & 1 == 1)
            .map(|k| arcs[k])
            .collect();
        out.push(DirectedGraph::new(n, edges).unwrap());
    }
    out
}
