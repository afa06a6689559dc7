//! Cycle covers of directed graphs.
//!
//! A balanced graph splits into edge-disjoint cycles; an unbalanced strongly
//! connected one can only be covered if some edges are shared. The minimal
//! cover (fewest cycles) and its edge multiplicities drive the non-consensus
//! counterexample in [`crate::scenario`].

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::DirectedGraph;
use crate::{Error, Result};

/// Largest edge count for which [`minimal_cycle_cover`] runs the exact
/// search; above it a greedy cover is returned with `minimal = false`.
pub const EXACT_COVER_EDGE_LIMIT: usize = 16;

/// A set of directed cycles covering every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCover {
    /// Edge indices in traversal order.
    pub cycles: Vec<Vec<usize>>,
    /// `T_i`: number of cycles containing edge `i`.
    pub multiplicity: Vec<u32>,
    /// Every edge appears in exactly one cycle.
    pub non_overlapping: bool,
    /// Certified smallest cycle count (exact search only).
    pub minimal: bool,
}

impl CycleCover {
    fn from_cycles(m: usize, cycles: Vec<Vec<usize>>, minimal: bool) -> Self {
        let mut multiplicity = vec![0u32; m];
        for c in &cycles {
            for &e in c {
                multiplicity[e] += 1;
            }
        }
        let non_overlapping = multiplicity.iter().all(|&t| t == 1);
        Self {
            cycles,
            multiplicity,
            non_overlapping,
            minimal,
        }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Largest edge multiplicity. (The overlap bound written both `l_max`
    /// and `T_max` elsewhere; they are the same number.)
    pub fn max_multiplicity(&self) -> u32 {
        self.multiplicity.iter().copied().max().unwrap_or(0)
    }

    /// Checks that every cycle is a closed walk without repeated edges, that
    /// the multiplicities add up and that every edge is covered.
    pub fn is_valid_for(&self, g: &DirectedGraph) -> bool {
        let m = g.edge_count();
        if self.multiplicity.len() != m {
            return false;
        }
        let mut count = vec![0u32; m];
        for c in &self.cycles {
            if c.is_empty() || c.iter().any(|&e| e >= m) {
                return false;
            }
            let mut seen = vec![false; m];
            for (k, &e) in c.iter().enumerate() {
                if seen[e] {
                    return false;
                }
                seen[e] = true;
                count[e] += 1;
                let next = c[(k + 1) % c.len()];
                if g.head(e) != g.tail(next) {
                    return false;
                }
            }
        }
        count == self.multiplicity && count.iter().all(|&t| t >= 1)
    }
}

/// Splits a balanced graph into edge-disjoint simple cycles.
///
/// Walks unused out-edges (lowest index first) from the tail of the lowest
/// unused edge; whenever the walk revisits a vertex on the current path the
/// closed part is split off as a cycle. Getting stuck means some vertex has
/// more in- than out-edges, and the result is `None`.
pub fn non_overlapping_cycle_cover(g: &DirectedGraph) -> Option<CycleCover> {
    let m = g.edge_count();
    let adj = g.out_adjacency();
    let mut used = vec![false; m];
    let mut cursor = vec![0usize; g.vertex_count()];
    let mut cycles = Vec::new();

    while let Some(start_edge) = (0..m).find(|&e| !used[e]) {
        // path as vertices visited and edges taken
        let mut verts = vec![g.tail(start_edge)];
        let mut path: Vec<usize> = Vec::new();
        loop {
            let v = *verts.last().expect("path never empty");
            let next = loop {
                match adj[v].get(cursor[v]) {
                    Some(&(e, w)) => {
                        cursor[v] += 1;
                        if !used[e] {
                            break Some((e, w));
                        }
                    }
                    None => break None,
                }
            };
            let (e, w) = next?;
            used[e] = true;
            path.push(e);
            if let Some(pos) = verts.iter().position(|&u| u == w) {
                let cycle: Vec<usize> = path.split_off(pos);
                verts.truncate(pos + 1);
                cycles.push(cycle);
                if path.is_empty() {
                    break;
                }
            } else {
                verts.push(w);
            }
        }
    }
    Some(CycleCover::from_cycles(m, cycles, true))
}

/// Every simple directed cycle, as edge sequences starting at the cycle's
/// smallest vertex. Exponential in general; meant for small graphs.
pub fn simple_cycles(g: &DirectedGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let adj = g.out_adjacency();
    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    for s in 0..n {
        let mut edges: Vec<usize> = Vec::new();
        // explicit DFS stack: (vertex, next adjacency index)
        let mut stack = vec![(s, 0usize)];
        on_path[s] = true;
        while let Some(top) = stack.last_mut() {
            let (v, pos) = *top;
            if let Some(&(e, w)) = adj[v].get(pos) {
                top.1 += 1;
                if w == s {
                    let mut c = edges.clone();
                    c.push(e);
                    out.push(c);
                } else if w > s && !on_path[w] {
                    on_path[w] = true;
                    edges.push(e);
                    stack.push((w, 0));
                }
            } else {
                on_path[v] = false;
                stack.pop();
                if !stack.is_empty() {
                    edges.pop();
                }
            }
        }
    }
    out
}

/// A cover with the fewest cycles.
///
/// For `m <= EXACT_COVER_EDGE_LIMIT` this enumerates simple cycles and runs
/// branch and bound over them, and the result is flagged `minimal`. Larger
/// graphs get a greedy cover (each uncovered edge closed by a shortest
/// return path) flagged `minimal = false`.
pub fn minimal_cycle_cover(g: &DirectedGraph) -> Result<CycleCover> {
    if !g.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let m = g.edge_count();
    if m > EXACT_COVER_EDGE_LIMIT {
        return Ok(greedy_cover(g));
    }
    let cycles = simple_cycles(g);
    let masks: Vec<u32> = cycles
        .iter()
        .map(|c| c.iter().fold(0u32, |acc, &e| acc | 1 << e))
        .collect();
    let full: u32 = (1u32 << m) - 1;

    // cycles through each edge, larger cycles first for a good early bound
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (k, &mask) in masks.iter().enumerate() {
        for (e, list) in through.iter_mut().enumerate() {
            if mask >> e & 1 == 1 {
                list.push(k);
            }
        }
    }
    for list in &mut through {
        list.sort_by_key(|&k| (core::cmp::Reverse(masks[k].count_ones()), k));
    }
    let longest = masks
        .iter()
        .map(|k| k.count_ones())
        .max()
        .unwrap_or(1)
        .max(1);

    let greedy = greedy_cover(g);
    let mut search = CoverSearch {
        masks: &masks,
        through: &through,
        full,
        longest,
        best: None,
        best_len: greedy.len() + 1,
    };
    let mut chosen = Vec::new();
    search.descend(0, &mut chosen);
    let picked = search
        .best
        .expect("strongly connected graphs are coverable");
    let chosen_cycles = picked.into_iter().map(|k| cycles[k].clone()).collect();
    Ok(CycleCover::from_cycles(m, chosen_cycles, true))
}

struct CoverSearch<'a> {
    masks: &'a [u32],
    through: &'a [Vec<usize>],
    full: u32,
    longest: u32,
    best: Option<Vec<usize>>,
    best_len: usize,
}

impl CoverSearch<'_> {
    fn descend(&mut self, covered: u32, chosen: &mut Vec<usize>) {
        if covered == self.full {
            if chosen.len() < self.best_len {
                self.best_len = chosen.len();
                self.best = Some(chosen.clone());
            }
            return;
        }
        let missing = (self.full & !covered).count_ones();
        let lower = chosen.len() + missing.div_ceil(self.longest) as usize;
        if lower >= self.best_len {
            return;
        }
        let e = (self.full & !covered).trailing_zeros() as usize;
        for &k in &self.through[e] {
            chosen.push(k);
            self.descend(covered | self.masks[k], chosen);
            chosen.pop();
        }
    }
}

/// Covers each still-uncovered edge (lowest index first) with the edge plus
/// a BFS shortest path from its head back to its tail.
fn greedy_cover(g: &DirectedGraph) -> CycleCover {
    let m = g.edge_count();
    let adj = g.out_adjacency();
    let mut covered = vec![false; m];
    let mut cycles = Vec::new();
    for e in 0..m {
        if covered[e] {
            continue;
        }
        let (t, h) = g.edges()[e];
        let back = shortest_path(&adj, h, t).expect("strongly connected");
        let mut cycle = vec![e];
        cycle.extend(back);
        for &c in &cycle {
            covered[c] = true;
        }
        cycles.push(cycle);
    }
    CycleCover::from_cycles(m, cycles, false)
}

fn shortest_path(adj: &[Vec<(usize, usize)>], from: usize, to: usize) -> Option<Vec<usize>> {
    if from == to {
        return Some(Vec::new());
    }
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &(e, w) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((v, e));
                if w == to {
                    let mut path = Vec::new();
                    let mut cur = to;
                    while let Some((p, pe)) = prev[cur] {
                        path.push(pe);
                        cur = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::example_graph;

    fn g(n: usize, e: &[(usize, usize)]) -> DirectedGraph {
        DirectedGraph::new(n, e.to_vec()).unwrap()
    }

    #[test]
    fn triangle_is_one_cycle() {
        let tri = DirectedGraph::cycle(3);
        let c = non_overlapping_cycle_cover(&tri).unwrap();
        assert_eq!(c.cycles, vec![vec![0, 1, 2]]);
        assert_eq!(c.multiplicity, vec![1, 1, 1]);
        assert!(c.non_overlapping && c.is_valid_for(&tri));
        let min = minimal_cycle_cover(&tri).unwrap();
        assert_eq!(min.len(), 1);
        assert!(min.minimal);
    }

    #[test]
    fn example_graph_has_no_disjoint_cover() {
        assert!(non_overlapping_cycle_cover(&example_graph()).is_none());
    }

    #[test]
    fn bowtie_splits_into_two_triangles() {
        // two triangles sharing vertex 0
        let bow = g(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]);
        let c = non_overlapping_cycle_cover(&bow).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.multiplicity.iter().all(|&t| t == 1));
        assert!(c.is_valid_for(&bow));
    }

    #[test]
    fn figure_eight_walk_is_split_into_simple_cycles() {
        // the walk 0 -> 1 -> 2 -> 1 closes an inner cycle before returning to 0
        let gr = g(3, &[(0, 1), (1, 2), (2, 1), (1, 0)]);
        let c = non_overlapping_cycle_cover(&gr).unwrap();
        assert_eq!(c.cycles, vec![vec![1, 2], vec![0, 3]]);
    }

    #[test]
    fn example_graph_minimal_cover() {
        let gr = example_graph();
        let c = minimal_cycle_cover(&gr).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.minimal);
        assert_eq!(c.multiplicity, vec![1, 2, 3, 1, 1, 1, 1]);
        assert_eq!(c.max_multiplicity(), 3);
        assert!(c.is_valid_for(&gr));
        let t: Vec<i64> = c.multiplicity.iter().map(|&v| v as i64).collect();
        assert!(gr.incidence_matrix().mul_int(&t).iter().all(|&v| v == 0));
    }

    #[test]
    fn simple_cycles_of_example_graph() {
        let mut cs = simple_cycles(&example_graph());
        cs.iter_mut().for_each(|c| c.sort_unstable());
        cs.sort();
        assert_eq!(cs, vec![vec![0, 1, 2], vec![1, 2, 5, 6], vec![2, 3, 4]]);
    }

    #[test]
    fn minimal_cover_requires_strong_connectivity() {
        assert_eq!(
            minimal_cycle_cover(&g(2, &[(0, 1)])),
            Err(Error::NotStronglyConnected)
        );
    }

    #[test]
    fn greedy_cover_on_large_graph() {
        // 18-edge ring with chords back: too big for the exact search
        let mut e: Vec<(usize, usize)> = (0..12).map(|i| (i, (i + 1) % 12)).collect();
        for i in 0..6 {
            e.push((2 * i + 1, 2 * i));
        }
        let gr = g(12, &e);
        let c = minimal_cycle_cover(&gr).unwrap();
        assert!(!c.minimal);
        assert!(c.is_valid_for(&gr));
    }

    #[test]
    fn balanced_minimal_equals_disjoint_size() {
        let gr = g(4, &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 1)]);
        let disjoint = non_overlapping_cycle_cover(&gr).unwrap();
        let min = minimal_cycle_cover(&gr).unwrap();
        assert_eq!(disjoint.len(), min.len());
    }
}
