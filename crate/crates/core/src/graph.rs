//! Directed graphs, incidence matrices and the connectivity predicates the
//! convergence results are phrased in.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::{Error, Result};

/// Largest number of bi-directional edges the orientation-enumeration oracle
/// accepts.
pub const BRUTE_FORCE_EDGE_LIMIT: usize = 20;

/// A directed graph with `n` vertices and an ordered edge list.
///
/// Parallel edges are allowed, self-loops are not. Immutable once built;
/// reorientation produces a new value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl DirectedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph(
                "graph needs at least one vertex".into(),
            ));
        }
        for (j, &(t, h)) in edges.iter().enumerate() {
            if t >= n || h >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {j} ({t} -> {h}) references a vertex outside 0..{n}"
                )));
            }
            if t == h {
                return Err(Error::InvalidGraph(format!(
                    "edge {j} is a self-loop at {t}"
                )));
            }
        }
        Ok(Self { n, edges })
    }

    /// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 2);
        Self {
            n,
            edges: (0..n).map(|i| (i, (i + 1) % n)).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn tail(&self, j: usize) -> usize {
        self.edges[j].0
    }

    pub fn head(&self, j: usize) -> usize {
        self.edges[j].1
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        let m = self.edges.len();
        let mut data = vec![0i8; self.n * m];
        for (j, &(t, h)) in self.edges.iter().enumerate() {
            data[h * m + j] = 1;
            data[t * m + j] = -1;
        }
        IncidenceMatrix {
            rows: self.n,
            cols: m,
            data,
        }
    }

    /// `out = B u`: net inflow at every vertex for edge flows `u`.
    pub fn apply_incidence(&self, u: &[f64], out: &mut [f64]) {
        debug_assert_eq!(u.len(), self.edges.len());
        debug_assert_eq!(out.len(), self.n);
        out.iter_mut().for_each(|v| *v = 0.0);
        for (&(t, h), &f) in self.edges.iter().zip(u) {
            out[h] += f;
            out[t] -= f;
        }
    }

    /// `out = B^T y`: head-minus-tail difference along every edge.
    pub fn apply_incidence_transpose(&self, y: &[f64], out: &mut [f64]) {
        debug_assert_eq!(y.len(), self.n);
        debug_assert_eq!(out.len(), self.edges.len());
        for (o, &(t, h)) in out.iter_mut().zip(&self.edges) {
            *o = y[h] - y[t];
        }
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(t, _) in &self.edges {
            d[t] += 1;
        }
        d
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(_, h) in &self.edges {
            d[h] += 1;
        }
        d
    }

    /// Weak component label per vertex, labels numbered from 0 in order of
    /// first appearance.
    pub fn weak_components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n);
        for &(t, h) in &self.edges {
            uf.union(t, h);
        }
        relabel(&(0..self.n).map(|v| uf.find(v)).collect::<Vec<_>>())
    }

    pub fn weak_component_count(&self) -> usize {
        self.weak_components().iter().max().map_or(0, |&c| c + 1)
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.weak_component_count() == 1
    }

    /// Strongly connected component label per vertex (Tarjan).
    pub fn strong_components(&self) -> Vec<usize> {
        let adj = self.out_adjacency();
        tarjan(self.n, &adj)
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.strong_components().iter().all(|&c| c == 0)
    }

    /// In-degree equals out-degree at every vertex.
    pub fn is_balanced(&self) -> bool {
        self.in_degrees() == self.out_degrees()
    }

    /// Adjacency as (edge index, target) lists, edges in index order.
    pub fn out_adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (j, &(t, h)) in self.edges.iter().enumerate() {
            adj[t].push((j, h));
        }
        adj
    }

    /// The same graph with the edges marked in `flip` reversed.
    pub fn with_flipped(&self, flip: &[bool]) -> Self {
        assert_eq!(flip.len(), self.edges.len());
        Self {
            n: self.n,
            edges: self
                .edges
                .iter()
                .zip(flip)
                .map(|(&(t, h), &f)| if f { (h, t) } else { (t, h) })
                .collect(),
        }
    }

    /// Basis of `ker B` as an `m x c` matrix, one signed fundamental cycle
    /// per column (with respect to a BFS spanning forest). Entries are in
    /// {-1, 0, 1} so `B N = 0` holds exactly.
    pub fn cycle_space_basis(&self) -> Matrix {
        let m = self.edges.len();
        // undirected BFS forest, parent pointer = (vertex, edge)
        let mut undirected = vec![Vec::new(); self.n];
        for (j, &(t, h)) in self.edges.iter().enumerate() {
            undirected[t].push((j, h));
            undirected[h].push((j, t));
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.n];
        let mut depth = vec![usize::MAX; self.n];
        let mut tree_edge = vec![false; m];
        for root in 0..self.n {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            let mut queue = alloc::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &(j, w) in &undirected[v] {
                    if depth[w] == usize::MAX {
                        depth[w] = depth[v] + 1;
                        parent[w] = Some((v, j));
                        tree_edge[j] = true;
                        queue.push_back(w);
                    }
                }
            }
        }

        let chords: Vec<usize> = (0..m).filter(|&j| !tree_edge[j]).collect();
        let mut basis = Matrix::zeros(m, chords.len());
        for (col, &j) in chords.iter().enumerate() {
            // traverse chord t -> h, then return from h to t through the tree
            let (t, h) = self.edges[j];
            basis.set(j, col, 1.0);
            let (mut a, mut b) = (h, t);
            // walk a up (toward t's side) and b up until they meet
            let mut from_a = Vec::new();
            let mut from_b = Vec::new();
            while a != b {
                if depth[a] >= depth[b] {
                    let (p, e) = parent[a].expect("non-root has parent");
                    from_a.push((a, p, e));
                    a = p;
                } else {
                    let (p, e) = parent[b].expect("non-root has parent");
                    from_b.push((p, b, e));
                    b = p;
                }
            }
            // path h -> lca is from_a (moving x -> parent), lca -> t is from_b reversed
            for &(x, p, e) in &from_a {
                let sign = if self.edges[e] == (x, p) { 1.0 } else { -1.0 };
                basis.set(e, col, sign);
            }
            for &(p, x, e) in from_b.iter().rev() {
                let sign = if self.edges[e] == (p, x) { 1.0 } else { -1.0 };
                basis.set(e, col, sign);
            }
        }
        basis
    }
}

/// Dense {-1, 0, +1} incidence matrix, row per vertex, column per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i8>,
}

impl IncidenceMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<i8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Exact integer product `B v`.
    pub fn mul_int(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| i64::from(self.get(i, j)) * v[j])
                    .sum()
            })
            .collect()
    }

    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, f64::from(self.get(i, j)));
            }
        }
        m
    }
}

/// Per-edge closed flow intervals `[lower_i, upper_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowConstraints {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl FlowConstraints {
    /// Checks `lower_i <= 0 <= upper_i` and `lower_i < upper_i` per edge.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Error::check_len("constraint upper bounds", lower.len(), upper.len())?;
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo <= 0.0 && hi >= 0.0 && lo < hi) {
                return Err(Error::InvalidConstraint {
                    edge: i,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(Self { lower, upper })
    }

    /// Every edge constrained to `[lo, hi]`.
    pub fn uniform(m: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; m], vec![hi; m])
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// `u-_i = 0`: flow may only follow the edge orientation.
    pub fn is_uni_directional(&self, i: usize) -> bool {
        self.lower[i] == 0.0
    }

    pub fn is_bi_directional(&self, i: usize) -> bool {
        self.lower[i] < 0.0 && self.upper[i] > 0.0
    }

    pub fn all_uni_directional(&self) -> bool {
        (0..self.len()).all(|i| self.is_uni_directional(i))
    }

    pub fn all_bi_directional(&self) -> bool {
        (0..self.len()).all(|i| self.is_bi_directional(i))
    }

    /// `u-_i <= 0 < u+_i` for every edge.
    pub fn is_canonical(&self) -> bool {
        self.upper.iter().all(|&u| u > 0.0)
    }

    /// Negates the interval of every flipped edge: `[a, b] -> [-b, -a]`.
    pub fn with_flipped(&self, flip: &[bool]) -> Self {
        let mut out = self.clone();
        for (i, &f) in flip.iter().enumerate() {
            if f {
                // 0.0 - x keeps zero bounds positive
                out.lower[i] = 0.0 - self.upper[i];
                out.upper[i] = 0.0 - self.lower[i];
            }
        }
        out
    }
}

/// Output of [`canonicalize_orientation`].
#[derive(Debug, Clone, PartialEq)]
pub struct Canonical {
    pub graph: DirectedGraph,
    pub constraints: FlowConstraints,
    pub flipped: Vec<bool>,
}

/// Reverses every edge whose upper bound is zero so that the result
/// satisfies `u-_i <= 0 < u+_i`. Edges with a positive upper bound keep
/// their orientation.
pub fn canonicalize_orientation(g: &DirectedGraph, c: &FlowConstraints) -> Result<Canonical> {
    Error::check_len("flow constraints", g.edge_count(), c.len())?;
    // re-validate: callers may hand over bounds built elsewhere
    let c = FlowConstraints::new(c.lower.clone(), c.upper.clone())?;
    let flipped: Vec<bool> = c.upper.iter().map(|&u| u == 0.0).collect();
    Ok(Canonical {
        graph: g.with_flipped(&flipped),
        constraints: c.with_flipped(&flipped),
        flipped,
    })
}

/// Strong connectivity with respect to the flow constraints.
///
/// Reduced to plain strong connectivity of an auxiliary digraph holding the
/// arc `tail -> head` when `u+ > 0` and `head -> tail` when `u- < 0`: each
/// bi-directional edge can be oriented independently per vertex pair, and a
/// simple path uses each edge once.
pub fn strongly_connected_wrt_constraints(g: &DirectedGraph, c: &FlowConstraints) -> Result<bool> {
    Error::check_len("flow constraints", g.edge_count(), c.len())?;
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for (j, &(t, h)) in g.edges().iter().enumerate() {
        if c.upper[j] > 0.0 {
            adj[t].push((j, h));
        }
        if c.lower[j] < 0.0 {
            adj[h].push((j, t));
        }
    }
    Ok(tarjan(g.vertex_count(), &adj).iter().all(|&l| l == 0))
}

/// Test oracle for [`strongly_connected_wrt_constraints`]: for every ordered
/// vertex pair, enumerates every compatible orientation and looks for a
/// directed path in at least one of them.
pub fn brute_force_scc_wrt_constraints(g: &DirectedGraph, c: &FlowConstraints) -> Result<bool> {
    Error::check_len("flow constraints", g.edge_count(), c.len())?;
    let m = g.edge_count();
    // flips forced by u+ = 0 are applied to every orientation
    let forced: Vec<bool> = (0..m).map(|j| c.upper[j] == 0.0).collect();
    let free: Vec<usize> = (0..m).filter(|&j| c.is_bi_directional(j)).collect();
    if free.len() > BRUTE_FORCE_EDGE_LIMIT {
        return Err(Error::TooLarge {
            what: "bi-directional edge count",
            limit: BRUTE_FORCE_EDGE_LIMIT,
            found: free.len(),
        });
    }

    let n = g.vertex_count();
    let mut reach = vec![vec![false; n]; n];
    let mut flip = forced.clone();
    for mask in 0u32..(1u32 << free.len()) {
        for (bit, &j) in free.iter().enumerate() {
            flip[j] = forced[j] ^ (mask >> bit & 1 == 1);
        }
        let oriented = g.with_flipped(&flip);
        let adj = oriented.out_adjacency();
        for (v, row) in reach.iter_mut().enumerate() {
            for w in reachable(&adj, v) {
                row[w] = true;
            }
        }
        if reach.iter().all(|r| r.iter().all(|&b| b)) {
            return Ok(true);
        }
    }
    Ok(reach.iter().all(|r| r.iter().all(|&b| b)))
}

/// Vertices reachable from `src` (including itself).
fn reachable(adj: &[Vec<(usize, usize)>], src: usize) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![src];
    seen[src] = true;
    let mut out = Vec::new();
    while let Some(v) = stack.pop() {
        out.push(v);
        for &(_, w) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    out
}

/// Iterative Tarjan SCC. Labels follow the order in which components are
/// completed, relabelled so that vertex 0's component is 0.
fn tarjan(n: usize, adj: &[Vec<(usize, usize)>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![UNSEEN; n];
    let mut next_index = 0;
    let mut next_comp = 0;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (vertex, position in its adjacency list)
        let mut call = vec![(root, 0usize)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&(_, w)) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    relabel(&comp)
}

fn relabel(raw: &[usize]) -> Vec<usize> {
    let mut map: Vec<(usize, usize)> = Vec::new();
    raw.iter()
        .map(|&r| match map.iter().find(|(k, _)| *k == r) {
            Some(&(_, l)) => l,
            None => {
                let l = map.len();
                map.push((r, l));
                l
            }
        })
        .collect()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The five-vertex, seven-edge network of the worked example (0-based):
/// e1: 0->1, e2: 1->2, e3: 2->0, e4: 0->3, e5: 3->2, e6: 0->4, e7: 4->1.
pub fn example_graph() -> DirectedGraph {
    DirectedGraph::new(
        5,
        vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 2), (0, 4), (4, 1)],
    )
    .expect("static graph is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    fn g(n: usize, e: &[(usize, usize)]) -> DirectedGraph {
        DirectedGraph::new(n, e.to_vec()).unwrap()
    }

    #[test]
    fn rejects_self_loops_and_out_of_range() {
        assert!(matches!(
            DirectedGraph::new(2, vec![(1, 1)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(DirectedGraph::new(2, vec![(0, 2)]).is_err());
        assert!(DirectedGraph::new(0, vec![]).is_err());
    }

    #[test]
    fn incidence_of_example_graph() {
        let b = example_graph().incidence_matrix();
        assert_eq!((b.rows(), b.cols()), (5, 7));
        assert_eq!(b.column(0), vec![-1, 1, 0, 0, 0]);
        assert_eq!(b.column(2), vec![1, 0, -1, 0, 0]);
        assert_eq!(b.column(6), vec![0, 1, 0, 0, -1]);
        for j in 0..7 {
            let col = b.column(j);
            assert_eq!(col.iter().filter(|&&v| v == 1).count(), 1);
            assert_eq!(col.iter().filter(|&&v| v == -1).count(), 1);
        }
    }

    #[test]
    fn incidence_small_cases() {
        let b = g(2, &[(0, 1)]).incidence_matrix();
        assert_eq!(b.column(0), vec![-1, 1]);
        let empty = g(3, &[]).incidence_matrix();
        assert_eq!((empty.rows(), empty.cols()), (3, 0));
    }

    #[test]
    fn weak_connectivity() {
        assert!(example_graph().is_weakly_connected());
        assert!(!g(2, &[]).is_weakly_connected());
        assert!(g(3, &[(0, 1), (2, 1)]).is_weakly_connected());
        assert!(g(1, &[]).is_weakly_connected());
    }

    #[test]
    fn strong_connectivity() {
        assert!(example_graph().is_strongly_connected());
        assert!(!g(2, &[(0, 1)]).is_strongly_connected());
        assert!(DirectedGraph::cycle(3).is_strongly_connected());
        assert!(!g(3, &[(0, 1), (1, 0), (1, 2)]).is_strongly_connected());
    }

    #[test]
    fn balance() {
        assert!(DirectedGraph::cycle(3).is_balanced());
        assert!(!example_graph().is_balanced());
        assert_eq!(example_graph().out_degrees()[0], 3);
        assert_eq!(example_graph().in_degrees()[0], 1);
        assert!(g(2, &[(0, 1), (1, 0)]).is_balanced());
    }

    #[test]
    fn rank_matches_component_count() {
        let graphs = [
            example_graph(),
            g(4, &[(0, 1), (2, 3)]),
            g(3, &[]),
            g(4, &[(0, 1), (1, 2), (2, 0), (0, 2)]),
        ];
        for gr in graphs {
            let r = linalg::rank(&gr.incidence_matrix().to_matrix(), 1e-10);
            assert_eq!(r, gr.vertex_count() - gr.weak_component_count());
        }
    }

    #[test]
    fn cycle_space_basis_is_kernel() {
        for gr in [
            example_graph(),
            g(4, &[(0, 1), (1, 0), (2, 3), (3, 2), (3, 2)]),
        ] {
            let n = gr.cycle_space_basis();
            let dim = gr.edge_count() - gr.vertex_count() + gr.weak_component_count();
            assert_eq!(n.cols(), dim);
            let b = gr.incidence_matrix();
            for k in 0..n.cols() {
                let col: Vec<i64> = n.column(k).iter().map(|&v| v as i64).collect();
                assert!(b.mul_int(&col).iter().all(|&v| v == 0));
            }
            let r = linalg::rank(&n, 1e-10);
            assert_eq!(r, dim);
        }
    }

    #[test]
    fn canonicalize_flips_only_zero_upper() {
        let gr = g(2, &[(0, 1), (0, 1), (0, 1)]);
        let c = FlowConstraints::new(vec![-3.0, 0.0, -1.0], vec![0.0, 1.0, 2.0]).unwrap();
        let out = canonicalize_orientation(&gr, &c).unwrap();
        assert_eq!(out.flipped, vec![true, false, false]);
        assert_eq!(out.graph.edges()[0], (1, 0));
        assert_eq!(out.constraints.lower(), &[0.0, 0.0, -1.0]);
        assert!(out.constraints.lower()[0].is_sign_positive());
        assert_eq!(out.constraints.upper(), &[3.0, 1.0, 2.0]);
        assert!(out.constraints.is_canonical());
        // idempotent
        let again = canonicalize_orientation(&out.graph, &out.constraints).unwrap();
        assert!(again.flipped.iter().all(|&f| !f));
        assert_eq!(again.graph, out.graph);
    }

    #[test]
    fn constraint_validation() {
        assert!(FlowConstraints::new(vec![1.0], vec![-1.0]).is_err());
        assert!(FlowConstraints::new(vec![0.0], vec![0.0]).is_err());
        assert!(FlowConstraints::new(vec![0.5], vec![1.0]).is_err());
        assert!(FlowConstraints::new(vec![0.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn scc_wrt_constraints_examples() {
        let tri = DirectedGraph::cycle(3);
        let bi = FlowConstraints::uniform(3, -1.0, 1.0).unwrap();
        let uni = FlowConstraints::uniform(3, 0.0, 1.0).unwrap();
        assert!(strongly_connected_wrt_constraints(&tri, &uni).unwrap());
        assert!(brute_force_scc_wrt_constraints(&tri, &uni).unwrap());

        let path = g(3, &[(0, 1), (2, 1)]);
        let c = FlowConstraints::uniform(2, -1.0, 1.0).unwrap();
        assert!(strongly_connected_wrt_constraints(&path, &c).unwrap());
        let _ = bi;

        let single = g(2, &[(0, 1)]);
        let c1 = FlowConstraints::uniform(1, 0.0, 1.0).unwrap();
        assert!(!strongly_connected_wrt_constraints(&single, &c1).unwrap());
        assert!(!brute_force_scc_wrt_constraints(&single, &c1).unwrap());
    }

    #[test]
    fn brute_force_trivial_graphs() {
        let empty = FlowConstraints::new(vec![], vec![]).unwrap();
        assert!(brute_force_scc_wrt_constraints(&g(1, &[]), &empty).unwrap());
        assert!(!brute_force_scc_wrt_constraints(&g(2, &[]), &empty).unwrap());
    }

    #[test]
    fn brute_force_size_limit() {
        let edges: Vec<_> = (0..21).map(|_| (0, 1)).collect();
        let gr = g(2, &edges);
        let c = FlowConstraints::uniform(21, -1.0, 1.0).unwrap();
        assert!(matches!(
            brute_force_scc_wrt_constraints(&gr, &c),
            Err(Error::TooLarge { .. })
        ));
    }
}
