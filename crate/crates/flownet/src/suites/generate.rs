//! Graph families for the suites: seeded random generators and exhaustive
//! enumeration of small simple digraphs up to isomorphism.

use flownet_core::graph::DirectedGraph;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random weakly connected graph: a randomly oriented spanning tree plus
/// `m - (n - 1)` extra arcs between distinct vertices (no repeated ordered
/// pair).
pub fn weakly_connected<R: Rng>(rng: &mut R, n: usize, m: usize) -> DirectedGraph {
    assert!(n >= 1 && m + 1 >= n);
    let max = n * (n - 1);
    let m = m.min(max);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m);
    for k in 1..n {
        let a = order[k];
        let b = order[rng.gen_range(0..k)];
        edges.push(if rng.gen_bool(0.5) { (a, b) } else { (b, a) });
    }
    add_random_arcs(rng, n, m, &mut edges);
    DirectedGraph::new(n, edges).expect("generated graph is valid")
}

/// Hamiltonian cycle on a random vertex order plus extra random arcs.
pub fn strongly_connected<R: Rng>(rng: &mut R, n: usize, m: usize) -> DirectedGraph {
    assert!(n >= 2 && m >= n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|k| (order[k], order[(k + 1) % n])).collect();
    add_random_arcs(rng, n, m.min(n * (n - 1)), &mut edges);
    DirectedGraph::new(n, edges).expect("generated graph is valid")
}

fn add_random_arcs<R: Rng>(rng: &mut R, n: usize, m: usize, edges: &mut Vec<(usize, usize)>) {
    while edges.len() < m {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b && !edges.contains(&(a, b)) {
            edges.push((a, b));
        }
    }
}

/// Union of a Hamiltonian cycle and `extra` random cycles (each through at
/// least two vertices); parallel arcs may appear. Always balanced and
/// strongly connected.
pub fn balanced_strongly_connected<R: Rng>(rng: &mut R, n: usize, extra: usize) -> DirectedGraph {
    assert!(n >= 2);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|k| (order[k], order[(k + 1) % n])).collect();
    for _ in 0..extra {
        let len = rng.gen_range(2..=n);
        let mut verts: Vec<usize> = (0..n).collect();
        verts.shuffle(rng);
        verts.truncate(len);
        for k in 0..len {
            edges.push((verts[k], verts[(k + 1) % len]));
        }
    }
    DirectedGraph::new(n, edges).expect("generated graph is valid")
}

/// Disjoint union of weakly connected pieces (vertex ids are contiguous
/// per piece); returns the graph and the piece of every vertex.
pub fn disconnected<R: Rng>(rng: &mut R, sizes: &[usize]) -> (DirectedGraph, Vec<usize>) {
    let mut edges = Vec::new();
    let mut piece = Vec::new();
    let mut offset = 0;
    for (p, &k) in sizes.iter().enumerate() {
        let extra = if k >= 2 { rng.gen_range(0..=k - 1) } else { 0 };
        let g = weakly_connected(rng, k, k - 1 + extra);
        edges.extend(g.edges().iter().map(|&(t, h)| (t + offset, h + offset)));
        piece.extend(std::iter::repeat_n(p, k));
        offset += k;
    }
    (
        DirectedGraph::new(offset, edges).expect("generated graph is valid"),
        piece,
    )
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// One representative per isomorphism class of simple digraphs (no loops,
/// no parallel arcs) with `1..=max_n` vertices and at most `max_m` arcs.
/// The representative is the lexicographically smallest arc mask.
pub fn digraph_classes(max_n: usize, max_m: usize) -> Vec<DirectedGraph> {
    assert!(max_n <= 5, "enumeration is exponential in n^2");
    let mut out = Vec::new();
    for n in 1..=max_n {
        let arcs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        let index = |a: usize, b: usize| arcs.iter().position(|&e| e == (a, b)).unwrap();
        let perms = permutations(n);
        // arc k under permutation p becomes arc image[p][k]
        let image: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| arcs.iter().map(|&(a, b)| index(p[a], p[b])).collect())
            .collect();
        for mask in 0u32..(1u32 << arcs.len()) {
            if mask.count_ones() as usize > max_m {
                continue;
            }
            let canonical = image.iter().all(|img| {
                let mut permuted = 0u32;
                for (k, &to) in img.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        permuted |= 1 << to;
                    }
                }
                permuted >= mask
            });
            if canonical {
                let edges = (0..arcs.len())
                    .filter(|&k| mask >> k & 1 == 1)
                    .map(|k| arcs[k])
                    .collect();
                out.push(DirectedGraph::new(n, edges).expect("enumerated graph is valid"));
            }
        }
    }
    out
}
