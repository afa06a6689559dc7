//! The simulation unit, a worked preset and the counterexample builder.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cycles::{minimal_cycle_cover, CycleCover};
use crate::dynamics::{injection_of, ClosedLoop, ControllerSpec, DisturbanceModel, Hamiltonian};
use crate::graph::{canonicalize_orientation, DirectedGraph, FlowConstraints};
use crate::lp::max_min_slack;
use crate::sim::{IntegratorParams, Tolerances};
use crate::{Error, Result};

/// Largest vertex count for the cut search in [`build_counterexample`].
pub const CUT_SEARCH_VERTEX_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub graph: DirectedGraph,
    pub hamiltonian: Hamiltonian,
    pub controller: ControllerSpec,
    pub disturbance: Option<DisturbanceModel>,
    pub x0: Vec<f64>,
    pub xc0: Vec<f64>,
    pub integrator: IntegratorParams,
    pub tolerances: Tolerances,
}

/// Vector field evaluated at one state.
#[derive(Debug, Clone, PartialEq)]
pub struct Rates {
    pub dx: Vec<f64>,
    pub dxc: Vec<f64>,
    pub flow: Vec<f64>,
}

impl Scenario {
    /// Checks dimensions, finiteness and that saturation bounds are in
    /// canonical orientation (see [`Scenario::canonicalized`]).
    pub fn validate(&self) -> Result<()> {
        let (n, m) = (self.graph.vertex_count(), self.graph.edge_count());
        self.hamiltonian.validate(n)?;
        self.controller.validate(m)?;
        if let Some(c) = self.controller.constraints() {
            if let Some(edge) = c.upper().iter().position(|&u| u <= 0.0) {
                return Err(Error::NotCanonical { edge });
            }
        }
        if let Some(d) = &self.disturbance {
            d.validate(n)?;
        }
        Error::check_len("x0", n, self.x0.len())?;
        Error::check_len("xc0", m, self.xc0.len())?;
        if let Some(i) = self.x0.iter().position(|v| !v.is_finite()) {
            return Err(Error::field(alloc::format!("x0[{i}]"), "must be finite"));
        }
        if let Some(i) = self.xc0.iter().position(|v| !v.is_finite()) {
            return Err(Error::field(alloc::format!("xc0[{i}]"), "must be finite"));
        }
        self.integrator.validate()?;
        if !(self.tolerances.steady > 0.0) {
            return Err(Error::field("tolerances.steady", "must be > 0"));
        }
        if !(self.tolerances.consensus > 0.0) {
            return Err(Error::field("tolerances.consensus", "must be > 0"));
        }
        Ok(())
    }

    /// Reverses every edge with `u+ = 0` (and negates its `x_c(0)`), which
    /// leaves the trajectory of `x` unchanged.
    pub fn canonicalized(mut self) -> Result<Self> {
        if let ControllerSpec::SaturatedPi { constraints } = &self.controller {
            Error::check_len("xc0", self.graph.edge_count(), self.xc0.len())?;
            let can = canonicalize_orientation(&self.graph, constraints)?;
            for (v, &f) in self.xc0.iter_mut().zip(&can.flipped) {
                if f {
                    *v = -*v;
                }
            }
            self.graph = can.graph;
            self.controller = ControllerSpec::SaturatedPi {
                constraints: can.constraints,
            };
        }
        Ok(self)
    }

    /// `E d` as a vertex vector.
    pub fn injection(&self) -> Vec<f64> {
        injection_of(self.disturbance.as_ref(), self.graph.vertex_count())
    }

    /// Assembled vector field. Assumes [`Scenario::validate`] passed.
    pub fn closed_loop(&self) -> ClosedLoop<'_> {
        ClosedLoop::new(
            &self.graph,
            &self.hamiltonian,
            &self.controller,
            self.injection(),
        )
    }

    /// Evaluates the vector field at `(x, xc)`. Assumes a validated scenario
    /// and matching dimensions.
    pub fn rates(&self, x: &[f64], xc: &[f64]) -> Rates {
        let cl = self.closed_loop();
        let (n, m) = (self.graph.vertex_count(), self.graph.edge_count());
        let mut r = Rates {
            dx: vec![0.0; n],
            dxc: vec![0.0; m],
            flow: vec![0.0; m],
        };
        cl.eval(
            x,
            xc,
            &mut r.dx,
            &mut r.dxc,
            &mut r.flow,
            &mut cl.workspace(),
        );
        r
    }
}

/// Five vertices, seven uni-directional edges in `[0, 1]`, quadratic storage,
/// unbalanced. The matched controller state is `1/2` on every edge and the
/// disturbance is the injection `B (1/2) 1 = (-1, 1/2, 1/2, 0, 0)`.
pub fn five_vertex_preset() -> Scenario {
    let graph = crate::graph::example_graph();
    let m = graph.edge_count();
    let xc_bar = vec![0.5; m];
    let mut injection = vec![0.0; graph.vertex_count()];
    graph.apply_incidence(&xc_bar, &mut injection);
    let shifted = [1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 1.0];
    Scenario {
        name: String::from("five-vertex-unbalanced"),
        graph,
        hamiltonian: Hamiltonian::Quadratic,
        controller: ControllerSpec::SaturatedPi {
            constraints: FlowConstraints::uniform(m, 0.0, 1.0).expect("valid bounds"),
        },
        disturbance: Some(DisturbanceModel::from_injection(&injection)),
        x0: vec![3.0, 7.0, 5.0, 1.0, 4.0],
        xc0: shifted.iter().zip(&xc_bar).map(|(a, b)| a + b).collect(),
        integrator: IntegratorParams::default(),
        tolerances: Tolerances::default(),
    }
}

/// How a [`Counterexample`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// Flows `lambda T` from a minimal cycle cover, with the most shared
    /// edges pinned at their upper bound and the single-use edges of
    /// the same cycles pinned at zero.
    CoverOrdering,
    /// Flows from a circulation pinned at zero on every edge entering a
    /// vertex set and at one on every edge leaving it. Used when the
    /// ordering demanded by the cover is contradictory.
    CutCirculation,
}

/// A saturated-PI scenario on an unbalanced graph whose solution settles at
/// a non-consensus equilibrium although the matching controller state lies
/// inside the permission set `(0, 1)^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub scenario: Scenario,
    /// Matching controller state, `B xc_bar = E d`, inside `(0, 1)^m`.
    pub xc_bar: Vec<f64>,
    /// Circulation equal to `u + xc_bar` at the equilibrium.
    pub target_flows: Vec<f64>,
    /// The equilibrium `x`; not constant.
    pub equilibrium: Vec<f64>,
    pub cover: CycleCover,
    /// Flow scale, for [`Construction::CoverOrdering`].
    pub lambda: Option<f64>,
    /// Edges with maximal multiplicity.
    pub heavy_edges: Vec<usize>,
    /// Single-use edges lying on a cycle through a heavy edge.
    pub light_edges: Vec<usize>,
    pub construction: Construction,
}

/// Builds a non-consensus scenario for an unbalanced strongly connected
/// graph with uni-directional `[0, 1]` edges. Balanced graphs give `None`.
///
/// Needs a certified minimal cycle cover, so graphs beyond
/// [`crate::cycles::EXACT_COVER_EDGE_LIMIT`] edges are rejected with
/// [`Error::UncertifiedCover`].
pub fn build_counterexample(g: &DirectedGraph) -> Result<Option<Counterexample>> {
    if !g.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    if g.is_balanced() {
        return Ok(None);
    }
    let cover = minimal_cycle_cover(g)?;
    if !cover.minimal {
        return Err(Error::UncertifiedCover);
    }
    let m = g.edge_count();
    let t: Vec<f64> = cover.multiplicity.iter().map(|&v| f64::from(v)).collect();
    let t_max = f64::from(cover.max_multiplicity());
    let heavy: Vec<usize> = (0..m).filter(|&j| t[j] == t_max).collect();
    let mut light_mask = vec![false; m];
    for c in &cover.cycles {
        if c.iter().any(|&e| t[e] == t_max) {
            for &e in c {
                if t[e] == 1.0 {
                    light_mask[e] = true;
                }
            }
        }
    }
    let light: Vec<usize> = (0..m).filter(|&j| light_mask[j]).collect();

    let built = match cover_ordering(g, &heavy, &light) {
        Some(nu) => {
            let lambda = 0.5 * (1.0 / t_max + (2.0 / t_max).min(1.0));
            let target: Vec<f64> = t.iter().map(|ti| lambda * ti).collect();
            let mut xc_bar = vec![0.0; m];
            let mut shifted = vec![0.0; m];
            for j in 0..m {
                if t[j] == t_max {
                    xc_bar[j] = target[j] - 1.0;
                    shifted[j] = -1.0;
                } else if light_mask[j] {
                    xc_bar[j] = target[j];
                    shifted[j] = 1.0;
                } else {
                    xc_bar[j] = interior_offset(target[j]);
                    shifted[j] = -target[j];
                }
            }
            Some((
                nu,
                xc_bar,
                shifted,
                target,
                Some(lambda),
                Construction::CoverOrdering,
            ))
        }
        None => cut_circulation(g)?.map(|(nu, xc_bar, shifted, f)| {
            (nu, xc_bar, shifted, f, None, Construction::CutCirculation)
        }),
    };
    let Some((nu, xc_bar, shifted, target, lambda, construction)) = built else {
        return Ok(None);
    };

    let mut injection = vec![0.0; g.vertex_count()];
    g.apply_incidence(&xc_bar, &mut injection);
    let scenario = Scenario {
        name: String::from("unbalanced-counterexample"),
        graph: g.clone(),
        hamiltonian: Hamiltonian::Quadratic,
        controller: ControllerSpec::SaturatedPi {
            constraints: FlowConstraints::uniform(m, 0.0, 1.0)?,
        },
        disturbance: Some(DisturbanceModel::from_injection(&injection)),
        x0: nu.clone(),
        xc0: shifted.iter().zip(&xc_bar).map(|(a, b)| a + b).collect(),
        integrator: IntegratorParams::default(),
        tolerances: Tolerances::default(),
    };
    Ok(Some(Counterexample {
        scenario,
        xc_bar,
        target_flows: target,
        equilibrium: nu,
        cover,
        lambda,
        heavy_edges: heavy,
        light_edges: light,
        construction,
    }))
}

/// A value in `(f - 1, f) ∩ (0, 1)`, preferring `f - 1/2`.
fn interior_offset(f: f64) -> f64 {
    let v = f - 0.5;
    if v > 0.0 && v < 1.0 {
        v
    } else {
        0.5 * ((f - 1.0).max(0.0) + f.min(1.0))
    }
}

/// Vertex levels with `level(head) < level(tail)` on heavy edges,
/// `level(head) > level(tail)` on light edges and equality elsewhere.
/// `None` when these contradict each other.
fn cover_ordering(g: &DirectedGraph, heavy: &[usize], light: &[usize]) -> Option<Vec<f64>> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut strict = vec![false; m];
    for &e in heavy.iter().chain(light) {
        strict[e] = true;
    }
    // classes of vertices forced equal
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for (j, &(a, b)) in g.edges().iter().enumerate() {
        if !strict[j] {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    let class: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();

    // arc lo -> hi between classes
    let mut succ = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    let mut add = |lo: usize, hi: usize| -> bool {
        if lo == hi {
            return false;
        }
        succ[lo].push(hi);
        indeg[hi] += 1;
        true
    };
    for &e in heavy {
        let (t, h) = g.edges()[e];
        if !add(class[h], class[t]) {
            return None;
        }
    }
    for &e in light {
        let (t, h) = g.edges()[e];
        if !add(class[t], class[h]) {
            return None;
        }
    }

    // longest-path levels over the class DAG
    let roots: Vec<usize> = (0..n).filter(|&v| class[v] == v).collect();
    let mut level = vec![0usize; n];
    let mut queue: Vec<usize> = roots.iter().copied().filter(|&r| indeg[r] == 0).collect();
    let mut done = 0;
    while let Some(c) = queue.pop() {
        done += 1;
        for k in 0..succ[c].len() {
            let d = succ[c][k];
            level[d] = level[d].max(level[c] + 1);
            indeg[d] -= 1;
            if indeg[d] == 0 {
                queue.push(d);
            }
        }
    }
    if done != roots.len() {
        return None;
    }
    Some((0..n).map(|v| level[class[v]] as f64).collect())
}

type CutResult = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);

/// Searches vertex sets `S` for a circulation with flow in `(0, 1)` on edges
/// entering `S`, `(1, 2)` on edges leaving it and `(0, 2)` elsewhere. The
/// set with the largest margin wins.
fn cut_circulation(g: &DirectedGraph) -> Result<Option<CutResult>> {
    let n = g.vertex_count();
    if n > CUT_SEARCH_VERTEX_LIMIT {
        return Err(Error::TooLarge {
            what: "vertex count for cut search",
            limit: CUT_SEARCH_VERTEX_LIMIT,
            found: n,
        });
    }
    let m = g.edge_count();
    let basis = g.cycle_space_basis();
    let zero = vec![0.0; m];
    let mut best: Option<(f64, u32, Vec<f64>)> = None;
    let (mut lo, mut hi) = (vec![0.0; m], vec![0.0; m]);
    for mask in 1u32..(1u32 << n) - 1 {
        for (j, &(t, h)) in g.edges().iter().enumerate() {
            let (ti, hi_in) = (mask >> t & 1 == 1, mask >> h & 1 == 1);
            (lo[j], hi[j]) = match (ti, hi_in) {
                (false, true) => (0.0, 1.0),
                (true, false) => (1.0, 2.0),
                _ => (0.0, 2.0),
            };
        }
        let (f, slack) = max_min_slack(&zero, &basis, &lo, &hi);
        if slack > 1e-9 && best.as_ref().is_none_or(|b| slack > b.0 + 1e-12) {
            best = Some((slack, mask, f));
        }
    }
    let Some((_, mask, f)) = best else {
        return Ok(None);
    };
    let inside = |v: usize| mask >> v & 1 == 1;
    let nu: Vec<f64> = (0..n).map(|v| if inside(v) { 1.0 } else { 0.0 }).collect();
    let mut xc_bar = vec![0.0; m];
    let mut shifted = vec![0.0; m];
    for (j, &(t, h)) in g.edges().iter().enumerate() {
        match (inside(t), inside(h)) {
            (false, true) => {
                xc_bar[j] = f[j];
                shifted[j] = 1.0;
            }
            (true, false) => {
                xc_bar[j] = f[j] - 1.0;
                shifted[j] = -1.0;
            }
            _ => {
                xc_bar[j] = interior_offset(f[j]);
                shifted[j] = -f[j];
            }
        }
    }
    Ok(Some((nu, xc_bar, shifted, f)))
}
