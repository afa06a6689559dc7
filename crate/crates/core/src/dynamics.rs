//! Storage functions, the saturation function and the closed-loop vector
//! fields on a graph.
//!
//! Four systems share one state layout `(x, x_c)` with `x` on vertices and
//! `x_c` on edges:
//!
//! ```text
//! proportional   x' = -B R B^T dH(x) + E d
//! PI             x' = -B R B^T dH(x) - B x_c + E d,        x_c' = B^T dH(x)
//! saturated PI   x' =  B sat(-B^T dH(x) - x_c; u-, u+) + E d, x_c' = B^T dH(x)
//! ```
//!
//! The controller storage is fixed to `H_c = |x_c|^2 / 2`, so its gradient
//! is `x_c` itself.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{DirectedGraph, FlowConstraints};
use crate::{Error, Result};

/// Vertex storage function `H(x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Hamiltonian {
    /// `|x|^2 / 2`
    Quadratic,
    /// `sum_i w_i x_i^2 / 2` with every `w_i > 0`
    Weighted(Vec<f64>),
}

impl Hamiltonian {
    pub fn weighted(weights: Vec<f64>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::field(
                alloc::format!("hamiltonian.weights[{i}]"),
                "weights must be finite and strictly positive",
            ));
        }
        Ok(Hamiltonian::Weighted(weights))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Hamiltonian::Quadratic => Ok(()),
            Hamiltonian::Weighted(w) => {
                Error::check_len("hamiltonian weights", n, w.len())?;
                Hamiltonian::weighted(w.clone()).map(|_| ())
            }
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Hamiltonian::Quadratic => 0.5 * x.iter().map(|v| v * v).sum::<f64>(),
            Hamiltonian::Weighted(w) => {
                0.5 * x.iter().zip(w).map(|(v, wi)| wi * v * v).sum::<f64>()
            }
        }
    }

    pub fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        match self {
            Hamiltonian::Quadratic => out.copy_from_slice(x),
            Hamiltonian::Weighted(w) => {
                for ((o, v), wi) in out.iter_mut().zip(x).zip(w) {
                    *o = wi * v;
                }
            }
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        self.gradient_into(x, &mut g);
        g
    }

    /// Diagonal of the (constant, diagonal) Hessian.
    pub fn hessian_diagonal(&self, n: usize) -> Vec<f64> {
        match self {
            Hamiltonian::Quadratic => vec![1.0; n],
            Hamiltonian::Weighted(w) => w.clone(),
        }
    }
}

/// A terminal vertex where flow enters (`+1`) or leaves (`-1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Terminal {
    pub vertex: usize,
    pub sign: i8,
}

/// Constant in/outflows `E d`: one terminal per column of `E`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisturbanceModel {
    terminals: Vec<Terminal>,
    rates: Vec<f64>,
}

impl DisturbanceModel {
    pub fn new(terminals: Vec<Terminal>, rates: Vec<f64>) -> Result<Self> {
        Error::check_len("disturbance rates", terminals.len(), rates.len())?;
        if let Some(k) = terminals.iter().position(|t| t.sign != 1 && t.sign != -1) {
            return Err(Error::field(
                alloc::format!("disturbance.E column {k}"),
                "terminal sign must be +1 or -1",
            ));
        }
        Ok(Self { terminals, rates })
    }

    /// Reads `E` given as rows (one per vertex); every column must hold
    /// exactly one nonzero entry, equal to `+1` or `-1`.
    pub fn from_matrix(rows: &[Vec<f64>], rates: Vec<f64>) -> Result<Self> {
        let k = rates.len();
        let mut terminals = Vec::with_capacity(k);
        for (i, r) in rows.iter().enumerate() {
            Error::check_len("disturbance E row", k, r.len()).map_err(|_| {
                Error::field(
                    alloc::format!("disturbance.E[{i}]"),
                    "row length differs from d",
                )
            })?;
        }
        for col in 0..k {
            let nonzero: Vec<(usize, f64)> = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r[col] != 0.0)
                .map(|(i, r)| (i, r[col]))
                .collect();
            match nonzero.as_slice() {
                [(v, s)] if *s == 1.0 || *s == -1.0 => terminals.push(Terminal {
                    vertex: *v,
                    sign: *s as i8,
                }),
                _ => {
                    return Err(Error::field(
                        alloc::format!("disturbance.E column {col}"),
                        "each column needs exactly one entry equal to +1 or -1",
                    ))
                }
            }
        }
        Self::new(terminals, rates)
    }

    /// Terminals realizing a given net injection vector: one `+1` column
    /// per vertex with a nonzero entry, carrying that entry as its rate.
    pub fn from_injection(b: &[f64]) -> Self {
        let mut terminals = Vec::new();
        let mut rates = Vec::new();
        for (v, &val) in b.iter().enumerate() {
            if val != 0.0 {
                terminals.push(Terminal { vertex: v, sign: 1 });
                rates.push(val);
            }
        }
        Self { terminals, rates }
    }

    pub fn terminals(&self) -> &[Terminal] {
        &self.terminals
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self.terminals.iter().position(|t| t.vertex >= n) {
            Some(k) => Err(Error::field(
                alloc::format!("disturbance.E column {k}"),
                "terminal vertex out of range",
            )),
            None => Ok(()),
        }
    }

    /// `E` as `n` rows of `k` entries.
    pub fn matrix(&self, n: usize) -> Vec<Vec<f64>> {
        let mut e = vec![vec![0.0; self.terminals.len()]; n];
        for (k, t) in self.terminals.iter().enumerate() {
            e[t.vertex][k] = f64::from(t.sign);
        }
        e
    }

    /// Net injection `E d` per vertex.
    pub fn injection(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (t, &d) in self.terminals.iter().zip(&self.rates) {
            out[t.vertex] += f64::from(t.sign) * d;
        }
        out
    }

    /// Column sums `1^T E`; one entry of `+-1` per terminal.
    pub fn column_sums(&self) -> Vec<f64> {
        self.terminals.iter().map(|t| f64::from(t.sign)).collect()
    }
}

/// Injection vector for an optional disturbance.
pub fn injection_of(dist: Option<&DisturbanceModel>, n: usize) -> Vec<f64> {
    dist.map_or_else(|| vec![0.0; n], |d| d.injection(n))
}

/// The edge controller.
#[derive(Debug, Clone, PartialEq)]
pub enum ControllerSpec {
    /// `u = -R y`
    Proportional { gains: Vec<f64> },
    /// `x_c' = y`, `u = -R y - x_c`
    Pi { gains: Vec<f64> },
    /// `x_c' = y`, `u = sat(-y - x_c; u-, u+)`, unit gain
    SaturatedPi { constraints: FlowConstraints },
}

impl ControllerSpec {
    pub fn validate(&self, m: usize) -> Result<()> {
        match self {
            ControllerSpec::Proportional { gains } | ControllerSpec::Pi { gains } => {
                Error::check_len("controller gains", m, gains.len())?;
                match gains.iter().position(|&r| !(r > 0.0 && r.is_finite())) {
                    Some(i) => Err(Error::field(
                        alloc::format!("controller.gains[{i}]"),
                        "gains must be finite and strictly positive",
                    )),
                    None => Ok(()),
                }
            }
            ControllerSpec::SaturatedPi { constraints } => {
                Error::check_len("flow constraints", m, constraints.len())
            }
        }
    }

    pub fn constraints(&self) -> Option<&FlowConstraints> {
        match self {
            ControllerSpec::SaturatedPi { constraints } => Some(constraints),
            _ => None,
        }
    }

    pub fn has_integrator(&self) -> bool {
        !matches!(self, ControllerSpec::Proportional { .. })
    }
}

/// Componentwise clamp of `x` into `[lower, upper]`.
pub fn saturate(x: &[f64], lower: &[f64], upper: &[f64]) -> Result<Vec<f64>> {
    Error::check_len("saturation lower bounds", x.len(), lower.len())?;
    Error::check_len("saturation upper bounds", x.len(), upper.len())?;
    Ok(x.iter()
        .zip(lower.iter().zip(upper))
        .map(|(&v, (&a, &b))| sat1(v, a, b))
        .collect())
}

/// Scalar saturation: `a` if `x <= a`, `b` if `x >= b`, `x` otherwise.
#[inline]
pub fn sat1(x: f64, a: f64, b: f64) -> f64 {
    if x <= a {
        a
    } else if x >= b {
        b
    } else {
        x
    }
}

/// `int_0^x sat(y; a, b) dy`, exact piecewise quadratic.
#[inline]
pub fn sat_integral1(x: f64, a: f64, b: f64) -> f64 {
    antiderivative(x, a, b) - antiderivative(0.0, a, b)
}

// C^1 antiderivative of sat(.; a, b) with value y^2/2 on [a, b]
#[inline]
fn antiderivative(y: f64, a: f64, b: f64) -> f64 {
    if y < a {
        a * a * 0.5 + a * (y - a)
    } else if y > b {
        b * b * 0.5 + b * (y - b)
    } else {
        y * y * 0.5
    }
}

/// Componentwise `S(x)_i = int_0^{x_i} sat(y; lower_i, upper_i) dy`.
///
/// Nonnegative, convex and `C^1` whenever `lower_i <= 0 <= upper_i`; also
/// defined (but possibly negative) for shifted bands not containing zero.
pub fn saturation_integral(x: &[f64], lower: &[f64], upper: &[f64]) -> Result<Vec<f64>> {
    Error::check_len("saturation lower bounds", x.len(), lower.len())?;
    Error::check_len("saturation upper bounds", x.len(), upper.len())?;
    Ok(x.iter()
        .zip(lower.iter().zip(upper))
        .map(|(&v, (&a, &b))| sat_integral1(v, a, b))
        .collect())
}

/// Control law used by [`ClosedLoop`].
#[derive(Debug, Clone, PartialEq)]
pub enum Law<'a> {
    Proportional(&'a [f64]),
    Pi(&'a [f64]),
    Saturated { lower: &'a [f64], upper: &'a [f64] },
}

/// Preassembled vector field for one scenario; evaluation does no
/// allocation and no dimension checks.
#[derive(Debug, Clone)]
pub struct ClosedLoop<'a> {
    graph: &'a DirectedGraph,
    hamiltonian: &'a Hamiltonian,
    law: Law<'a>,
    injection: Vec<f64>,
}

/// Scratch space for [`ClosedLoop::eval`].
#[derive(Debug, Clone)]
pub struct Workspace {
    grad: Vec<f64>,
    diff: Vec<f64>,
}

impl Workspace {
    pub fn new(n: usize, m: usize) -> Self {
        Self {
            grad: vec![0.0; n],
            diff: vec![0.0; m],
        }
    }
}

impl<'a> ClosedLoop<'a> {
    pub fn new(
        graph: &'a DirectedGraph,
        hamiltonian: &'a Hamiltonian,
        controller: &'a ControllerSpec,
        injection: Vec<f64>,
    ) -> Self {
        let law = match controller {
            ControllerSpec::Proportional { gains } => Law::Proportional(gains),
            ControllerSpec::Pi { gains } => Law::Pi(gains),
            ControllerSpec::SaturatedPi { constraints } => Law::Saturated {
                lower: constraints.lower(),
                upper: constraints.upper(),
            },
        };
        Self {
            graph,
            hamiltonian,
            law,
            injection,
        }
    }

    pub fn graph(&self) -> &DirectedGraph {
        self.graph
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        self.hamiltonian
    }

    pub fn injection(&self) -> &[f64] {
        &self.injection
    }

    pub fn workspace(&self) -> Workspace {
        Workspace::new(self.graph.vertex_count(), self.graph.edge_count())
    }

    /// Writes `x'`, `x_c'` and the realized edge flow `u`.
    pub fn eval(
        &self,
        x: &[f64],
        xc: &[f64],
        dx: &mut [f64],
        dxc: &mut [f64],
        flow: &mut [f64],
        ws: &mut Workspace,
    ) {
        self.hamiltonian.gradient_into(x, &mut ws.grad);
        // y = B^T dH
        self.graph.apply_incidence_transpose(&ws.grad, &mut ws.diff);
        let y = &ws.diff;
        match self.law {
            Law::Proportional(r) => {
                for ((u, &yi), &ri) in flow.iter_mut().zip(y).zip(r) {
                    *u = -ri * yi;
                }
                dxc.iter_mut().for_each(|v| *v = 0.0);
            }
            Law::Pi(r) => {
                for (((u, &yi), &ri), &c) in flow.iter_mut().zip(y).zip(r).zip(xc) {
                    *u = -ri * yi - c;
                }
                dxc.copy_from_slice(y);
            }
            Law::Saturated { lower, upper } => {
                for (i, u) in flow.iter_mut().enumerate() {
                    *u = sat1(-y[i] - xc[i], lower[i], upper[i]);
                }
                dxc.copy_from_slice(y);
            }
        }
        self.graph.apply_incidence(flow, dx);
        for (d, &e) in dx.iter_mut().zip(&self.injection) {
            *d += e;
        }
    }
}

fn check_state(g: &DirectedGraph, x: &[f64], xc: Option<&[f64]>) -> Result<()> {
    Error::check_len("vertex state x", g.vertex_count(), x.len())?;
    if let Some(xc) = xc {
        Error::check_len("controller state x_c", g.edge_count(), xc.len())?;
    }
    Ok(())
}

/// `x' = -B R B^T dH(x) + E d`.
pub fn rhs_proportional(
    x: &[f64],
    g: &DirectedGraph,
    h: &Hamiltonian,
    gains: &[f64],
    dist: Option<&DisturbanceModel>,
) -> Result<Vec<f64>> {
    check_state(g, x, None)?;
    let controller = ControllerSpec::Proportional {
        gains: gains.to_vec(),
    };
    controller.validate(g.edge_count())?;
    let (dx, _, _) = eval_once(x, &vec![0.0; g.edge_count()], g, h, &controller, dist)?;
    Ok(dx)
}

/// PI closed loop; returns `(x', x_c')`.
pub fn rhs_pi(
    x: &[f64],
    xc: &[f64],
    g: &DirectedGraph,
    h: &Hamiltonian,
    gains: &[f64],
    dist: Option<&DisturbanceModel>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_state(g, x, Some(xc))?;
    let controller = ControllerSpec::Pi {
        gains: gains.to_vec(),
    };
    controller.validate(g.edge_count())?;
    let (dx, dxc, _) = eval_once(x, xc, g, h, &controller, dist)?;
    Ok((dx, dxc))
}

/// Saturated PI closed loop with unit gain; returns `(x', x_c', u)`.
pub fn rhs_pi_saturated(
    x: &[f64],
    xc: &[f64],
    g: &DirectedGraph,
    h: &Hamiltonian,
    c: &FlowConstraints,
    dist: Option<&DisturbanceModel>,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    check_state(g, x, Some(xc))?;
    let controller = ControllerSpec::SaturatedPi {
        constraints: c.clone(),
    };
    controller.validate(g.edge_count())?;
    eval_once(x, xc, g, h, &controller, dist)
}

fn eval_once(
    x: &[f64],
    xc: &[f64],
    g: &DirectedGraph,
    h: &Hamiltonian,
    controller: &ControllerSpec,
    dist: Option<&DisturbanceModel>,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    h.validate(g.vertex_count())?;
    if let Some(d) = dist {
        d.validate(g.vertex_count())?;
    }
    let cl = ClosedLoop::new(g, h, controller, injection_of(dist, g.vertex_count()));
    let (n, m) = (g.vertex_count(), g.edge_count());
    let (mut dx, mut dxc, mut u) = (vec![0.0; n], vec![0.0; m], vec![0.0; m]);
    let mut ws = cl.workspace();
    cl.eval(x, xc, &mut dx, &mut dxc, &mut u, &mut ws);
    Ok((dx, dxc, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::example_graph;
    use proptest::prelude::*;

    fn edge() -> DirectedGraph {
        DirectedGraph::new(2, vec![(0, 1)]).unwrap()
    }

    #[test]
    fn clamp_cases() {
        assert_eq!(saturate(&[0.0], &[-1.0], &[1.0]).unwrap(), vec![0.0]);
        assert_eq!(saturate(&[5.0], &[0.0], &[1.0]).unwrap(), vec![1.0]);
        assert_eq!(saturate(&[-5.0], &[0.0], &[1.0]).unwrap(), vec![0.0]);
        assert!(matches!(
            saturate(&[0.0, 1.0], &[0.0], &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn integral_values() {
        assert_eq!(sat_integral1(0.0, -1.0, 1.0), 0.0);
        // int_0^1 y dy + int_1^2 1 dy
        assert_eq!(sat_integral1(2.0, -1.0, 1.0), 1.5);
        assert_eq!(sat_integral1(-3.0, -1.0, 1.0), 2.5);
        assert_eq!(sat_integral1(-3.0, 0.0, 1.0), 0.0);
        assert!(saturation_integral(&[1.0], &[], &[]).is_err());
    }

    #[test]
    fn integral_derivative_is_saturation() {
        let h = 1e-6;
        for &(a, b) in &[(-1.0, 1.0), (0.0, 2.0), (0.5, 1.5), (-3.0, -0.5)] {
            for k in -40..=40 {
                let x = f64::from(k) * 0.1 + 0.0123;
                let fd = (sat_integral1(x + h, a, b) - sat_integral1(x - h, a, b)) / (2.0 * h);
                assert!((fd - sat1(x, a, b)).abs() < 1e-6, "x={x} a={a} b={b}");
            }
        }
    }

    #[test]
    fn proportional_two_vertex() {
        let dx =
            rhs_proportional(&[0.0, 1.0], &edge(), &Hamiltonian::Quadratic, &[1.0], None).unwrap();
        assert_eq!(dx, vec![1.0, -1.0]);
    }

    #[test]
    fn proportional_consensus_is_equilibrium() {
        let g = example_graph();
        let dx = rhs_proportional(&[2.0; 5], &g, &Hamiltonian::Quadratic, &[0.7; 7], None).unwrap();
        assert!(dx.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn pi_two_vertex() {
        let (dx, dxc) = rhs_pi(
            &[0.0, 1.0],
            &[0.0],
            &edge(),
            &Hamiltonian::Quadratic,
            &[1.0],
            None,
        )
        .unwrap();
        assert_eq!(dx, vec![1.0, -1.0]);
        assert_eq!(dxc, vec![1.0]);
    }

    #[test]
    fn pi_matched_consensus_is_equilibrium() {
        let g = example_graph();
        let xc = vec![0.5; 7];
        let mut bx = vec![0.0; 5];
        g.apply_incidence(&xc, &mut bx);
        let dist = DisturbanceModel::from_injection(&bx);
        let (dx, dxc) = rhs_pi(
            &[1.5; 5],
            &xc,
            &g,
            &Hamiltonian::Quadratic,
            &[2.0; 7],
            Some(&dist),
        )
        .unwrap();
        assert!(dx.iter().chain(&dxc).all(|&v| v.abs() < 1e-15));
    }

    #[test]
    fn rejects_bad_gains_and_dimensions() {
        let g = edge();
        assert!(rhs_pi(
            &[0.0, 1.0],
            &[0.0],
            &g,
            &Hamiltonian::Quadratic,
            &[0.0],
            None
        )
        .is_err());
        assert!(rhs_pi(&[0.0], &[0.0], &g, &Hamiltonian::Quadratic, &[1.0], None).is_err());
        assert!(Hamiltonian::weighted(vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn disturbance_matrix_validation() {
        let ok = DisturbanceModel::from_matrix(&[vec![1.0, 0.0], vec![0.0, -1.0]], vec![2.0, 2.0])
            .unwrap();
        assert_eq!(ok.injection(2), vec![2.0, -2.0]);
        assert_eq!(ok.matrix(2), vec![vec![1.0, 0.0], vec![0.0, -1.0]]);
        assert!(DisturbanceModel::from_matrix(&[vec![1.0], vec![1.0]], vec![1.0]).is_err());
        assert!(DisturbanceModel::from_matrix(&[vec![2.0], vec![0.0]], vec![1.0]).is_err());
        assert!(DisturbanceModel::from_matrix(&[vec![0.0], vec![0.0]], vec![1.0]).is_err());
    }

    #[test]
    fn saturated_flow_within_bounds_and_energy_decreasing() {
        // d/dt H = dH^T B u <= 0 for d = 0 under the proportional law
        let g = example_graph();
        let c = FlowConstraints::uniform(7, 0.0, 1.0).unwrap();
        let x = [3.0, 7.0, 5.0, 1.0, 4.0];
        let xc = [0.3, -2.0, 0.1, 0.9, -0.4, 0.0, 1.0];
        let (_, _, u) = rhs_pi_saturated(&x, &xc, &g, &Hamiltonian::Quadratic, &c, None).unwrap();
        assert!(u.iter().all(|&v| (0.0..=1.0).contains(&v)));
        let dx = rhs_proportional(&x, &g, &Hamiltonian::Quadratic, &[1.0; 7], None).unwrap();
        let rate: f64 = x.iter().zip(&dx).map(|(a, b)| a * b).sum();
        assert!(rate <= 0.0);
    }

    proptest! {
        #[test]
        fn gradient_matches_finite_differences(
            x in proptest::collection::vec(-10.0f64..10.0, 4),
            w in proptest::collection::vec(0.1f64..5.0, 4),
        ) {
            let h = Hamiltonian::weighted(w).unwrap();
            let g = h.gradient(&x);
            let eps = 1e-6;
            for i in 0..4 {
                let mut p = x.clone();
                let mut q = x.clone();
                p[i] += eps;
                q[i] -= eps;
                let fd = (h.value(&p) - h.value(&q)) / (2.0 * eps);
                prop_assert!((fd - g[i]).abs() <= 1e-6 * (1.0 + g[i].abs()));
            }
        }

        #[test]
        fn unconstrained_limit_matches_pi(
            x in proptest::collection::vec(-1e3f64..1e3, 5),
            xc in proptest::collection::vec(-1e3f64..1e3, 7),
        ) {
            let g = example_graph();
            let c = FlowConstraints::uniform(7, -1e9, 1e9).unwrap();
            let (a, ac, _) = rhs_pi_saturated(&x, &xc, &g, &Hamiltonian::Quadratic, &c, None).unwrap();
            let (b, bc) = rhs_pi(&x, &xc, &g, &Hamiltonian::Quadratic, &[1.0; 7], None).unwrap();
            for (p, q) in a.iter().zip(&b).chain(ac.iter().zip(&bc)) {
                prop_assert!((p - q).abs() <= 1e-12 * (1.0 + q.abs()));
            }
        }

        #[test]
        fn conserved_total_with_zero_sum_injection(
            x in proptest::collection::vec(-10.0f64..10.0, 5),
            xc in proptest::collection::vec(-3.0f64..3.0, 7),
            xbar in proptest::collection::vec(-1.0f64..1.0, 7),
        ) {
            let g = example_graph();
            let mut b = vec![0.0; 5];
            g.apply_incidence(&xbar, &mut b);
            let dist = DisturbanceModel::from_injection(&b);
            let total_in: f64 = dist.injection(5).iter().sum();
            let (dx, _) = rhs_pi(&x, &xc, &g, &Hamiltonian::Quadratic, &[1.0; 7], Some(&dist)).unwrap();
            prop_assert!((dx.iter().sum::<f64>() - total_in).abs() < 1e-12);
        }

        #[test]
        fn flip_leaves_vertex_rates_unchanged(
            x in proptest::collection::vec(-5.0f64..5.0, 5),
            xc in proptest::collection::vec(-3.0f64..3.0, 7),
            flips in proptest::collection::vec(any::<bool>(), 7),
        ) {
            let g = example_graph();
            let c = FlowConstraints::new(
                vec![0.0, -1.0, 0.0, -0.5, 0.0, -2.0, 0.0],
                vec![1.0, 1.0, 2.0, 0.5, 1.0, 2.0, 0.3],
            ).unwrap();
            let (dx, _, _) = rhs_pi_saturated(&x, &xc, &g, &Hamiltonian::Quadratic, &c, None).unwrap();
            let gf = g.with_flipped(&flips);
            let cf = c.with_flipped(&flips);
            let xcf: Vec<f64> = xc.iter().zip(&flips).map(|(&v, &f)| if f { -v } else { v }).collect();
            let (dxf, _, _) = rhs_pi_saturated(&x, &xcf, &gf, &Hamiltonian::Quadratic, &cf, None).unwrap();
            prop_assert_eq!(dx, dxf);
        }
    }
}
