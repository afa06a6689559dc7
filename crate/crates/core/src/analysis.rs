//! Matching condition, permission sets, Lyapunov functions, consensus
//! detection and convergence prediction.

use alloc::vec;
use alloc::vec::Vec;

use crate::dynamics::{
    injection_of, sat1, sat_integral1, ControllerSpec, DisturbanceModel, Hamiltonian,
};
use crate::graph::{strongly_connected_wrt_constraints, DirectedGraph, FlowConstraints};
use crate::linalg::{lstsq_min_norm, norm2, norm_inf};
use crate::lp::max_min_slack;
use crate::scenario::Scenario;
use crate::{Error, Result};

/// Relative rank tolerance of the matching least-squares solve.
pub const MATCHING_RANK_TOL: f64 = 1e-10;
/// Strict-inequality margin for permission-set membership.
pub const PERMISSION_MARGIN: f64 = 1e-12;
/// Threshold used by [`classify_equilibrium`].
pub const EQUILIBRIUM_TOL: f64 = 1e-8;

/// Open per-edge intervals for matched controller states.
///
/// A bi-directional edge gets the symmetric interval `(-r, r)` with
/// `r = min(|u-|, u+)`; every uni-directional edge gets `(0, u+_min)`,
/// `u+_min` being the smallest upper bound among uni-directional edges.
#[derive(Debug, Clone, PartialEq)]
pub struct PermissionSet {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl PermissionSet {
    /// Requires canonical constraints (`u+ > 0` everywhere).
    pub fn new(c: &FlowConstraints) -> Result<Self> {
        if let Some(edge) = c.upper().iter().position(|&u| u <= 0.0) {
            return Err(Error::NotCanonical { edge });
        }
        let uni_min = (0..c.len())
            .filter(|&i| c.is_uni_directional(i))
            .map(|i| c.upper()[i])
            .fold(f64::INFINITY, f64::min);
        let (mut lower, mut upper) = (Vec::with_capacity(c.len()), Vec::with_capacity(c.len()));
        for i in 0..c.len() {
            if c.is_uni_directional(i) {
                lower.push(0.0);
                upper.push(uni_min);
            } else {
                let r = (-c.lower()[i]).min(c.upper()[i]);
                lower.push(-r);
                upper.push(r);
            }
        }
        Ok(Self { lower, upper })
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

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.len()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| v > lo + PERMISSION_MARGIN && v < hi - PERMISSION_MARGIN)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingResult {
    /// Minimum-norm least-squares solution of `B xc_bar = E d`; `None`
    /// when infeasible.
    pub xc_bar: Option<Vec<f64>>,
    /// `|B xc_bar - E d|_2` for the least-squares solution.
    pub residual: f64,
    pub feasible: bool,
    /// Membership of `xc_bar` when a permission set was supplied.
    pub in_permission_set: Option<bool>,
}

/// Solves the matching condition `B xc_bar = E d` in the least-squares
/// sense and reports feasibility.
pub fn solve_matching(
    g: &DirectedGraph,
    dist: Option<&DisturbanceModel>,
    pset: Option<&PermissionSet>,
) -> MatchingResult {
    solve_matching_injection(g, &injection_of(dist, g.vertex_count()), pset)
}

/// [`solve_matching`] for a given injection vector `E d`.
pub fn solve_matching_injection(
    g: &DirectedGraph,
    injection: &[f64],
    pset: Option<&PermissionSet>,
) -> MatchingResult {
    let b = g.incidence_matrix().to_matrix();
    let (x, _) = lstsq_min_norm(&b, injection, MATCHING_RANK_TOL);
    let mut bx = vec![0.0; g.vertex_count()];
    g.apply_incidence(&x, &mut bx);
    let diff: Vec<f64> = bx.iter().zip(injection).map(|(a, b)| a - b).collect();
    let residual = norm2(&diff);
    let feasible = residual <= MATCHING_RANK_TOL * (1.0 + norm2(injection));
    let in_permission_set = match (feasible, pset) {
        (true, Some(p)) => Some(p.contains(&x)),
        (false, Some(_)) => Some(false),
        _ => None,
    };
    MatchingResult {
        xc_bar: feasible.then_some(x),
        residual,
        feasible,
        in_permission_set,
    }
}

/// Looks for a matching controller state strictly inside `pset`.
///
/// The solution set is `xc_bar_0 + ker B`; the most interior point along
/// the cycle space is found by a max-min-slack linear program. Returns the
/// minimum-norm solution unchanged when it already qualifies.
pub fn adjust_into_permission_set(
    g: &DirectedGraph,
    dist: Option<&DisturbanceModel>,
    pset: &PermissionSet,
) -> Result<Option<Vec<f64>>> {
    Error::check_len("permission set", g.edge_count(), pset.len())?;
    let res = solve_matching(g, dist, Some(pset));
    let Some(base) = res.xc_bar else {
        return Err(Error::MatchingInfeasible {
            residual: res.residual,
        });
    };
    if pset.contains(&base) {
        return Ok(Some(base));
    }
    let (x, slack) = max_min_slack(&base, &g.cycle_space_basis(), &pset.lower, &pset.upper);
    Ok((slack > PERMISSION_MARGIN && pset.contains(&x)).then_some(x))
}

/// `H(x) + |x_c - xc_bar|^2 / 2`.
pub fn lyapunov_pi(x: &[f64], xc: &[f64], xc_bar: &[f64], h: &Hamiltonian) -> f64 {
    let shift: f64 = xc.iter().zip(xc_bar).map(|(a, b)| (a - b) * (a - b)).sum();
    h.value(x) + 0.5 * shift
}

// z = -B^T dH(x) - (x_c - xc_bar), bounds shifted by xc_bar
fn saturated_argument(
    x: &[f64],
    xc: &[f64],
    g: &DirectedGraph,
    h: &Hamiltonian,
    xc_bar: Option<&[f64]>,
) -> Vec<f64> {
    let grad = h.gradient(x);
    let mut z = vec![0.0; g.edge_count()];
    g.apply_incidence_transpose(&grad, &mut z);
    for (j, zj) in z.iter_mut().enumerate() {
        let bar = xc_bar.map_or(0.0, |b| b[j]);
        *zj = -*zj - (xc[j] - bar);
    }
    z
}

/// `1^T S(-B^T dH(x) - x~_c; u- + xc_bar, u+ + xc_bar) + H(x)` with
/// `x~_c = x_c - xc_bar` (`xc_bar = 0` when omitted).
pub fn lyapunov_saturated(
    x: &[f64],
    xc: &[f64],
    g: &DirectedGraph,
    h: &Hamiltonian,
    c: &FlowConstraints,
    xc_bar: Option<&[f64]>,
) -> f64 {
    let z = saturated_argument(x, xc, g, h, xc_bar);
    let s: f64 = z
        .iter()
        .enumerate()
        .map(|(j, &zj)| {
            let bar = xc_bar.map_or(0.0, |b| b[j]);
            sat_integral1(zj, c.lower()[j] + bar, c.upper()[j] + bar)
        })
        .sum();
    s + h.value(x)
}

/// Gradient of [`lyapunov_saturated`] with respect to `(x, x_c)`.
pub fn lyapunov_saturated_gradient(
    x: &[f64],
    xc: &[f64],
    g: &DirectedGraph,
    h: &Hamiltonian,
    c: &FlowConstraints,
    xc_bar: Option<&[f64]>,
) -> (Vec<f64>, Vec<f64>) {
    let z = saturated_argument(x, xc, g, h, xc_bar);
    let s: Vec<f64> = z
        .iter()
        .enumerate()
        .map(|(j, &zj)| {
            let bar = xc_bar.map_or(0.0, |b| b[j]);
            sat1(zj, c.lower()[j] + bar, c.upper()[j] + bar)
        })
        .collect();
    let mut bs = vec![0.0; g.vertex_count()];
    g.apply_incidence(&s, &mut bs);
    let hess = h.hessian_diagonal(g.vertex_count());
    let grad_h = h.gradient(x);
    let gx = (0..x.len()).map(|i| grad_h[i] - hess[i] * bs[i]).collect();
    let gxc = s.iter().map(|v| -v).collect();
    (gx, gxc)
}

/// A Lyapunov function that applies to a scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum Lyapunov {
    /// `H(x)` for proportional control without disturbance.
    Energy,
    /// [`lyapunov_pi`] around a matching state.
    Pi { xc_bar: Vec<f64> },
    /// [`lyapunov_saturated`], shifted when a disturbance is present.
    Saturated { xc_bar: Option<Vec<f64>> },
}

impl Lyapunov {
    /// Value at `(x, x_c)` for the scenario this was built for.
    pub fn evaluate(&self, s: &Scenario, x: &[f64], xc: &[f64]) -> f64 {
        match self {
            Lyapunov::Energy => s.hamiltonian.value(x),
            Lyapunov::Pi { xc_bar } => lyapunov_pi(x, xc, xc_bar, &s.hamiltonian),
            Lyapunov::Saturated { xc_bar } => {
                let c = s
                    .controller
                    .constraints()
                    .expect("saturated Lyapunov needs constraints");
                lyapunov_saturated(x, xc, &s.graph, &s.hamiltonian, c, xc_bar.as_deref())
            }
        }
    }
}

/// Picks the Lyapunov function matching the scenario's closed loop, or
/// `None` when the matching condition fails (or proportional control meets
/// a nonzero disturbance).
pub fn applicable_lyapunov(s: &Scenario) -> Result<Option<Lyapunov>> {
    s.validate()?;
    let injection = s.injection();
    let undisturbed = injection.iter().all(|&v| v == 0.0);
    Ok(match &s.controller {
        ControllerSpec::Proportional { .. } => undisturbed.then_some(Lyapunov::Energy),
        ControllerSpec::Pi { .. } => solve_matching_injection(&s.graph, &injection, None)
            .xc_bar
            .map(|xc_bar| Lyapunov::Pi { xc_bar }),
        ControllerSpec::SaturatedPi { .. } => {
            if undisturbed {
                Some(Lyapunov::Saturated { xc_bar: None })
            } else {
                solve_matching_injection(&s.graph, &injection, None)
                    .xc_bar
                    .map(|xc_bar| Lyapunov::Saturated {
                        xc_bar: Some(xc_bar),
                    })
            }
        }
    })
}

/// `(max_i |dH_i - alpha| < tol, alpha)` with `alpha` the mean of `dH(x)`.
pub fn consensus_check(x: &[f64], h: &Hamiltonian, tol: f64) -> (bool, f64) {
    let grad = h.gradient(x);
    if grad.is_empty() {
        return (true, 0.0);
    }
    let alpha = grad.iter().sum::<f64>() / grad.len() as f64;
    let spread = grad
        .iter()
        .fold(0.0f64, |acc, g| acc.max((g - alpha).abs()));
    (spread < tol, alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquilibriumClass {
    /// `|x'|_inf < 1e-8`.
    pub is_equilibrium: bool,
    /// `|B^T dH(x)|_inf < 1e-8`.
    pub gradient_aligned: bool,
}

pub fn classify_equilibrium(x: &[f64], xc: &[f64], s: &Scenario) -> Result<EquilibriumClass> {
    s.validate()?;
    Error::check_len("x", s.graph.vertex_count(), x.len())?;
    Error::check_len("xc", s.graph.edge_count(), xc.len())?;
    let r = s.rates(x, xc);
    let grad = s.hamiltonian.gradient(x);
    let mut y = vec![0.0; s.graph.edge_count()];
    s.graph.apply_incidence_transpose(&grad, &mut y);
    Ok(EquilibriumClass {
        is_equilibrium: norm_inf(&r.dx) < EQUILIBRIUM_TOL,
        gradient_aligned: norm_inf(&y) < EQUILIBRIUM_TOL,
    })
}

/// Which hypothesis test settled a [`Verdict`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    WeaklyConnected,
    NotWeaklyConnected,
    /// `E d` is not in the image of `B`.
    MatchingInfeasible,
    /// Proportional control cannot reject a nonzero disturbance.
    ProportionalOffset,
    StronglyConnectedWrtConstraints,
    NotStronglyConnectedWrtConstraints,
    /// No matching controller state lies in the permission set.
    NoPermissibleMatching,
    StronglyConnectedAndBalanced,
    NotStronglyConnected,
    Unbalanced,
    /// Uni- and bi-directional edges together with a disturbance.
    MixedConstraints,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::WeaklyConnected => "weakly_connected",
            Reason::NotWeaklyConnected => "not_weakly_connected",
            Reason::MatchingInfeasible => "matching_infeasible",
            Reason::ProportionalOffset => "proportional_offset",
            Reason::StronglyConnectedWrtConstraints => "strongly_connected_wrt_constraints",
            Reason::NotStronglyConnectedWrtConstraints => "not_strongly_connected_wrt_constraints",
            Reason::NoPermissibleMatching => "no_permissible_matching",
            Reason::StronglyConnectedAndBalanced => "strongly_connected_and_balanced",
            Reason::NotStronglyConnected => "not_strongly_connected",
            Reason::Unbalanced => "unbalanced",
            Reason::MixedConstraints => "out_of_theory_scope",
        }
    }
}

impl core::fmt::Display for Reason {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    /// `None` when no known condition covers the scenario.
    pub consensus_expected: Option<bool>,
    pub reason: Reason,
    /// The matching controller state the verdict relied on, if any.
    pub xc_bar: Option<Vec<f64>>,
}

impl Verdict {
    fn new(expected: Option<bool>, reason: Reason) -> Self {
        Self {
            consensus_expected: expected,
            reason,
            xc_bar: None,
        }
    }

    pub fn is_out_of_scope(&self) -> bool {
        self.consensus_expected.is_none()
    }
}

/// Dispatches to the convergence condition whose hypotheses the scenario
/// meets. A zero disturbance (`E d = 0`) skips the matching test entirely
/// for saturated control.
pub fn predict_convergence(s: &Scenario) -> Result<Verdict> {
    s.validate()?;
    let g = &s.graph;
    let weak = |ok: Reason| {
        if g.is_weakly_connected() {
            Verdict::new(Some(true), ok)
        } else {
            Verdict::new(Some(false), Reason::NotWeaklyConnected)
        }
    };
    let injection = s.injection();
    let undisturbed = injection.iter().all(|&v| v == 0.0);
    match &s.controller {
        ControllerSpec::Proportional { .. } => Ok(if undisturbed {
            weak(Reason::WeaklyConnected)
        } else {
            Verdict::new(Some(false), Reason::ProportionalOffset)
        }),
        ControllerSpec::Pi { .. } => {
            let res = solve_matching_injection(g, &injection, None);
            if !res.feasible {
                return Ok(Verdict::new(Some(false), Reason::MatchingInfeasible));
            }
            let mut v = weak(Reason::WeaklyConnected);
            v.xc_bar = res.xc_bar;
            Ok(v)
        }
        ControllerSpec::SaturatedPi { constraints: c } => {
            if undisturbed {
                return Ok(if strongly_connected_wrt_constraints(g, c)? {
                    Verdict::new(Some(true), Reason::StronglyConnectedWrtConstraints)
                } else {
                    Verdict::new(Some(false), Reason::NotStronglyConnectedWrtConstraints)
                });
            }
            let (all_bi, all_uni) = (c.all_bi_directional(), c.all_uni_directional());
            if !all_bi && !all_uni {
                return Ok(Verdict::new(None, Reason::MixedConstraints));
            }
            let res = solve_matching_injection(g, &injection, None);
            if !res.feasible {
                return Ok(Verdict::new(Some(false), Reason::MatchingInfeasible));
            }
            let pset = PermissionSet::new(c)?;
            let Some(xc_bar) = adjust_into_permission_set(g, s.disturbance.as_ref(), &pset)? else {
                return Ok(Verdict::new(None, Reason::NoPermissibleMatching));
            };
            let mut v = if all_bi {
                weak(Reason::WeaklyConnected)
            } else if !g.is_strongly_connected() {
                Verdict::new(Some(false), Reason::NotStronglyConnected)
            } else if !g.is_balanced() {
                Verdict::new(Some(false), Reason::Unbalanced)
            } else {
                Verdict::new(Some(true), Reason::StronglyConnectedAndBalanced)
            };
            v.xc_bar = Some(xc_bar);
            Ok(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::example_graph;
    use crate::scenario::five_vertex_preset;
    use crate::sim::{integrate, IntegratorParams, Tolerances};
    use alloc::string::String;
    use proptest::prelude::*;

    #[test]
    fn permission_set_intervals() {
        let c = FlowConstraints::new(vec![-1.0, -3.0, 0.0, 0.0], vec![2.0, 1.5, 4.0, 0.5]).unwrap();
        let p = PermissionSet::new(&c).unwrap();
        assert_eq!(p.lower(), &[-1.0, -1.5, 0.0, 0.0]);
        assert_eq!(p.upper(), &[1.0, 1.5, 0.5, 0.5]);
        assert!(p.contains(&[0.0, 0.0, 0.25, 0.25]));
        assert!(!p.contains(&[0.0, 0.0, 0.0, 0.25]));
        assert!(!p.contains(&[0.0, 0.0, 0.25]));
    }

    #[test]
    fn zero_disturbance_matches_trivially() {
        let r = solve_matching(&example_graph(), None, None);
        assert!(r.feasible);
        assert_eq!(r.residual, 0.0);
        assert!(r.xc_bar.unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn preset_matching_and_adjustment() {
        let s = five_vertex_preset();
        let c = s.controller.constraints().unwrap();
        let pset = PermissionSet::new(c).unwrap();
        let r = solve_matching(&s.graph, s.disturbance.as_ref(), Some(&pset));
        assert!(r.feasible && r.residual <= 1e-12);
        let x = adjust_into_permission_set(&s.graph, s.disturbance.as_ref(), &pset)
            .unwrap()
            .unwrap();
        assert!(pset.contains(&x));
        let mut bx = vec![0.0; 5];
        s.graph.apply_incidence(&x, &mut bx);
        for (a, b) in bx.iter().zip(s.injection()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn unbalanced_net_injection_infeasible() {
        let d = DisturbanceModel::from_injection(&[1.0, 0.0, 0.0, 0.0, 0.0]);
        let r = solve_matching(&example_graph(), Some(&d), None);
        assert!(!r.feasible && r.xc_bar.is_none());
        assert!(adjust_into_permission_set(
            &example_graph(),
            Some(&d),
            &PermissionSet::new(&FlowConstraints::uniform(7, 0.0, 1.0).unwrap()).unwrap()
        )
        .is_err());
    }

    #[test]
    fn acyclic_uni_directional_zero_disturbance_has_no_interior_state() {
        let g = DirectedGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let pset = PermissionSet::new(&FlowConstraints::uniform(2, 0.0, 1.0).unwrap()).unwrap();
        assert_eq!(adjust_into_permission_set(&g, None, &pset).unwrap(), None);
        // on a cycle a positive circulation is interior
        let x = adjust_into_permission_set(
            &DirectedGraph::cycle(3),
            None,
            &PermissionSet::new(&FlowConstraints::uniform(3, 0.0, 1.0).unwrap()).unwrap(),
        )
        .unwrap()
        .unwrap();
        assert!(x.iter().all(|&v| v > 0.0 && v < 1.0));
    }

    #[test]
    fn symmetric_bounds_keep_zero() {
        let pset = PermissionSet::new(&FlowConstraints::uniform(7, -1.0, 1.0).unwrap()).unwrap();
        let x = adjust_into_permission_set(&example_graph(), None, &pset)
            .unwrap()
            .unwrap();
        assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn lyapunov_minima() {
        let h = Hamiltonian::Quadratic;
        assert_eq!(lyapunov_pi(&[0.0; 2], &[0.3], &[0.3], &h), 0.0);
        let g = example_graph();
        let c = FlowConstraints::uniform(7, 0.0, 1.0).unwrap();
        assert_eq!(
            lyapunov_saturated(&[0.0; 5], &[0.0; 7], &g, &h, &c, None),
            0.0
        );
    }

    #[test]
    fn consensus_check_cases() {
        assert_eq!(
            consensus_check(&[3.0; 4], &Hamiltonian::Quadratic, 1e-4),
            (true, 3.0)
        );
        let (ok, alpha) = consensus_check(&[0.0, 1.0], &Hamiltonian::Quadratic, 1e-4);
        assert!(!ok && alpha == 0.5);
        let h = Hamiltonian::weighted(vec![1.0, 2.0]).unwrap();
        assert!(consensus_check(&[2.0, 1.0], &h, 1e-12).0);
    }

    #[test]
    fn verdicts() {
        let v = predict_convergence(&five_vertex_preset()).unwrap();
        assert_eq!(v.consensus_expected, Some(false));
        assert_eq!(v.reason, Reason::Unbalanced);

        let mut s = five_vertex_preset();
        let mut lower = vec![0.0; 7];
        lower[0] = -1.0;
        s.controller = ControllerSpec::SaturatedPi {
            constraints: FlowConstraints::new(lower, vec![1.0; 7]).unwrap(),
        };
        assert!(predict_convergence(&s).unwrap().is_out_of_scope());

        s.controller = ControllerSpec::SaturatedPi {
            constraints: FlowConstraints::uniform(7, -1.0, 1.0).unwrap(),
        };
        let v = predict_convergence(&s).unwrap();
        assert_eq!(v.consensus_expected, Some(true));
        assert!(PermissionSet::new(s.controller.constraints().unwrap())
            .unwrap()
            .contains(v.xc_bar.as_ref().unwrap()));

        s.disturbance = None;
        s.controller = ControllerSpec::Pi {
            gains: vec![1.0; 7],
        };
        s.graph = DirectedGraph::new(
            5,
            vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 3), (0, 1), (1, 0)],
        )
        .unwrap();
        let v = predict_convergence(&s).unwrap();
        assert_eq!(
            (v.consensus_expected, v.reason),
            (Some(false), Reason::NotWeaklyConnected)
        );
    }

    #[test]
    fn preset_terminal_state_is_non_consensus_equilibrium() {
        let s = five_vertex_preset();
        let traj = integrate(&s).unwrap();
        let e = classify_equilibrium(traj.final_x(), traj.final_xc(), &s).unwrap();
        assert!(e.is_equilibrium && !e.gradient_aligned);
        let at_start = classify_equilibrium(&s.x0, &s.xc0, &s).unwrap();
        assert!(!at_start.is_equilibrium);
    }

    fn pair_pi() -> Scenario {
        Scenario {
            name: String::from("pair"),
            graph: DirectedGraph::new(2, vec![(0, 1)]).unwrap(),
            hamiltonian: Hamiltonian::Quadratic,
            controller: ControllerSpec::Pi { gains: vec![1.0] },
            disturbance: Some(DisturbanceModel::from_injection(&[0.5, -0.5])),
            x0: vec![0.0, 2.0],
            xc0: vec![0.0],
            integrator: IntegratorParams::new(0.01, 20.0, 10),
            tolerances: Tolerances::default(),
        }
    }

    #[test]
    fn pi_lyapunov_decreases_along_run() {
        let s = pair_pi();
        let traj = integrate(&s).unwrap();
        let v = traj.lyapunov.as_ref().unwrap();
        assert!(v
            .windows(2)
            .all(|w| w[1] <= w[0] + 1e-9 * (1.0 + w[0].abs())));
        assert!(traj.summary.consensus);
        assert!((traj.summary.alpha - 1.0).abs() < 1e-4);
    }

    #[test]
    fn proportional_disturbed_has_no_lyapunov() {
        let mut s = pair_pi();
        s.controller = ControllerSpec::Proportional { gains: vec![1.0] };
        assert_eq!(applicable_lyapunov(&s).unwrap(), None);
        s.disturbance = None;
        assert_eq!(applicable_lyapunov(&s).unwrap(), Some(Lyapunov::Energy));
    }

    proptest! {
        #[test]
        fn saturated_gradient_matches_finite_differences(
            x in proptest::collection::vec(-3.0f64..3.0, 5),
            xc in proptest::collection::vec(-3.0f64..3.0, 7),
            bar in proptest::collection::vec(0.05f64..0.95, 7),
        ) {
            let g = example_graph();
            let h = Hamiltonian::weighted(vec![1.0, 2.0, 0.5, 1.5, 1.0]).unwrap();
            let c = FlowConstraints::uniform(7, 0.0, 1.0).unwrap();
            let (gx, gxc) = lyapunov_saturated_gradient(&x, &xc, &g, &h, &c, Some(&bar));
            let f = |x: &[f64], xc: &[f64]| lyapunov_saturated(x, xc, &g, &h, &c, Some(&bar));
            let eps = 1e-6;
            for i in 0..5 {
                let (mut p, mut q) = (x.clone(), x.clone());
                p[i] += eps;
                q[i] -= eps;
                let fd = (f(&p, &xc) - f(&q, &xc)) / (2.0 * eps);
                prop_assert!((fd - gx[i]).abs() <= 1e-6 * (1.0 + gx[i].abs()), "x[{}]: {} vs {}", i, fd, gx[i]);
            }
            for j in 0..7 {
                let (mut p, mut q) = (xc.clone(), xc.clone());
                p[j] += eps;
                q[j] -= eps;
                let fd = (f(&x, &p) - f(&x, &q)) / (2.0 * eps);
                prop_assert!((fd - gxc[j]).abs() <= 1e-6 * (1.0 + gxc[j].abs()));
            }
        }

        #[test]
        fn consensus_value_shifts_with_state(
            x in proptest::collection::vec(-5.0f64..5.0, 1..8),
            shift in -10.0f64..10.0,
        ) {
            let h = Hamiltonian::Quadratic;
            let (ok, a) = consensus_check(&x, &h, 1e-4);
            let y: Vec<f64> = x.iter().map(|v| v + shift).collect();
            let (ok2, b) = consensus_check(&y, &h, 1e-4);
            prop_assert_eq!(ok, ok2);
            prop_assert!((b - a - shift).abs() < 1e-9);
        }
    }
}
