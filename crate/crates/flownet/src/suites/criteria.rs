use std::time::Instant;

use flownet_core::analysis::{
    classify_equilibrium, consensus_check, lyapunov_saturated, lyapunov_saturated_gradient,
    predict_convergence, solve_matching, PermissionSet,
};
use flownet_core::cycles::non_overlapping_cycle_cover;
use flownet_core::dynamics::{sat1, ControllerSpec, DisturbanceModel, Hamiltonian, Terminal};
use flownet_core::graph::{
    brute_force_scc_wrt_constraints, example_graph, strongly_connected_wrt_constraints,
    DirectedGraph, FlowConstraints,
};
use flownet_core::scenario::{build_counterexample, five_vertex_preset, Scenario};
use flownet_core::sim::{integrate, IntegratorParams, Tolerances, Trajectory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::generate;
use super::Outcome;

/// Monotonicity record of every Lyapunov trajectory seen by the suites.
#[derive(Debug, Clone, Default)]
pub struct LyapunovLog {
    pub trajectories: usize,
    pub steps: usize,
    pub violations: usize,
    /// Largest `V(t_{k+1}) - V(t_k)` relative to `1 + |V(t_k)|`.
    pub worst: f64,
}

impl LyapunovLog {
    fn record(&mut self, traj: &Trajectory) {
        let Some(v) = &traj.lyapunov else { return };
        self.trajectories += 1;
        for w in v.windows(2) {
            self.steps += 1;
            let rel = (w[1] - w[0]) / (1.0 + w[0].abs());
            self.worst = self.worst.max(rel);
            if rel > 1e-9 {
                self.violations += 1;
            }
        }
    }
}

fn run(s: &Scenario, log: &mut LyapunovLog) -> Result<Trajectory, String> {
    let traj = integrate(s).map_err(|e| format!("{}: {e}", s.name))?;
    log.record(&traj);
    Ok(traj)
}

/// Integrates in windows of `s.integrator.horizon`, restarting from the last
/// state, until the run is steady at consensus or `cap` is reached. Returns
/// the last window and the total time integrated.
fn run_until_consensus(
    s: &Scenario,
    cap: f64,
    log: &mut LyapunovLog,
) -> Result<(Trajectory, f64), String> {
    let mut s = s.clone();
    let mut elapsed = 0.0;
    loop {
        let traj = run(&s, log)?;
        elapsed += s.integrator.horizon;
        if (traj.summary.consensus && traj.summary.steady) || elapsed >= cap {
            return Ok((traj, elapsed));
        }
        s.x0 = traj.final_x().to_vec();
        s.xc0 = traj.final_xc().to_vec();
    }
}

fn predicted(s: &Scenario) -> Result<Option<bool>, String> {
    predict_convergence(s)
        .map(|v| v.consensus_expected)
        .map_err(|e| e.to_string())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform_vec<R: Rng>(rng: &mut R, len: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(lo..hi)).collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo
}

fn injection_of(g: &DirectedGraph, xc_bar: &[f64]) -> Vec<f64> {
    let mut b = vec![0.0; g.vertex_count()];
    g.apply_incidence(xc_bar, &mut b);
    b
}

/// Terminals with random signs and rates whose net injection is zero.
fn zero_sum_disturbance<R: Rng>(rng: &mut R, vertices: &[usize]) -> DisturbanceModel {
    let k = rng.gen_range(2..=vertices.len().max(2));
    let terminals: Vec<Terminal> = (0..k)
        .map(|_| Terminal {
            vertex: vertices[rng.gen_range(0..vertices.len())],
            sign: if rng.gen_bool(0.5) { 1 } else { -1 },
        })
        .collect();
    let mut rates = uniform_vec(rng, k, 0.1, 1.0);
    let partial: f64 = (0..k - 1)
        .map(|i| f64::from(terminals[i].sign) * rates[i])
        .sum();
    rates[k - 1] = -partial * f64::from(terminals[k - 1].sign);
    DisturbanceModel::new(terminals, rates).expect("signs are +-1")
}

fn base_scenario(name: String, graph: DirectedGraph, controller: ControllerSpec) -> Scenario {
    let (n, m) = (graph.vertex_count(), graph.edge_count());
    Scenario {
        name,
        graph,
        hamiltonian: Hamiltonian::Quadratic,
        controller,
        disturbance: None,
        x0: vec![0.0; n],
        xc0: vec![0.0; m],
        integrator: IntegratorParams::default(),
        tolerances: Tolerances::default(),
    }
}

pub fn preset(log: &mut LyapunovLog) -> Outcome {
    let title = "five-vertex preset settles at the predicted non-consensus equilibrium";
    let s = five_vertex_preset();
    let start = Instant::now();
    let traj = match run(&s, log) {
        Ok(t) => t,
        Err(e) => return Outcome::fail(1, title, e),
    };
    let elapsed = start.elapsed().as_secs_f64();
    let x = traj.final_x();
    let t = [1.0, 2.0, 3.0, 1.0, 1.0, 1.0, 1.0];
    let flow_err = traj
        .final_flow()
        .iter()
        .zip(&t)
        .map(|(u, ti)| (u + 0.5 - 0.5 * ti).abs())
        .fold(0.0f64, f64::max);
    let class = classify_equilibrium(x, traj.final_xc(), &s).expect("validated scenario");
    let checks = [
        ("rate", traj.summary.max_rate < 1e-6),
        ("non-consensus", !traj.summary.consensus && spread(x) >= 0.1),
        ("flows", flow_err <= 1e-3),
        ("x_2 = x_3", (x[1] - x[2]).abs() <= 1e-3),
        (
            "equilibrium",
            class.is_equilibrium && !class.gradient_aligned,
        ),
        ("runtime", elapsed < 5.0),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let detail = format!(
        "x(T) = {:.5?}, max|u + 1/2 - T/2| = {flow_err:.2e}, |x'| = {:.1e}, {elapsed:.2}s{}",
        x,
        traj.summary.max_rate,
        if failed.is_empty() {
            String::new()
        } else {
            format!(", failed: {failed:?}")
        }
    );
    Outcome::new(1, title, failed.is_empty(), detail)
}

pub fn pi_consensus(log: &mut LyapunovLog) -> Outcome {
    let title = "PI control balances weakly connected graphs and only those";
    let mut r = rng(2);
    let mut failures = Vec::new();
    let mut worst_alpha: f64 = 0.0;
    for i in 0..50 {
        let n = r.gen_range(2..=8);
        let m = r.gen_range(n - 1..=14);
        let g = generate::weakly_connected(&mut r, n, m);
        let m = g.edge_count();
        let gains = uniform_vec(&mut r, m, 0.5, 2.0);
        let mut s = base_scenario(format!("pi-{i}"), g, ControllerSpec::Pi { gains });
        s.disturbance = Some(zero_sum_disturbance(&mut r, &(0..n).collect::<Vec<_>>()));
        s.x0 = uniform_vec(&mut r, n, 0.0, 10.0);
        s.xc0 = uniform_vec(&mut r, m, -1.0, 1.0);
        s.integrator.horizon = 500.0;
        s.integrator.stride = 100;
        let traj = match run(&s, log) {
            Ok(t) => t,
            Err(e) => {
                failures.push(e);
                continue;
            }
        };
        let alpha_err = (traj.summary.alpha - mean(&s.x0)).abs();
        worst_alpha = worst_alpha.max(alpha_err);
        let pred = predicted(&s);
        if !traj.summary.consensus || alpha_err > 1e-4 || pred != Ok(Some(true)) {
            failures.push(format!(
                "{}: consensus {} alpha err {alpha_err:.1e} predicted {pred:?}",
                s.name, traj.summary.consensus
            ));
        }
    }
    let mut worst_piece: f64 = 0.0;
    for i in 0..5 {
        let pieces = r.gen_range(2..=3);
        let sizes: Vec<usize> = (0..pieces).map(|_| r.gen_range(2..=3)).collect();
        let (g, piece) = generate::disconnected(&mut r, &sizes);
        let (n, m) = (g.vertex_count(), g.edge_count());
        let gains = uniform_vec(&mut r, m, 0.5, 2.0);
        let mut s = base_scenario(format!("pi-split-{i}"), g, ControllerSpec::Pi { gains });
        // matching needs zero net injection per piece; use one piece only
        let first: Vec<usize> = (0..n).filter(|&v| piece[v] == 0).collect();
        s.disturbance = Some(zero_sum_disturbance(&mut r, &first));
        s.x0 = (0..n)
            .map(|v| 5.0 * piece[v] as f64 + r.gen_range(0.0..2.0))
            .collect();
        s.xc0 = uniform_vec(&mut r, m, -1.0, 1.0);
        s.integrator.horizon = 500.0;
        s.integrator.stride = 100;
        let traj = match run(&s, log) {
            Ok(t) => t,
            Err(e) => {
                failures.push(e);
                continue;
            }
        };
        let x = traj.final_x();
        let mut piece_ok = true;
        for p in 0..pieces {
            let xs: Vec<f64> = (0..n).filter(|&v| piece[v] == p).map(|v| x[v]).collect();
            let x0s: Vec<f64> = (0..n).filter(|&v| piece[v] == p).map(|v| s.x0[v]).collect();
            let (ok, alpha) = consensus_check(&xs, &s.hamiltonian, 1e-4);
            worst_piece = worst_piece.max((alpha - mean(&x0s)).abs());
            piece_ok &= ok && (alpha - mean(&x0s)).abs() <= 1e-4;
        }
        let pred = predicted(&s);
        if traj.summary.consensus || !piece_ok || pred != Ok(Some(false)) {
            failures.push(format!(
                "{}: per-piece {piece_ok} predicted {pred:?}",
                s.name
            ));
        }
    }
    Outcome::from_failures(
        2,
        title,
        failures,
        format!("50 connected + 5 split graphs, worst alpha error {worst_alpha:.1e} / per piece {worst_piece:.1e}"),
    )
}

fn random_mixed_constraints<R: Rng>(rng: &mut R, m: usize) -> FlowConstraints {
    let (lower, upper) = (0..m)
        .map(|_| match rng.gen_range(0..3) {
            0 => (0.0, rng.gen_range(0.5..2.0)),
            1 => (-rng.gen_range(0.5..2.0), 0.0),
            _ => (-rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)),
        })
        .unzip();
    FlowConstraints::new(lower, upper).expect("generated bounds are valid")
}

/// Longest integrated time per constrained scenario.
const CONSTRAINED_CAP: f64 = 20_000.0;

pub fn constrained(log: &mut LyapunovLog) -> Outcome {
    let title =
        "saturated PI without disturbance balances when strongly connected w.r.t. the bounds";
    let mut r = rng(3);
    let mut failures = Vec::new();
    let mut accepted = 0;
    let mut attempts = 0;
    let mut longest: f64 = 0.0;
    while accepted < 50 {
        attempts += 1;
        let n = r.gen_range(2..=6);
        let m = r.gen_range(n - 1..=10);
        let g = generate::weakly_connected(&mut r, n, m);
        let c = random_mixed_constraints(&mut r, g.edge_count());
        if !strongly_connected_wrt_constraints(&g, &c).expect("dimensions agree") {
            continue;
        }
        accepted += 1;
        let m = g.edge_count();
        let mut s = base_scenario(
            format!("constrained-{accepted}"),
            g,
            ControllerSpec::SaturatedPi { constraints: c },
        );
        s.x0 = uniform_vec(&mut r, n, 0.0, 5.0);
        s.xc0 = uniform_vec(&mut r, m, -1.0, 1.0);
        s.integrator.horizon = 500.0;
        s.integrator.stride = 100;
        let s = s.canonicalized().expect("valid bounds");
        match run_until_consensus(&s, CONSTRAINED_CAP, log) {
            Ok((traj, elapsed)) => {
                longest = longest.max(elapsed);
                let pred = predicted(&s);
                if !traj.summary.consensus || pred != Ok(Some(true)) {
                    failures.push(format!(
                        "{}: spread {:.1e} at t = {elapsed} predicted {pred:?}",
                        s.name, traj.summary.spread
                    ));
                }
            }
            Err(e) => failures.push(e),
        }
    }

    // single uni-directional edge toward the fuller vertex
    let mut s = base_scenario(
        "blocked-pair".into(),
        DirectedGraph::new(2, vec![(0, 1)]).expect("valid"),
        ControllerSpec::SaturatedPi {
            constraints: FlowConstraints::uniform(1, 0.0, 1.0).expect("valid"),
        },
    );
    s.x0 = vec![0.0, 1.0];
    let witness = match run(&s, log) {
        Ok(traj) => {
            let x = traj.final_x();
            let ok = x[0].abs() <= 1e-6
                && (x[1] - 1.0).abs() <= 1e-6
                && predicted(&s) == Ok(Some(false));
            if !ok {
                failures.push(format!("blocked pair ended at {x:?}"));
            }
            format!("{x:?}")
        }
        Err(e) => {
            failures.push(e);
            String::new()
        }
    };
    Outcome::from_failures(
        3,
        title,
        failures,
        format!(
            "50 graphs ({attempts} drawn), longest run t = {longest}, \
             blocked pair ends at {witness}"
        ),
    )
}

pub fn bidirectional(log: &mut LyapunovLog) -> Outcome {
    let title = "bi-directional saturated PI with a permissible matching state balances";
    let mut r = rng(4);
    let mut failures = Vec::new();
    let mut worst_drift: f64 = 0.0;
    for i in 0..30 {
        let n = r.gen_range(2..=7);
        let m = r.gen_range(n - 1..=12);
        let g = generate::weakly_connected(&mut r, n, m);
        let m = g.edge_count();
        let lower: Vec<f64> = (0..m).map(|_| -r.gen_range(0.5..2.0)).collect();
        let upper: Vec<f64> = (0..m).map(|_| r.gen_range(0.5..2.0)).collect();
        let c = FlowConstraints::new(lower, upper).expect("valid");
        let p = PermissionSet::new(&c).expect("canonical");
        let xc_bar: Vec<f64> = (0..m)
            .map(|j| r.gen_range(0.8 * p.lower()[j]..0.8 * p.upper()[j]))
            .collect();
        let injection = injection_of(&g, &xc_bar);
        let mut s = base_scenario(
            format!("bi-{i}"),
            g,
            ControllerSpec::SaturatedPi { constraints: c },
        );
        s.disturbance = Some(DisturbanceModel::from_injection(&injection));
        s.x0 = uniform_vec(&mut r, n, 0.0, 5.0);
        s.xc0 = uniform_vec(&mut r, m, -1.0, 1.0);
        s.integrator.horizon = 500.0;
        s.integrator.stride = 50;
        let traj = match run(&s, log) {
            Ok(t) => t,
            Err(e) => {
                failures.push(e);
                continue;
            }
        };
        let total0: f64 = s.x0.iter().sum();
        let drift = traj
            .x
            .iter()
            .map(|x| (x.iter().sum::<f64>() - total0).abs() / (1.0 + total0.abs()))
            .fold(0.0f64, f64::max);
        worst_drift = worst_drift.max(drift);
        let pred = predicted(&s);
        if !traj.summary.consensus || drift > 1e-6 || pred != Ok(Some(true)) {
            failures.push(format!(
                "{}: spread {:.1e} drift {drift:.1e} predicted {pred:?}",
                s.name, traj.summary.spread
            ));
        }
    }
    Outcome::from_failures(
        4,
        title,
        failures,
        format!("30 graphs, worst relative drift of 1^T x {worst_drift:.1e}"),
    )
}

pub fn balanced(log: &mut LyapunovLog) -> Outcome {
    let title = "uni-directional saturated PI balances on balanced strongly connected graphs";
    let mut r = rng(5);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let n = r.gen_range(2..=6);
        let extra = r.gen_range(0..=2);
        let g = generate::balanced_strongly_connected(&mut r, n, extra);
        let m = g.edge_count();
        let upper: Vec<f64> = (0..m).map(|_| r.gen_range(0.5..2.0)).collect();
        let c = FlowConstraints::new(vec![0.0; m], upper).expect("valid");
        let p = PermissionSet::new(&c).expect("canonical");
        let xc_bar: Vec<f64> = (0..m)
            .map(|j| r.gen_range(0.1 * p.upper()[j]..0.9 * p.upper()[j]))
            .collect();
        let injection = injection_of(&g, &xc_bar);
        let mut s = base_scenario(
            format!("balanced-{i}"),
            g,
            ControllerSpec::SaturatedPi { constraints: c },
        );
        s.disturbance = Some(DisturbanceModel::from_injection(&injection));
        s.x0 = uniform_vec(&mut r, n, 0.0, 5.0);
        s.xc0 = uniform_vec(&mut r, m, -1.0, 1.0);
        s.integrator.horizon = 500.0;
        s.integrator.stride = 100;
        match run(&s, log) {
            Ok(traj) => {
                worst = worst.max(traj.summary.spread);
                let pred = predicted(&s);
                if !traj.summary.consensus || pred != Ok(Some(true)) {
                    failures.push(format!(
                        "{}: spread {:.1e} predicted {pred:?}",
                        s.name, traj.summary.spread
                    ));
                }
            }
            Err(e) => failures.push(e),
        }
    }
    Outcome::from_failures(
        5,
        title,
        failures,
        format!("20 graphs, worst final spread {worst:.1e}"),
    )
}

pub fn counterexample(log: &mut LyapunovLog) -> Outcome {
    let title = "every small unbalanced strongly connected digraph gets a working counterexample";
    let mut graphs: Vec<DirectedGraph> = generate::digraph_classes(4, 8)
        .into_iter()
        .filter(|g| g.is_strongly_connected() && !g.is_balanced())
        .collect();
    graphs.push(example_graph());
    let mut failures = Vec::new();
    let (mut via_cover, mut via_cut) = (0, 0);
    let mut worst_flow: f64 = 0.0;
    for g in &graphs {
        let ce = match build_counterexample(g) {
            Ok(Some(ce)) => ce,
            other => {
                failures.push(format!("{:?}: {other:?}", g.edges()));
                continue;
            }
        };
        match ce.lambda {
            Some(_) => via_cover += 1,
            None => via_cut += 1,
        }
        let interior = ce.xc_bar.iter().all(|&v| v > 0.0 && v < 1.0);
        let res = solve_matching(g, ce.scenario.disturbance.as_ref(), None);
        let traj = match run(&ce.scenario, log) {
            Ok(t) => t,
            Err(e) => {
                failures.push(e);
                continue;
            }
        };
        let flow_err = traj
            .final_flow()
            .iter()
            .zip(&ce.xc_bar)
            .zip(&ce.target_flows)
            .map(|((u, b), f)| (u + b - f).abs())
            .fold(0.0f64, f64::max);
        worst_flow = worst_flow.max(flow_err);
        let class = classify_equilibrium(traj.final_x(), traj.final_xc(), &ce.scenario);
        let class_ok = matches!(class, Ok(c) if c.is_equilibrium && !c.gradient_aligned);
        let pred = predicted(&ce.scenario);
        if !(interior
            && res.feasible
            && res.residual <= 1e-12
            && traj.summary.steady
            && !traj.summary.consensus
            && flow_err <= 1e-3
            && class_ok
            && pred == Ok(Some(false)))
        {
            failures.push(format!(
                "{:?}: interior {interior} residual {:.1e} steady {} consensus {} flow err {flow_err:.1e} class {class:?} predicted {pred:?}",
                g.edges(),
                res.residual,
                traj.summary.steady,
                traj.summary.consensus
            ));
        }
    }
    Outcome::from_failures(
        6,
        title,
        failures,
        format!(
            "{} graphs ({via_cover} by cover ordering, {via_cut} by cut circulation), worst flow error {worst_flow:.1e}",
            graphs.len()
        ),
    )
}

pub fn cycle_cover() -> Outcome {
    let title = "a disjoint cycle cover exists exactly for balanced graphs";
    let mut failures = Vec::new();
    let (mut total, mut balanced) = (0, 0);
    for g in generate::digraph_classes(4, 8) {
        if !g.is_strongly_connected() {
            continue;
        }
        total += 1;
        let cover = non_overlapping_cycle_cover(&g);
        balanced += usize::from(g.is_balanced());
        let valid = cover
            .as_ref()
            .is_none_or(|c| c.is_valid_for(&g) && c.non_overlapping);
        if cover.is_some() != g.is_balanced() || !valid {
            failures.push(format!("{:?}", g.edges()));
        }
    }
    Outcome::from_failures(
        7,
        title,
        failures,
        format!("{total} strongly connected classes, {balanced} balanced"),
    )
}

pub fn lyapunov(log: &LyapunovLog) -> Outcome {
    let title = "Lyapunov values never increase and the saturated gradient is exact";
    let mut failures = Vec::new();
    if log.violations > 0 {
        failures.push(format!(
            "{} increasing steps, worst {:.1e}",
            log.violations, log.worst
        ));
    }
    if log.trajectories == 0 {
        failures.push("no Lyapunov trajectories recorded".into());
    }
    let mut r = rng(8);
    let mut worst_fd: f64 = 0.0;
    for k in 0..100 {
        let n = r.gen_range(2..=6);
        let m = r.gen_range(n - 1..=10);
        let g = generate::weakly_connected(&mut r, n, m);
        let m = g.edge_count();
        let c = random_mixed_constraints(&mut r, m);
        let c = flownet_core::graph::canonicalize_orientation(&g, &c).expect("valid");
        let (g, c) = (c.graph, c.constraints);
        let h = Hamiltonian::weighted(uniform_vec(&mut r, n, 0.5, 2.0)).expect("positive");
        let bar = (k % 2 == 0).then(|| uniform_vec(&mut r, m, -0.4, 0.4));
        let x = uniform_vec(&mut r, n, -3.0, 3.0);
        let xc = uniform_vec(&mut r, m, -3.0, 3.0);
        let (gx, gxc) = lyapunov_saturated_gradient(&x, &xc, &g, &h, &c, bar.as_deref());
        let f = |x: &[f64], xc: &[f64]| lyapunov_saturated(x, xc, &g, &h, &c, bar.as_deref());
        let eps = 1e-6;
        let mut check = |fd: f64, exact: f64| {
            let rel = (fd - exact).abs() / (1.0 + exact.abs());
            worst_fd = worst_fd.max(rel);
            rel <= 1e-6
        };
        let mut ok = true;
        for i in 0..n {
            let (mut p, mut q) = (x.clone(), x.clone());
            p[i] += eps;
            q[i] -= eps;
            ok &= check((f(&p, &xc) - f(&q, &xc)) / (2.0 * eps), gx[i]);
        }
        for j in 0..m {
            let (mut p, mut q) = (xc.clone(), xc.clone());
            p[j] += eps;
            q[j] -= eps;
            ok &= check((f(&x, &p) - f(&x, &q)) / (2.0 * eps), gxc[j]);
        }
        if !ok {
            failures.push(format!("gradient mismatch at point {k}"));
        }
    }
    Outcome::from_failures(
        8,
        title,
        failures,
        format!(
            "{} trajectories, {} steps, worst relative increase {:.1e}; gradient worst relative error {worst_fd:.1e}",
            log.trajectories, log.steps, log.worst
        ),
    )
}

fn ulp(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        f64::from_bits(1)
    } else {
        f64::from_bits(x.to_bits() + 1) - x
    }
}

pub fn saturation() -> Outcome {
    let title = "clamp, shift and orientation-flip identities of the saturation";
    let mut r = rng(9);
    let (mut clamp_bad, mut shift_bad, mut flip_bad) = (0, 0, 0);
    let mut worst_shift: f64 = 0.0;
    for _ in 0..10_000 {
        let a = -r.gen_range(0.0..3.0);
        let b = r.gen_range(0.01..3.0);
        let x = r.gen_range(-6.0..6.0);
        let eta = r.gen_range(-3.0..3.0);
        // clamp against an independent formulation, bit for bit
        let oracle = if x < a {
            a
        } else if x > b {
            b
        } else {
            x
        };
        clamp_bad += usize::from(sat1(x, a, b).to_bits() != oracle.to_bits());
        // sat(x - eta; a, b) + eta = sat(x; a + eta, b + eta)
        let lhs = sat1(x - eta, a, b) + eta;
        let rhs = sat1(x, a + eta, b + eta);
        let scale = x.abs().max(eta.abs()).max(a.abs()).max(b.abs());
        let err = (lhs - rhs).abs() / ulp(scale);
        worst_shift = worst_shift.max(err);
        shift_bad += usize::from(err > 1.0);
        // reversing an edge negates flow and bounds
        flip_bad += usize::from(sat1(-x, -b, -a).to_bits() != (-sat1(x, a, b)).to_bits());
    }
    let ok = clamp_bad == 0 && shift_bad == 0 && flip_bad == 0;
    Outcome::new(
        9,
        title,
        ok,
        format!(
            "10000 samples: clamp mismatches {clamp_bad}, shift > 1 ulp {shift_bad} (worst {worst_shift:.2} ulp), flip mismatches {flip_bad}"
        ),
    )
}

pub fn matching() -> Outcome {
    let title = "matching is feasible exactly when the net injection vanishes";
    let mut r = rng(10);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut feasible_count = 0;
    for i in 0..100 {
        let n = r.gen_range(2..=8);
        let m = r.gen_range(n - 1..=14);
        let g = generate::weakly_connected(&mut r, n, m);
        let vertices: Vec<usize> = (0..n).collect();
        let zero_sum = i % 2 == 0;
        let d = if zero_sum {
            zero_sum_disturbance(&mut r, &vertices)
        } else {
            let k = r.gen_range(1..=n);
            let terminals = (0..k)
                .map(|_| Terminal {
                    vertex: r.gen_range(0..n),
                    sign: if r.gen_bool(0.5) { 1 } else { -1 },
                })
                .collect();
            DisturbanceModel::new(terminals, uniform_vec(&mut r, k, 0.1, 1.0)).expect("valid")
        };
        let net: f64 = d.injection(n).iter().sum();
        let rate_scale: f64 = d.rates().iter().map(|v| v.abs()).sum();
        let vanishes = net.abs() <= 1e-12 * (1.0 + rate_scale);
        if !zero_sum && vanishes {
            continue;
        }
        let res = solve_matching(&g, Some(&d), None);
        feasible_count += usize::from(res.feasible);
        if res.feasible {
            worst = worst.max(res.residual);
        }
        if res.feasible != vanishes || (res.feasible && res.residual > 1e-10) {
            failures.push(format!(
                "case {i}: net {net:.1e} feasible {} residual {:.1e}",
                res.feasible, res.residual
            ));
        }
    }
    Outcome::from_failures(
        10,
        title,
        failures,
        format!("100 graphs, {feasible_count} feasible, worst feasible residual {worst:.1e}"),
    )
}

pub fn oracle() -> Outcome {
    let title = "constraint-aware strong connectivity matches orientation enumeration";
    let mut r = rng(11);
    let mut failures = Vec::new();
    let (mut cases, mut positive) = (0, 0);
    for g in generate::digraph_classes(4, 6) {
        if g.edge_count() == 0 {
            continue;
        }
        for _ in 0..4 {
            let c = random_mixed_constraints(&mut r, g.edge_count());
            let fast = strongly_connected_wrt_constraints(&g, &c).expect("dimensions agree");
            let slow = brute_force_scc_wrt_constraints(&g, &c).expect("small graph");
            cases += 1;
            positive += usize::from(fast);
            if fast != slow {
                failures.push(format!("{:?} with {:?}", g.edges(), c));
            }
        }
    }
    if cases < 500 {
        failures.push(format!("only {cases} cases"));
    }
    Outcome::from_failures(
        11,
        title,
        failures,
        format!("{cases} cases, {positive} strongly connected"),
    )
}

pub fn order() -> Outcome {
    let title = "RK4 shows fourth-order convergence on the preset";
    // [0, 2] lies before the first change of saturation state
    let (h, horizon) = (0.01, 2.0);
    let run_at = |step: f64| {
        let mut s = five_vertex_preset();
        s.integrator = IntegratorParams::new(step, horizon, 1);
        integrate(&s).expect("preset integrates")
    };
    let reference = run_at(h / 8.0);
    let status = |f: &[f64]| -> Vec<i8> {
        f.iter()
            .map(|&u| {
                if u <= 0.0 {
                    -1
                } else if u >= 1.0 {
                    1
                } else {
                    0
                }
            })
            .collect()
    };
    let first = status(&reference.flows[0]);
    let smooth = reference.flows.iter().all(|f| status(f) == first);
    let err = |t: &Trajectory| {
        t.final_x()
            .iter()
            .zip(reference.final_x())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max)
    };
    let (e1, e2) = (err(&run_at(h)), err(&run_at(h / 2.0)));
    let ratio = e1 / e2;
    Outcome::new(
        12,
        title,
        smooth && (8.0..=32.0).contains(&ratio),
        format!("error(h) = {e1:.2e}, error(h/2) = {e2:.2e}, ratio {ratio:.2} on [0, {horizon}], no switching {smooth}"),
    )
}
