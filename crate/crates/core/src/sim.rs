//! Fixed-step RK4 integration of a [`Scenario`] and trajectory recording.

use alloc::vec;
use alloc::vec::Vec;

use crate::analysis::{self, Lyapunov};
use crate::linalg::norm_inf;
use crate::scenario::Scenario;
use crate::{Error, Result};

/// Any `|x_i|` beyond this aborts the run.
pub const DIVERGENCE_BOUND: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorParams {
    /// Step size `h > 0`.
    pub step: f64,
    /// Final time `T_end >= 0`.
    pub horizon: f64,
    /// Record every `stride`-th step (the final state is always recorded).
    pub stride: usize,
}

impl Default for IntegratorParams {
    fn default() -> Self {
        Self {
            step: 0.01,
            horizon: 100.0,
            stride: 10,
        }
    }
}

impl IntegratorParams {
    pub fn new(step: f64, horizon: f64, stride: usize) -> Self {
        Self {
            step,
            horizon,
            stride,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::field("integrator.step", "must be finite and > 0"));
        }
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            return Err(Error::field(
                "integrator.horizon",
                "must be finite and >= 0",
            ));
        }
        if self.stride == 0 {
            return Err(Error::field("integrator.stride", "must be >= 1"));
        }
        Ok(())
    }
}

/// Thresholds for the terminal summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Bound on `|x'|_inf` (and the flow drift rate) for a steady state.
    pub steady: f64,
    /// Bound on the deviation of `dH(x)` from its mean.
    pub consensus: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            steady: 1e-6,
            consensus: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminalSummary {
    pub steady: bool,
    pub consensus: bool,
    /// Mean of `dH(x)` at the final state.
    pub alpha: f64,
    /// `|x'|_inf` at the final state.
    pub max_rate: f64,
    /// Largest deviation of `dH(x)` from `alpha`.
    pub spread: f64,
}

/// Sampled run. All per-sample vectors have the same length as `times`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub x: Vec<Vec<f64>>,
    pub xc: Vec<Vec<f64>>,
    /// Realized edge flows `u`.
    pub flows: Vec<Vec<f64>>,
    pub lyapunov: Option<Vec<f64>>,
    pub summary: TerminalSummary,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_x(&self) -> &[f64] {
        self.x.last().expect("trajectory has at least one sample")
    }

    pub fn final_xc(&self) -> &[f64] {
        self.xc.last().expect("trajectory has at least one sample")
    }

    pub fn final_flow(&self) -> &[f64] {
        self.flows
            .last()
            .expect("trajectory has at least one sample")
    }
}

/// Integrates with the Lyapunov function the analysis module considers
/// applicable (if any) recorded alongside.
pub fn integrate(s: &Scenario) -> Result<Trajectory> {
    let lyap = analysis::applicable_lyapunov(s)?;
    integrate_with(s, lyap.as_ref())
}

/// Classical RK4 over `[0, horizon]` with fixed step; a final shortened step
/// lands exactly on the horizon when it is not a multiple of the step.
pub fn integrate_with(s: &Scenario, lyap: Option<&Lyapunov>) -> Result<Trajectory> {
    s.validate()?;
    let p = s.integrator;
    let (n, m) = (s.graph.vertex_count(), s.graph.edge_count());
    let cl = s.closed_loop();
    let mut ws = cl.workspace();

    let dim = n + m;
    let mut y = Vec::with_capacity(dim);
    y.extend_from_slice(&s.x0);
    y.extend_from_slice(&s.xc0);
    let mut k = [
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
    ];
    let mut tmp = vec![0.0; dim];
    let mut flow = vec![0.0; m];

    let mut eval = |state: &[f64], out: &mut [f64], flow: &mut [f64]| {
        let (x, xc) = state.split_at(n);
        let (dx, dxc) = out.split_at_mut(n);
        cl.eval(x, xc, dx, dxc, flow, &mut ws);
    };

    let full_steps = libm::floor(p.horizon / p.step + 1e-9) as usize;
    let remainder = p.horizon - full_steps as f64 * p.step;
    let partial = remainder > 1e-9 * p.step;

    let mut traj = Trajectory {
        times: Vec::new(),
        x: Vec::new(),
        xc: Vec::new(),
        flows: Vec::new(),
        lyapunov: lyap.map(|_| Vec::new()),
        summary: TerminalSummary {
            steady: false,
            consensus: false,
            alpha: 0.0,
            max_rate: 0.0,
            spread: 0.0,
        },
    };
    let record = |t: f64, y: &[f64], flow: &[f64], traj: &mut Trajectory| {
        let (x, xc) = y.split_at(n);
        traj.times.push(t);
        traj.x.push(x.to_vec());
        traj.xc.push(xc.to_vec());
        traj.flows.push(flow.to_vec());
        if let (Some(l), Some(v)) = (lyap, traj.lyapunov.as_mut()) {
            v.push(l.evaluate(s, x, xc));
        }
    };

    eval(&y, &mut k[0], &mut flow);
    record(0.0, &y, &flow, &mut traj);

    let total = full_steps + usize::from(partial);
    for step in 1..=total {
        let (h, t) = if step <= full_steps {
            (p.step, step as f64 * p.step)
        } else {
            (remainder, p.horizon)
        };
        // k[0] holds f(y) from the previous iteration
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k[0][i];
        }
        eval(&tmp, &mut k[1], &mut flow);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k[1][i];
        }
        eval(&tmp, &mut k[2], &mut flow);
        for i in 0..dim {
            tmp[i] = y[i] + h * k[2][i];
        }
        eval(&tmp, &mut k[3], &mut flow);
        for i in 0..dim {
            y[i] += h / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
        }
        if y.iter().any(|v| !v.is_finite()) || norm_inf(&y[..n]) > DIVERGENCE_BOUND {
            return Err(Error::Divergence { time: t });
        }
        eval(&y, &mut k[0], &mut flow);
        if step % p.stride == 0 || step == total {
            record(t, &y, &flow, &mut traj);
        }
    }

    traj.summary = summarize(s, &traj)?;
    Ok(traj)
}

/// Terminal summary of a trajectory of `s` (used by [`integrate`], and for
/// re-summarizing trajectories read back from disk).
pub fn summarize(s: &Scenario, traj: &Trajectory) -> Result<TerminalSummary> {
    let rates = s.rates(traj.final_x(), traj.final_xc());
    let steady = detect_steady(s, traj, s.tolerances.steady)?;
    let (consensus, alpha) =
        analysis::consensus_check(traj.final_x(), &s.hamiltonian, s.tolerances.consensus);
    let grad = s.hamiltonian.gradient(traj.final_x());
    let spread = grad
        .iter()
        .fold(0.0f64, |acc, g| acc.max((g - alpha).abs()));
    Ok(TerminalSummary {
        steady,
        consensus,
        alpha,
        max_rate: norm_inf(&rates.dx),
        spread,
    })
}

/// Steady iff `|x'|_inf < tol_rate` at the final state (re-evaluated from
/// the vector field) and the realized flows drift slower than `tol_rate`
/// over the last recorded interval. `x_c` itself is not required to settle:
/// on saturated edges it may keep growing linearly at an equilibrium.
pub fn detect_steady(s: &Scenario, traj: &Trajectory, tol_rate: f64) -> Result<bool> {
    if traj.is_empty() {
        return Err(Error::field("trajectory", "no samples"));
    }
    let rates = s.rates(traj.final_x(), traj.final_xc());
    if norm_inf(&rates.dx) >= tol_rate {
        return Ok(false);
    }
    let k = traj.len();
    if k >= 2 {
        let dt = traj.times[k - 1] - traj.times[k - 2];
        let drift = traj.flows[k - 1]
            .iter()
            .zip(&traj.flows[k - 2])
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        if drift > tol_rate * dt {
            return Ok(false);
        }
    }
    Ok(true)
}
