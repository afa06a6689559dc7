//! The acceptance criteria as runnable suites, plus a conservation check
//! over the shipped scenario files.

use std::fmt;

use flownet_core::dynamics::ControllerSpec;

use crate::scenario_file::parse_scenario;

pub mod criteria;
pub mod generate;

pub use criteria::LyapunovLog;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(id: u8, title: &'static str, passed: bool, detail: String) -> Self {
        Self {
            id,
            title,
            passed,
            detail,
        }
    }

    fn fail(id: u8, title: &'static str, detail: String) -> Self {
        Self::new(id, title, false, detail)
    }

    /// Passes iff `failures` is empty; the first few failures are appended
    /// to `summary`.
    fn from_failures(id: u8, title: &'static str, failures: Vec<String>, summary: String) -> Self {
        if failures.is_empty() {
            return Self::new(id, title, true, summary);
        }
        let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
        Self::new(
            id,
            title,
            false,
            format!(
                "{summary}; {} failures: {}",
                failures.len(),
                shown.join(" | ")
            ),
        )
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        if self.id == 0 {
            write!(f, "[{tag}] {}: {}", self.title, self.detail)
        } else {
            write!(
                f,
                "[{tag}] criterion {:>2} {}: {}",
                self.id, self.title, self.detail
            )
        }
    }
}

/// Scenario files bundled with the crate, as `(file name, contents)`.
pub const SHIPPED: &[(&str, &str)] = &[
    (
        "five_vertex.json",
        include_str!("../../scenarios/five_vertex.json"),
    ),
    (
        "triangle.json",
        include_str!("../../scenarios/triangle.json"),
    ),
    (
        "bidirectional.json",
        include_str!("../../scenarios/bidirectional.json"),
    ),
    (
        "disconnected.json",
        include_str!("../../scenarios/disconnected.json"),
    ),
    (
        "blocked_pair.json",
        include_str!("../../scenarios/blocked_pair.json"),
    ),
    ("mixed.json", include_str!("../../scenarios/mixed.json")),
];

/// `|1^T x(t) - 1^T x(0) - t 1^T E d| <= 1e-6 (1 + |1^T x(0)|)` along every
/// shipped PI or saturated-PI scenario.
pub fn conservation() -> Outcome {
    let title = "total storage follows the net injection on shipped scenarios";
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for (file, text) in SHIPPED {
        let s = match parse_scenario(text) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("{file}: {e}"));
                continue;
            }
        };
        if matches!(s.controller, ControllerSpec::Proportional { .. }) {
            continue;
        }
        let traj = match flownet_core::sim::integrate(&s) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("{file}: {e}"));
                continue;
            }
        };
        checked += 1;
        let total0: f64 = s.x0.iter().sum();
        let net: f64 = s.injection().iter().sum();
        for (t, x) in traj.times.iter().zip(&traj.x) {
            let dev = (x.iter().sum::<f64>() - total0 - t * net).abs() / (1.0 + total0.abs());
            worst = worst.max(dev);
            if dev > 1e-6 {
                failures.push(format!("{file}: deviation {dev:.1e} at t = {t}"));
                break;
            }
        }
    }
    Outcome::from_failures(
        0,
        title,
        failures,
        format!("{checked} scenarios, worst relative deviation {worst:.1e}"),
    )
}

/// Suite names accepted by [`run_named`], in criterion order.
pub const SUITES: &[&str] = &[
    "preset",
    "pi-consensus",
    "constrained",
    "bidirectional",
    "balanced",
    "counterexample",
    "cycle-cover",
    "lyapunov",
    "saturation",
    "matching",
    "oracle",
    "order",
    "conservation",
    "all",
];

/// All twelve criteria. Criterion 8 uses the trajectories of 1-6.
pub fn run_all() -> Vec<Outcome> {
    let mut log = LyapunovLog::default();
    let mut out = vec![
        criteria::preset(&mut log),
        criteria::pi_consensus(&mut log),
        criteria::constrained(&mut log),
        criteria::bidirectional(&mut log),
        criteria::balanced(&mut log),
        criteria::counterexample(&mut log),
        criteria::cycle_cover(),
    ];
    out.push(criteria::lyapunov(&log));
    out.push(criteria::saturation());
    out.push(criteria::matching());
    out.push(criteria::oracle());
    out.push(criteria::order());
    out
}

/// Runs one suite by name; `None` for an unknown name.
pub fn run_named(name: &str) -> Option<Vec<Outcome>> {
    let mut log = LyapunovLog::default();
    let single = |o: Outcome| Some(vec![o]);
    match name {
        "preset" => single(criteria::preset(&mut log)),
        "pi-consensus" => single(criteria::pi_consensus(&mut log)),
        "constrained" => single(criteria::constrained(&mut log)),
        "bidirectional" => single(criteria::bidirectional(&mut log)),
        "balanced" => single(criteria::balanced(&mut log)),
        "counterexample" => single(criteria::counterexample(&mut log)),
        "cycle-cover" => single(criteria::cycle_cover()),
        "lyapunov" => {
            criteria::preset(&mut log);
            criteria::pi_consensus(&mut log);
            criteria::constrained(&mut log);
            criteria::bidirectional(&mut log);
            criteria::balanced(&mut log);
            criteria::counterexample(&mut log);
            single(criteria::lyapunov(&log))
        }
        "saturation" => single(criteria::saturation()),
        "matching" => single(criteria::matching()),
        "oracle" => single(criteria::oracle()),
        "order" => single(criteria::order()),
        "conservation" => single(conservation()),
        "all" => {
            let mut v = run_all();
            v.push(conservation());
            Some(v)
        }
        _ => None,
    }
}
