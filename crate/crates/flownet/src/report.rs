//! JSON reports printed by the CLI.

use flownet_core::analysis::{
    adjust_into_permission_set, predict_convergence, solve_matching, PermissionSet, Verdict,
};
use flownet_core::cycles::minimal_cycle_cover;
use flownet_core::graph::strongly_connected_wrt_constraints;
use flownet_core::scenario::Scenario;
use flownet_core::sim::Trajectory;
use serde::Serialize;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverReport {
    pub k: usize,
    #[serde(rename = "T")]
    pub multiplicity: Vec<u32>,
    pub minimal: bool,
    pub non_overlapping: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalsReport {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchingReport {
    pub feasible: bool,
    pub residual: f64,
    pub xc_bar: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_permission_set: Option<bool>,
    /// A matching state inside the permission set, when one was sought.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permissible_xc_bar: Option<Option<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictReport {
    pub consensus_expected: Option<bool>,
    pub reason: &'static str,
}

impl From<&Verdict> for VerdictReport {
    fn from(v: &Verdict) -> Self {
        Self {
            consensus_expected: v.consensus_expected,
            reason: v.reason.as_str(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    pub weakly_connected: bool,
    pub strongly_connected: bool,
    pub balanced: bool,
    pub strongly_connected_wrt_constraints: Option<bool>,
    pub cycle_cover: Option<CoverReport>,
    pub permission_set: Option<IntervalsReport>,
    pub matching: MatchingReport,
    pub verdict: VerdictReport,
}

fn permission_set(s: &Scenario) -> Result<Option<PermissionSet>> {
    Ok(s.controller
        .constraints()
        .map(PermissionSet::new)
        .transpose()?)
}

pub fn matching_report(s: &Scenario) -> Result<MatchingReport> {
    let pset = permission_set(s)?;
    let res = solve_matching(&s.graph, s.disturbance.as_ref(), pset.as_ref());
    let permissible = match (&pset, res.feasible) {
        (Some(p), true) => Some(adjust_into_permission_set(
            &s.graph,
            s.disturbance.as_ref(),
            p,
        )?),
        _ => None,
    };
    Ok(MatchingReport {
        feasible: res.feasible,
        residual: res.residual,
        xc_bar: res.xc_bar,
        in_permission_set: res.in_permission_set,
        permissible_xc_bar: permissible,
    })
}

pub fn analyze(s: &Scenario) -> Result<AnalysisReport> {
    s.validate()?;
    let g = &s.graph;
    let strongly = g.is_strongly_connected();
    let cover = if strongly {
        let c = minimal_cycle_cover(g)?;
        Some(CoverReport {
            k: c.len(),
            multiplicity: c.multiplicity.clone(),
            minimal: c.minimal,
            non_overlapping: c.non_overlapping,
        })
    } else {
        None
    };
    let scc_wrt = s
        .controller
        .constraints()
        .map(|c| strongly_connected_wrt_constraints(g, c))
        .transpose()?;
    let pset = permission_set(s)?;
    let verdict = predict_convergence(s)?;
    Ok(AnalysisReport {
        name: s.name.clone(),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        weakly_connected: g.is_weakly_connected(),
        strongly_connected: strongly,
        balanced: g.is_balanced(),
        strongly_connected_wrt_constraints: scc_wrt,
        cycle_cover: cover,
        permission_set: pset.map(|p| IntervalsReport {
            lower: p.lower().to_vec(),
            upper: p.upper().to_vec(),
        }),
        matching: matching_report(s)?,
        verdict: (&verdict).into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryReport {
    pub name: String,
    pub samples: usize,
    pub final_time: f64,
    pub steady: bool,
    pub consensus: bool,
    pub alpha: f64,
    pub max_rate: f64,
    pub spread: f64,
    pub final_x: Vec<f64>,
    pub final_flow: Vec<f64>,
}

pub fn summary_report(s: &Scenario, traj: &Trajectory) -> SummaryReport {
    SummaryReport {
        name: s.name.clone(),
        samples: traj.len(),
        final_time: traj.times.last().copied().unwrap_or(0.0),
        steady: traj.summary.steady,
        consensus: traj.summary.consensus,
        alpha: traj.summary.alpha,
        max_rate: traj.summary.max_rate,
        spread: traj.summary.spread,
        final_x: traj.final_x().to_vec(),
        final_flow: traj.final_flow().to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use flownet_core::dynamics::ControllerSpec;
    use flownet_core::graph::{DirectedGraph, FlowConstraints};
    use flownet_core::scenario::five_vertex_preset;

    #[test]
    fn preset_report() {
        let r = analyze(&five_vertex_preset()).unwrap();
        assert!(!r.balanced && r.strongly_connected);
        assert_eq!(r.cycle_cover.as_ref().unwrap().k, 3);
        assert_eq!(r.verdict.consensus_expected, Some(false));
        assert_eq!(r.verdict.reason, "unbalanced");
        assert!(r.matching.feasible);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(
            json["cycle_cover"]["T"],
            serde_json::json!([1, 2, 3, 1, 1, 1, 1])
        );
    }

    #[test]
    fn triangle_report() {
        let mut s = five_vertex_preset();
        s.graph = DirectedGraph::cycle(3);
        s.controller = ControllerSpec::SaturatedPi {
            constraints: FlowConstraints::uniform(3, 0.0, 1.0).unwrap(),
        };
        s.disturbance = None;
        s.x0 = vec![1.0, 2.0, 3.0];
        s.xc0 = vec![0.0; 3];
        let r = analyze(&s).unwrap();
        assert!(r.balanced);
        assert_eq!(r.cycle_cover.unwrap().k, 1);
        assert_eq!(r.verdict.consensus_expected, Some(true));
    }
}
