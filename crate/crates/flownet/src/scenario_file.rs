//! Scenario JSON files.
//!
//! ```json
//! {
//!   "name": "...",
//!   "graph": {"n": 3, "edges": [[0, 1], [1, 2], [2, 0]]},
//!   "constraints": {"lower": [...], "upper": [...]} | null,
//!   "hamiltonian": {"kind": "quadratic"} | {"kind": "weighted", "weights": [...]},
//!   "controller": {"kind": "P" | "PI", "gains": [...]} | {"kind": "PI_sat"},
//!   "disturbance": {"E": [[...], ...], "d": [...]} | null,
//!   "x0": [...], "xc0": [...],
//!   "integrator": {"step": 0.01, "horizon": 100.0, "stride": 10},
//!   "tolerances": {"steady": 1e-6, "consensus": 1e-4}
//! }
//! ```
//!
//! Vertices are 0-based. `tolerances` is optional. Edges with `u+ = 0`
//! are reversed on load.

use std::path::Path;

use flownet_core::dynamics::{ControllerSpec, DisturbanceModel, Hamiltonian};
use flownet_core::graph::{DirectedGraph, FlowConstraints};
use flownet_core::scenario::Scenario;
use flownet_core::sim::{IntegratorParams, Tolerances};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub graph: GraphDto,
    pub constraints: Option<ConstraintsDto>,
    pub hamiltonian: HamiltonianDto,
    pub controller: ControllerDto,
    pub disturbance: Option<DisturbanceDto>,
    pub x0: Vec<f64>,
    pub xc0: Vec<f64>,
    pub integrator: IntegratorDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDto {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintsDto {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum HamiltonianDto {
    Quadratic,
    Weighted { weights: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ControllerDto {
    P {
        gains: Vec<f64>,
    },
    PI {
        gains: Vec<f64>,
    },
    #[serde(rename = "PI_sat")]
    PiSat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisturbanceDto {
    #[serde(rename = "E")]
    pub e: Vec<Vec<f64>>,
    pub d: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorDto {
    pub step: f64,
    pub horizon: f64,
    pub stride: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesDto {
    pub steady: f64,
    pub consensus: f64,
}

fn field(name: &str) -> impl FnOnce(flownet_core::Error) -> Error + '_ {
    move |source| Error::Field {
        field: name.to_string(),
        source,
    }
}

impl ScenarioFile {
    /// Validated, canonically oriented scenario.
    pub fn to_scenario(&self) -> Result<Scenario> {
        let edges = self.graph.edges.iter().map(|&[t, h]| (t, h)).collect();
        let graph = DirectedGraph::new(self.graph.n, edges).map_err(field("graph"))?;
        let constraints = self
            .constraints
            .as_ref()
            .map(|c| FlowConstraints::new(c.lower.clone(), c.upper.clone()))
            .transpose()
            .map_err(field("constraints"))?;
        let hamiltonian = match &self.hamiltonian {
            HamiltonianDto::Quadratic => Hamiltonian::Quadratic,
            HamiltonianDto::Weighted { weights } => {
                Hamiltonian::weighted(weights.clone()).map_err(field("hamiltonian.weights"))?
            }
        };
        let controller = match (&self.controller, constraints) {
            (ControllerDto::P { gains }, None) => ControllerSpec::Proportional {
                gains: gains.clone(),
            },
            (ControllerDto::PI { gains }, None) => ControllerSpec::Pi {
                gains: gains.clone(),
            },
            (ControllerDto::PiSat, Some(constraints)) => {
                ControllerSpec::SaturatedPi { constraints }
            }
            (ControllerDto::PiSat, None) => {
                return Err(Error::schema(
                    "constraints",
                    "required by the PI_sat controller",
                ))
            }
            (_, Some(_)) => {
                return Err(Error::schema(
                    "constraints",
                    "only the PI_sat controller uses flow constraints; set to null",
                ))
            }
        };
        let disturbance = match &self.disturbance {
            None => None,
            Some(d) => {
                if d.e.len() != self.graph.n {
                    return Err(Error::schema(
                        "disturbance.E",
                        format!("expected {} rows, found {}", self.graph.n, d.e.len()),
                    ));
                }
                Some(
                    DisturbanceModel::from_matrix(&d.e, d.d.clone())
                        .map_err(field("disturbance"))?,
                )
            }
        };
        let tolerances = self
            .tolerances
            .as_ref()
            .map_or_else(Tolerances::default, |t| Tolerances {
                steady: t.steady,
                consensus: t.consensus,
            });
        let s = Scenario {
            name: self.name.clone(),
            graph,
            hamiltonian,
            controller,
            disturbance,
            x0: self.x0.clone(),
            xc0: self.xc0.clone(),
            integrator: IntegratorParams::new(
                self.integrator.step,
                self.integrator.horizon,
                self.integrator.stride,
            ),
            tolerances,
        }
        .canonicalized()?;
        s.validate()?;
        Ok(s)
    }

    pub fn from_scenario(s: &Scenario) -> Self {
        let n = s.graph.vertex_count();
        let (controller, constraints) = match &s.controller {
            ControllerSpec::Proportional { gains } => (
                ControllerDto::P {
                    gains: gains.clone(),
                },
                None,
            ),
            ControllerSpec::Pi { gains } => (
                ControllerDto::PI {
                    gains: gains.clone(),
                },
                None,
            ),
            ControllerSpec::SaturatedPi { constraints } => (
                ControllerDto::PiSat,
                Some(ConstraintsDto {
                    lower: constraints.lower().to_vec(),
                    upper: constraints.upper().to_vec(),
                }),
            ),
        };
        Self {
            name: s.name.clone(),
            graph: GraphDto {
                n,
                edges: s.graph.edges().iter().map(|&(t, h)| [t, h]).collect(),
            },
            constraints,
            hamiltonian: match &s.hamiltonian {
                Hamiltonian::Quadratic => HamiltonianDto::Quadratic,
                Hamiltonian::Weighted(w) => HamiltonianDto::Weighted { weights: w.clone() },
            },
            controller,
            disturbance: s.disturbance.as_ref().map(|d| DisturbanceDto {
                e: d.matrix(n),
                d: d.rates().to_vec(),
            }),
            x0: s.x0.clone(),
            xc0: s.xc0.clone(),
            integrator: IntegratorDto {
                step: s.integrator.step,
                horizon: s.integrator.horizon,
                stride: s.integrator.stride,
            },
            tolerances: (s.tolerances != Tolerances::default()).then_some(TolerancesDto {
                steady: s.tolerances.steady,
                consensus: s.tolerances.consensus,
            }),
        }
    }
}

pub fn parse_scenario(json: &str) -> Result<Scenario> {
    serde_json::from_str::<ScenarioFile>(json)?.to_scenario()
}

/// Pretty-printed JSON with a trailing newline.
pub fn scenario_to_json(s: &Scenario) -> String {
    let mut out = serde_json::to_string_pretty(&ScenarioFile::from_scenario(s))
        .expect("scenario DTOs always serialize");
    out.push('\n');
    out
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text)
}

pub fn save_scenario(s: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, scenario_to_json(s)).map_err(|e| Error::io(path, e))
}

/// Reads a bare `{"n": .., "edges": ..}` graph, or the graph of a full
/// scenario file.
pub fn parse_graph(json: &str) -> Result<DirectedGraph> {
    let value: serde_json::Value = serde_json::from_str(json)?;
    let dto: GraphDto = match value.get("graph") {
        Some(g) => serde_json::from_value(g.clone())?,
        None => serde_json::from_value(value)?,
    };
    let edges = dto.edges.iter().map(|&[t, h]| (t, h)).collect();
    DirectedGraph::new(dto.n, edges).map_err(field("graph"))
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<DirectedGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_graph(&text)
}
