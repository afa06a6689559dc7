//! Load balancing of dynamical distribution networks.
//!
//! A network is a directed graph with a storage variable on every vertex and
//! a flow input on every edge. Flows are produced by a distributed PI
//! controller (one integrator state per edge), optionally clamped to per-edge
//! intervals, while constant unknown in/outflows enter at terminal vertices.
//!
//! This crate is `no_std` (it needs `alloc`) and holds everything that is
//! pure computation:
//!
//! - [`graph`]: incidence structure, connectivity predicates, orientation
//!   handling and strong connectivity with respect to flow constraints.
//! - [`cycles`]: cycle covers, both non-overlapping (Euler-style) and minimal.
//! - [`dynamics`]: Hamiltonians, the saturation function and the closed-loop
//!   vector fields.
//! - [`sim`]: fixed-step RK4 integration and trajectory recording.
//! - [`analysis`]: matching condition, permission sets, Lyapunov functions,
//!   consensus detection and convergence prediction.
//! - [`scenario`]: the simulation unit, the worked five-vertex preset and the
//!   non-consensus counterexample builder for unbalanced graphs.
//!
//! File formats, the CLI and plotting live in the `flownet` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod cycles;
pub mod dynamics;
mod error;
pub mod graph;
pub mod linalg;
pub mod lp;
pub mod scenario;
pub mod sim;

pub use error::{Error, Result};
