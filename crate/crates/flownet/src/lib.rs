//! File formats, plotting, acceptance suites and the `flownet` command-line
//! tool on top of [`flownet_core`].
//!
//! - [`scenario_file`]: scenario JSON reading and writing.
//! - [`traj_csv`]: trajectory CSV output and parsing.
//! - [`plot`]: SVG line plots of `x(t)`.
//! - [`report`]: the JSON reports printed by the CLI.
//! - [`suites`]: random and exhaustive graph families and the acceptance
//!   criteria.

mod error;
pub mod plot;
pub mod report;
pub mod scenario_file;
pub mod suites;
pub mod traj_csv;

pub use error::{Error, Result};
pub use flownet_core as core;
