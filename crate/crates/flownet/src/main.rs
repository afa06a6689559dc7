use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use flownet::report::{analyze, matching_report, summary_report};
use flownet::scenario_file::{load_graph, scenario_to_json, ScenarioFile};
use flownet::suites::{run_named, SUITES};
use flownet::traj_csv::write_csv;
use flownet::{plot, Error};
use flownet_core::scenario::{build_counterexample, five_vertex_preset, Scenario};
use flownet_core::sim::integrate;
use serde::Serialize;

/// Load balancing on directed distribution networks under saturated PI control.
#[derive(Debug, Parser)]
#[command(name = "flownet", version)]
struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    /// Consensus tolerance for scenarios without a `tolerances` entry.
    #[arg(long, global = true, env = "FLOWNET_TOL_CONSENSUS")]
    tol_consensus: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Graph predicates, cycle cover, matching and the convergence verdict.
    Analyze { scenario: PathBuf },
    /// Integrate a scenario and print its terminal summary.
    Simulate {
        scenario: PathBuf,
        /// Write the sampled trajectory here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write an SVG plot of x(t) here.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Add the Lyapunov column to the CSV.
        #[arg(long)]
        lyapunov: bool,
    },
    /// Solve the matching condition; exits 1 when infeasible.
    Match { scenario: PathBuf },
    /// Build a non-consensus scenario for an unbalanced graph; exits 1 for
    /// balanced graphs.
    Counterexample {
        /// Graph JSON (`{"n", "edges"}`) or a scenario file.
        graph: PathBuf,
        /// Write the scenario here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run an acceptance suite; exits 1 on failure.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
    },
    /// Write the five-vertex preset scenario.
    Preset {
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn load(path: &Path, tol_consensus: Option<f64>) -> anyhow::Result<Scenario> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: ScenarioFile = serde_json::from_str(&text)
        .map_err(Error::from)
        .with_context(|| format!("in {}", path.display()))?;
    let mut s = file
        .to_scenario()
        .with_context(|| format!("in {}", path.display()))?;
    if let (None, Some(tol)) = (&file.tolerances, tol_consensus) {
        if !(tol > 0.0) {
            bail!("consensus tolerance must be > 0, got {tol}");
        }
        s.tolerances.consensus = tol;
    }
    Ok(s)
}

fn print_json<T: Serialize>(value: &T, pretty: bool) -> anyhow::Result<()> {
    let text = if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    };
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}")?;
    Ok(())
}

fn write_text(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<ExitCode> {
    let tol = cli.tol_consensus;
    match cli.command {
        Command::Analyze { scenario } => {
            let s = load(&scenario, tol)?;
            print_json(&analyze(&s)?, cli.pretty)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            scenario,
            csv,
            svg,
            lyapunov,
        } => {
            let s = load(&scenario, tol)?;
            let traj = integrate(&s)?;
            if let Some(p) = &csv {
                let file =
                    fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
                write_csv(&traj, lyapunov, std::io::BufWriter::new(file))?;
            }
            if let Some(p) = &svg {
                fs::write(p, plot::render_svg(&traj, &s.name))
                    .with_context(|| format!("writing {}", p.display()))?;
            }
            print_json(&summary_report(&s, &traj), cli.pretty)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Match { scenario } => {
            let s = load(&scenario, tol)?;
            let r = matching_report(&s)?;
            print_json(&r, cli.pretty)?;
            Ok(if r.feasible {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Counterexample { graph, output } => {
            let g = load_graph(&graph).with_context(|| format!("in {}", graph.display()))?;
            match build_counterexample(&g)? {
                Some(ce) => {
                    write_text(output.as_deref(), &scenario_to_json(&ce.scenario))?;
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    eprintln!("graph is balanced: every such scenario reaches consensus");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Verify { suite } => {
            let outcomes = run_named(&suite).expect("suite names are validated by clap");
            for o in &outcomes {
                println!("{o}");
            }
            Ok(if outcomes.iter().all(|o| o.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Preset { output } => {
            write_text(output.as_deref(), &scenario_to_json(&five_vertex_preset()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(2),
            };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
