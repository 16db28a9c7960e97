//! Command-line front end: run scenario documents, the demo catalog,
//! classical bounds, Fine feasibility checks and Leggett-Garg sweeps.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical failure.
//! Stdout carries reports; stderr carries diagnostics.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use tensionlab::demo::{demo_scenario, run_demo, scenario_report};
use tensionlab::doc::{parse_scenario_named, serialize_scenario};
use tensionlab::error::Error;
use tensionlab::joint::{fine_feasibility, JointFeasibility};
use tensionlab::report::{emit_report, format_sig, RunReport};
use tensionlab::builders::leggett_garg_sweep;
use tensionlab::scenario::{classical_bound, Scenario};

#[derive(Parser)]
#[command(
    name = "tensionlab",
    about = "Quantum correlations against classical oracles: projective measurement, \
             commutator tension metrics, and the CHSH / KCBS / Leggett-Garg / \
             Mermin-Peres / GHZ scenarios.",
    after_help = "Set TENSIONLAB_TOL to override the default 1e-9 violation tolerance."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario document and print its full report.
    Run {
        file: PathBuf,
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Run a built-in demo (chsh, kcbs, leggett-garg, mermin-peres, ghz,
    /// uncertainty, epr-choi).
    Demo {
        name: String,
        #[arg(long, default_value = "table")]
        format: String,
        /// Also write the demo's scenario document to this path.
        #[arg(long)]
        scenario_out: Option<PathBuf>,
    },
    /// Compute only the classical bound of a scenario document, with the
    /// bound-achieving deterministic strategy.
    Bound {
        file: PathBuf,
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Joint-distribution (Fine) feasibility of a scenario document's
    /// quantum correlators.
    Fine {
        file: PathBuf,
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Export inequality sweeps as CSV plot data.
    Sweep {
        #[command(subcommand)]
        target: SweepTarget,
    },
}

#[derive(Subcommand)]
enum SweepTarget {
    /// K(θ) over a θ grid.
    LeggettGarg {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
    },
}

fn violation_tol() -> Result<f64, Error> {
    match std::env::var("TENSIONLAB_TOL") {
        Ok(raw) => raw.parse::<f64>().map_err(|_| Error::Semantic {
            field: "TENSIONLAB_TOL".into(),
            message: format!("'{raw}' is not a number"),
        }),
        Err(_) => Ok(1e-9),
    }
}

fn load_scenario(path: &Path) -> Result<Scenario, Error> {
    let text = std::fs::read_to_string(path)?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("scenario");
    parse_scenario_named(&text, stem)
}

fn print_report(report: &RunReport, format: &str) -> Result<(), Error> {
    let format = format.parse()?;
    print!("{}", emit_report(report, format));
    Ok(())
}

fn cmd_run(file: &Path, format: &str, tol: f64) -> Result<(), Error> {
    let scenario = load_scenario(file)?;
    let report = scenario_report(&scenario, tol)?;
    print_report(&report, format)
}

fn cmd_demo(
    name: &str,
    format: &str,
    scenario_out: Option<&Path>,
    tol: f64,
) -> Result<(), Error> {
    let report = run_demo(name, tol)?;
    if let Some(path) = scenario_out {
        match demo_scenario(name)? {
            Some(scenario) => std::fs::write(path, serialize_scenario(&scenario))?,
            None => eprintln!("demo '{name}' has no scenario document"),
        }
    }
    print_report(&report, format)
}

fn cmd_bound(file: &Path, format: &str) -> Result<(), Error> {
    let scenario = load_scenario(file)?;
    let (bound, witness) = classical_bound(&scenario)?;
    let mut metrics = BTreeMap::new();
    for (name, value) in &witness.assignment {
        metrics.insert(format!("witness.{name}"), *value);
    }
    let report = RunReport {
        scenario_id: scenario.id().to_string(),
        quantum_value: None,
        classical_bound: Some(bound),
        lp_feasible: None,
        violation: None,
        tension: vec![],
        metrics,
    };
    print_report(&report, format)
}

fn cmd_fine(file: &Path, format: &str) -> Result<(), Error> {
    let scenario = load_scenario(file)?;
    let verdict = fine_feasibility(&scenario)?;
    let mut metrics = BTreeMap::new();
    let feasible = match &verdict {
        JointFeasibility::Feasible(witness) => {
            for (atom, probability) in witness.nonzero_atoms(1e-12) {
                metrics.insert(format!("p({atom})"), probability);
            }
            true
        }
        JointFeasibility::Infeasible => false,
    };
    let report = RunReport {
        scenario_id: scenario.id().to_string(),
        quantum_value: None,
        classical_bound: None,
        lp_feasible: Some(feasible),
        violation: None,
        tension: vec![],
        metrics,
    };
    print_report(&report, format)
}

fn cmd_sweep_leggett_garg(from: f64, to: f64, steps: usize) -> Result<(), Error> {
    let rows = leggett_garg_sweep(from, to, steps)?;
    println!("theta,k");
    for (theta, k) in rows {
        println!("{},{}", format_sig(theta), format_sig(k));
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    let tol = violation_tol()?;
    match &cli.command {
        Command::Run { file, format } => cmd_run(file, format, tol),
        Command::Demo {
            name,
            format,
            scenario_out,
        } => cmd_demo(name, format, scenario_out.as_deref(), tol),
        Command::Bound { file, format } => cmd_bound(file, format),
        Command::Fine { file, format } => cmd_fine(file, format),
        Command::Sweep { target } => match target {
            SweepTarget::LeggettGarg { from, to, steps } => {
                cmd_sweep_leggett_garg(*from, *to, *steps)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep the documented codes: usage problems are invalid input
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    let started = Instant::now();
    match dispatch(cli) {
        Ok(()) => {
            eprintln!("elapsed: {:.1} ms", started.elapsed().as_secs_f64() * 1e3);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
