//! `steerlab`: evaluate steering criteria and regenerate figure data.
//!
//! Exit codes: 0 steerable (or success), 1 not steerable (or bound
//! violated), 2 input or I/O error, 3 no sign change in the threshold bracket.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use steerlab::criteria::{Bound, Scenario};
use steerlab::io::gap_report_json;
use steerlab::solvers::{self, parse_axes};
use steerlab::{Error, EtaScaling};

mod config;

#[derive(Parser)]
#[command(name = "steerlab", version, about = "Steering criteria under bounded measurement imprecision")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundArg {
    TraceNorm,
    Weighted,
}

impl From<BoundArg> for Bound {
    fn from(b: BoundArg) -> Self {
        match b {
            BoundArg::TraceNorm => Bound::TraceNorm,
            BoundArg::Weighted => Bound::Weighted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalingArg {
    Propagated,
    Unscaled,
}

impl From<ScalingArg> for EtaScaling {
    fn from(s: ScalingArg) -> Self {
        match s {
            ScalingArg::Propagated => EtaScaling::Propagated,
            ScalingArg::Unscaled => EtaScaling::Unscaled,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Asymmetric,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    AToB,
    BToA,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one scenario file and write its gap report
    Check {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Locate the critical mixing parameter of a state family
    Threshold {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long, default_value_t = 0.0)]
        xi: f64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "trace-norm")]
        bound: BoundArg,
        #[arg(long, value_enum, default_value = "propagated")]
        eta_scaling: ScalingArg,
    },
    /// Evaluate a scenario file on a grid, e.g. `theta:0:1.5:50,xi:0:1e-4:20`
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write plot data: 1 thresholds against xi, 2 GHZ theta-xi map, 3 gaps by dimension
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        n: u8,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value = "propagated")]
        eta_scaling: ScalingArg,
    },
    /// Monte-Carlo check of the tomography-coefficient error bound
    VerifyBound {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        xi: f64,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Bracketing { .. }) { 3 } else { 2 };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn read_config(path: &Path) -> Result<config::ScenarioConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    config::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn verdict(steerable: bool) -> u8 {
    if steerable {
        0
    } else {
        1
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Check { config, out } => {
            let cfg = read_config(&config)?;
            let report = cfg.scenario.report()?;
            write(&out, &(gap_report_json(&report) + "\n"))?;
            let basis = match cfg.basis {
                config::BasisChoice::GellMann => "gell_mann",
                config::BasisChoice::Pauli => "pauli",
            };
            println!(
                "{} basis={basis} seed={} gap={:.6e} steerable={}",
                report.scenario, cfg.seed, report.gap, report.steerable
            );
            Ok(verdict(report.steerable))
        }
        Command::Threshold {
            family: Family::Asymmetric,
            direction,
            xi,
            tol,
            out,
            bound,
            eta_scaling,
        } => {
            let scenario = match direction {
                Direction::AToB => Scenario::AToB,
                Direction::BToA => Scenario::BToA,
            };
            let result = solvers::asymmetric_threshold(scenario, bound.into(), xi, eta_scaling.into(), tol)?;
            write(&out, &(result.to_json() + "\n"))?;
            println!("{}*={:.6} evaluations={}", result.parameter, result.critical, result.evaluations);
            Ok(0)
        }
        Command::Sweep { config, grid, out } => {
            let cfg = read_config(&config)?;
            let axes = parse_axes(&grid)?;
            let result = solvers::sweep(&cfg.scenario, &axes)?;
            write(&out, &result.to_csv())?;
            println!("points={}", result.reports.len());
            Ok(0)
        }
        Command::Figure { n, out_dir, eta_scaling } => {
            fs::create_dir_all(&out_dir)
                .map_err(|e| Failure::input(format!("cannot create {}: {e}", out_dir.display())))?;
            let scaling = eta_scaling.into();
            match n {
                1 => write(&out_dir.join("fig1.csv"), &solvers::figure1(scaling)?.to_csv())?,
                2 => write(&out_dir.join("fig2.csv"), &solvers::figure2(scaling)?.to_csv())?,
                _ => {
                    let grids = solvers::figure3(scaling)?;
                    for (grid, name) in grids.iter().zip(["fig3a.csv", "fig3b.csv", "fig3c.csv"]) {
                        write(&out_dir.join(name), &grid.to_csv())?;
                    }
                }
            }
            Ok(0)
        }
        Command::VerifyBound {
            d,
            xi,
            samples,
            seed,
            out,
        } => {
            let summary = solvers::verify_coeff_bound::<f64>(d, xi, samples, seed)?;
            write(&out, &summary.to_csv())?;
            println!("violations={}", summary.violations);
            Ok(if summary.violations == 0 { 0 } else { 1 })
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("STEERLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::input(format!("STEERLAB_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::input(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli.command)) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
