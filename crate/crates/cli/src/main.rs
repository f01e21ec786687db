use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use covertrate::harness::{self, ExperimentConfig};
use covertrate::Error;

const SWEEP_COLUMNS: &str =
    "sweep_var,sweep_value,mode,ergodic_rate,mean_rho_cs,infeasible_frac,oracle_gap_median,draws,seed";
const DETECT_COLUMNS: &str = "n,theta,p_fa_closed,p_md_closed,p_fa_emp,p_md_emp,trials,seed";

const EXIT_CONFIG: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser)]
#[command(name = "covertrate", version, about = "Secure and covert downlink power allocation experiments")]
#[command(after_help = format!(
    "CSV columns:\n  sweep, oracle-compare: {SWEEP_COLUMNS}\n  detect-sim:            {DETECT_COLUMNS}\n\n\
     Exit codes: 0 success, 2 config error, 3 infeasible for every draw"
))]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print the result as JSON.
    Solve(Common),
    /// Ergodic rates over a parameter sweep.
    Sweep(Common),
    /// Sweep with the exhaustive oracle, plus gap statistics on stderr.
    OracleCompare(Common),
    /// Radiometer error rates, closed form against simulation.
    DetectSim(Common),
}

#[derive(Args)]
struct Common {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the number of Monte Carlo draws.
    #[arg(long)]
    draws: Option<usize>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> covertrate::Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::from_path(&self.config).map_err(|e| match e {
            Error::Io(io) => Error::Config {
                line: 0,
                column: 0,
                message: format!("{}: {io}", self.config.display()),
            },
            other => other,
        })?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(draws) = self.draws {
            cfg.draws = draws;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> covertrate::Result<u8> {
    match cli.command {
        Command::Solve(c) => {
            let cfg = c.load()?;
            let result = harness::solve_instance(&cfg)?;
            let mut out = output(c.out.as_deref())?;
            writeln!(out, "{}", serde_json::to_string_pretty(&result).expect("result serializes"))?;
            Ok(if result.is_feasible() { 0 } else { EXIT_INFEASIBLE })
        }
        Command::Sweep(c) => sweep(&c, false),
        Command::OracleCompare(c) => sweep(&c, true),
        Command::DetectSim(c) => {
            let cfg = c.load()?;
            output(c.out.as_deref())?.write_all(harness::detect_sim_command(&cfg)?.as_bytes())?;
            Ok(0)
        }
    }
}

fn sweep(c: &Common, compare: bool) -> covertrate::Result<u8> {
    let mut cfg = c.load()?;
    cfg.oracle_compare |= compare;
    let rows = harness::run_sweep(&cfg)?;
    harness::write_csv(&rows, output(c.out.as_deref())?)?;
    if cfg.oracle_compare {
        for row in &rows {
            if let Some(g) = row.oracle_gap {
                eprintln!(
                    "{} = {}: gap median {:.4} mean {:.4} max {:.4} over {} draws",
                    row.sweep_var, row.sweep_value, g.median, g.mean, g.max, g.count
                );
            }
        }
    }
    Ok(if harness::infeasible_everywhere(&rows) { EXIT_INFEASIBLE } else { 0 })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                Error::Io(_) | Error::Csv(_) => 1,
                _ => EXIT_CONFIG,
            })
        }
    }
}
