//! Experiment driver: configs, Monte Carlo sweeps and CSV output.

pub mod config;
pub mod detect;
pub mod sweep;

use std::io::Write;

use serde::Serialize;

pub use config::{DetectionConfig, ExperimentConfig, NoiseDb, RobustBounds, SolveMode, Sweep, SweepVariable};
pub use detect::{detect_sim_command, detect_sim_rows, DetectionRow};
pub use sweep::{
    draw_channel, draw_outcomes, draw_problem, infeasible_everywhere, oracle_gap_report, run_sweep, solve_instance,
    DrawOutcome, GapStats, ResultRow,
};

/// Writes `rows` as CSV with a header line taken from the field names.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], writer: W) -> crate::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
