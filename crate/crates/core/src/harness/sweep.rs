//! Monte Carlo sweeps over channel draws.
//!
//! Draw `i` takes its channel from a ChaCha8 generator seeded with the config
//! seed on stream `i`. The same draws are reused at every sweep value, and
//! the per-draw results are reduced in index order, so the output does not
//! depend on the thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, RobustBounds, SolveMode};
use crate::model::{link_snrs, sample_channel, ChannelRealization};
use crate::rates::sic_indicator;
use crate::robust::{triangle_snr_bounds, worst_case_snr_bounds};
use crate::solver::{RateProblem, SolveResult};
use crate::{Error, Result};

/// Channel realization of draw `index`.
pub fn draw_channel(seed: u64, index: u64) -> ChannelRealization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    sample_channel(&mut rng)
}

/// The optimization problem a draw poses under the config's mode.
pub fn draw_problem(cfg: &ExperimentConfig, ch: &ChannelRealization) -> Result<RateProblem> {
    let noise = cfg.noise.to_linear()?;
    let geo = &cfg.geometry;
    let power = cfg.power();
    let snrs = link_snrs(geo, &noise, power, ch);
    Ok(match cfg.mode {
        SolveMode::Joint => RateProblem::joint(&snrs, &cfg.slots, &cfg.qos),
        SolveMode::AnAuto => RateProblem::standard(&snrs, &cfg.slots, &cfg.qos),
        SolveMode::Sic => RateProblem::sic(&snrs, &cfg.slots, &cfg.qos, sic_indicator(geo, ch)),
        SolveMode::Robust => {
            let bounds = match cfg.robust_bounds {
                RobustBounds::Gain => worst_case_snr_bounds(ch, geo, &noise, power, &cfg.budget()),
                RobustBounds::Triangle => triangle_snr_bounds(ch, geo, &noise, power, &cfg.budget()),
            };
            RateProblem::worst_case(&bounds, &cfg.slots, &cfg.qos)
        }
    })
}

/// Solves a single instance: the configured channel, or draw 0.
pub fn solve_instance(cfg: &ExperimentConfig) -> Result<SolveResult> {
    let ch = cfg.channel.unwrap_or_else(|| draw_channel(cfg.seed, 0));
    Ok(draw_problem(cfg, &ch)?.solve(&cfg.solver).with_total_power(cfg.power()))
}

/// Result of one draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DrawOutcome {
    pub feasible: bool,
    /// Achieved average rate (zero when infeasible).
    pub rate: f64,
    pub rho_cs: f64,
    /// Grid-oracle rate, when requested and the oracle found a feasible point.
    pub oracle_rate: Option<f64>,
}

impl DrawOutcome {
    /// `(oracle - sca) / oracle`, when the oracle found a positive rate.
    pub fn oracle_gap(&self) -> Option<f64> {
        self.oracle_rate.filter(|&o| o > 0.0).map(|o| (o - self.rate) / o)
    }
}

/// Solves every draw at one configuration, in draw order.
pub fn draw_outcomes(cfg: &ExperimentConfig) -> Result<Vec<DrawOutcome>> {
    cfg.validate()?;
    (0..cfg.draws as u64)
        .into_par_iter()
        .map(|i| {
            let ch = draw_channel(cfg.seed, i);
            let problem = draw_problem(cfg, &ch)?;
            let r = problem.solve(&cfg.solver);
            let oracle_rate = if cfg.oracle_compare {
                let o = problem.grid_oracle(cfg.solver.oracle_grid);
                o.is_feasible().then_some(o.average_rate())
            } else {
                None
            };
            Ok(DrawOutcome {
                feasible: r.is_feasible(),
                rate: r.average_rate(),
                rho_cs: r.rho_cs(),
                oracle_rate,
            })
        })
        .collect()
}

/// Sum by recursive halving, in index order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        xs.iter().sum()
    } else {
        let (a, b) = xs.split_at(xs.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| pairwise_sum(xs) / xs.len() as f64)
}

fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

/// Relative optimality gap of the iterative solver against the grid oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapStats {
    pub median: f64,
    pub mean: f64,
    pub max: f64,
    /// Draws with a feasible, positive-rate oracle solution.
    pub count: usize,
    /// Draws where the oracle was feasible but the iterative solver was not.
    pub missed_feasible: usize,
}

impl GapStats {
    pub fn from_outcomes(outcomes: &[DrawOutcome]) -> Option<Self> {
        let gaps: Vec<f64> = outcomes.iter().filter_map(DrawOutcome::oracle_gap).collect();
        Some(Self {
            median: median(&gaps)?,
            mean: mean(&gaps)?,
            max: gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            count: gaps.len(),
            missed_feasible: outcomes.iter().filter(|o| o.oracle_rate.is_some() && !o.feasible).count(),
        })
    }
}

/// One CSV row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub sweep_var: &'static str,
    pub sweep_value: f64,
    pub mode: &'static str,
    /// Mean average rate over feasible draws.
    pub ergodic_rate: f64,
    /// Mean `rho_cs` over feasible draws.
    pub mean_rho_cs: f64,
    pub infeasible_frac: f64,
    pub oracle_gap_median: Option<f64>,
    pub draws: usize,
    pub seed: u64,
    /// Mean over all draws with infeasible draws counted as rate zero.
    #[serde(skip)]
    pub outage_rate: f64,
    #[serde(skip)]
    pub oracle_gap: Option<GapStats>,
}

impl ResultRow {
    pub fn rate_with_outage(&self) -> f64 {
        self.outage_rate
    }
}

fn summarize(cfg: &ExperimentConfig, sweep_var: &'static str, sweep_value: f64, outcomes: &[DrawOutcome]) -> ResultRow {
    let feasible: Vec<&DrawOutcome> = outcomes.iter().filter(|o| o.feasible).collect();
    let rates: Vec<f64> = feasible.iter().map(|o| o.rate).collect();
    let rhos: Vec<f64> = feasible.iter().map(|o| o.rho_cs).collect();
    let all_rates: Vec<f64> = outcomes.iter().map(|o| if o.feasible { o.rate } else { 0.0 }).collect();
    let oracle_gap = GapStats::from_outcomes(outcomes);
    ResultRow {
        sweep_var,
        sweep_value,
        mode: cfg.mode.as_str(),
        ergodic_rate: mean(&rates).unwrap_or(0.0),
        mean_rho_cs: mean(&rhos).unwrap_or(0.0),
        infeasible_frac: (outcomes.len() - feasible.len()) as f64 / outcomes.len() as f64,
        oracle_gap_median: oracle_gap.map(|g| g.median),
        draws: outcomes.len(),
        seed: cfg.seed,
        outage_rate: mean(&all_rates).unwrap_or(0.0),
        oracle_gap,
    }
}

/// One row per sweep value.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let (var, values) = cfg.sweep_points();
    values
        .iter()
        .map(|&v| {
            let point = cfg.at(var, v)?;
            Ok(summarize(&point, var.as_str(), v, &draw_outcomes(&point)?))
        })
        .collect()
}

/// Oracle-gap statistics per sweep value, with the oracle comparison forced on.
pub fn oracle_gap_report(cfg: &ExperimentConfig) -> Result<Vec<(f64, GapStats)>> {
    let cfg = ExperimentConfig { oracle_compare: true, ..cfg.clone() };
    run_sweep(&cfg)?
        .into_iter()
        .map(|row| {
            let gap = row
                .oracle_gap
                .ok_or_else(|| Error::config(format!("no feasible oracle solution at {} = {}", row.sweep_var, row.sweep_value)))?;
            Ok((row.sweep_value, gap))
        })
        .collect()
}

/// True when no draw at any sweep value was feasible.
pub fn infeasible_everywhere(rows: &[ResultRow]) -> bool {
    rows.iter().all(|r| r.infeasible_frac >= 1.0)
}
