//! Experiment configuration, read from a single JSON document.
//!
//! Fields ending in `_db` are in decibels. Every field has a default, so `{}`
//! is a valid config describing the baseline setup at `P = 3 dB`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{db_to_linear, ChannelRealization, NetworkGeometry, NoiseProfile, QosRequirements, SlotModel};
use crate::robust::UncertaintyBudget;
use crate::solver::SolverConfig;
use crate::{Error, Result};

/// Solution strategy applied to every draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMode {
    /// Secure and covert streams on every draw, even when the untrusted user
    /// out-hears Bob (such draws are infeasible unless `r_sec_min = 0`).
    Joint,
    /// Joint transmission, switching to artificial noise when `gamma_b <= gamma_u`.
    AnAuto,
    /// As `an-auto`, with SIC at Bob and Carol.
    Sic,
    /// As `an-auto`, on worst-case SNR bounds built from the budget.
    Robust,
}

impl SolveMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMode::Joint => "joint",
            SolveMode::AnAuto => "an-auto",
            SolveMode::Sic => "sic",
            SolveMode::Robust => "robust",
        }
    }
}

/// Interval model behind the worst-case SNRs in robust mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RobustBounds {
    /// `|h|^2` within `eps` of the estimate (see `robust::worst_case_snr_bounds`).
    #[default]
    Gain,
    /// Complex additive errors (see `robust::triangle_snr_bounds`).
    Triangle,
}

/// Parameter varied across the rows of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    DAb,
    DAc,
    DAu,
    DAw,
    PowerDb,
    Sigma2BDb,
    Sigma2CDb,
    Sigma2UDb,
    Sigma2WDb,
    EpsB,
    EpsC,
    EpsU,
    RSecMin,
    RCovMin,
    PR1,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::DAb => "d_ab",
            SweepVariable::DAc => "d_ac",
            SweepVariable::DAu => "d_au",
            SweepVariable::DAw => "d_aw",
            SweepVariable::PowerDb => "power_db",
            SweepVariable::Sigma2BDb => "sigma2_b_db",
            SweepVariable::Sigma2CDb => "sigma2_c_db",
            SweepVariable::Sigma2UDb => "sigma2_u_db",
            SweepVariable::Sigma2WDb => "sigma2_w_db",
            SweepVariable::EpsB => "eps_b",
            SweepVariable::EpsC => "eps_c",
            SweepVariable::EpsU => "eps_u",
            SweepVariable::RSecMin => "r_sec_min",
            SweepVariable::RCovMin => "r_cov_min",
            SweepVariable::PR1 => "p_r1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

/// Noise powers in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseDb {
    pub sigma2_b_db: f64,
    pub sigma2_c_db: f64,
    pub sigma2_u_db: f64,
    pub sigma2_w_db: f64,
}

impl Default for NoiseDb {
    fn default() -> Self {
        Self {
            sigma2_b_db: -33.0,
            sigma2_c_db: -33.0,
            sigma2_u_db: -30.0,
            sigma2_w_db: -30.0,
        }
    }
}

impl NoiseDb {
    pub fn to_linear(&self) -> Result<NoiseProfile> {
        NoiseProfile::from_db(self.sigma2_b_db, self.sigma2_c_db, self.sigma2_u_db, self.sigma2_w_db)
    }
}

/// Settings for the `detect-sim` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectionConfig {
    /// Slot lengths in symbols; one block of rows per entry.
    pub n: Vec<usize>,
    pub trials: usize,
    /// Bob's share outside covert slots.
    pub rho_s: f64,
    /// Thresholds. When absent, five points spanning `[sigma_w^2, sigma_w^2 + 3 psi1]`.
    pub thetas: Option<Vec<f64>>,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self {
            n: vec![5000],
            trials: 20_000,
            rho_s: 1.0,
            thetas: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: NetworkGeometry,
    pub noise: NoiseDb,
    pub power_db: f64,
    pub slots: SlotModel,
    pub qos: QosRequirements,
    pub budget: Option<UncertaintyBudget>,
    pub robust_bounds: RobustBounds,
    /// Channel gains (or estimates, in robust mode) for `solve`. When absent,
    /// `solve` uses the first Monte Carlo draw.
    pub channel: Option<ChannelRealization>,
    pub sweep: Option<Sweep>,
    pub draws: usize,
    pub seed: u64,
    pub mode: SolveMode,
    pub oracle_compare: bool,
    pub solver: SolverConfig,
    pub detection: DetectionConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            geometry: NetworkGeometry {
                d_ab: 5.0,
                d_ac: 5.0,
                d_au: 5.0,
                d_aw: 5.0,
                alpha: 4.0,
            },
            noise: NoiseDb::default(),
            power_db: 3.0,
            slots: SlotModel::from_covert_probability(0.5).expect("valid default"),
            qos: QosRequirements {
                r_sec_min: 0.5,
                r_cov_min: 0.1,
                epsilon: 0.1,
            },
            budget: None,
            robust_bounds: RobustBounds::Gain,
            channel: None,
            sweep: None,
            draws: 10_000,
            seed: 0,
            mode: SolveMode::AnAuto,
            oracle_compare: false,
            solver: SolverConfig::default(),
            detection: DetectionConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.noise.to_linear()?.validate()?;
        self.qos.validate()?;
        self.solver.validate()?;
        if !self.power_db.is_finite() {
            return Err(Error::invalid("power_db", self.power_db, "must be finite"));
        }
        if self.draws < 1 {
            return Err(Error::config("draws must be at least 1"));
        }
        if let Some(b) = &self.budget {
            b.validate()?;
        }
        if let Some(ch) = &self.channel {
            for g in [ch.g_ab, ch.g_ac, ch.g_au, ch.g_aw] {
                if !(g >= 0.0 && g.is_finite()) {
                    return Err(Error::invalid("channel gain", g, "must be finite and nonnegative"));
                }
            }
        }
        if self.mode == SolveMode::Robust && self.budget.is_none() {
            return Err(Error::config("mode \"robust\" needs a budget"));
        }
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                return Err(Error::config("sweep values must be nonempty"));
            }
            for &v in &s.values {
                self.at(s.variable, v)?;
            }
        }
        let d = &self.detection;
        if d.n.is_empty() || d.n.contains(&0) || d.trials == 0 {
            return Err(Error::config("detection needs nonempty n >= 1 and trials >= 1"));
        }
        if !(0.0..=1.0).contains(&d.rho_s) {
            return Err(Error::invalid("detection.rho_s", d.rho_s, "must lie in [0, 1]"));
        }
        Ok(())
    }

    pub fn power(&self) -> f64 {
        db_to_linear(self.power_db)
    }

    pub fn budget(&self) -> UncertaintyBudget {
        self.budget.unwrap_or_default()
    }

    /// Copy of the config with `variable` set to `value`.
    pub fn at(&self, variable: SweepVariable, value: f64) -> Result<Self> {
        let mut c = self.clone();
        let mut budget = c.budget();
        match variable {
            SweepVariable::DAb => c.geometry.d_ab = value,
            SweepVariable::DAc => c.geometry.d_ac = value,
            SweepVariable::DAu => c.geometry.d_au = value,
            SweepVariable::DAw => c.geometry.d_aw = value,
            SweepVariable::PowerDb => c.power_db = value,
            SweepVariable::Sigma2BDb => c.noise.sigma2_b_db = value,
            SweepVariable::Sigma2CDb => c.noise.sigma2_c_db = value,
            SweepVariable::Sigma2UDb => c.noise.sigma2_u_db = value,
            SweepVariable::Sigma2WDb => c.noise.sigma2_w_db = value,
            SweepVariable::EpsB => budget.eps_b = value,
            SweepVariable::EpsC => budget.eps_c = value,
            SweepVariable::EpsU => budget.eps_u = value,
            SweepVariable::RSecMin => c.qos.r_sec_min = value,
            SweepVariable::RCovMin => c.qos.r_cov_min = value,
            SweepVariable::PR1 => c.slots = SlotModel::from_covert_probability(value)?,
        }
        if matches!(variable, SweepVariable::EpsB | SweepVariable::EpsC | SweepVariable::EpsU) {
            c.budget = Some(budget);
        }
        c.sweep = None;
        c.geometry.validate()?;
        c.noise.to_linear()?;
        c.qos.validate()?;
        c.budget().validate()?;
        if !c.power_db.is_finite() {
            return Err(Error::invalid("power_db", c.power_db, "must be finite"));
        }
        Ok(c)
    }

    /// The sweep to run: the configured one, or a single point at the
    /// configured power.
    pub fn sweep_points(&self) -> (SweepVariable, Vec<f64>) {
        match &self.sweep {
            Some(s) => (s.variable, s.values.clone()),
            None => (SweepVariable::PowerDb, vec![self.power_db]),
        }
    }
}
