//! Power-allocation optimizer.
//!
//! With `rho_s = 1` (full power for Bob outside covert slots) the warden sees
//! the same received power in both slot types, so covertness holds for any
//! threshold and the only decision variable left is the covert-slot split
//! `rho_cs`. The average rate in `rho_cs` is a difference of concave
//! functions. [`dc_solve`] maximizes it by successive convex approximation:
//! every convex `-log2(.)` term is replaced by its tangent at the current
//! iterate, and the resulting concave one-dimensional problem is solved by
//! golden-section search over the interval where the linearized constraints
//! hold. Because the tangents over-estimate the terms they replace, every
//! iterate satisfies the exact constraints, and the true objective never
//! decreases along the iteration.
//!
//! [`grid_oracle`] is an exhaustive search on the exact rates, kept as the
//! reference the iterative solver is measured against.

pub mod dc;
mod problem;
pub mod scalar;

use serde::{Deserialize, Serialize};

use crate::model::{LinkSnrs, PowerPolicy, QosRequirements, SlotModel};
use crate::rates::{log2, RateBreakdown, SicIndicator};

pub use problem::RateProblem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Stop once `|rho_cs(k+1) - rho_cs(k)|` falls to this value.
    pub vartheta: f64,
    pub max_iters: usize,
    pub init_rho_cs: f64,
    /// Points in the oracle's uniform `rho_cs` grid.
    pub oracle_grid: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            vartheta: 1e-6,
            max_iters: 100,
            init_rho_cs: 0.5,
            oracle_grid: 100_001,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> crate::Result<()> {
        use crate::Error;
        if !(self.vartheta > 0.0) {
            return Err(Error::invalid("vartheta", self.vartheta, "must be positive"));
        }
        if self.max_iters < 1 {
            return Err(Error::invalid("max_iters", self.max_iters as f64, "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.init_rho_cs) {
            return Err(Error::invalid("init_rho_cs", self.init_rho_cs, "must lie in [0, 1]"));
        }
        if self.oracle_grid < 2 {
            return Err(Error::invalid("oracle_grid", self.oracle_grid as f64, "must be at least 2"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Secure and covert streams together.
    Joint,
    /// Bob's channel is no better than the untrusted user's, so Bob's stream
    /// carries artificial noise and only Carol is served.
    ArtificialNoise,
    /// No allocation meets the rate requirements.
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub policy: PowerPolicy,
    pub rates: RateBreakdown,
    pub mode: Mode,
    pub iterations: usize,
    /// Exact objective at the starting point and after every iteration.
    pub objective_trace: Vec<f64>,
}

impl SolveResult {
    pub fn is_feasible(&self) -> bool {
        self.mode != Mode::Infeasible
    }

    pub fn rho_cs(&self) -> f64 {
        self.policy.rho_cs
    }

    pub fn average_rate(&self) -> f64 {
        self.rates.average_rate
    }

    /// Attaches the physical power budget to the (normalized) policy.
    pub fn with_total_power(mut self, total_power: f64) -> Self {
        self.policy.total_power = total_power;
        self
    }
}

/// Rate expression used by [`grid_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateFn {
    /// Interference-limited receivers, with the same artificial-noise
    /// fallback as [`dc_solve`].
    Standard,
    Sic(SicIndicator),
    ArtificialNoise,
}

impl RateFn {
    pub fn problem(self, snrs: &LinkSnrs, slots: &SlotModel, qos: &QosRequirements) -> RateProblem {
        match self {
            RateFn::Standard => RateProblem::standard(snrs, slots, qos),
            RateFn::Sic(a) => RateProblem::sic(snrs, slots, qos, a),
            RateFn::ArtificialNoise => RateProblem::artificial_noise(snrs.gamma_c, slots, qos),
        }
    }
}

/// Full power for Bob outside covert slots. Optimal whenever `gamma_b >
/// gamma_u`, because the secrecy rate is then increasing in `rho_s`. It also
/// equalizes the warden's received power across slot types.
pub fn fix_rho_s() -> f64 {
    1.0
}

/// Largest `rho_cs` whose covert rate `p_r1 log2(1 + SINR_C)` reaches
/// `r_cov_min`, from inverting the rate in closed form. `None` when even
/// `rho_cs = 0` falls short.
pub fn feasible_rho_cs_upper(gamma_c: f64, p_r1: f64, r_cov_min: f64) -> Option<f64> {
    if r_cov_min <= 0.0 {
        return Some(1.0);
    }
    if p_r1 <= 0.0 || gamma_c <= 0.0 || p_r1 * log2(1.0 + gamma_c) < r_cov_min {
        return None;
    }
    let upper = ((1.0 + gamma_c) * (-r_cov_min / p_r1).exp2() - 1.0) / gamma_c;
    Some(upper.clamp(0.0, 1.0))
}

/// `p_r1 log2(1 + rho_cs gamma_c)`: the convex-after-negation part of
/// Carol's rate that the SCA linearizes.
pub fn covert_interference_term(rho_cs: f64, gamma_c: f64, p_r1: f64) -> f64 {
    p_r1 * log2(1.0 + rho_cs * gamma_c)
}

pub fn covert_interference_gradient(rho_cs: f64, gamma_c: f64, p_r1: f64) -> f64 {
    p_r1 / std::f64::consts::LN_2 * gamma_c / (1.0 + rho_cs * gamma_c)
}

/// Tangent of [`covert_interference_term`] at `rho_prev`, evaluated at `rho_cs`.
pub fn covert_interference_tangent(rho_cs: f64, rho_prev: f64, gamma_c: f64, p_r1: f64) -> f64 {
    covert_interference_term(rho_prev, gamma_c, p_r1)
        + covert_interference_gradient(rho_prev, gamma_c, p_r1) * (rho_cs - rho_prev)
}

/// Concave surrogate of the joint average rate around `rho_prev`.
pub fn surrogate_objective(rho_cs: f64, rho_prev: f64, snrs: &LinkSnrs, slots: &SlotModel) -> f64 {
    RateProblem::standard(snrs, slots, &QosRequirements::vacuous()).surrogate(rho_cs, rho_prev)
}

/// One SCA iteration on the joint problem. `None` when the linearized
/// constraints admit no `rho_cs`.
pub fn sca_step(rho_prev: f64, snrs: &LinkSnrs, slots: &SlotModel, qos: &QosRequirements) -> Option<f64> {
    RateProblem::standard(snrs, slots, qos).sca_step(rho_prev)
}

/// Iterative power allocation for the joint secure/covert problem, with the
/// artificial-noise fallback when `gamma_b <= gamma_u`.
pub fn dc_solve(snrs: &LinkSnrs, slots: &SlotModel, qos: &QosRequirements, cfg: &SolverConfig) -> SolveResult {
    RateProblem::standard(snrs, slots, qos).solve(cfg)
}

/// Artificial-noise transmission. Carol's rate decreases in `rho_cs`, so the
/// optimum is `rho_cs = 0` whenever the covert requirement can be met.
pub fn an_solve(snrs: &LinkSnrs, slots: &SlotModel, qos: &QosRequirements, cfg: &SolverConfig) -> SolveResult {
    RateProblem::artificial_noise(snrs.gamma_c, slots, qos).solve(cfg)
}

pub fn sic_solve(
    snrs: &LinkSnrs,
    slots: &SlotModel,
    qos: &QosRequirements,
    a: SicIndicator,
    cfg: &SolverConfig,
) -> SolveResult {
    RateProblem::sic(snrs, slots, qos, a).solve(cfg)
}

pub fn grid_oracle(
    snrs: &LinkSnrs,
    slots: &SlotModel,
    qos: &QosRequirements,
    grid_points: usize,
    rate_fn: RateFn,
) -> SolveResult {
    rate_fn.problem(snrs, slots, qos).grid_oracle(grid_points)
}
