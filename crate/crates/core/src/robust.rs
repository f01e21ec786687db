//! Robust variants: uncertain warden location and bounded channel errors.
//!
//! Alice knows each legitimate channel only up to an error `e` with
//! `|e|^2 <= eps`. Every SNR is replaced by an interval `[lb, ub]` and the
//! rate is evaluated with the bound that hurts the legitimate users most:
//! lower bounds in numerators of Bob and Carol, upper bounds in the
//! interference they suffer, and the reverse for the untrusted user.
//!
//! [`worst_case_snr_bounds`] widens the estimated gain by `eps` in each
//! direction, `|h|^2 in [|h_est|^2 - eps, |h_est|^2 + eps]`. That interval
//! contains every gain whose own error is at most `eps`. For a complex
//! additive error `h = h_est + e` it does not: `|h_est + e|^2` can reach
//! `(|h_est| + sqrt(eps))^2`. [`triangle_snr_bounds`] gives that wider,
//! always-valid interval.

use serde::{Deserialize, Serialize};

use crate::detection::{min_error_sum, psi_params};
use crate::model::{link_snrs, ChannelRealization, NetworkGeometry, NoiseProfile, PowerPolicy, QosRequirements, SlotModel};
use crate::rates::{log2, pos, RateBreakdown};
use crate::solver::{RateProblem, SolveResult, SolverConfig};
use crate::{Error, Result};

/// Error budgets: `eps_d` on the warden distance in meters, the rest on the
/// squared magnitude of each channel error.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct UncertaintyBudget {
    pub eps_d: f64,
    pub eps_b: f64,
    pub eps_c: f64,
    pub eps_u: f64,
}

impl UncertaintyBudget {
    pub fn channels(eps_b: f64, eps_c: f64, eps_u: f64) -> Self {
        Self { eps_d: 0.0, eps_b, eps_c, eps_u }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eps_d", self.eps_d), ("eps_b", self.eps_b), ("eps_c", self.eps_c), ("eps_u", self.eps_u)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, v, "must be finite and nonnegative"));
            }
        }
        Ok(())
    }
}

/// SNR intervals for Bob, Carol and the untrusted user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrBounds {
    pub gamma_b_lb: f64,
    pub gamma_b_ub: f64,
    pub gamma_c_lb: f64,
    pub gamma_c_ub: f64,
    pub gamma_u_lb: f64,
    pub gamma_u_ub: f64,
}

impl SnrBounds {
    /// Degenerate intervals at known SNRs.
    pub fn exact(b: f64, c: f64, u: f64) -> Self {
        Self {
            gamma_b_lb: b,
            gamma_b_ub: b,
            gamma_c_lb: c,
            gamma_c_ub: c,
            gamma_u_lb: u,
            gamma_u_ub: u,
        }
    }
}

fn bounds_from_gains(
    est: &ChannelRealization,
    geo: &NetworkGeometry,
    noise: &NoiseProfile,
    power: f64,
    widen: impl Fn(f64, f64) -> (f64, f64),
    budget: &UncertaintyBudget,
) -> SnrBounds {
    let (b_lo, b_hi) = widen(est.g_ab, budget.eps_b);
    let (c_lo, c_hi) = widen(est.g_ac, budget.eps_c);
    let (u_lo, u_hi) = widen(est.g_au, budget.eps_u);
    let gains = |b, c, u| ChannelRealization { g_ab: b, g_ac: c, g_au: u, g_aw: est.g_aw };
    let lo = link_snrs(geo, noise, power, &gains(b_lo, c_lo, u_lo));
    let hi = link_snrs(geo, noise, power, &gains(b_hi, c_hi, u_hi));
    SnrBounds {
        gamma_b_lb: lo.gamma_b,
        gamma_b_ub: hi.gamma_b,
        gamma_c_lb: lo.gamma_c,
        gamma_c_ub: hi.gamma_c,
        gamma_u_lb: lo.gamma_u,
        gamma_u_ub: hi.gamma_u,
    }
}

/// `lb = P max(g - eps, 0) / (d^alpha sigma^2)`, `ub = P (g + eps) / (d^alpha sigma^2)`
/// for each link, with `g` the estimated gain `|h_est|^2`.
pub fn worst_case_snr_bounds(
    est: &ChannelRealization,
    geo: &NetworkGeometry,
    noise: &NoiseProfile,
    power: f64,
    budget: &UncertaintyBudget,
) -> SnrBounds {
    bounds_from_gains(est, geo, noise, power, |g, eps| ((g - eps).max(0.0), g + eps), budget)
}

/// Bounds valid for any complex error `|e|^2 <= eps` added to an estimate
/// with `|h_est|^2 = g`: `(sqrt(g) -/+ sqrt(eps))^2`, the lower one clamped at 0.
pub fn triangle_snr_bounds(
    est: &ChannelRealization,
    geo: &NetworkGeometry,
    noise: &NoiseProfile,
    power: f64,
    budget: &UncertaintyBudget,
) -> SnrBounds {
    let widen = |g: f64, eps: f64| {
        let (m, r) = (g.sqrt(), eps.sqrt());
        if r == 0.0 {
            (g, g)
        } else {
            ((m - r).max(0.0).powi(2), (m + r).powi(2))
        }
    };
    bounds_from_gains(est, geo, noise, power, widen, budget)
}

/// `rho gamma_own / (1 + (1 - rho) gamma_int)`.
fn bob_like_sinr(rho_cs: f64, gamma_own: f64, gamma_int: f64) -> f64 {
    rho_cs * gamma_own / (1.0 + (1.0 - rho_cs) * gamma_int)
}

/// Carol's worst-case covert-slot SINR.
pub(crate) fn carol_sinr_lb(rho_cs: f64, b: &SnrBounds) -> f64 {
    (1.0 - rho_cs) * b.gamma_c_lb / (1.0 + rho_cs * b.gamma_c_ub)
}

pub(crate) fn robust_rate_breakdown(pol: &PowerPolicy, slots: &SlotModel, b: &SnrBounds) -> RateBreakdown {
    let sec0 = pos(log2(1.0 + pol.rho_s * b.gamma_b_lb) - log2(1.0 + pol.rho_s * b.gamma_u_ub));
    let sec1 = pos(
        log2(1.0 + bob_like_sinr(pol.rho_cs, b.gamma_b_lb, b.gamma_b_ub))
            - log2(1.0 + bob_like_sinr(pol.rho_cs, b.gamma_u_ub, b.gamma_u_lb)),
    );
    let cov = slots.p_r1() * log2(1.0 + carol_sinr_lb(pol.rho_cs, b));
    RateBreakdown::assemble(slots, sec0, sec1, cov)
}

/// Lower bound on the average rate over every channel inside `bounds`.
pub fn robust_average_rate_lb(pol: &PowerPolicy, slots: &SlotModel, bounds: &SnrBounds) -> f64 {
    robust_rate_breakdown(pol, slots, bounds).average_rate
}

/// Maximizes the worst-case rate and constraints for given SNR intervals.
pub fn robust_solve_bounds(
    bounds: &SnrBounds,
    slots: &SlotModel,
    qos: &QosRequirements,
    cfg: &SolverConfig,
) -> SolveResult {
    RateProblem::worst_case(bounds, slots, qos).solve(cfg)
}

/// Worst-case power allocation from channel estimates and error budgets,
/// using [`worst_case_snr_bounds`]. `rho_s = 1` keeps the covertness
/// constraint independent of the warden location, so `eps_d` does not enter.
#[allow(clippy::too_many_arguments)]
pub fn robust_solve(
    est: &ChannelRealization,
    geo: &NetworkGeometry,
    noise: &NoiseProfile,
    power: f64,
    slots: &SlotModel,
    qos: &QosRequirements,
    budget: &UncertaintyBudget,
    cfg: &SolverConfig,
) -> SolveResult {
    let bounds = worst_case_snr_bounds(est, geo, noise, power, budget);
    robust_solve_bounds(&bounds, slots, qos, cfg).with_total_power(power)
}

/// Warden's best error sum over the threshold and over distances in
/// `[d_aw_est - eps_d, d_aw_est + eps_d]`.
///
/// The error sum is monotone in the distance, so the two extremes suffice.
/// Scaling both powers by the same path loss leaves the minimum unchanged,
/// so in this model the two extremes agree.
pub fn worst_case_min_error_sum(
    pol: &PowerPolicy,
    d_aw_est: f64,
    eps_d: f64,
    power: f64,
    alpha: f64,
    sigma2_w: f64,
) -> f64 {
    let pol = PowerPolicy { total_power: power, ..*pol };
    [(d_aw_est - eps_d).max(f64::EPSILON), d_aw_est + eps_d]
        .into_iter()
        .map(|d| min_error_sum(sigma2_w, psi_params(&pol, d, alpha)).min_error_sum)
        .fold(f64::INFINITY, f64::min)
}

/// Covertness under an uncertain warden location.
pub fn robust_covertness(
    pol: &PowerPolicy,
    d_aw_est: f64,
    eps_d: f64,
    power: f64,
    alpha: f64,
    sigma2_w: f64,
    epsilon: f64,
) -> bool {
    worst_case_min_error_sum(pol, d_aw_est, eps_d, power, alpha, sigma2_w) >= 1.0 - epsilon
}
