use crate::model::{LinkSnrs, PowerPolicy, QosRequirements, SlotModel};
use crate::rates::{self, log2, pos, RateBreakdown, SicIndicator};
use crate::robust::{self, SnrBounds};

use super::dc::{DcExpr, Minorant};
use super::scalar::{golden_section_max, superlevel_interval};
use super::{Mode, SolveResult, SolverConfig};

/// Absolute slack on rate constraints, absorbing floating-point roundoff.
pub(crate) const FEAS_TOL: f64 = 1e-12;
/// Bracket width for the scalar searches inside one SCA step.
const SEARCH_TOL: f64 = 1e-10;
/// Resolution of the scan used to find a feasible starting point.
const START_SCAN: usize = 1000;

/// Which exact rate expression a problem optimizes. The oracle and the
/// reported rates go through this, never through the DC form.
#[derive(Debug, Clone, Copy, PartialEq)]
enum TrueRates {
    Standard(LinkSnrs),
    Sic(LinkSnrs, SicIndicator),
    ArtificialNoise(f64),
    WorstCase(SnrBounds),
    WorstCaseArtificialNoise(SnrBounds),
}

impl TrueRates {
    fn breakdown(&self, rho_cs: f64, slots: &SlotModel) -> RateBreakdown {
        let pol = PowerPolicy::normalized(1.0, rho_cs);
        match self {
            TrueRates::Standard(s) => rates::average_rate(&pol, slots, s),
            TrueRates::Sic(s, a) => rates::average_rate_sic(&pol, slots, s, *a),
            TrueRates::ArtificialNoise(gc) => rates::average_rate_an_breakdown(&pol, slots, *gc),
            TrueRates::WorstCase(b) => robust::robust_rate_breakdown(&pol, slots, b),
            TrueRates::WorstCaseArtificialNoise(b) => {
                let cov = slots.p_r1() * log2(1.0 + robust::carol_sinr_lb(rho_cs, b));
                RateBreakdown::assemble(slots, 0.0, 0.0, cov)
            }
        }
    }
}

/// Secure-stream part of a joint problem.
#[derive(Debug, Clone, PartialEq)]
struct SecureStream {
    /// Secrecy rate in slots without the covert message, at full power.
    sec0: f64,
    /// Secrecy rate in covert slots before the `[.]^+` clamp.
    sec1: DcExpr,
}

/// A one-dimensional power-allocation problem in `rho_cs`, with `rho_s`
/// fixed at one.
#[derive(Debug, Clone, PartialEq)]
pub struct RateProblem {
    slots: SlotModel,
    qos: QosRequirements,
    secure: Option<SecureStream>,
    /// Carol's `log2(1 + SINR)` in covert slots (not yet weighted by `p_r1`).
    covert: DcExpr,
    truth: TrueRates,
}

/// `log2(1 + rho g_own / (1 + (1 - rho) g_int))` for a stream whose share is
/// `rho`, seen with the other stream's share `1 - rho` as interference.
fn push_rho_stream(e: &mut DcExpr, sign: f64, g_own: f64, g_int: f64) {
    e.push(sign, 1.0 + g_int, g_own - g_int);
    e.push(-sign, 1.0 + g_int, -g_int);
}

/// `log2(1 + (1 - rho) g_own / (1 + rho g_int))`.
fn covert_stream(g_own: f64, g_int: f64) -> DcExpr {
    let mut e = DcExpr::default();
    e.push(1.0, 1.0 + g_own, g_int - g_own);
    e.push(-1.0, 1.0, g_int);
    e
}

/// Ψ1 secrecy rate `log2(1 + SINR_B) - log2(1 + SINR_U)` as a DC expression.
fn secrecy_psi1(bob_own: f64, bob_int: f64, eve_own: f64, eve_int: f64) -> DcExpr {
    let mut e = DcExpr::default();
    push_rho_stream(&mut e, 1.0, bob_own, bob_int);
    push_rho_stream(&mut e, -1.0, eve_own, eve_int);
    e
}

impl RateProblem {
    /// Secure plus covert transmission. Falls back to artificial noise when
    /// the untrusted user's channel is at least as good as Bob's.
    pub fn standard(snrs: &LinkSnrs, slots: &SlotModel, qos: &QosRequirements) -> Self {
        if snrs.gamma_b > snrs.gamma_u {
            Self::joint(snrs, slots, qos)
        } else {
            Self::artificial_noise(snrs.gamma_c, slots, qos)
        }
    }

    /// Secure plus covert transmission without the fallback. With
    /// `gamma_b <= gamma_u` the secrecy rate is zero for every split.
    pub fn joint(snrs: &LinkSnrs, slots: &SlotModel, qos: &QosRequirements) -> Self {
        let LinkSnrs { gamma_b, gamma_u, gamma_c, .. } = *snrs;
        Self {
            slots: *slots,
            qos: *qos,
            secure: Some(SecureStream {
                sec0: log2(1.0 + gamma_b) - log2(1.0 + gamma_u),
                sec1: secrecy_psi1(gamma_b, gamma_b, gamma_u, gamma_u),
            }),
            covert: covert_stream(gamma_c, gamma_c),
            truth: TrueRates::Standard(*snrs),
        }
    }

    /// Bob's data replaced by artificial noise: only the covert rate counts.
    pub fn artificial_noise(gamma_c: f64, slots: &SlotModel, qos: &QosRequirements) -> Self {
        Self {
            slots: *slots,
            qos: *qos,
            secure: None,
            covert: covert_stream(gamma_c, gamma_c),
            truth: TrueRates::ArtificialNoise(gamma_c),
        }
    }

    /// Bob and Carol run SIC with decoding order `a`.
    pub fn sic(snrs: &LinkSnrs, slots: &SlotModel, qos: &QosRequirements, a: SicIndicator) -> Self {
        if snrs.gamma_b > snrs.gamma_u {
            let LinkSnrs { gamma_b, gamma_u, gamma_c, .. } = *snrs;
            Self {
                slots: *slots,
                qos: *qos,
                secure: Some(SecureStream {
                    sec0: log2(1.0 + gamma_b) - log2(1.0 + gamma_u),
                    sec1: secrecy_psi1(gamma_b, a.a() * gamma_b, gamma_u, gamma_u),
                }),
                covert: covert_stream(gamma_c, (1.0 - a.a()) * gamma_c),
                truth: TrueRates::Sic(*snrs, a),
            }
        } else {
            Self::artificial_noise(snrs.gamma_c, slots, qos)
        }
    }

    /// Worst-case rates over bounded channel errors: every SNR is replaced by
    /// the bound that hurts the legitimate users most.
    pub fn worst_case(bounds: &SnrBounds, slots: &SlotModel, qos: &QosRequirements) -> Self {
        let covert = covert_stream(bounds.gamma_c_lb, bounds.gamma_c_ub);
        if bounds.gamma_b_lb > bounds.gamma_u_ub {
            let sec0 = log2(1.0 + bounds.gamma_b_lb) - log2(1.0 + bounds.gamma_u_ub);
            Self {
                slots: *slots,
                qos: *qos,
                secure: Some(SecureStream {
                    sec0,
                    sec1: secrecy_psi1(
                        bounds.gamma_b_lb,
                        bounds.gamma_b_ub,
                        bounds.gamma_u_ub,
                        bounds.gamma_u_lb,
                    ),
                }),
                covert,
                truth: TrueRates::WorstCase(*bounds),
            }
        } else {
            Self {
                slots: *slots,
                qos: *qos,
                secure: None,
                covert,
                truth: TrueRates::WorstCaseArtificialNoise(*bounds),
            }
        }
    }

    pub fn mode(&self) -> Mode {
        if self.secure.is_some() {
            Mode::Joint
        } else {
            Mode::ArtificialNoise
        }
    }

    pub fn slots(&self) -> &SlotModel {
        &self.slots
    }

    /// Exact rates at `rho_cs`.
    pub fn breakdown(&self, rho_cs: f64) -> RateBreakdown {
        self.truth.breakdown(rho_cs, &self.slots)
    }

    pub fn objective(&self, rho_cs: f64) -> f64 {
        self.breakdown(rho_cs).average_rate
    }

    /// Checks the secrecy (joint mode only) and covert rate constraints.
    pub fn is_feasible(&self, rho_cs: f64) -> bool {
        let r = self.breakdown(rho_cs);
        self.meets_qos(&r)
    }

    fn meets_qos(&self, r: &RateBreakdown) -> bool {
        let covert_ok = r.covert_rate >= self.qos.r_cov_min - FEAS_TOL;
        let secrecy_ok = self.secure.is_none() || r.secrecy_rate() >= self.qos.r_sec_min - FEAS_TOL;
        covert_ok && secrecy_ok
    }

    /// Rate expression value through the DC form, including the clamp.
    pub fn dc_objective(&self, rho_cs: f64) -> f64 {
        let p1 = self.slots.p_r1();
        let secure = self.secure.as_ref().map_or(0.0, |s| {
            self.slots.p_r0() * pos(s.sec0) + p1 * pos(s.sec1.value(rho_cs))
        });
        secure + p1 * self.covert.value(rho_cs)
    }

    fn secure_minorant(&self, at: f64) -> Option<(f64, Minorant)> {
        self.secure.as_ref().map(|s| {
            // Where the clamp is active the constant zero is the tight minorant.
            let m = if s.sec1.value(at) >= 0.0 {
                s.sec1.minorant(at)
            } else {
                Minorant::zero()
            };
            (pos(s.sec0), m)
        })
    }

    /// Concave surrogate of the objective, linearized at `at`.
    pub fn surrogate(&self, rho_cs: f64, at: f64) -> f64 {
        let p1 = self.slots.p_r1();
        let cov = self.covert.minorant(at);
        let secure = self
            .secure_minorant(at)
            .map_or(0.0, |(sec0, m)| self.slots.p_r0() * sec0 + p1 * m.value(rho_cs));
        secure + p1 * cov.value(rho_cs)
    }

    /// Interval of `rho_cs` satisfying the linearized constraints at `at`.
    pub fn surrogate_feasible_interval(&self, at: f64) -> Option<(f64, f64)> {
        let p1 = self.slots.p_r1();
        let cov = self.covert.minorant(at);
        let r_cov = self.qos.r_cov_min;
        // Rates are nonnegative, so a zero requirement is not a constraint.
        let (lo, hi) = if r_cov > 0.0 {
            superlevel_interval(|x| p1 * cov.value(x) - r_cov + FEAS_TOL, 0.0, 1.0, SEARCH_TOL * 1e-2)?
        } else {
            (0.0, 1.0)
        };
        match self.secure_minorant(at) {
            Some((sec0, m)) if self.qos.r_sec_min > 0.0 => {
                let p0 = self.slots.p_r0();
                let r_sec = self.qos.r_sec_min;
                superlevel_interval(
                    |x| p0 * sec0 + p1 * m.value(x) - r_sec + FEAS_TOL,
                    lo,
                    hi,
                    SEARCH_TOL * 1e-2,
                )
            }
            _ => Some((lo, hi)),
        }
    }

    /// One SCA iteration: maximize the surrogate over the linearized
    /// feasible set. `None` when that set is empty.
    pub fn sca_step(&self, at: f64) -> Option<f64> {
        let (lo, hi) = self.surrogate_feasible_interval(at)?;
        let (x, fx) = golden_section_max(|r| self.surrogate(r, at), lo, hi, SEARCH_TOL);
        // Never step to a point the surrogate rates below the current one.
        if (lo..=hi).contains(&at) && self.surrogate(at, at) >= fx {
            Some(at)
        } else {
            Some(x)
        }
    }

    /// Largest `rho_cs` meeting the exact covert constraint. Carol's rate is
    /// nonincreasing in `rho_cs`, so the feasible set is `[0, upper]`.
    pub fn covert_upper(&self) -> Option<f64> {
        let r_cov = self.qos.r_cov_min;
        let slack = |x: f64| self.breakdown(x).covert_rate - r_cov + FEAS_TOL;
        if slack(0.0) < 0.0 {
            return None;
        }
        if slack(1.0) >= 0.0 {
            return Some(1.0);
        }
        Some(super::scalar::bisect_boundary(slack, 1.0, 0.0, 1e-15))
    }

    fn feasible_start(&self, init: f64, covert_hi: f64) -> Option<f64> {
        let init = init.clamp(0.0, covert_hi);
        if self.is_feasible(init) {
            return Some(init);
        }
        (0..=START_SCAN)
            .map(|i| covert_hi * i as f64 / START_SCAN as f64)
            .filter(|&r| self.is_feasible(r))
            .min_by(|a, b| (a - init).abs().total_cmp(&(b - init).abs()))
    }

    fn result(&self, rho_cs: f64, iterations: usize, objective_trace: Vec<f64>) -> SolveResult {
        SolveResult {
            policy: PowerPolicy::normalized(1.0, rho_cs),
            rates: self.breakdown(rho_cs),
            mode: self.mode(),
            iterations,
            objective_trace,
        }
    }

    fn infeasible(&self) -> SolveResult {
        SolveResult {
            policy: PowerPolicy::normalized(1.0, 0.0),
            rates: RateBreakdown::zero(&self.slots),
            mode: Mode::Infeasible,
            iterations: 0,
            objective_trace: Vec::new(),
        }
    }

    /// Runs the SCA iteration from `cfg.init_rho_cs`.
    pub fn solve(&self, cfg: &SolverConfig) -> SolveResult {
        let Some(covert_hi) = self.covert_upper() else {
            return self.infeasible();
        };
        if self.secure.is_none() {
            // Carol's rate is the whole objective and it decreases in rho_cs.
            return self.result(0.0, 0, vec![self.objective(0.0)]);
        }
        let Some(mut rho) = self.feasible_start(cfg.init_rho_cs, covert_hi) else {
            return self.infeasible();
        };

        let mut trace = vec![self.objective(rho)];
        let mut iterations = 0;
        while iterations < cfg.max_iters {
            let Some(next) = self.sca_step(rho) else {
                break;
            };
            iterations += 1;
            let delta = (next - rho).abs();
            rho = next;
            trace.push(self.objective(rho));
            if delta <= cfg.vartheta {
                break;
            }
        }
        self.result(rho, iterations, trace)
    }

    /// Exhaustive search over a uniform grid of `grid_points` values of
    /// `rho_cs` on `[0, 1]` using the exact rates and constraints.
    pub fn grid_oracle(&self, grid_points: usize) -> SolveResult {
        assert!(grid_points >= 2, "oracle grid needs at least two points");
        let last = (grid_points - 1) as f64;
        let best = (0..grid_points)
            .map(|i| i as f64 / last)
            .filter_map(|rho| {
                let r = self.breakdown(rho);
                self.meets_qos(&r).then_some((rho, r.average_rate))
            })
            .fold(None, |best: Option<(f64, f64)>, cand| match best {
                Some(b) if b.1 >= cand.1 => Some(b),
                _ => Some(cand),
            });
        match best {
            Some((rho, value)) => self.result(rho, 0, vec![value]),
            None => self.infeasible(),
        }
    }
}
