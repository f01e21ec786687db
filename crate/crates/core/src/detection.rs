//! Warden-side radiometer analysis.
//!
//! The warden averages received energy over a slot of `n` symbols and
//! declares a covert transmission when the average exceeds a threshold
//! `theta`. As `n` grows the average converges to `sigma_w^2 + S`, where `S`
//! is the received signal power. `S` is exponential with mean `psi0` in
//! slots without the covert message and `psi1` in slots with it. This gives
//! closed forms for the false-alarm and missed-detection probabilities.
//!
//! [`simulate_detection`] runs the finite-`n` radiometer symbol by symbol so
//! the asymptotic closed forms can be checked.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::{NetworkGeometry, NoiseProfile, PowerPolicy};

/// Mean warden-received signal power without (`psi0`) and with (`psi1`)
/// the covert message.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiParams {
    pub psi0: f64,
    pub psi1: f64,
}

/// Detection error probabilities at one threshold, together with the
/// warden's best threshold for the same `PsiParams`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub theta: f64,
    pub p_fa: f64,
    pub p_md: f64,
    pub error_sum: f64,
    pub theta_star: f64,
    pub min_error_sum: f64,
}

impl DetectionReport {
    /// Report at an arbitrary threshold.
    pub fn at(theta: f64, sigma2_w: f64, psi: PsiParams) -> Self {
        let best = min_error_sum(sigma2_w, psi);
        let p_fa = fa_prob(theta, sigma2_w, psi.psi0);
        let p_md = md_prob(theta, sigma2_w, psi.psi1);
        Self {
            theta,
            p_fa,
            p_md,
            error_sum: p_fa + p_md,
            ..best
        }
    }
}

/// Total transmit power is `P` in covert slots regardless of the split, while
/// only Bob's share `rho_s P` is on air otherwise.
pub fn psi_params(pol: &PowerPolicy, d_aw: f64, alpha: f64) -> PsiParams {
    let attenuation = d_aw.powf(alpha);
    PsiParams {
        psi0: pol.rho_s * pol.total_power / attenuation,
        psi1: pol.total_power / attenuation,
    }
}

/// False-alarm probability `P(sigma_w^2 + S > theta | no covert message)`.
pub fn fa_prob(theta: f64, sigma2_w: f64, psi0: f64) -> f64 {
    let excess = theta - sigma2_w;
    if excess < 0.0 {
        1.0
    } else if psi0 > 0.0 {
        (-excess / psi0).exp()
    } else if excess > 0.0 {
        // No signal under this hypothesis: the statistic sits at the noise floor.
        0.0
    } else {
        1.0
    }
}

/// Missed-detection probability `P(sigma_w^2 + S < theta | covert message)`.
pub fn md_prob(theta: f64, sigma2_w: f64, psi1: f64) -> f64 {
    let excess = theta - sigma2_w;
    if excess < 0.0 {
        0.0
    } else if psi1 > 0.0 {
        -(-excess / psi1).exp_m1()
    } else if excess > 0.0 {
        1.0
    } else {
        0.0
    }
}

pub fn error_sum(theta: f64, sigma2_w: f64, psi: PsiParams) -> f64 {
    fa_prob(theta, sigma2_w, psi.psi0) + md_prob(theta, sigma2_w, psi.psi1)
}

/// Minimizes the detection error sum over the warden's threshold.
///
/// For `psi0 < psi1` the stationary point of the error sum is
/// `theta* = sigma_w^2 + ln(psi1/psi0) psi0 psi1 / (psi1 - psi0)`. When the
/// two hypotheses carry the same power the sum is identically one and
/// `theta* = sigma_w^2` is reported. With `psi0 = 0` the infimum is zero,
/// approached as `theta -> sigma_w^2` from above.
pub fn min_error_sum(sigma2_w: f64, psi: PsiParams) -> DetectionReport {
    let PsiParams { psi0, psi1 } = psi;
    debug_assert!(psi0 <= psi1, "psi0 = {psi0} exceeds psi1 = {psi1}");

    let (theta_star, min) = if psi1 <= 0.0 || psi0 >= psi1 {
        (sigma2_w, 1.0)
    } else if psi0 <= 0.0 {
        (sigma2_w, 0.0)
    } else {
        let ratio = psi1 / psi0;
        let excess = ratio.ln() * psi0 * psi1 / (psi1 - psi0);
        let theta = sigma2_w + excess;
        // The piecewise boundary theta = sigma_w^2 always gives 1, so the
        // interior point only wins when it is strictly below that.
        (theta, error_sum(theta, sigma2_w, psi).min(1.0))
    };
    let p_fa = fa_prob(theta_star, sigma2_w, psi0);
    let p_md = md_prob(theta_star, sigma2_w, psi1);
    DetectionReport {
        theta: theta_star,
        p_fa,
        p_md,
        error_sum: min,
        theta_star,
        min_error_sum: min,
    }
}

/// Covertness holds when the warden's best error sum is at least `1 - epsilon`.
pub fn covertness_satisfied(report: &DetectionReport, epsilon: f64) -> bool {
    report.min_error_sum >= 1.0 - epsilon
}

/// Empirical error rates of the finite-`n` radiometer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalRates {
    pub p_fa: f64,
    pub p_md: f64,
}

/// Above this slot length the chi-square draw switches from summed squared
/// normals to the equivalent Gamma variate.
pub const CHI_SQUARE_DIRECT_MAX: usize = 10_000;

/// Draws `chi2_{2n} / (2n)`, the per-symbol average energy of `n` unit
/// variance complex Gaussian symbols (each real dimension has variance 1/2).
fn normalized_chi_square<R: Rng + ?Sized>(n: usize, rng: &mut R) -> f64 {
    if n <= CHI_SQUARE_DIRECT_MAX {
        let sum: f64 = (0..2 * n)
            .map(|_| {
                let z: f64 = StandardNormal.sample(rng);
                z * z
            })
            .sum();
        sum / (2 * n) as f64
    } else {
        Gamma::new(n as f64, 1.0 / n as f64)
            .expect("shape and scale are positive")
            .sample(rng)
    }
}

/// Parameters of a radiometer simulation.
#[derive(Debug, Clone, Copy)]
pub struct DetectionSim<'a> {
    /// Symbols per slot.
    pub n: usize,
    pub trials: usize,
    pub policy: &'a PowerPolicy,
    pub geometry: &'a NetworkGeometry,
    pub noise: &'a NoiseProfile,
    pub seed: u64,
}

impl DetectionSim<'_> {
    /// Empirical FA/MD rates at every threshold in `thetas`, sharing one set
    /// of draws. Trial `t` uses its own ChaCha stream, so results do not
    /// depend on the thread count.
    pub fn run(&self, thetas: &[f64]) -> Vec<EmpiricalRates> {
        assert!(self.n >= 1, "slot length must be at least one symbol");
        assert!(self.trials >= 1, "need at least one trial");

        let psi = psi_params(self.policy, self.geometry.d_aw, self.geometry.alpha);
        let sigma2_w = self.noise.sigma2_w;

        let counts = (0..self.trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(trial as u64);
                let g0: f64 = Exp1.sample(&mut rng);
                let stat0 = (sigma2_w + psi.psi0 * g0) * normalized_chi_square(self.n, &mut rng);
                let g1: f64 = Exp1.sample(&mut rng);
                let stat1 = (sigma2_w + psi.psi1 * g1) * normalized_chi_square(self.n, &mut rng);
                thetas
                    .iter()
                    .map(|&theta| ((stat0 > theta) as u64, (stat1 < theta) as u64))
                    .collect::<Vec<_>>()
            })
            .reduce(
                || vec![(0, 0); thetas.len()],
                |mut acc, row| {
                    for (a, r) in acc.iter_mut().zip(row) {
                        a.0 += r.0;
                        a.1 += r.1;
                    }
                    acc
                },
            );

        let trials = self.trials as f64;
        counts
            .into_iter()
            .map(|(fa, md)| EmpiricalRates {
                p_fa: fa as f64 / trials,
                p_md: md as f64 / trials,
            })
            .collect()
    }
}

/// Empirical `(p_fa, p_md)` of the radiometer at one threshold.
pub fn simulate_detection(
    n: usize,
    trials: usize,
    pol: &PowerPolicy,
    geo: &NetworkGeometry,
    noise: &NoiseProfile,
    theta: f64,
    seed: u64,
) -> EmpiricalRates {
    DetectionSim {
        n,
        trials,
        policy: pol,
        geometry: geo,
        noise,
        seed,
    }
    .run(&[theta])[0]
}
