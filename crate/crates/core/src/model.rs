//! Network geometry, receiver noise, fading draws and the normalized link SNRs.
//!
//! Every link is a scalar Rayleigh channel, so only the squared magnitude
//! `|h|^2` is carried around. It is exponentially distributed with unit mean.
//! All math here is on a linear scale; use [`db_to_linear`] at the edges.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Converts a power ratio in dB to linear scale (`10^(x/10)`).
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Distances from the transmitter to each node, in meters, plus the
/// path-loss exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkGeometry {
    /// Transmitter to Bob (secure user).
    pub d_ab: f64,
    /// Transmitter to Carol (covert user).
    pub d_ac: f64,
    /// Transmitter to the untrusted user.
    pub d_au: f64,
    /// Transmitter to the warden.
    pub d_aw: f64,
    pub alpha: f64,
}

impl NetworkGeometry {
    pub fn new(d_ab: f64, d_ac: f64, d_au: f64, d_aw: f64, alpha: f64) -> Result<Self> {
        let geo = Self {
            d_ab,
            d_ac,
            d_au,
            d_aw,
            alpha,
        };
        geo.validate()?;
        Ok(geo)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, d) in [
            ("d_ab", self.d_ab),
            ("d_ac", self.d_ac),
            ("d_au", self.d_au),
            ("d_aw", self.d_aw),
        ] {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::invalid(name, d, "distance must be positive"));
            }
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::invalid(
                "alpha",
                self.alpha,
                "path-loss exponent must be positive",
            ));
        }
        Ok(())
    }

    /// Large-scale attenuation `d^alpha` for a link.
    pub fn path_loss(&self, distance: f64) -> f64 {
        distance.powf(self.alpha)
    }
}

/// Receiver noise powers on a linear scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseProfile {
    pub sigma2_b: f64,
    pub sigma2_c: f64,
    pub sigma2_u: f64,
    pub sigma2_w: f64,
}

impl NoiseProfile {
    pub fn new(sigma2_b: f64, sigma2_c: f64, sigma2_u: f64, sigma2_w: f64) -> Result<Self> {
        let noise = Self {
            sigma2_b,
            sigma2_c,
            sigma2_u,
            sigma2_w,
        };
        noise.validate()?;
        Ok(noise)
    }

    pub fn from_db(b_db: f64, c_db: f64, u_db: f64, w_db: f64) -> Result<Self> {
        Self::new(
            db_to_linear(b_db),
            db_to_linear(c_db),
            db_to_linear(u_db),
            db_to_linear(w_db),
        )
    }

    pub fn validate(&self) -> Result<()> {
        for (name, s) in [
            ("sigma2_b", self.sigma2_b),
            ("sigma2_c", self.sigma2_c),
            ("sigma2_u", self.sigma2_u),
            ("sigma2_w", self.sigma2_w),
        ] {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::invalid(name, s, "noise power must be positive"));
            }
        }
        Ok(())
    }
}

/// One fading realization, stored as squared channel magnitudes `|h|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelRealization {
    pub g_ab: f64,
    pub g_ac: f64,
    pub g_au: f64,
    pub g_aw: f64,
}

impl ChannelRealization {
    /// All four links at their mean gain.
    pub const UNIT: Self = Self {
        g_ab: 1.0,
        g_ac: 1.0,
        g_au: 1.0,
        g_aw: 1.0,
    };
}

/// Normalized SNRs `P |h|^2 / (d^alpha sigma^2)` for the four links.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkSnrs {
    pub gamma_b: f64,
    pub gamma_c: f64,
    pub gamma_u: f64,
    pub gamma_w: f64,
}

impl LinkSnrs {
    /// Builds SNRs directly, e.g. for hand-worked fixtures.
    /// The warden SNR is not used by any rate formula and defaults to zero.
    pub fn new(gamma_b: f64, gamma_c: f64, gamma_u: f64) -> Self {
        Self {
            gamma_b,
            gamma_c,
            gamma_u,
            gamma_w: 0.0,
        }
    }
}

/// Probabilities that a slot carries only Bob's message (`p_r0`) or both
/// messages (`p_r1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlotModel {
    p_r0: f64,
    p_r1: f64,
}

impl SlotModel {
    const SUM_TOL: f64 = 1e-12;

    pub fn new(p_r0: f64, p_r1: f64) -> Result<Self> {
        for (name, p) in [("p_r0", p_r0), ("p_r1", p_r1)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(name, p, "probability must lie in [0, 1]"));
            }
        }
        if ((p_r0 + p_r1) - 1.0).abs() > Self::SUM_TOL {
            return Err(Error::SlotProbabilities { p_r0, p_r1 });
        }
        Ok(Self { p_r0, p_r1 })
    }

    /// Slot model from the covert-slot probability alone.
    pub fn from_covert_probability(p_r1: f64) -> Result<Self> {
        Self::new(1.0 - p_r1, p_r1)
    }

    pub fn p_r0(&self) -> f64 {
        self.p_r0
    }

    pub fn p_r1(&self) -> f64 {
        self.p_r1
    }
}

impl<'de> Deserialize<'de> for SlotModel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            p_r0: Option<f64>,
            p_r1: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        let p_r0 = raw.p_r0.unwrap_or(1.0 - raw.p_r1);
        SlotModel::new(p_r0, raw.p_r1).map_err(serde::de::Error::custom)
    }
}

/// Power split: `rho_s` in slots without the covert message, `rho_cs` in
/// slots with it, and the total budget `total_power` (linear).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPolicy {
    pub rho_s: f64,
    pub rho_cs: f64,
    pub total_power: f64,
}

impl PowerPolicy {
    pub fn new(rho_s: f64, rho_cs: f64, total_power: f64) -> Result<Self> {
        let pol = Self {
            rho_s,
            rho_cs,
            total_power,
        };
        pol.validate()?;
        Ok(pol)
    }

    /// Policy with the normalized budget `P = 1`. Rate formulas only read the
    /// factors, since `P` is already folded into the SNRs.
    pub fn normalized(rho_s: f64, rho_cs: f64) -> Self {
        Self {
            rho_s,
            rho_cs,
            total_power: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.rho_s) {
            return Err(Error::invalid("rho_s", self.rho_s, "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.rho_cs) {
            return Err(Error::invalid("rho_cs", self.rho_cs, "must lie in [0, 1]"));
        }
        if !(self.total_power > 0.0 && self.total_power.is_finite()) {
            return Err(Error::invalid(
                "total_power",
                self.total_power,
                "must be positive",
            ));
        }
        Ok(())
    }

    /// Power on Bob's stream in a slot without / with the covert message.
    pub fn bob_power(&self, covert_slot: bool) -> f64 {
        if covert_slot {
            self.rho_cs * self.total_power
        } else {
            self.rho_s * self.total_power
        }
    }

    /// Power on Carol's stream; zero outside covert slots.
    pub fn carol_power(&self, covert_slot: bool) -> f64 {
        if covert_slot {
            (1.0 - self.rho_cs) * self.total_power
        } else {
            0.0
        }
    }
}

/// Minimum secrecy and covert rates (bps/Hz) and the covertness slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QosRequirements {
    pub r_sec_min: f64,
    pub r_cov_min: f64,
    pub epsilon: f64,
}

impl QosRequirements {
    pub fn new(r_sec_min: f64, r_cov_min: f64, epsilon: f64) -> Result<Self> {
        let qos = Self {
            r_sec_min,
            r_cov_min,
            epsilon,
        };
        qos.validate()?;
        Ok(qos)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_sec_min >= 0.0) {
            return Err(Error::invalid("r_sec_min", self.r_sec_min, "must be nonnegative"));
        }
        if !(self.r_cov_min >= 0.0) {
            return Err(Error::invalid("r_cov_min", self.r_cov_min, "must be nonnegative"));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::invalid("epsilon", self.epsilon, "must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Requirements that every policy meets.
    pub fn vacuous() -> Self {
        Self {
            r_sec_min: 0.0,
            r_cov_min: 0.0,
            epsilon: 1.0,
        }
    }
}

/// Draws an independent Rayleigh realization: each `|h|^2 ~ Exp(1)`.
pub fn sample_channel<R: Rng + ?Sized>(rng: &mut R) -> ChannelRealization {
    ChannelRealization {
        g_ab: Exp1.sample(rng),
        g_ac: Exp1.sample(rng),
        g_au: Exp1.sample(rng),
        g_aw: Exp1.sample(rng),
    }
}

/// Maps a realization to the four normalized SNRs at total power `power`.
pub fn link_snrs(
    geo: &NetworkGeometry,
    noise: &NoiseProfile,
    power: f64,
    ch: &ChannelRealization,
) -> LinkSnrs {
    debug_assert!(power > 0.0);
    let snr = |g: f64, d: f64, s2: f64| power * g / (geo.path_loss(d) * s2);
    LinkSnrs {
        gamma_b: snr(ch.g_ab, geo.d_ab, noise.sigma2_b),
        gamma_c: snr(ch.g_ac, geo.d_ac, noise.sigma2_c),
        gamma_u: snr(ch.g_au, geo.d_au, noise.sigma2_u),
        gamma_w: snr(ch.g_aw, geo.d_aw, noise.sigma2_w),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_geometry() -> NetworkGeometry {
        NetworkGeometry::new(1.0, 1.0, 1.0, 1.0, 4.0).unwrap()
    }

    #[test]
    fn identity_snr() {
        let noise = NoiseProfile::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let s = link_snrs(&unit_geometry(), &noise, 1.0, &ChannelRealization::UNIT);
        assert_eq!(s.gamma_b, 1.0);
        assert_eq!(s.gamma_c, 1.0);
        assert_eq!(s.gamma_u, 1.0);
        assert_eq!(s.gamma_w, 1.0);
    }

    #[test]
    fn hand_worked_snr() {
        let geo = NetworkGeometry::new(2.0, 2.0, 2.0, 2.0, 4.0).unwrap();
        let noise = NoiseProfile::new(0.5, 0.5, 0.5, 0.5).unwrap();
        let ch = ChannelRealization {
            g_ab: 4.0,
            g_ac: 4.0,
            g_au: 4.0,
            g_aw: 4.0,
        };
        let s = link_snrs(&geo, &noise, 2.0, &ch);
        assert_relative_eq!(s.gamma_b, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn table_geometry_untrusted_snr() {
        let geo = NetworkGeometry::new(1.0, 1.0, 5.0, 5.0, 4.0).unwrap();
        let noise = NoiseProfile::from_db(-33.0, -33.0, -30.0, -30.0).unwrap();
        let s = link_snrs(&geo, &noise, db_to_linear(3.0), &ChannelRealization::UNIT);
        // 10^0.3 / (625 * 10^-3)
        assert_relative_eq!(s.gamma_u, 3.192_419_704, max_relative = 1e-6);
    }

    #[test]
    fn slot_model_rejects_bad_sum() {
        assert!(SlotModel::new(0.5, 0.5).is_ok());
        assert!(SlotModel::new(0.3, 0.3).is_err());
        assert!(SlotModel::new(0.5, 0.5 + 1e-10).is_err());
        assert!(SlotModel::new(0.5, 0.5 + 1e-13).is_ok());
    }

    #[test]
    fn slot_model_deserializes_and_validates() {
        let s: SlotModel = serde_json::from_str(r#"{"p_r1": 0.25}"#).unwrap();
        assert_eq!(s.p_r0(), 0.75);
        assert!(serde_json::from_str::<SlotModel>(r#"{"p_r0": 0.1, "p_r1": 0.1}"#).is_err());
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(NetworkGeometry::new(0.0, 1.0, 1.0, 1.0, 4.0).is_err());
        assert!(NetworkGeometry::new(1.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(NoiseProfile::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(PowerPolicy::new(1.1, 0.5, 1.0).is_err());
        assert!(PowerPolicy::new(1.0, 0.5, 0.0).is_err());
        assert!(QosRequirements::new(0.5, 0.1, 1.5).is_err());
    }

    #[test]
    fn policy_power_split() {
        let pol = PowerPolicy::new(0.8, 0.25, 2.0).unwrap();
        assert_eq!(pol.bob_power(false), 1.6);
        assert_eq!(pol.carol_power(false), 0.0);
        assert_eq!(pol.bob_power(true), 0.5);
        assert_eq!(pol.carol_power(true), 1.5);
    }

    #[test]
    fn sampling_is_deterministic_under_seed() {
        let a = sample_channel(&mut ChaCha8Rng::seed_from_u64(7));
        let b = sample_channel(&mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a, b);
    }

    #[test]
    fn sample_mean_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let mean = (0..n).map(|_| sample_channel(&mut rng).g_ab).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean = {mean}");
    }

    #[test]
    fn sample_matches_exponential_cdf() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 100_000;
        let mut xs: Vec<f64> = (0..n).map(|_| sample_channel(&mut rng).g_ac).collect();
        xs.sort_by(f64::total_cmp);
        // Kolmogorov-Smirnov distance against 1 - e^{-x}.
        let ks = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let cdf = 1.0 - (-x).exp();
                let lo = i as f64 / n as f64;
                let hi = (i + 1) as f64 / n as f64;
                (cdf - lo).abs().max((hi - cdf).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.01, "KS = {ks}");
    }

    proptest! {
        #[test]
        fn snr_is_homogeneous_in_power(p in 0.01f64..100.0, k in 0.1f64..10.0,
                                       g in 0.0f64..5.0, d in 0.5f64..10.0) {
            let geo = NetworkGeometry::new(d, d, d, d, 3.5).unwrap();
            let noise = NoiseProfile::new(0.1, 0.2, 0.3, 0.4).unwrap();
            let ch = ChannelRealization { g_ab: g, g_ac: g, g_au: g, g_aw: g };
            let a = link_snrs(&geo, &noise, p, &ch);
            let b = link_snrs(&geo, &noise, k * p, &ch);
            prop_assert!((b.gamma_b - k * a.gamma_b).abs() <= 1e-12 * b.gamma_b.max(1.0));
            prop_assert!((b.gamma_w - k * a.gamma_w).abs() <= 1e-12 * b.gamma_w.max(1.0));
        }

        #[test]
        fn snr_decreases_with_distance_and_noise(d in 0.5f64..10.0, dd in 0.01f64..5.0,
                                                 s in 0.01f64..1.0, ds in 0.01f64..1.0) {
            let noise = NoiseProfile::new(s, s, s, s).unwrap();
            let louder = NoiseProfile::new(s + ds, s, s, s).unwrap();
            let near = NetworkGeometry::new(d, d, d, d, 4.0).unwrap();
            let far = NetworkGeometry::new(d + dd, d, d, d, 4.0).unwrap();
            let ch = ChannelRealization::UNIT;
            let base = link_snrs(&near, &noise, 1.0, &ch).gamma_b;
            prop_assert!(link_snrs(&far, &noise, 1.0, &ch).gamma_b < base);
            prop_assert!(link_snrs(&near, &louder, 1.0, &ch).gamma_b < base);
        }
    }
}
