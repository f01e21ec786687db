//! Per-slot SINRs and the rate expressions built on them.
//!
//! Bob's stream is on air in every slot. Carol's covert stream is added only
//! in covert slots, where each user sees the other's stream as interference
//! unless successive interference cancellation (SIC) removes it.
//!
//! All rates are in bps/Hz.

use serde::{Deserialize, Serialize};

use crate::model::{ChannelRealization, LinkSnrs, NetworkGeometry, PowerPolicy, SlotModel};

/// `log2(x)` evaluated as a natural-log ratio.
#[inline]
pub fn log2(x: f64) -> f64 {
    x.ln() / std::f64::consts::LN_2
}

/// `[x]^+`.
#[inline]
pub fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// Whether a slot carries the covert message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SlotKind {
    /// Bob's message only.
    Psi0,
    /// Bob's and Carol's messages superposed.
    Psi1,
}

/// Rate terms of one channel realization under a fixed policy.
///
/// `covert_rate` is already weighted by `p_r1`, so it can be compared against
/// the covert requirement directly and
/// `average_rate = p_r0 * sec_rate_psi0 + p_r1 * sec_rate_psi1 + covert_rate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateBreakdown {
    pub sec_rate_psi0: f64,
    pub sec_rate_psi1: f64,
    pub covert_rate: f64,
    pub average_rate: f64,
    p_r0: f64,
    p_r1: f64,
}

impl RateBreakdown {
    pub(crate) fn assemble(slots: &SlotModel, sec0: f64, sec1: f64, covert_rate: f64) -> Self {
        let (p_r0, p_r1) = (slots.p_r0(), slots.p_r1());
        Self {
            sec_rate_psi0: sec0,
            sec_rate_psi1: sec1,
            covert_rate,
            average_rate: p_r0 * sec0 + p_r1 * sec1 + covert_rate,
            p_r0,
            p_r1,
        }
    }

    /// All-zero breakdown, used for infeasible draws.
    pub fn zero(slots: &SlotModel) -> Self {
        Self::assemble(slots, 0.0, 0.0, 0.0)
    }

    /// Probability-weighted secrecy rate, the quantity bounded below by the
    /// secrecy requirement.
    pub fn secrecy_rate(&self) -> f64 {
        self.p_r0 * self.sec_rate_psi0 + self.p_r1 * self.sec_rate_psi1
    }
}

/// Decoding order for the SIC receivers.
///
/// `a = 1` when Carol's normalized channel is the stronger one: Carol strips
/// Bob's stream before decoding, and Bob decodes under Carol's interference.
/// `a = 0` is the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SicIndicator(pub bool);

impl SicIndicator {
    pub const ZERO: Self = SicIndicator(false);
    pub const ONE: Self = SicIndicator(true);

    pub fn a(self) -> f64 {
        if self.0 {
            1.0
        } else {
            0.0
        }
    }
}

/// SINR of a user whose own stream gets `own_share` of the power and who sees
/// `other_share` from the other stream as interference.
fn interfered_sinr(own_share: f64, other_share: f64, gamma: f64) -> f64 {
    own_share * gamma / (1.0 + other_share * gamma)
}

pub fn sinr_bob(slot: SlotKind, pol: &PowerPolicy, gamma_b: f64) -> f64 {
    match slot {
        SlotKind::Psi0 => pol.rho_s * gamma_b,
        SlotKind::Psi1 => interfered_sinr(pol.rho_cs, 1.0 - pol.rho_cs, gamma_b),
    }
}

/// The untrusted user decodes Bob's stream the same way Bob does.
pub fn sinr_untrusted(slot: SlotKind, pol: &PowerPolicy, gamma_u: f64) -> f64 {
    sinr_bob(slot, pol, gamma_u)
}

pub fn sinr_carol(slot: SlotKind, pol: &PowerPolicy, gamma_c: f64) -> f64 {
    match slot {
        SlotKind::Psi0 => 0.0,
        SlotKind::Psi1 => interfered_sinr(1.0 - pol.rho_cs, pol.rho_cs, gamma_c),
    }
}

/// Wiretap secrecy rate `[log2(1 + SINR_B) - log2(1 + SINR_U)]^+`.
pub fn secrecy_rate(slot: SlotKind, pol: &PowerPolicy, gamma_b: f64, gamma_u: f64) -> f64 {
    pos(log2(1.0 + sinr_bob(slot, pol, gamma_b)) - log2(1.0 + sinr_untrusted(slot, pol, gamma_u)))
}

/// Covert rate weighted by the covert-slot probability.
pub fn covert_rate(pol: &PowerPolicy, gamma_c: f64, p_r1: f64) -> f64 {
    p_r1 * log2(1.0 + sinr_carol(SlotKind::Psi1, pol, gamma_c))
}

pub fn average_rate(pol: &PowerPolicy, slots: &SlotModel, snrs: &LinkSnrs) -> RateBreakdown {
    let sec0 = secrecy_rate(SlotKind::Psi0, pol, snrs.gamma_b, snrs.gamma_u);
    let sec1 = secrecy_rate(SlotKind::Psi1, pol, snrs.gamma_b, snrs.gamma_u);
    let cov = covert_rate(pol, snrs.gamma_c, slots.p_r1());
    RateBreakdown::assemble(slots, sec0, sec1, cov)
}

/// Average rate when Bob's stream is replaced by artificial noise: only the
/// covert term remains.
pub fn average_rate_an(pol: &PowerPolicy, slots: &SlotModel, gamma_c: f64) -> f64 {
    covert_rate(pol, gamma_c, slots.p_r1())
}

/// Breakdown for artificial-noise transmission.
pub fn average_rate_an_breakdown(pol: &PowerPolicy, slots: &SlotModel, gamma_c: f64) -> RateBreakdown {
    RateBreakdown::assemble(slots, 0.0, 0.0, average_rate_an(pol, slots, gamma_c))
}

/// Picks the SIC decoding order from the normalized channel gains.
/// Ties go to `a = 0`.
pub fn sic_indicator(geo: &NetworkGeometry, ch: &ChannelRealization) -> SicIndicator {
    let bob = ch.g_ab / geo.path_loss(geo.d_ab);
    let carol = ch.g_ac / geo.path_loss(geo.d_ac);
    SicIndicator(bob < carol)
}

pub fn sinr_bob_sic(slot: SlotKind, pol: &PowerPolicy, gamma_b: f64, a: SicIndicator) -> f64 {
    match slot {
        SlotKind::Psi0 => pol.rho_s * gamma_b,
        SlotKind::Psi1 => interfered_sinr(pol.rho_cs, a.a() * (1.0 - pol.rho_cs), gamma_b),
    }
}

pub fn sinr_carol_sic(slot: SlotKind, pol: &PowerPolicy, gamma_c: f64, a: SicIndicator) -> f64 {
    match slot {
        SlotKind::Psi0 => 0.0,
        SlotKind::Psi1 => interfered_sinr(1.0 - pol.rho_cs, (1.0 - a.a()) * pol.rho_cs, gamma_c),
    }
}

/// Average rate when Bob and Carol both know the covert slots and run SIC.
/// The untrusted user still sees Carol's stream as interference.
pub fn average_rate_sic(
    pol: &PowerPolicy,
    slots: &SlotModel,
    snrs: &LinkSnrs,
    a: SicIndicator,
) -> RateBreakdown {
    let sec0 = secrecy_rate(SlotKind::Psi0, pol, snrs.gamma_b, snrs.gamma_u);
    let sec1 = pos(log2(1.0 + sinr_bob_sic(SlotKind::Psi1, pol, snrs.gamma_b, a))
        - log2(1.0 + sinr_untrusted(SlotKind::Psi1, pol, snrs.gamma_u)));
    let cov = slots.p_r1() * log2(1.0 + sinr_carol_sic(SlotKind::Psi1, pol, snrs.gamma_c, a));
    RateBreakdown::assemble(slots, sec0, sec1, cov)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn pol(rho_cs: f64) -> PowerPolicy {
        PowerPolicy::normalized(1.0, rho_cs)
    }

    fn half() -> SlotModel {
        SlotModel::new(0.5, 0.5).unwrap()
    }

    #[test]
    fn bob_sinr_cases() {
        assert_eq!(sinr_bob(SlotKind::Psi0, &pol(0.3), 3.0), 3.0);
        assert_eq!(sinr_bob(SlotKind::Psi1, &pol(1.0), 3.0), 3.0);
        assert_abs_diff_eq!(sinr_bob(SlotKind::Psi1, &pol(0.5), 3.0), 0.6, epsilon = 1e-15);
    }

    #[test]
    fn untrusted_sinr_cases() {
        assert_eq!(sinr_untrusted(SlotKind::Psi0, &pol(0.5), 1.0), 1.0);
        assert_eq!(sinr_untrusted(SlotKind::Psi1, &pol(0.0), 7.0), 0.0);
        assert_abs_diff_eq!(sinr_untrusted(SlotKind::Psi1, &pol(0.5), 1.0), 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn carol_sinr_cases() {
        assert_eq!(sinr_carol(SlotKind::Psi0, &pol(0.5), 3.0), 0.0);
        assert_eq!(sinr_carol(SlotKind::Psi1, &pol(0.0), 3.0), 3.0);
        assert_abs_diff_eq!(sinr_carol(SlotKind::Psi1, &pol(0.5), 3.0), 0.6, epsilon = 1e-15);
    }

    #[test]
    fn secrecy_rate_cases() {
        assert_abs_diff_eq!(secrecy_rate(SlotKind::Psi0, &pol(0.5), 3.0, 1.0), 1.0, epsilon = 1e-15);
        assert_eq!(secrecy_rate(SlotKind::Psi1, &pol(0.0), 3.0, 1.0), 0.0);
        assert_eq!(secrecy_rate(SlotKind::Psi0, &pol(0.5), 1.0, 3.0), 0.0);
    }

    #[test]
    fn covert_rate_cases() {
        assert_eq!(covert_rate(&pol(1.0), 3.0, 0.5), 0.0);
        assert_abs_diff_eq!(covert_rate(&pol(0.0), 3.0, 0.5), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(covert_rate(&pol(0.5), 3.0, 0.5), 0.5 * 1.6f64.log2(), epsilon = 1e-15);
        assert_abs_diff_eq!(covert_rate(&pol(0.5), 3.0, 0.5), 0.339_036, epsilon = 1e-6);
    }

    #[test]
    fn average_rate_cases() {
        let snrs = LinkSnrs::new(3.0, 3.0, 1.0);
        assert_abs_diff_eq!(average_rate(&pol(1.0), &half(), &snrs).average_rate, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(average_rate(&pol(0.0), &half(), &snrs).average_rate, 1.5, epsilon = 1e-15);
        // Independent evaluation: Bob 0.6, untrusted 1/3, Carol 0.6.
        let expected = 0.5 * 1.0 + 0.5 * (1.6f64.log2() - (4.0f64 / 3.0).log2()) + 0.5 * 1.6f64.log2();
        let got = average_rate(&pol(0.5), &half(), &snrs);
        assert_abs_diff_eq!(got.average_rate, expected, epsilon = 1e-14);
        assert_abs_diff_eq!(got.average_rate, 0.970_55, epsilon = 1e-5);
        assert_abs_diff_eq!(got.sec_rate_psi1, 1.2f64.log2(), epsilon = 1e-14);
    }

    #[test]
    fn artificial_noise_rate_cases() {
        assert_abs_diff_eq!(average_rate_an(&pol(0.0), &half(), 3.0), 1.0, epsilon = 1e-15);
        assert_eq!(average_rate_an(&pol(1.0), &half(), 3.0), 0.0);
        assert_abs_diff_eq!(average_rate_an(&pol(0.5), &half(), 3.0), 0.339_036, epsilon = 1e-6);
        let b = average_rate_an_breakdown(&pol(0.5), &half(), 3.0);
        assert_eq!(b.secrecy_rate(), 0.0);
    }

    #[test]
    fn sic_indicator_cases() {
        let geo = NetworkGeometry::new(2.0, 2.0, 5.0, 5.0, 4.0).unwrap();
        let ch = |g_ab, g_ac| ChannelRealization { g_ab, g_ac, g_au: 1.0, g_aw: 1.0 };
        assert_eq!(sic_indicator(&geo, &ch(1.0, 2.0)), SicIndicator::ONE);
        assert_eq!(sic_indicator(&geo, &ch(2.0, 1.0)), SicIndicator::ZERO);
        assert_eq!(sic_indicator(&geo, &ch(1.5, 1.5)), SicIndicator::ZERO);
    }

    #[test]
    fn sic_rate_cases() {
        let snrs = LinkSnrs::new(3.0, 3.0, 1.0);
        assert_abs_diff_eq!(sinr_bob_sic(SlotKind::Psi1, &pol(0.5), 3.0, SicIndicator::ZERO), 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sinr_carol_sic(SlotKind::Psi1, &pol(0.5), 3.0, SicIndicator::ONE), 1.5, epsilon = 1e-15);
        let r = average_rate_sic(&pol(0.5), &half(), &snrs, SicIndicator::ONE);
        assert_abs_diff_eq!(r.covert_rate, 0.5 * 2.5f64.log2(), epsilon = 1e-15);
        let r = average_rate_sic(&pol(1.0), &half(), &snrs, SicIndicator::ONE);
        assert_eq!(r.covert_rate, 0.0);
        assert_eq!(sinr_bob_sic(SlotKind::Psi1, &pol(1.0), 3.0, SicIndicator::ONE), 3.0);
        // With a = 0 Carol's term is unchanged from the interference-limited case.
        let plain = average_rate(&pol(0.5), &half(), &snrs);
        let sic0 = average_rate_sic(&pol(0.5), &half(), &snrs, SicIndicator::ZERO);
        assert_abs_diff_eq!(plain.covert_rate, sic0.covert_rate, epsilon = 1e-15);
        assert_abs_diff_eq!(plain.sec_rate_psi0, sic0.sec_rate_psi0, epsilon = 1e-15);
    }

    #[test]
    fn rates_monotone_in_rho_cs_on_grid() {
        let (gb, gu, gc) = (7.0, 2.0, 5.0);
        let mut prev_sec = -1.0;
        let mut prev_cov = f64::INFINITY;
        for i in 0..=1000 {
            let rho = i as f64 / 1000.0;
            let sec = secrecy_rate(SlotKind::Psi1, &pol(rho), gb, gu);
            let cov = covert_rate(&pol(rho), gc, 0.5);
            if i == 0 {
                assert_eq!(sec, 0.0);
            }
            assert!(sec >= prev_sec - 1e-15);
            assert!(cov <= prev_cov + 1e-15);
            prev_sec = sec;
            prev_cov = cov;
        }
        assert_eq!(prev_cov, 0.0);
    }

    proptest! {
        #[test]
        fn covert_log_split_identity(rho in 0.0f64..=1.0, gamma in 0.0f64..1e4) {
            let lhs = log2(1.0 + (1.0 - rho) * gamma / (1.0 + rho * gamma));
            let rhs = log2(1.0 + gamma) - log2(1.0 + rho * gamma);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }

        #[test]
        fn secrecy_rate_nonnegative(rho_s in 0.0f64..=1.0, rho in 0.0f64..=1.0,
                                    gb in 0.0f64..1e3, gu in 0.0f64..1e3) {
            let p = PowerPolicy::normalized(rho_s, rho);
            prop_assert!(secrecy_rate(SlotKind::Psi0, &p, gb, gu) >= 0.0);
            prop_assert!(secrecy_rate(SlotKind::Psi1, &p, gb, gu) >= 0.0);
        }

        #[test]
        fn sic_never_hurts(g_ab in 0.01f64..5.0, g_ac in 0.01f64..5.0, g_au in 0.01f64..5.0,
                           rho in 0.0f64..=1.0, d_ab in 1.0f64..3.0, d_ac in 1.0f64..3.0) {
            let geo = NetworkGeometry::new(d_ab, d_ac, 5.0, 5.0, 4.0).unwrap();
            let ch = ChannelRealization { g_ab, g_ac, g_au, g_aw: 1.0 };
            let noise = crate::model::NoiseProfile::from_db(-33.0, -33.0, -30.0, -30.0).unwrap();
            let snrs = crate::model::link_snrs(&geo, &noise, 2.0, &ch);
            let a = sic_indicator(&geo, &ch);
            let plain = average_rate(&pol(rho), &half(), &snrs).average_rate;
            let sic = average_rate_sic(&pol(rho), &half(), &snrs, a).average_rate;
            prop_assert!(sic >= plain - 1e-12);
        }
    }
}
