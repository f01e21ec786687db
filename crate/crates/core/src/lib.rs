//! Power allocation for joint secure and covert downlink transmission.
//!
//! Alice sends Bob a stream that must stay secret from an untrusted user, and
//! in a random subset of slots superimposes a covert stream for Carol that a
//! warden must not detect. The crate models the rates and the warden's
//! radiometer, optimizes the covert-slot power split by successive convex
//! approximation, and runs Monte Carlo experiments over Rayleigh fading.
//!
//! ```
//! use covertrate::model::{LinkSnrs, QosRequirements, SlotModel};
//! use covertrate::solver::{dc_solve, SolverConfig};
//!
//! let slots = SlotModel::from_covert_probability(0.5)?;
//! let qos = QosRequirements::new(0.5, 0.1, 0.1)?;
//! let r = dc_solve(&LinkSnrs::new(40.0, 25.0, 5.0), &slots, &qos, &SolverConfig::default());
//! assert!(r.is_feasible());
//! # Ok::<(), covertrate::Error>(())
//! ```
//!
//! Modules, roughly in dependency order: [`model`], [`rates`], [`detection`],
//! [`solver`], [`robust`], [`harness`].

// `!(x > 0.0)` style checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detection;
pub mod error;
pub mod harness;
pub mod model;
pub mod rates;
pub mod robust;
pub mod solver;

pub use error::{Error, Result};

// Runs the guide's snippets as doctests. One module per chapter so a
// failure points at its chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/system-model.md")]
    mod system_model {}
    #[doc = include_str!("../../../book/src/rates.md")]
    mod rates {}
    #[doc = include_str!("../../../book/src/detection.md")]
    mod detection {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/robust.md")]
    mod robust {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
