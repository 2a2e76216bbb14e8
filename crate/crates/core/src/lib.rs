//! Transition rates and population dynamics of a two-level atom on a
//! circular orbit, in free space and inside a high-Q Lorentzian cavity.
//!
//! The crate is organized as:
//! - [`phys`]: constants, input specifications, kinematics, and the
//!   spectral response functions of the two environments;
//! - [`spectral`]: the channel-decomposition rate engine and an
//!   independent time-domain quadrature oracle for the cavity response;
//! - [`closed_forms`]: transcriptions of the special-case peak and
//!   free-space formulas, paired with the engine as mutual oracles;
//! - [`dynamics`]: rate-equation evolution, steady states, and a seeded
//!   stochastic jump simulator;
//! - [`scan`]: parameter sweeps, numeric peak finding, scenario presets,
//!   and CSV/JSON output records.

// validation guards use `!(x > 0.0)` so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_forms;
pub mod dynamics;
pub mod error;
pub mod phys;
pub mod scan;
pub mod spectral;

pub use error::{Error, Result};
