//! Models for fiber optical parametric amplifiers and hybrid WDM/TDM passive
//! optical networks.
//!
//! * [`fiber`]: unit conversions, fiber primitives, SMF/HNLF presets
//! * [`gain`]: closed-form parametric gain and its approximations
//! * [`ode`]: coupled three-wave integration, used as an oracle for [`gain`]
//! * [`pulse`]: parametric pulse source (width, amplitude, envelope)
//! * [`capacity`]: per-user bandwidth, delay and MTDM bit rates
//! * [`sweep`]: parameter sweeps and figure presets with CSV/JSON output

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod config;
pub mod errata;
pub mod error;
pub mod fiber;
pub mod gain;
pub mod ode;
pub mod pulse;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64;
