//! Max-min fair multigroup multicast beamforming for a transmissive RIS
//! transceiver (TRTC) with a power budget on every transmissive element.
//!
//! The crate is organised bottom-up:
//!
//! * [`system`] holds the problem instance and evaluates SINR, rates and the
//!   sum of per-group minimum rates.
//! * [`channel`] draws instances: half-disc user drops, log-distance path
//!   loss and Rician fading.
//! * [`wmmse`] implements the weighted-MMSE auxiliary updates and the
//!   quadratic rate coefficients.
//! * [`mm`] is the solver-free element-wise MM algorithm with log-sum-exp
//!   smoothing, closed-form ball-constrained updates and safeguarded
//!   squared-extrapolation acceleration.
//!
//! All rates are in nats; use [`system::nats_to_bits`] for presentation.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod mm;
pub mod system;
pub mod wmmse;

pub use error::{Error, Result};
pub use num_complex::Complex64;
