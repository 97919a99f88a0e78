//! Entanglement catalysis for repeater chains.
//!
//! The crate is organised bottom-up:
//!
//! - [`schmidt`]: Schmidt spectra, Vidal monotones, majorization tests and the
//!   optimal single-shot conversion probability.
//! - [`catalysis`]: the n-copy concentration problem, optimal catalysts (closed
//!   form and numerical search), the intermediate state of the two-step
//!   protocol and catalyst supply accounting.
//! - [`network`]: physical-layer parameters, the per-edge timing model, the
//!   chain waiting factor, end-to-end rates and the rate-ratio sweep.
//! - [`sim`]: Monte Carlo chain simulators used to validate the analytic
//!   rates.
//!
//! All probabilities use the larger-coefficient convention: a two-qubit state
//! `sqrt(a)|HV> + sqrt(1-a)|VH>` is described by `a >= 0.5`.

#![forbid(unsafe_code)]

pub mod catalysis;
pub mod error;
pub mod format;
mod kahan;
pub mod network;
pub mod schmidt;
pub mod sim;

pub use error::{Error, Result};
pub use schmidt::{MonotoneVector, SchmidtVector};
