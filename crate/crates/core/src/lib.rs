//! Joint placement, analog beamforming and power control for a full-duplex
//! UAV relay on a millimeter-wave link.
//!
//! The crate is organized bottom-up:
//!
//! - [`channel`]: geometry, steering vectors, path gains and channel synthesis
//! - [`rates`]: effective gains, achievable rates and max-min power control
//! - [`positioning`]: closed-form relay placement and the LoS neighborhood search
//! - [`beamforming`]: the interference-capped beamforming subproblem and the
//!   alternating suppression loop
//! - [`harness`]: seeded Monte Carlo trials, baselines and parameter sweeps
//! - [`config`]: the flat TOML scenario document

pub mod beamforming;
pub mod channel;
pub mod config;
pub mod error;
pub mod harness;
pub mod positioning;
pub mod rates;

pub use error::{Error, Result};
