//! Ergodic capacity of RIS-aided links under outdated channel state information.
//!
//! The crate is layered bottom-up: [`geometry`] places elements and measures
//! links, [`pathloss`] turns links into loss factors, [`channel`] holds the
//! Rician and CSI-aging statistics, [`link`] resolves a [`link::Scenario`] into
//! per-panel weight vectors, [`moments`] and [`capacity`] carry the Gamma
//! approximation, and [`montecarlo`] is an independent sampling oracle.

pub mod capacity;
pub mod channel;
mod error;
pub mod geometry;
pub mod link;
pub mod moments;
pub mod montecarlo;
pub mod pathloss;
pub mod quadrature;
pub mod special;
mod summation;

pub use error::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
