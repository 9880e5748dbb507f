//! Scenario files, sweeps, figure presets and CSV output on top of `riscap-core`.

pub mod presets;
pub mod run;
pub mod scenario;
pub mod sweep;
pub mod table;

mod error;

pub use error::{Error, Result};
