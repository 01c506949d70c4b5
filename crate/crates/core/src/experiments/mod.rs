//! Epsilon sweeps, ray profiles, exponent fits, gap laws and report assembly.

mod config;
mod fit;
mod report;
mod sweep;
mod validate;

pub use config::*;
pub use fit::*;
pub use report::*;
pub use sweep::*;
pub use validate::*;
