pub mod analytic;
pub mod bie;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod fields;
pub mod geometry;
pub mod io;
pub mod oracles;
pub mod parallel;
pub mod quadrature;
pub mod vec2;

pub use error::{BowtieError, Result};
pub use vec2::Vec2;
