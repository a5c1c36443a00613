//! Entanglement of rotationally symmetric states of a spin-j and a spin-½.
//!
//! The family `ρ(p) = (1-p)/(2j+2) Π_{j+½} + p/(2j) Π_{j-½}` has closed-form
//! entanglement of formation, I-concurrence, tangle and negativity
//! ([`measures`]). The [`oracle`] module recomputes them by brute-force
//! optimization, and [`states`] provides exact and Monte Carlo twirling.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod oracle;
pub mod spin_algebra;
pub mod states;

pub use error::{Error, Result};
pub use spin_algebra::Spin;
