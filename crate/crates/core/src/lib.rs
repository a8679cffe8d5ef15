//! Numerics for the generalized spiked harmonic oscillator
//! H = −d²/dx² + Bx² + A/x² + λ/x^α on the half-line with Dirichlet boundary conditions.

// tabulated constants carry more digits than f64 holds; `!(x > 0.0)` style
// tests are deliberate so that NaN fails them
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod error;
pub mod matel;
pub mod oracle;
pub mod perturb;
pub mod quad;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
