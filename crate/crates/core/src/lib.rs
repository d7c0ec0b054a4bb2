//! Distributed binary hypothesis testing for the doubly symmetric binary
//! source: exponent functionals, achievable exponent regions, GF(2) linear
//! codes, Monte Carlo simulation and exact finite-length oracles.

pub mod binmath;
pub mod error;
pub mod exponents;
pub mod gf2;
pub mod optimize;
pub mod oracle;
pub mod regions;
pub mod simkit;

pub use binmath::{Prob, Rate};
pub use error::{Error, Result};
