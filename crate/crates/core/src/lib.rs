//! Multiprecision special functions, exact differential-polynomial algebra
//! and numerical nonvanishing witnesses for algebraic differential
//! relations between ζ and Γ.

pub mod asymptotics;
pub mod diffpoly;
pub mod error;
pub mod indexcalc;
pub mod numkernel;
pub mod specfun;
pub mod verify;
pub mod witness;

pub use error::{Error, Result};
pub use numkernel::{Complex, Precision};
