//! Exact analysis of rational linear-fractional dynamical systems
//! `f(x) = (ax + b)/(cx + d)`, `ad − bc = 1`, at the real place and at
//! every p-adic place at once.

pub mod classify;
pub mod error;
pub mod mobius;
pub mod orbit;
pub mod padic;
pub mod rational;

pub use error::{Error, Result};
pub use rational::{parse_rational, Rational};
