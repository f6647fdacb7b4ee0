//! Exact tools for the congruent number problem: triangle, curve point and
//! tuple correspondences, Tunnell's counts, the prime-family criteria, a
//! descent for primes `≡ 3 (mod 8)`, and brute-force oracles for all of them.

pub mod criteria;
pub mod descent;
pub mod ecparam;
mod error;
pub mod numth;
pub mod oracle;
pub mod pythag;
pub mod rational;
pub mod report;
pub mod tunnell;

pub use error::{Error, Result};
pub use rational::Rational;
