//! Exact and asymptotic statistics of the longest run of equal parts in
//! uniform random integer compositions.
//!
//! - [`series`]: exact counts `C_n^<k>`, distributions, and moments via
//!   truncated power series over arbitrary-precision integers.
//! - [`oracle`]: brute-force enumeration over all `2^(n-1)` compositions and
//!   a seeded, reproducible Monte Carlo sampler.
//! - [`asymptotics`]: dominant-pole solver, pole-isolation witness, residue
//!   approximation, the double-exponential law with tail classification, and
//!   mean/variance asymptotics with their periodic fluctuation series.
//! - [`hp`] / [`special`]: the supporting high-precision real/complex layer
//!   and complex gamma/digamma implementations.

pub mod asymptotics;
pub mod error;
pub mod hp;
pub mod oracle;
pub mod series;
pub mod special;

pub use error::{Error, Result};
