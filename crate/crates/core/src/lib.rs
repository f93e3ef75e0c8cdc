//! Exact and interval-rigorous arithmetic for divisor-sum inequalities,
//! harmonic numbers, and colossally abundant numbers.
//!
//! The crate decides strict inequalities like Robin's criterion and the
//! Lagarias form `sigma(n) <= H_n + exp(H_n) log(H_n)` with certified
//! enclosures rather than floating point: exact big-integer arithmetic
//! wherever values are rational, dyadic-endpoint intervals with directed
//! rounding everywhere else. A companion crate provides the command-line
//! front end and file formats.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::manual_is_multiple_of, clippy::manual_range_contains)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod colossal;
pub mod criteria;
pub mod divisor;
pub mod harmonic;
pub mod primes;
pub mod realnum;
pub mod sieve;

pub use colossal::{CaEntry, Epsilon};
pub use criteria::{CheckReport, CriterionKind, Verdict};
pub use divisor::{Factorization, SigmaRatio};
pub use harmonic::HarmonicValue;
pub use realnum::{ComparisonResult, Dyadic, IntervalReal, PrecisionBudget, RealExpr};
