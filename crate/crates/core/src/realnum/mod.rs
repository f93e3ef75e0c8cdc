//! Adaptive-precision rigorous real arithmetic.
//!
//! Dyadic-endpoint intervals, directed-rounded elementary functions,
//! verified constants, and a comparison engine that decides strict
//! inequalities by escalating precision. Undecided comparisons are a
//! first-class result, not an error: callers that must react to ties
//! (greedy generation in particular) inspect them.
//!
//! All values are immutable after construction and evaluation keeps no
//! shared mutable state, so everything here is safe to use concurrently
//! without locking.

mod constants;
mod dyadic;
mod expr;
mod interval;

pub use constants::gamma_max_bits;
pub use dyadic::{Dyadic, Rounding};
pub use expr::{
    compare_adaptive, eval, ComparisonResult, Evaluator, PrecisionBudget, RealExpr, MAX_EVAL_BITS,
};
pub use interval::{exp_point, ln2_interval, log_point, pi_interval, IntervalReal};

use thiserror::Error;

/// Errors from rigorous real evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealError {
    /// Log of a nonpositive enclosure, division by an interval
    /// containing zero, and similar domain violations.
    #[error("domain error: {0}")]
    Domain(&'static str),
    /// Requested precision exceeds what the implementation (or a stored
    /// constant) can deliver.
    #[error("precision overflow: requested {requested} bits, cap {cap}")]
    PrecisionOverflow { requested: u32, cap: u32 },
}

impl RealError {
    pub(crate) fn domain(message: &'static str) -> Self {
        RealError::Domain(message)
    }
}

/// Sound enclosure of Euler's constant of width at most `2^(2-bits)`.
///
/// Errors with `PrecisionOverflow` beyond the stored literal's
/// precision; expression evaluation instead clamps the gamma leaf, so
/// adaptive comparisons on gamma expressions stay sound and report
/// `Undecided` rather than failing.
pub fn euler_gamma(bits: u32) -> Result<IntervalReal, RealError> {
    if bits < 2 {
        return Err(RealError::domain("precision must be at least 2 bits"));
    }
    constants::gamma_interval(bits)
}
