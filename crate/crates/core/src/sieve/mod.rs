//! Segmented divisor-sum sieving for bulk range verification, record
//! enumeration, and the average-order / prime-product empirical checks.
//!
//! Segments are independent work units: any scheduling is permitted as
//! long as aggregation merges deterministically (counts summed, records
//! merged by n). The functions here are sequential; parallel drivers
//! split ranges into segment-aligned chunks and merge the reports.

mod range;
mod records;
mod stats;

pub use range::{
    verify_range, verify_range_streamed, BlockEnclosure, RangeReport, RangeRow, VerdictCounts,
    WorstMargin,
};
pub use records::{records, Measure, RecordEntry, RecordKind};
pub use stats::{bachmann_residual, compute_stats, mertens_ratio, mertens_ratios_at, StatsReport};

use alloc::vec::Vec;

use num_integer::Roots;
use thiserror::Error;

use crate::criteria::CheckError;
use crate::primes::primes_up_to;

/// Sieve ranges above this are out of scope: sigma no longer reliably
/// fits the fast fixed-width path and runs would take days.
pub const LIMIT_CAP: u64 = 1_000_000_000_000;

pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveConfig {
    pub limit: u64,
    pub segment_size: u64,
}

impl SieveConfig {
    pub fn new(limit: u64, segment_size: u64) -> Result<Self, SieveError> {
        if limit < 1 || limit > LIMIT_CAP {
            return Err(SieveError::InputError("limit out of range"));
        }
        if segment_size < 2 {
            return Err(SieveError::InputError("segment size must be at least 2"));
        }
        Ok(SieveConfig {
            limit,
            segment_size,
        })
    }

    pub fn with_limit(limit: u64) -> Result<Self, SieveError> {
        SieveConfig::new(limit, DEFAULT_SEGMENT_SIZE)
    }
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            limit: LIMIT_CAP,
            segment_size: DEFAULT_SEGMENT_SIZE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SieveError {
    #[error("sigma({n}) exceeds the fixed-width bound")]
    Overflow { n: u64 },
    #[error("invalid input: {0}")]
    InputError(&'static str),
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// Exact sigma values for `[lo, hi]` via a smallest-prime-factor
/// segmented sieve over fixed-width integers with explicit overflow
/// checks. Values fit u64 throughout the supported range (sigma(n) < 6n
/// below 10^12); an overflow is an error, not silent wraparound.
pub fn sigma_sieve(lo: u64, hi: u64) -> Result<Vec<u64>, SieveError> {
    let (sigmas, overflows) = sigma_segment(lo, hi)?;
    if let Some(&n) = overflows.first() {
        return Err(SieveError::Overflow { n });
    }
    Ok(sigmas)
}

/// Like `sigma_sieve` but returns overflowing n separately so callers
/// can fall back to exact big-integer evaluation for those entries.
/// Overflowed entries hold a garbage marker of 0.
pub(crate) fn sigma_segment(lo: u64, hi: u64) -> Result<(Vec<u64>, Vec<u64>), SieveError> {
    if lo < 1 || lo > hi {
        return Err(SieveError::InputError("need 1 <= lo <= hi"));
    }
    if hi - lo >= (1 << 26) {
        return Err(SieveError::InputError("segment too large"));
    }
    let len = (hi - lo + 1) as usize;
    let mut sig = alloc::vec![1u64; len];
    let mut overflows = Vec::new();
    let rem = multiplicative_segment(
        lo,
        hi,
        |acc: &mut Vec<u64>, i, p, e| {
            // sigma(p^e) = (p^(e+1) - 1)/(p - 1); p^(e+1) <= n*p stays in u64
            // for n <= 10^12, p <= 10^6.
            let pe1 = p.checked_pow(e + 1);
            match pe1 {
                Some(x) => match acc[i].checked_mul((x - 1) / (p - 1)) {
                    Some(v) => acc[i] = v,
                    None => acc[i] = 0,
                },
                None => acc[i] = 0,
            }
        },
        &mut sig,
    );
    for (i, r) in rem.into_iter().enumerate() {
        if r > 1 {
            // Leftover cofactor is prime: multiply by r + 1.
            match r.checked_add(1).and_then(|s| sig[i].checked_mul(s)) {
                Some(v) => sig[i] = v,
                None => sig[i] = 0,
            }
        }
        if sig[i] == 0 {
            overflows.push(lo + i as u64);
        }
    }
    Ok((sig, overflows))
}

/// Exact divisor-count values for `[lo, hi]`.
pub(crate) fn divisor_count_segment(lo: u64, hi: u64) -> Result<Vec<u64>, SieveError> {
    if lo < 1 || lo > hi {
        return Err(SieveError::InputError("need 1 <= lo <= hi"));
    }
    if hi - lo >= (1 << 26) {
        return Err(SieveError::InputError("segment too large"));
    }
    let len = (hi - lo + 1) as usize;
    let mut counts = alloc::vec![1u64; len];
    let rem = multiplicative_segment(
        lo,
        hi,
        |acc: &mut Vec<u64>, i, _p, e| {
            acc[i] *= (e + 1) as u64;
        },
        &mut counts,
    );
    for (i, r) in rem.into_iter().enumerate() {
        if r > 1 {
            counts[i] *= 2;
        }
    }
    Ok(counts)
}

/// Core segment walk: visits every maximal prime power `p^e || n` with
/// p <= sqrt(hi) and returns the leftover cofactors (1 or a prime
/// > sqrt(hi)).
fn multiplicative_segment<A>(
    lo: u64,
    hi: u64,
    mut visit: impl FnMut(&mut A, usize, u64, u32),
    acc: &mut A,
) -> Vec<u64> {
    let mut rem: Vec<u64> = (lo..=hi).collect();
    let root = hi.sqrt();
    for p in primes_up_to(root) {
        let start = lo.div_ceil(p) * p;
        let mut m = start;
        while m <= hi {
            let i = (m - lo) as usize;
            let mut e = 0u32;
            while rem[i] % p == 0 {
                rem[i] /= p;
                e += 1;
            }
            debug_assert!(e >= 1);
            visit(acc, i, p, e);
            m += p;
        }
    }
    rem
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor;
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;

    #[test]
    fn sigma_first_ten() {
        assert_eq!(
            sigma_sieve(1, 10).unwrap(),
            alloc::vec![1, 3, 4, 7, 6, 12, 8, 15, 13, 18]
        );
    }

    #[test]
    fn sigma_singletons() {
        assert_eq!(sigma_sieve(6, 6).unwrap(), alloc::vec![12]);
        assert_eq!(sigma_sieve(1, 1).unwrap(), alloc::vec![1]);
        assert_eq!(sigma_sieve(5040, 5040).unwrap(), alloc::vec![19344]);
    }

    #[test]
    fn sigma_matches_factorization_path() {
        let sigmas = sigma_sieve(1, 5000).unwrap();
        for (i, &s) in sigmas.iter().enumerate() {
            let n = i as u64 + 1;
            let expected = divisor::sigma(&divisor::factorize_u64(n).unwrap());
            assert_eq!(BigUint::from(s), expected, "n={n}");
        }
    }

    #[test]
    fn sigma_random_large_values() {
        // 10^3 deterministic pseudo-random samples below 10^9, each
        // checked as a one-element segment against the direct path.
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..1000 {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let n = state % 1_000_000_000 + 1;
            let s = sigma_sieve(n, n).unwrap()[0];
            let expected = divisor::sigma(&divisor::factorize_u64(n).unwrap());
            assert_eq!(Some(s), expected.to_u64(), "n={n}");
        }
    }

    #[test]
    fn divisor_counts_small() {
        let d = divisor_count_segment(1, 12).unwrap();
        assert_eq!(d, alloc::vec![1, 2, 2, 3, 2, 4, 2, 4, 3, 4, 2, 6]);
    }

    #[test]
    fn segment_bounds_checked() {
        assert!(sigma_sieve(0, 5).is_err());
        assert!(sigma_sieve(10, 5).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SieveConfig::new(0, 100).is_err());
        assert!(SieveConfig::new(LIMIT_CAP + 1, 100).is_err());
        assert!(SieveConfig::new(100, 1).is_err());
        assert!(SieveConfig::with_limit(1_000_000).is_ok());
    }
}
