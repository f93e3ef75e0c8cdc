//! Empirical checks of the average order of sigma and of the prime
//! product asymptotics: both are limit statements, so these produce
//! midpoints of tight enclosures for golden-value comparison rather
//! than verdicts.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::primes::primes_up_to;
use crate::realnum::{eval, RealExpr};

use super::{sigma_segment, SieveError, DEFAULT_SEGMENT_SIZE};

const STATS_BITS: u32 = 128;

/// Residuals and ratios from the two empirical checks.
#[derive(Debug, Clone, Default)]
pub struct StatsReport {
    /// (n, (sum_{j<=n} sigma(j) - pi^2 n^2 / 12) / (n log n))
    pub bachmann_residuals: Vec<(u64, f64)>,
    /// (x, prod_{p<=x} (1 - 1/p) * log x * e^gamma)
    pub mertens_ratios: Vec<(u64, f64)>,
}

/// Normalized error of the divisor-sum summatory function against its
/// average order: `(sum_{j<=n} sigma(j) - pi^2 n^2/12) / (n log n)`.
/// The sum is exact and pi^2 is enclosed; the midpoint is returned with
/// error below 1e-6.
pub fn bachmann_residual(n: u64) -> Result<f64, SieveError> {
    if n < 10 {
        return Err(SieveError::InputError("residual needs n >= 10"));
    }
    let mut sum: u128 = 0;
    let mut lo = 1u64;
    while lo <= n {
        let hi = lo.saturating_add(DEFAULT_SEGMENT_SIZE - 1).min(n);
        let (sigmas, overflows) = sigma_segment(lo, hi)?;
        if let Some(&m) = overflows.first() {
            return Err(SieveError::Overflow { n: m });
        }
        for &s in &sigmas {
            sum += s as u128;
        }
        lo = hi + 1;
    }
    let sum_expr = RealExpr::rational(BigRational::from_integer(BigInt::from(sum)));
    let n_expr = RealExpr::integer(n as i64);
    let pi = RealExpr::pi();
    let main_term = pi
        .mul(&pi)
        .mul(&n_expr)
        .mul(&n_expr)
        .div(&RealExpr::integer(12));
    let residual = sum_expr.sub(&main_term).div(&n_expr.mul(&n_expr.ln()));
    let enclosure = eval(&residual, STATS_BITS).map_err(crate::criteria::CheckError::from)?;
    // The midpoint is contractually within 1e-6 of the exact residual.
    assert!(
        enclosure.width() < crate::realnum::Dyadic::pow2(-20),
        "residual enclosure unexpectedly wide"
    );
    Ok(enclosure.midpoint().to_f64())
}

/// `prod_{p<=x} (1 - 1/p) * log x * e^gamma`; tends to 1 as x grows.
pub fn mertens_ratio(x: u64) -> Result<f64, SieveError> {
    Ok(mertens_ratios_at(&[x])?.remove(0).1)
}

/// The Mertens ratio at several checkpoints sharing one prime-product
/// accumulation pass. `xs` must be sorted ascending.
pub fn mertens_ratios_at(xs: &[u64]) -> Result<Vec<(u64, f64)>, SieveError> {
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    if xs.iter().any(|&x| x < 2) {
        return Err(SieveError::InputError("mertens ratio needs x >= 2"));
    }
    if xs.windows(2).any(|w| w[0] > w[1]) {
        return Err(SieveError::InputError("checkpoints must be ascending"));
    }
    let max = *xs.last().expect("nonempty");
    let primes = primes_up_to(max);
    // Unreduced exact product: num/den = prod (p-1)/p.
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    let mut out = Vec::with_capacity(xs.len());
    let mut prime_idx = 0usize;
    for &x in xs {
        while prime_idx < primes.len() && primes[prime_idx] <= x {
            let p = primes[prime_idx];
            num *= p - 1;
            den *= p;
            prime_idx += 1;
        }
        let product = RealExpr::rational(BigRational::new_raw(
            BigInt::from(num.clone()),
            BigInt::from(den.clone()),
        ));
        let expr = product
            .mul(&RealExpr::integer(x as i64).ln())
            .mul(&RealExpr::gamma().exp());
        let enclosure = eval(&expr, STATS_BITS).map_err(crate::criteria::CheckError::from)?;
        out.push((x, enclosure.midpoint().to_f64()));
    }
    Ok(out)
}

/// Run both empirical checks.
pub fn compute_stats(bachmann_ns: &[u64], mertens_xs: &[u64]) -> Result<StatsReport, SieveError> {
    let mut report = StatsReport::default();
    for &n in bachmann_ns {
        report.bachmann_residuals.push((n, bachmann_residual(n)?));
    }
    report.mertens_ratios = mertens_ratios_at(mertens_xs)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mertens_small_values() {
        // (1 - 1/2) * ln 2 * e^gamma = 0.6173...
        let r2 = mertens_ratio(2).unwrap();
        assert!((r2 - 0.617).abs() < 0.001);
        // product over {2,3,5,7}: 0.9371...
        let r10 = mertens_ratio(10).unwrap();
        assert!((r10 - 0.937).abs() < 0.001);
    }

    #[test]
    fn mertens_increases_toward_one() {
        let ratios = mertens_ratios_at(&[100, 1000, 10_000]).unwrap();
        assert!(ratios.windows(2).all(|w| w[0].1 < w[1].1));
        assert!(ratios.last().unwrap().1 < 1.0);
        assert!(ratios.last().unwrap().1 > 0.98);
    }

    #[test]
    fn bachmann_residual_bounded_small() {
        let r = bachmann_residual(1000).unwrap();
        assert!(r.abs() < 2.0, "residual {r}");
        let r = bachmann_residual(10_000).unwrap();
        assert!(r.abs() < 2.0, "residual {r}");
    }

    #[test]
    fn input_validation() {
        assert!(bachmann_residual(5).is_err());
        assert!(mertens_ratio(1).is_err());
        assert!(mertens_ratios_at(&[10, 5]).is_err());
    }
}
