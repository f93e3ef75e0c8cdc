//! Colossally abundant numbers: the per-prime exponent rule, CA
//! construction for a given epsilon, the greedy critical-epsilon
//! sequence generator, and a brute-force maximizer oracle.
//!
//! The canonical sequence is greedy-by-benefit: each step multiplies by
//! the prime whose benefit `log(sigma(p^(a+1))/sigma(p^a)) / log p` is
//! largest, decided rigorously by adaptive interval comparison of the
//! log-ratio expressions. A tie between two primes' benefits would
//! contradict the expectation that cross-prime log ratios never
//! coincide; it is treated as a fatal error with diagnostics rather
//! than resolved arbitrarily.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::divisor::{sigma_ratio, Factorization, SigmaRatio};
use crate::primes;
use crate::realnum::{eval, ComparisonResult, IntervalReal, PrecisionBudget, RealError, RealExpr};

/// Precision for the stored critical-epsilon enclosures.
const EPS_BITS: u32 = 96;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaError {
    #[error("invalid input: {0}")]
    InputError(&'static str),
    #[error(
        "benefit comparison between primes {p} and {q} undecided at {bits} bits; \
         distinct primes are expected never to tie"
    )]
    FourExponentialsTie { p: u64, q: u64, bits: u32 },
    #[error(transparent)]
    Real(#[from] RealError),
}

/// Exact positive rational exponent parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self, CaError> {
        if num == 0 || den == 0 {
            return Err(CaError::InputError("epsilon must be a positive rational"));
        }
        let g = num.gcd(&den);
        Ok(Epsilon {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// (v, u+v) as u32 for exact power comparisons; epsilons with huge
    /// numerators or denominators make the integer powers intractable
    /// and are rejected.
    fn small_exponents(&self) -> Result<(u32, u32), CaError> {
        const CAP: u64 = 1_000_000;
        if self.num > CAP || self.den > CAP {
            return Err(CaError::InputError(
                "epsilon numerator/denominator too large for exact power comparison",
            ));
        }
        Ok((self.den as u32, (self.num + self.den) as u32))
    }
}

impl core::fmt::Display for Epsilon {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// One colossally abundant number with the critical-epsilon interval
/// for which it maximizes `sigma(k) / k^(1+eps)`.
#[derive(Debug, Clone)]
pub struct CaEntry {
    pub index: u32,
    pub factorization: Factorization,
    pub value: BigUint,
    pub sigma_ratio: SigmaRatio,
    /// Absent for the first entry.
    pub multiplied_prime: Option<u64>,
    /// Enclosures of the interval endpoints (critical epsilons are
    /// irrational, so rational endpoints are not available).
    pub eps_critical: (IntervalReal, IntervalReal),
}

/// Exponent of `p` in the maximizer for `eps`: the largest `a >= 0`
/// such that every step up to `a` satisfies
/// `sigma(p^k)^v >= sigma(p^(k-1))^v * p^(u+v)`, decided by exact
/// big-integer comparisons.
pub fn ca_exponent(p: u64, eps: &Epsilon) -> Result<u32, CaError> {
    if !primes::is_prime(p) {
        return Err(CaError::InputError("p must be prime"));
    }
    let (v, exponent_uv) = eps.small_exponents()?;
    let pb = BigUint::from(p);
    let mut a = 0u32;
    let mut sigma_prev = BigUint::one(); // sigma(p^0)
    loop {
        let sigma_next = &sigma_prev * &pb + BigUint::one(); // sigma(p^(a+1)) = p*sigma(p^a) + 1
                                                             // Step condition: (sigma_next / sigma_prev)^v >= p^(u+v).
        let lhs = sigma_next.pow(v);
        let rhs = sigma_prev.pow(v) * pb.pow(exponent_uv);
        if lhs >= rhs {
            a += 1;
            sigma_prev = sigma_next;
        } else {
            return Ok(a);
        }
        if a > 64 {
            // sigma ratio tends to p while p^(1+eps) > p: unreachable
            // for eps >= 1/2^something sane; guards malformed input.
            return Err(CaError::InputError("epsilon too small for exponent search"));
        }
    }
}

/// The closed-form exponent `floor(log((p^(1+e)-1)/(p^e-1)) / log p) - 1`
/// evaluated with interval arithmetic, escalating until the floor is
/// determined. Returns `None` when the budget is exhausted (epsilon at
/// or near a critical value).
pub fn ca_exponent_formula(
    p: u64,
    eps: &Epsilon,
    budget: PrecisionBudget,
) -> Result<Option<u32>, CaError> {
    if !primes::is_prime(p) {
        return Err(CaError::InputError("p must be prime"));
    }
    let eps_expr = RealExpr::rational(eps.to_rational());
    let p_expr = RealExpr::integer(p as i64);
    let one = RealExpr::integer(1);
    let log_p = p_expr.ln();
    // p^x = exp(x log p)
    let pow = |x: &RealExpr| x.mul(&log_p).exp();
    let inner = pow(&one.add(&eps_expr))
        .sub(&one)
        .div(&pow(&eps_expr).sub(&one));
    let expr = inner.ln().div(&log_p);
    let mut bits = budget.initial_bits;
    loop {
        match eval(&expr, bits) {
            Ok(enc) => {
                let lo_floor = floor_to_i64(enc.lo());
                let hi_floor = floor_to_i64(enc.hi());
                if lo_floor == hi_floor {
                    let a = lo_floor - 1;
                    return Ok(Some(u32::try_from(a.max(0)).unwrap_or(0)));
                }
            }
            // A wide enclosure of p^eps - 1 can straddle zero at low
            // precision; escalation resolves it.
            Err(RealError::Domain(_)) if bits < budget.max_bits => {}
            Err(e) => return Err(e.into()),
        }
        if bits >= budget.max_bits {
            return Ok(None);
        }
        bits = bits
            .saturating_mul(budget.growth_factor)
            .min(budget.max_bits);
    }
}

fn floor_to_i64(d: &crate::realnum::Dyadic) -> i64 {
    d.floor_bigint().to_i64().expect("floor fits i64")
}

/// The maximizing factorization for `eps`: exponent `ca_exponent(p)`
/// for each prime until exponents vanish.
pub fn ca_for_epsilon(eps: &Epsilon) -> Result<Factorization, CaError> {
    let mut factors = Vec::new();
    for p in primes::PrimeIter::new() {
        let a = ca_exponent(p, eps)?;
        if a == 0 {
            // (1 + 1/p)^v < p^u is monotone in p: all larger primes
            // get exponent zero too.
            break;
        }
        factors.push((BigUint::from(p), a));
    }
    Ok(Factorization::from_prime_powers(factors))
}

/// Greedy generator state: the current product and per-prime exponents.
struct CaGenerator {
    factors: Vec<(u64, u32)>,
    value: BigUint,
    next_new_prime: u64,
    budget: PrecisionBudget,
}

struct Candidate {
    prime: u64,
    /// log of the sigma step ratio for this prime.
    log_ratio: RealExpr,
    /// log of the prime.
    log_prime: RealExpr,
}

impl Candidate {
    fn benefit(&self) -> RealExpr {
        self.log_ratio.div(&self.log_prime)
    }
}

impl CaGenerator {
    fn new(budget: PrecisionBudget) -> Self {
        CaGenerator {
            factors: Vec::new(),
            value: BigUint::one(),
            next_new_prime: 2,
            budget,
        }
    }

    fn candidate(&self, prime: u64, current_exp: u32) -> Candidate {
        // sigma(p^(a+1)) / sigma(p^a) = (p^(a+2) - 1) / (p^(a+1) - 1)
        let p = BigUint::from(prime);
        let num = p.pow(current_exp + 2) - BigUint::one();
        let den = p.pow(current_exp + 1) - BigUint::one();
        let ratio = BigRational::new(BigInt::from(num), BigInt::from(den));
        Candidate {
            prime,
            log_ratio: RealExpr::rational(ratio).ln(),
            log_prime: RealExpr::integer(prime as i64).ln(),
        }
    }

    /// The prime with the greatest benefit, compared pairwise in
    /// ascending prime order.
    fn best_step(&self) -> Result<Candidate, CaError> {
        let mut candidates: Vec<Candidate> = self
            .factors
            .iter()
            .map(|&(p, a)| self.candidate(p, a))
            .collect();
        candidates.push(self.candidate(self.next_new_prime, 0));
        let mut best = candidates.remove(0);
        for cand in candidates {
            // benefit(cand) > benefit(best)
            // <=> log_ratio(cand) * log_prime(best) > log_ratio(best) * log_prime(cand)
            let lhs = cand.log_ratio.mul(&best.log_prime);
            let rhs = best.log_ratio.mul(&cand.log_prime);
            match crate::realnum::compare_adaptive(&lhs, &rhs, self.budget)? {
                ComparisonResult::Greater => best = cand,
                ComparisonResult::Less => {}
                ComparisonResult::ProvenEqual | ComparisonResult::Undecided(_) => {
                    let bits = self.budget.max_bits;
                    return Err(CaError::FourExponentialsTie {
                        p: best.prime,
                        q: cand.prime,
                        bits,
                    });
                }
            }
        }
        Ok(best)
    }

    fn apply(&mut self, prime: u64) {
        match self.factors.iter_mut().find(|(p, _)| *p == prime) {
            Some((_, a)) => *a += 1,
            None => {
                debug_assert_eq!(prime, self.next_new_prime);
                self.factors.push((prime, 1));
                self.factors.sort_unstable_by_key(|&(p, _)| p);
                self.next_new_prime = primes::PrimeIter::new()
                    .find(|&q| q > prime)
                    .expect("next prime");
            }
        }
        self.value *= BigUint::from(prime);
    }

    fn factorization(&self) -> Factorization {
        Factorization::from_prime_powers(
            self.factors
                .iter()
                .map(|&(p, a)| (BigUint::from(p), a))
                .collect(),
        )
    }
}

fn eps_enclosure(benefit: &RealExpr, budget: PrecisionBudget) -> Result<IntervalReal, CaError> {
    let bits = EPS_BITS
        .min(budget.max_bits)
        .max(budget.initial_bits.min(EPS_BITS));
    Ok(eval(&benefit.sub(&RealExpr::integer(1)), bits)?)
}

enum StopRule {
    Limit(BigUint),
    Count(usize),
}

fn generate(stop: StopRule, budget: PrecisionBudget) -> Result<Vec<CaEntry>, CaError> {
    let mut generator = CaGenerator::new(budget);
    let mut entries: Vec<CaEntry> = Vec::new();
    // Entry awaiting its lower critical epsilon (the next step's
    // benefit determines it).
    let mut pending: Option<(CaEntry, IntervalReal)> = None;

    loop {
        let step = generator.best_step()?;
        // Critical epsilon of this step's benefit: the upper endpoint
        // for the entry it creates, the lower endpoint for the entry
        // it supersedes.
        let eps_of_step = eps_enclosure(&step.benefit(), budget)?;
        if let Some((mut entry, eps_hi)) = pending.take() {
            entry.eps_critical = (eps_of_step.clone(), eps_hi);
            // sigma(n)/n strictly increases along the sequence.
            if let Some(prev) = entries.last() {
                debug_assert_eq!(
                    prev.sigma_ratio.cmp_ratio(&entry.sigma_ratio),
                    core::cmp::Ordering::Less
                );
            }
            entries.push(entry);
        }
        match &stop {
            StopRule::Limit(limit) => {
                let next_value = &generator.value * BigUint::from(step.prime);
                if next_value > *limit {
                    break;
                }
            }
            StopRule::Count(count) => {
                if entries.len() >= *count {
                    break;
                }
            }
        }
        let index = entries.len() as u32 + 1;
        let multiplied = if index == 1 { None } else { Some(step.prime) };
        generator.apply(step.prime);
        let factorization = generator.factorization();
        debug_assert!(exponents_nonincreasing(&factorization));
        let entry = CaEntry {
            index,
            value: generator.value.clone(),
            sigma_ratio: sigma_ratio(&factorization),
            factorization,
            multiplied_prime: multiplied,
            // Placeholder until the next step fixes the lower endpoint.
            eps_critical: (eps_of_step.clone(), eps_of_step.clone()),
        };
        pending = Some((entry, eps_of_step));
    }
    Ok(entries)
}

fn exponents_nonincreasing(f: &Factorization) -> bool {
    f.factors().windows(2).all(|w| w[0].1 >= w[1].1)
}

/// All colossally abundant numbers with value <= limit, in increasing
/// order, with critical-epsilon enclosures.
pub fn ca_sequence(limit: &BigUint) -> Result<Vec<CaEntry>, CaError> {
    ca_sequence_with_budget(limit, PrecisionBudget::default_schedule())
}

pub fn ca_sequence_with_budget(
    limit: &BigUint,
    budget: PrecisionBudget,
) -> Result<Vec<CaEntry>, CaError> {
    if *limit < BigUint::from(2u32) {
        return Err(CaError::InputError("limit must be at least 2"));
    }
    generate(StopRule::Limit(limit.clone()), budget)
}

/// The first `count` colossally abundant numbers.
pub fn ca_sequence_take(count: usize) -> Result<Vec<CaEntry>, CaError> {
    ca_sequence_take_with_budget(count, PrecisionBudget::default_schedule())
}

pub fn ca_sequence_take_with_budget(
    count: usize,
    budget: PrecisionBudget,
) -> Result<Vec<CaEntry>, CaError> {
    generate(StopRule::Count(count), budget)
}

/// Exhaustive maximizer of `sigma(k) / k^(1+eps)` over `k <= search_limit`,
/// compared exactly via cross-multiplied integer powers; no floating
/// point anywhere. Quadratic-blowup powers are avoided by an exact
/// integer prescreen: for k > k_best with sigma(k)/k <= sigma_best/k_best
/// the candidate loses outright.
pub fn brute_force_ca_oracle(eps: &Epsilon, search_limit: u64) -> Result<u64, CaError> {
    if search_limit < 2 {
        return Err(CaError::InputError("search limit must be at least 2"));
    }
    let (v, uv) = eps.small_exponents()?;
    let mut best_k = 1u64;
    let mut best_sigma = 1u64;
    let segment = 1u64 << 20;
    let mut lo = 1u64;
    while lo <= search_limit {
        let hi = (lo + segment - 1).min(search_limit);
        let sigmas = crate::sieve::sigma_sieve(lo, hi)
            .map_err(|_| CaError::InputError("sigma overflow in oracle range"))?;
        for (i, &s) in sigmas.iter().enumerate() {
            let k = lo + i as u64;
            if k == 1 {
                continue;
            }
            // Prescreen: sigma(k)/k <= sigma_best/k_best and k > k_best
            // imply a strictly smaller objective.
            if (s as u128) * (best_k as u128) <= (best_sigma as u128) * (k as u128) {
                continue;
            }
            // Exact comparison: sigma(k)^v * k_best^(u+v) vs
            // sigma_best^v * k^(u+v).
            let lhs = BigUint::from(s).pow(v) * BigUint::from(best_k).pow(uv);
            let rhs = BigUint::from(best_sigma).pow(v) * BigUint::from(k).pow(uv);
            if lhs > rhs {
                best_k = k;
                best_sigma = s;
            }
        }
        lo = hi + 1;
    }
    Ok(best_k)
}

/// The rational with the smallest denominator in the closed interval
/// `[lo, hi]` (Stern-Brocot descent). Used to pick an exactly
/// representable epsilon strictly inside a critical interval.
pub fn simplest_rational_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    assert!(lo <= hi);
    if lo == hi {
        return lo.clone();
    }
    let floor_lo = lo.floor();
    let ceil_lo = if lo.is_integer() {
        floor_lo.clone()
    } else {
        &floor_lo + BigRational::one()
    };
    if ceil_lo <= *hi {
        // An integer lies inside; integers are simplest.
        return ceil_lo;
    }
    // No integer inside: recurse on the reciprocal fractional interval.
    // 1/(hi - fl) <= 1/(lo - fl) since both fractional parts are in (0, 1).
    let inv_lo = (hi - &floor_lo).recip();
    let inv_hi = (lo - &floor_lo).recip();
    let inner = simplest_rational_between(&inv_lo, &inv_hi);
    floor_lo + inner.recip()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(u: u64, v: u64) -> Epsilon {
        Epsilon::new(u, v).unwrap()
    }

    #[test]
    fn exponent_known_values() {
        assert_eq!(ca_exponent(2, &eps(1, 2)).unwrap(), 1);
        assert_eq!(ca_exponent(2, &eps(1, 10)).unwrap(), 2);
        assert_eq!(ca_exponent(7, &eps(1, 10)).unwrap(), 0);
        assert_eq!(ca_exponent(2, &eps(3, 1)).unwrap(), 0);
    }

    #[test]
    fn nonprime_rejected() {
        assert!(matches!(
            ca_exponent(6, &eps(1, 2)),
            Err(CaError::InputError(_))
        ));
        assert!(Epsilon::new(0, 3).is_err());
    }

    #[test]
    fn formula_matches_greedy_on_examples() {
        let budget = PrecisionBudget::default_schedule();
        for (p, e) in [
            (2u64, eps(1, 2)),
            (2, eps(1, 10)),
            (7, eps(1, 10)),
            (3, eps(1, 4)),
            (5, eps(2, 7)),
        ] {
            let greedy = ca_exponent(p, &e).unwrap();
            let formula = ca_exponent_formula(p, &e, budget).unwrap().unwrap();
            assert_eq!(greedy, formula, "p={p} eps={e}");
        }
    }

    #[test]
    fn ca_for_epsilon_known_values() {
        assert_eq!(
            ca_for_epsilon(&eps(1, 2)).unwrap().value(),
            BigUint::from(2u32)
        );
        assert_eq!(
            ca_for_epsilon(&eps(1, 4)).unwrap().value(),
            BigUint::from(6u32)
        );
        let f = ca_for_epsilon(&eps(1, 10)).unwrap();
        assert_eq!(f.value(), BigUint::from(60u32));
        assert_eq!(f.to_ascii(), "2^2 * 3 * 5");
        // Large epsilon: the empty product maximizes.
        assert!(ca_for_epsilon(&eps(3, 1)).unwrap().is_one());
    }

    #[test]
    fn sequence_first_eight() {
        let entries = ca_sequence(&BigUint::from(10_000u32)).unwrap();
        let values: Vec<u64> = entries.iter().map(|e| e.value.to_u64().unwrap()).collect();
        assert_eq!(values, alloc::vec![2, 6, 12, 60, 120, 360, 2520, 5040]);
        let primes: Vec<Option<u64>> = entries.iter().map(|e| e.multiplied_prime).collect();
        assert_eq!(
            primes,
            alloc::vec![
                None,
                Some(3),
                Some(2),
                Some(5),
                Some(2),
                Some(3),
                Some(7),
                Some(2)
            ]
        );
        for e in &entries {
            assert!(e.eps_critical.0.lo() <= e.eps_critical.1.hi());
        }
    }

    #[test]
    fn sequence_ratios_strictly_increase() {
        let entries = ca_sequence(&BigUint::from(1_000_000u32)).unwrap();
        for pair in entries.windows(2) {
            assert_eq!(
                pair[0].sigma_ratio.cmp_ratio(&pair[1].sigma_ratio),
                core::cmp::Ordering::Less
            );
        }
    }

    #[test]
    fn take_matches_limit_variant() {
        let by_count = ca_sequence_take(5).unwrap();
        let by_limit = ca_sequence(&BigUint::from(120u32)).unwrap();
        assert_eq!(by_count.len(), 5);
        assert_eq!(by_limit.len(), 5);
        for (a, b) in by_count.iter().zip(&by_limit) {
            assert_eq!(a.value, b.value);
        }
    }

    #[test]
    fn oracle_known_values() {
        assert_eq!(brute_force_ca_oracle(&eps(1, 2), 10_000).unwrap(), 2);
        assert_eq!(brute_force_ca_oracle(&eps(1, 4), 10_000).unwrap(), 6);
        assert_eq!(brute_force_ca_oracle(&eps(1, 10), 100_000).unwrap(), 60);
    }

    #[test]
    fn sequence_limit_precondition() {
        assert!(ca_sequence(&BigUint::from(1u32)).is_err());
        assert_eq!(ca_sequence(&BigUint::from(2u32)).unwrap().len(), 1);
    }

    #[test]
    fn benefit_tie_is_fatal_with_diagnostics() {
        // A 4-bit ceiling cannot separate any two benefits: the
        // generator must refuse rather than pick arbitrarily.
        let starved = PrecisionBudget::new(4, 4, 2).unwrap();
        match ca_sequence_with_budget(&BigUint::from(100u32), starved) {
            Err(CaError::FourExponentialsTie { p, q, bits }) => {
                assert_ne!(p, q);
                assert_eq!(bits, 4);
            }
            other => panic!("expected a tie error, got {other:?}"),
        }
    }

    #[test]
    fn formula_undecidable_under_starved_budget() {
        let starved = PrecisionBudget::new(4, 4, 2).unwrap();
        assert_eq!(ca_exponent_formula(2, &eps(1, 10), starved).unwrap(), None);
    }

    #[test]
    fn simplest_rational_examples() {
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(simplest_rational_between(&q(26, 100), &q(58, 100)), q(1, 2));
        assert_eq!(simplest_rational_between(&q(3, 10), &q(3, 10)), q(3, 10));
        assert_eq!(simplest_rational_between(&q(5, 2), &q(7, 2)), q(3, 1));
        let s = simplest_rational_between(&q(2305, 100000), &q(2886, 100000));
        // 1/35 = 0.02857... lies inside [0.02305, 0.02886]
        assert_eq!(s, q(1, 35));
    }
}
