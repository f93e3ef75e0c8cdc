//! Exact integer arithmetic for the divisor-sum function: trial-division
//! factorization, sigma via the prime-power product, and exact
//! sigma(n)/n ratios.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("input must be a positive integer")]
    InputError,
}

/// Canonical prime-power decomposition. Primes strictly increase, every
/// exponent is at least 1, and the empty list represents n = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Build from a list of (prime, exponent) pairs. Panics if the list
    /// is not strictly increasing in certified primes with exponents
    /// >= 1; generators construct these from known primes.
    pub fn from_prime_powers(factors: Vec<(BigUint, u32)>) -> Self {
        let mut prev: Option<&BigUint> = None;
        for (p, a) in &factors {
            assert!(*a >= 1, "exponent must be at least 1");
            assert!(
                crate::primes::is_prime(p.to_u64().expect("prime fits u64")),
                "factor must be prime"
            );
            if let Some(q) = prev {
                assert!(q < p, "primes must strictly increase");
            }
            prev = Some(p);
        }
        Factorization { factors }
    }

    pub fn one() -> Self {
        Factorization {
            factors: Vec::new(),
        }
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// The integer this factorization represents.
    pub fn value(&self) -> BigUint {
        let mut v = BigUint::one();
        for (p, a) in &self.factors {
            v *= p.pow(*a);
        }
        v
    }

    pub fn exponent_of(&self, prime: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(p, _)| p == prime)
            .map(|(_, a)| *a)
            .unwrap_or(0)
    }

    /// Canonical ASCII rendering: `2^4 * 3^2 * 5 * 7`, exponent 1
    /// omitted; `1` for the empty product.
    pub fn to_ascii(&self) -> String {
        if self.factors.is_empty() {
            return String::from("1");
        }
        let mut out = String::new();
        for (i, (p, a)) in self.factors.iter().enumerate() {
            if i > 0 {
                out.push_str(" * ");
            }
            out.push_str(&p.to_string());
            if *a > 1 {
                out.push('^');
                out.push_str(&a.to_string());
            }
        }
        out
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ascii())
    }
}

/// Exact reduced sigma(n)/n. Always at least 1 for positive n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaRatio {
    numerator: BigUint,
    denominator: BigUint,
}

impl SigmaRatio {
    pub fn new(numerator: BigUint, denominator: BigUint) -> Self {
        assert!(!denominator.is_zero());
        let g = numerator.gcd(&denominator);
        SigmaRatio {
            numerator: numerator / &g,
            denominator: denominator / g,
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    /// Cross-multiplied exact comparison.
    pub fn cmp_ratio(&self, other: &SigmaRatio) -> core::cmp::Ordering {
        (&self.numerator * &other.denominator).cmp(&(&other.numerator * &self.denominator))
    }

    /// Decimal string with `dp` places, truncated toward zero -- the
    /// convention of the classical colossally-abundant table, which
    /// this column reproduces digit for digit.
    pub fn to_decimal(&self, dp: u32) -> String {
        let scale = BigUint::from(10u32).pow(dp);
        let scaled = &self.numerator * &scale;
        let (q, _r) = scaled.div_rem(&self.denominator);
        let digits = q.to_string();
        let dp = dp as usize;
        if dp == 0 {
            return digits;
        }
        let mut out = String::new();
        if digits.len() <= dp {
            out.push_str("0.");
            for _ in 0..dp - digits.len() {
                out.push('0');
            }
            out.push_str(&digits);
        } else {
            let (int_part, frac_part) = digits.split_at(digits.len() - dp);
            out.push_str(int_part);
            out.push('.');
            out.push_str(frac_part);
        }
        out
    }
}

impl fmt::Display for SigmaRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

const WHEEL210: [u64; 48] = [
    10, 2, 4, 2, 4, 6, 2, 6, 4, 2, 4, 6, 6, 2, 6, 4, 2, 6, 4, 6, 8, 4, 2, 4, 2, 4, 8, 6, 4, 6, 2,
    4, 6, 2, 6, 6, 4, 2, 4, 6, 2, 6, 4, 2, 4, 2, 10, 2,
];

/// Canonical factorization by deterministic trial division over a
/// mod-210 wheel. Every reported factor is certified prime because
/// division proceeds in increasing order up to the square root.
pub fn factorize(n: &BigUint) -> Result<Factorization, DivisorError> {
    if n.is_zero() {
        return Err(DivisorError::InputError);
    }
    if let Some(small) = n.to_u64() {
        return factorize_u64(small);
    }
    // Values beyond u64 are rare here (in-scope composites fit u64);
    // big smooth values still fall out quickly.
    let mut factors = Vec::new();
    let mut rest = n.clone();
    let mut push = |p: u64, rest: &mut BigUint| {
        let pb = BigUint::from(p);
        let mut a = 0u32;
        loop {
            let (q, r) = rest.div_rem(&pb);
            if r.is_zero() {
                a += 1;
                *rest = q;
            } else {
                break;
            }
        }
        if a > 0 {
            factors.push((pb, a));
        }
    };
    for p in [2u64, 3, 5, 7] {
        push(p, &mut rest);
    }
    // WHEEL210[0] is the 1 -> 11 step; starting from 11 the next step
    // is WHEEL210[1].
    let mut d = 11u64;
    let mut i = 1usize;
    loop {
        if rest.is_one() {
            break;
        }
        let dd = BigUint::from(d);
        if &dd * &dd > rest {
            break;
        }
        push(d, &mut rest);
        d = d
            .checked_add(WHEEL210[i])
            .expect("trial divisor overflow: input out of supported range");
        i = (i + 1) % WHEEL210.len();
    }
    if !rest.is_one() {
        // rest has no factor <= sqrt(rest): prime.
        let a = 1u32;
        factors.push((rest, a));
    }
    Ok(Factorization { factors })
}

/// Native u64 path: the same wheel without big-integer division.
pub fn factorize_u64(n: u64) -> Result<Factorization, DivisorError> {
    if n == 0 {
        return Err(DivisorError::InputError);
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut push = |p: u64, rest: &mut u64| {
        let mut a = 0u32;
        while *rest % p == 0 {
            *rest /= p;
            a += 1;
        }
        if a > 0 {
            factors.push((BigUint::from(p), a));
        }
    };
    for p in [2u64, 3, 5, 7] {
        push(p, &mut rest);
    }
    let mut d = 11u64;
    let mut i = 1usize;
    while rest > 1 {
        match d.checked_mul(d) {
            Some(sq) if sq <= rest => {}
            _ => break,
        }
        push(d, &mut rest);
        d += WHEEL210[i];
        i = (i + 1) % WHEEL210.len();
    }
    if rest > 1 {
        factors.push((BigUint::from(rest), 1));
    }
    Ok(Factorization { factors })
}

/// sigma(n) = prod (p^(a+1) - 1)/(p - 1), exact.
pub fn sigma(f: &Factorization) -> BigUint {
    let mut result = BigUint::one();
    for (p, a) in f.factors() {
        result *= sigma_prime_power(p, *a);
    }
    result
}

fn sigma_prime_power(p: &BigUint, a: u32) -> BigUint {
    (p.pow(a + 1) - BigUint::one()) / (p - BigUint::one())
}

/// Exact reduced sigma(n)/n.
pub fn sigma_ratio(f: &Factorization) -> SigmaRatio {
    SigmaRatio::new(sigma(f), f.value())
}
