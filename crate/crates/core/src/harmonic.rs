//! Harmonic numbers: exact rationals for moderate n, rigorous
//! enclosures from the integral representation
//! `H_n = log n + gamma + T_n` with tail `T_n in [0, 1/n]` for large n,
//! and a directed fixed-point bracket walker for bulk range work.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::realnum::{eval, IntervalReal, RealError, RealExpr};

/// Beyond this the exact rational's size (about n log n bits) costs more
/// than the enclosure's 1/n width is worth.
pub const DEFAULT_EXACT_CUTOFF: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarmonicError {
    #[error("n = {n} exceeds the exact cutoff {cutoff}; use harmonic_enclosure")]
    CutoffExceeded { n: u64, cutoff: u64 },
    #[error("n must be at least {min}")]
    InputError { min: u64 },
    #[error(transparent)]
    Real(#[from] RealError),
}

/// H_n, exact or enclosed.
#[derive(Debug, Clone)]
pub struct HarmonicValue {
    n: BigUint,
    form: HarmonicForm,
}

#[derive(Debug, Clone)]
pub enum HarmonicForm {
    /// Fully reduced rational equal to `sum_{j<=n} 1/j`.
    ExactRational(BigRational),
    /// `[log n + gamma, log n + gamma + 1/n]` widened outward by
    /// evaluation error; `tail_hi` is the 1/n tail bound.
    Enclosure {
        interval: IntervalReal,
        tail_hi: BigRational,
    },
}

impl HarmonicValue {
    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn form(&self) -> &HarmonicForm {
        &self.form
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match &self.form {
            HarmonicForm::ExactRational(q) => Some(q),
            HarmonicForm::Enclosure { .. } => None,
        }
    }

    /// Expression usable in adaptive comparisons. Exact values refine
    /// with precision; enclosures keep their 1/n floor.
    pub fn to_expr(&self) -> RealExpr {
        match &self.form {
            HarmonicForm::ExactRational(q) => RealExpr::rational(q.clone()),
            HarmonicForm::Enclosure { .. } => log_form_expr(&self.n),
        }
    }
}

/// `log n + gamma + [0, 1/n]` as a refinable expression.
pub(crate) fn log_form_expr(n: &BigUint) -> RealExpr {
    let n_int = BigInt::from(n.clone());
    let tail = BigRational::new(BigInt::one(), n_int.clone());
    RealExpr::from_bigint(n_int)
        .ln()
        .add(&RealExpr::gamma())
        .add(&RealExpr::rational_bracket(BigRational::zero(), tail))
}

/// Exact H_n at the default cutoff.
pub fn harmonic_exact(n: u64) -> Result<HarmonicValue, HarmonicError> {
    harmonic_exact_with_cutoff(n, DEFAULT_EXACT_CUTOFF)
}

pub fn harmonic_exact_with_cutoff(n: u64, cutoff: u64) -> Result<HarmonicValue, HarmonicError> {
    if n == 0 {
        return Err(HarmonicError::InputError { min: 1 });
    }
    if n > cutoff {
        return Err(HarmonicError::CutoffExceeded { n, cutoff });
    }
    let mut iter = ExactHarmonic::new();
    while iter.n() < n {
        iter.advance();
    }
    let (num, den) = iter.into_raw();
    let g = num.gcd(&den);
    Ok(HarmonicValue {
        n: BigUint::from(n),
        form: HarmonicForm::ExactRational(BigRational::new_raw(
            BigInt::from(num / &g),
            BigInt::from(den / g),
        )),
    })
}

/// Sound interval `[log n + gamma, log n + gamma + 1/n]` containing H_n.
pub fn harmonic_enclosure(n: &BigUint, bits: u32) -> Result<HarmonicValue, HarmonicError> {
    if *n < BigUint::from(2u32) {
        return Err(HarmonicError::InputError { min: 2 });
    }
    let interval = eval(&log_form_expr(n), bits)?;
    Ok(HarmonicValue {
        n: n.clone(),
        form: HarmonicForm::Enclosure {
            interval,
            tail_hi: BigRational::new(BigInt::one(), BigInt::from(n.clone())),
        },
    })
}

/// Incremental exact H_n as an unreduced fraction over the running lcm
/// denominator. Stepping costs a few big-by-small operations.
pub struct ExactHarmonic {
    n: u64,
    num: BigUint,
    den: BigUint,
}

impl ExactHarmonic {
    pub fn new() -> Self {
        ExactHarmonic {
            n: 0,
            num: BigUint::zero(),
            den: BigUint::one(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Unreduced (numerator, denominator); denominator is lcm(1..n).
    pub fn raw(&self) -> (&BigUint, &BigUint) {
        (&self.num, &self.den)
    }

    pub fn into_raw(self) -> (BigUint, BigUint) {
        (self.num, self.den)
    }

    /// Advance to H_{n+1} = H_n + 1/(n+1).
    pub fn advance(&mut self) {
        let j = self.n + 1;
        let jb = BigUint::from(j);
        // gcd(den, j) via one big-by-small reduction.
        let r = (&self.den % &jb).to_u64().unwrap_or(0);
        let g = gcd_u64(r, j);
        let mult = j / g;
        if mult > 1 {
            self.num *= mult;
            self.den *= mult;
        }
        self.num += &self.den / jb;
        self.n = j;
    }
}

impl Default for ExactHarmonic {
    fn default() -> Self {
        Self::new()
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Directed-rounded lower/upper fixed-point sums bracketing H_n
/// (Q8.120). The bracket starts at H_0 = 0 and tightens nothing as it
/// walks; the accumulated width after n steps is below n * 2^-120.
#[derive(Debug, Clone)]
pub struct HarmonicBracket {
    n: u64,
    lo: u128,
    hi: u128,
}

const FRAC_BITS: u32 = 120;

impl HarmonicBracket {
    pub fn new() -> Self {
        HarmonicBracket { n: 0, lo: 0, hi: 0 }
    }

    /// Seed the walker at position n from any sound enclosure of H_n,
    /// rounding the endpoints outward into the fixed-point grid.
    /// Returns `None` when the enclosure does not fit (H_n >= 2^8).
    pub fn seeded(n: u64, enclosure: &IntervalReal) -> Option<Self> {
        let lo = enclosure.lo().mul_pow2(FRAC_BITS as i64).floor_bigint();
        let hi_neg = enclosure
            .hi()
            .neg()
            .mul_pow2(FRAC_BITS as i64)
            .floor_bigint();
        let lo = lo.to_u128()?;
        let hi = (-hi_neg).to_u128()?;
        if hi >= 1u128 << 127 {
            return None;
        }
        Some(HarmonicBracket { n, lo, hi })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn step(&mut self) {
        self.n += 1;
        let j = self.n as u128;
        let unit = 1u128 << FRAC_BITS;
        self.lo += unit / j;
        self.hi += unit / j + u128::from(unit % j != 0);
    }

    pub fn step_to(&mut self, n: u64) {
        while self.n < n {
            self.step();
        }
    }

    /// Exact dyadic endpoints of the bracket.
    pub fn to_dyadics(&self) -> (crate::realnum::Dyadic, crate::realnum::Dyadic) {
        use crate::realnum::Dyadic;
        (
            Dyadic::new(BigInt::from(self.lo), -(FRAC_BITS as i64)),
            Dyadic::new(BigInt::from(self.hi), -(FRAC_BITS as i64)),
        )
    }

    /// The bracket as an exact rational pair.
    pub fn to_rationals(&self) -> (BigRational, BigRational) {
        let den = BigInt::one() << FRAC_BITS as u64;
        (
            BigRational::new(BigInt::from(self.lo), den.clone()),
            BigRational::new(BigInt::from(self.hi), den),
        )
    }

    /// Bracket expression for adaptive comparisons.
    pub fn to_expr(&self) -> RealExpr {
        let (lo, hi) = self.to_rationals();
        RealExpr::rational_bracket(lo, hi)
    }
}

impl Default for HarmonicBracket {
    fn default() -> Self {
        Self::new()
    }
}

/// Exact H_n as an unreduced pair by divide-and-conquer; denominators
/// multiply without reduction, so this is for one-shot oracle use at
/// large n (the gamma bracket checks) where a single big division
/// follows.
pub fn harmonic_sum_raw(n: u64) -> (BigUint, BigUint) {
    assert!(n >= 1);
    fn rec(a: u64, b: u64) -> (BigUint, BigUint) {
        if a == b {
            return (BigUint::one(), BigUint::from(a));
        }
        let mid = a + (b - a) / 2;
        let (n1, d1) = rec(a, mid);
        let (n2, d2) = rec(mid + 1, b);
        (&n1 * &d2 + &n2 * &d1, d1 * d2)
    }
    rec(1, n)
}
