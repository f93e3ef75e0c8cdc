//! Exact dyadic rationals `mantissa * 2^exponent` with directed rounding.
//!
//! These are the endpoints of every interval in this crate. Addition,
//! subtraction and multiplication are exact; division and rounding are
//! directed (toward -inf or +inf) so that enclosures stay sound.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for operations that cannot be exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Rounding {
    pub fn flip(self) -> Self {
        match self {
            Rounding::Down => Rounding::Up,
            Rounding::Up => Rounding::Down,
        }
    }
}

/// An exact binary rational.
///
/// Canonical form: the mantissa is odd, or zero with exponent zero. This
/// makes the representation unique, so equality of values is equality of
/// fields.
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Dyadic {
                mantissa,
                exponent: 0,
            };
        }
        let shift = mantissa.trailing_zeros().unwrap_or(0);
        if shift == 0 {
            Dyadic { mantissa, exponent }
        } else {
            Dyadic {
                mantissa: mantissa >> shift,
                exponent: exponent
                    .checked_add(shift as i64)
                    .expect("dyadic exponent overflow"),
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: 0,
        }
    }

    pub fn from_bigint(value: BigInt) -> Self {
        Dyadic::new(value, 0)
    }

    pub fn from_biguint(value: BigUint) -> Self {
        Dyadic::new(BigInt::from(value), 0)
    }

    pub fn from_i64(value: i64) -> Self {
        Dyadic::new(BigInt::from(value), 0)
    }

    pub fn from_u64(value: u64) -> Self {
        Dyadic::new(BigInt::from(value), 0)
    }

    /// `1 * 2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: k,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    /// Number of significant bits of the mantissa (0 for zero).
    pub fn precision_bits(&self) -> u64 {
        self.mantissa.bits()
    }

    /// Floor of log2(|self|). Panics on zero.
    pub fn log2_floor(&self) -> i64 {
        assert!(!self.is_zero(), "log2 of zero");
        self.exponent + self.mantissa.bits() as i64 - 1
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mantissa: -self.mantissa.clone(),
            exponent: self.exponent,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self
                .exponent
                .checked_add(k)
                .expect("dyadic exponent overflow"),
        }
    }

    /// Exact addition.
    pub fn add(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        Dyadic::new(a + b, e)
    }

    /// Exact subtraction.
    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    /// Exact multiplication.
    pub fn mul(&self, other: &Dyadic) -> Self {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mantissa: &self.mantissa * &other.mantissa,
            exponent: self
                .exponent
                .checked_add(other.exponent)
                .expect("dyadic exponent overflow"),
        }
    }

    /// Exact square.
    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Directed rounding to at most `prec` significant mantissa bits.
    pub fn round(&self, prec: u32, dir: Rounding) -> Self {
        assert!(prec >= 1);
        let bits = self.mantissa.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let drop = (bits - prec as u64) as i64;
        // BigInt shr rounds toward negative infinity, which is exactly
        // the floor we need; ceil comes from floor(-x) negated.
        let shifted = match dir {
            Rounding::Down => &self.mantissa >> drop as u64,
            Rounding::Up => -((-&self.mantissa) >> drop as u64),
        };
        Dyadic::new(
            shifted,
            self.exponent
                .checked_add(drop)
                .expect("dyadic exponent overflow"),
        )
    }

    /// Directed division `self / other` with a `prec`-bit quotient.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Rounding) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::ratio(&self.mantissa, &other.mantissa, prec, dir)
            .mul_pow2(self.exponent - other.exponent)
    }

    /// Directed rounding of the exact rational `num/den` to `prec`
    /// significant bits. `den` must be nonzero.
    pub fn ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Rounding) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Dyadic::zero();
        }
        // Scale the numerator so the integer quotient carries at least
        // prec+1 significant bits, then floor/ceil divide.
        let shift = (den.bits() as i64 - num.bits() as i64) + prec as i64 + 2;
        let (scaled, exp) = if shift >= 0 {
            (num << shift as u64, -shift)
        } else {
            (num.clone(), -shift)
        };
        let exact_neg = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
        let (q, r) = scaled.div_rem(den);
        let q = if r.is_zero() {
            q
        } else {
            match (dir, exact_neg) {
                // div_rem truncates toward zero; adjust to floor / ceil.
                (Rounding::Down, true) => q - 1,
                (Rounding::Down, false) => q,
                (Rounding::Up, true) => q,
                (Rounding::Up, false) => q + 1,
            }
        };
        if shift >= 0 {
            Dyadic::new(q, exp).round(prec, dir)
        } else {
            Dyadic::new(q, 0).mul_pow2(exp).round(prec, dir)
        }
    }

    /// Exact conversion from a rational with power-of-two denominator.
    /// Returns `None` when the reduced denominator has an odd factor.
    pub fn from_pow2_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let mut n = num.clone();
        let mut d = den.clone();
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        if n.is_zero() {
            return Some(Dyadic::zero());
        }
        let g = n.gcd(&d);
        n /= &g;
        d /= &g;
        let shift = d.trailing_zeros().unwrap_or(0);
        if (&d >> shift).is_one() {
            Some(Dyadic::new(n, -(shift as i64)))
        } else {
            None
        }
    }

    /// The exact value as a (numerator, denominator) pair with
    /// power-of-two denominator.
    pub fn to_ratio(&self) -> (BigInt, BigInt) {
        if self.exponent >= 0 {
            (&self.mantissa << self.exponent as u64, BigInt::one())
        } else {
            (
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as u64,
            )
        }
    }

    /// Largest integer <= self.
    pub fn floor_bigint(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            // BigInt shr is an arithmetic shift: floor for negatives.
            &self.mantissa >> (-self.exponent) as u64
        }
    }

    /// Compare against an exact rational `num/den`, `den > 0`.
    pub fn cmp_ratio(&self, num: &BigInt, den: &BigInt) -> Ordering {
        assert!(den.is_positive());
        // self vs num/den  <=>  mantissa * 2^e * den vs num
        let (a, b) = if self.exponent >= 0 {
            ((&self.mantissa * den) << self.exponent as u64, num.clone())
        } else {
            (&self.mantissa * den, num << (-self.exponent) as u64)
        };
        a.cmp(&b)
    }

    /// Best-effort conversion to f64 (diagnostics and stats only).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let narrowed = self.round(64, Rounding::Down);
        let m = narrowed.mantissa.to_f64().unwrap_or(f64::NAN);
        let mut result = m;
        let mut e = narrowed.exponent;
        while e > 0 {
            let step = e.min(512);
            result *= pow2_f64(step as i32);
            e -= step;
        }
        while e < 0 {
            let step = (-e).min(512);
            result *= pow2_f64(-(step as i32));
            e += step;
        }
        result
    }

    /// Decimal rendering with `sig` significant digits, rounded in the
    /// given direction. The output parses back as a decimal on the
    /// correct side of the exact value.
    pub fn to_decimal(&self, sig: u32, dir: Rounding) -> String {
        assert!(sig >= 1);
        if self.is_zero() {
            return String::from("0");
        }
        let neg = self.is_negative();
        // For negative values, directed rounding flips on the magnitude.
        let mag_dir = if neg { dir.flip() } else { dir };
        let (digits, dec_exp) = self.abs().decimal_digits(sig, mag_dir);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        let ds = digits;
        // Value = 0.ds * 10^dec_exp; render fixed for small exponents,
        // scientific otherwise.
        if dec_exp >= 1 && dec_exp <= sig as i64 {
            let point = dec_exp as usize;
            out.push_str(&ds[..point.min(ds.len())]);
            if point > ds.len() {
                for _ in 0..point - ds.len() {
                    out.push('0');
                }
            } else if point < ds.len() {
                out.push('.');
                out.push_str(&ds[point..]);
            }
        } else if dec_exp <= 0 && dec_exp > -3 {
            out.push_str("0.");
            for _ in 0..(-dec_exp) as usize {
                out.push('0');
            }
            out.push_str(&ds);
        } else {
            out.push_str(&ds[..1]);
            if ds.len() > 1 {
                out.push('.');
                out.push_str(&ds[1..]);
            }
            out.push('e');
            let e10 = dec_exp - 1;
            if e10 >= 0 {
                out.push('+');
            }
            out.push_str(itoa_i64(e10).as_str());
        }
        out
    }

    /// Returns (digit string of length `sig`, decimal exponent) with
    /// value in [0.1, 1) * 10^exp semantics: self = 0.digits * 10^exp,
    /// rounded directedly. Caller guarantees self > 0.
    fn decimal_digits(&self, sig: u32, dir: Rounding) -> (String, i64) {
        debug_assert!(self.is_positive());
        // Estimate the decimal exponent from log2, then correct.
        let log2 = self.log2_floor();
        // log10(x) ~ log2(x) * 0.30103
        let mut dec_exp = ((log2 as i128 * 30103) / 100000) as i64 + 1;
        loop {
            // target integer t = floor/ceil(self * 10^(sig - dec_exp))
            let p = sig as i64 - dec_exp;
            let t = self.scaled_pow10_int(p, dir);
            let low = pow10(sig - 1);
            let high = pow10(sig);
            if t < low {
                dec_exp -= 1;
            } else if t > high {
                dec_exp += 1;
            } else if t == high {
                // Rounded up to exactly 10^sig: shift the exponent.
                return (bigint_digits(&(high / 10u32)), dec_exp + 1);
            } else {
                return (bigint_digits(&t), dec_exp);
            }
        }
    }

    /// floor/ceil of `self * 10^p` as a nonnegative integer.
    fn scaled_pow10_int(&self, p: i64, dir: Rounding) -> BigUint {
        let m = self.mantissa.magnitude().clone();
        // self * 10^p = m * 2^e * 10^p
        let (mut num, mut den) = (m, BigUint::one());
        if self.exponent >= 0 {
            num <<= self.exponent as u64;
        } else {
            den <<= (-self.exponent) as u64;
        }
        if p >= 0 {
            num *= BigUint::from(10u32).pow(p as u32);
        } else {
            den *= BigUint::from(10u32).pow((-p) as u32);
        }
        let (q, r) = num.div_rem(&den);
        match dir {
            Rounding::Down => q,
            Rounding::Up => {
                if r.is_zero() {
                    q
                } else {
                    q + 1u32
                }
            }
        }
    }
}

fn pow10(k: u32) -> BigUint {
    BigUint::from(10u32).pow(k)
}

fn bigint_digits(v: &BigUint) -> String {
    let mut s = String::new();
    let digits = v.to_radix_le(10);
    for d in digits.iter().rev() {
        s.push((b'0' + d) as char);
    }
    s
}

fn itoa_i64(v: i64) -> String {
    let mut s = String::new();
    let mut buf = Vec::new();
    let mut x = v.unsigned_abs();
    if x == 0 {
        buf.push(b'0');
    }
    while x > 0 {
        buf.push(b'0' + (x % 10) as u8);
        x /= 10;
    }
    if v < 0 {
        s.push('-');
    }
    for b in buf.iter().rev() {
        s.push(*b as char);
    }
    s
}

fn pow2_f64(e: i32) -> f64 {
    // Exact for |e| <= 1022; no std powi in core.
    debug_assert!(e.unsigned_abs() <= 1022);
    f64::from_bits(((1023 + e) as u64) << 52)
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let ls = self.mantissa.sign();
        let rs = other.mantissa.sign();
        if ls != rs {
            return match (ls, rs) {
                (Sign::Minus, _) => Ordering::Less,
                (Sign::Plus, _) => Ordering::Greater,
                (Sign::NoSign, Sign::Plus) => Ordering::Less,
                (Sign::NoSign, Sign::Minus) => Ordering::Greater,
                _ => Ordering::Equal,
            };
        }
        if ls == Sign::NoSign {
            return Ordering::Equal;
        }
        // Same nonzero sign: compare magnitudes via log2 first.
        let la = self.log2_floor();
        let lb = other.log2_floor();
        if la != lb {
            let mag = la.cmp(&lb);
            return if ls == Sign::Minus {
                mag.reverse()
            } else {
                mag
            };
        }
        match self.sub(other).mantissa.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(17, Rounding::Down))
    }
}
