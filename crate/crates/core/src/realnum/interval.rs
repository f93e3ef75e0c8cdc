//! Intervals with dyadic endpoints and outward rounding.
//!
//! Every operation returns an interval that contains the exact result of
//! applying the operation to any points of the inputs. Elementary
//! functions use argument reduction plus series with explicit remainder
//! bounds; monotonicity lets exp and log work endpoint-wise.

use alloc::string::String;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::dyadic::{Dyadic, Rounding};
use super::RealError;

/// A closed interval `[lo, hi]` guaranteed to contain the exact value of
/// the expression that produced it. `bits` records the working precision
/// the interval was produced at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalReal {
    lo: Dyadic,
    hi: Dyadic,
    bits: u32,
}

impl IntervalReal {
    pub fn new(lo: Dyadic, hi: Dyadic, bits: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        IntervalReal { lo, hi, bits }
    }

    pub fn singleton(value: Dyadic, bits: u32) -> Self {
        IntervalReal {
            lo: value.clone(),
            hi: value,
            bits,
        }
    }

    /// Sound enclosure of the rational `num/den` at `bits` precision.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> Result<Self, RealError> {
        if den.is_zero() {
            return Err(RealError::domain("division by zero in rational leaf"));
        }
        let lo = Dyadic::ratio(num, den, bits, Rounding::Down);
        let hi = Dyadic::ratio(num, den, bits, Rounding::Up);
        Ok(IntervalReal::new(lo, hi, bits))
    }

    /// Enclosure of a rational bracket `[nlo/dlo, nhi/dhi]`.
    pub fn from_ratio_bracket(
        nlo: &BigInt,
        dlo: &BigInt,
        nhi: &BigInt,
        dhi: &BigInt,
        bits: u32,
    ) -> Result<Self, RealError> {
        if dlo.is_zero() || dhi.is_zero() {
            return Err(RealError::domain("division by zero in rational bracket"));
        }
        let lo = Dyadic::ratio(nlo, dlo, bits, Rounding::Down);
        let hi = Dyadic::ratio(nhi, dhi, bits, Rounding::Up);
        Ok(IntervalReal::new(lo, hi, bits))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_dyadic(&self, v: &Dyadic) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn contains_ratio(&self, num: &BigInt, den: &BigInt) -> bool {
        use core::cmp::Ordering::*;
        let den_pos = if den.is_negative() {
            return self.contains_ratio(&-num, &-den);
        } else {
            den.clone()
        };
        !matches!(self.lo.cmp_ratio(num, &den_pos), Greater)
            && !matches!(self.hi.cmp_ratio(num, &den_pos), Less)
    }

    pub fn intersects(&self, other: &IntervalReal) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// True when every point of `self` is strictly below every point of
    /// `other`.
    pub fn strictly_below(&self, other: &IntervalReal) -> bool {
        self.hi < other.lo
    }

    /// Outward rounding to a (smaller) target precision.
    pub fn round_to(&self, bits: u32) -> Self {
        IntervalReal {
            lo: self.lo.round(bits, Rounding::Down),
            hi: self.hi.round(bits, Rounding::Up),
            bits,
        }
    }

    pub fn neg(&self) -> Self {
        IntervalReal {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            bits: self.bits,
        }
    }

    pub fn add(&self, other: &Self, wp: u32) -> Self {
        IntervalReal {
            lo: self.lo.add(&other.lo).round(wp, Rounding::Down),
            hi: self.hi.add(&other.hi).round(wp, Rounding::Up),
            bits: wp,
        }
    }

    pub fn sub(&self, other: &Self, wp: u32) -> Self {
        IntervalReal {
            lo: self.lo.sub(&other.hi).round(wp, Rounding::Down),
            hi: self.hi.sub(&other.lo).round(wp, Rounding::Up),
            bits: wp,
        }
    }

    pub fn mul(&self, other: &Self, wp: u32) -> Self {
        // Exact candidate products, then one outward rounding.
        let c1 = self.lo.mul(&other.lo);
        let c2 = self.lo.mul(&other.hi);
        let c3 = self.hi.mul(&other.lo);
        let c4 = self.hi.mul(&other.hi);
        let mut lo = &c1;
        let mut hi = &c1;
        for c in [&c2, &c3, &c4] {
            if *c < *lo {
                lo = c;
            }
            if *c > *hi {
                hi = c;
            }
        }
        IntervalReal {
            lo: lo.round(wp, Rounding::Down),
            hi: hi.round(wp, Rounding::Up),
            bits: wp,
        }
    }

    pub fn div(&self, other: &Self, wp: u32) -> Result<Self, RealError> {
        if !other.lo.is_positive() && !other.hi.is_negative() {
            // lo <= 0 <= hi
            return Err(RealError::domain("division by interval containing zero"));
        }
        let q = |a: &Dyadic, b: &Dyadic, dir: Rounding| a.div(b, wp + 2, dir);
        let (lo, hi) = if other.lo.is_positive() {
            if self.lo.is_positive() || self.lo.is_zero() {
                (
                    q(&self.lo, &other.hi, Rounding::Down),
                    q(&self.hi, &other.lo, Rounding::Up),
                )
            } else if self.hi.is_negative() || self.hi.is_zero() {
                (
                    q(&self.lo, &other.lo, Rounding::Down),
                    q(&self.hi, &other.hi, Rounding::Up),
                )
            } else {
                (
                    q(&self.lo, &other.lo, Rounding::Down),
                    q(&self.hi, &other.lo, Rounding::Up),
                )
            }
        } else {
            // other.hi negative: divide by a strictly negative interval.
            if self.lo.is_positive() || self.lo.is_zero() {
                (
                    q(&self.hi, &other.hi, Rounding::Down),
                    q(&self.lo, &other.lo, Rounding::Up),
                )
            } else if self.hi.is_negative() || self.hi.is_zero() {
                (
                    q(&self.hi, &other.lo, Rounding::Down),
                    q(&self.lo, &other.hi, Rounding::Up),
                )
            } else {
                (
                    q(&self.hi, &other.hi, Rounding::Down),
                    q(&self.lo, &other.hi, Rounding::Up),
                )
            }
        };
        Ok(IntervalReal {
            lo: lo.round(wp, Rounding::Down),
            hi: hi.round(wp, Rounding::Up),
            bits: wp,
        })
    }

    /// Exact scaling by an integer.
    pub fn scale_int(&self, k: i64, wp: u32) -> Self {
        let kd = Dyadic::from_i64(k);
        let a = self.lo.mul(&kd);
        let b = self.hi.mul(&kd);
        let (lo, hi) = if k >= 0 { (a, b) } else { (b, a) };
        IntervalReal {
            lo: lo.round(wp, Rounding::Down),
            hi: hi.round(wp, Rounding::Up),
            bits: wp,
        }
    }

    /// `e^x`, endpoint-wise by monotonicity.
    pub fn exp(&self, wp: u32) -> Result<Self, RealError> {
        let lo = exp_point(&self.lo, wp)?;
        let hi = exp_point(&self.hi, wp)?;
        Ok(IntervalReal {
            lo: lo.lo,
            hi: hi.hi,
            bits: wp,
        })
    }

    /// Natural log, endpoint-wise; requires `lo > 0`.
    pub fn ln(&self, wp: u32) -> Result<Self, RealError> {
        if !self.lo.is_positive() {
            return Err(RealError::domain("log of a nonpositive enclosure"));
        }
        let ln2 = ln2_interval(wp + 16);
        let lo = log_point(&self.lo, wp, &ln2);
        let hi = log_point(&self.hi, wp, &ln2);
        Ok(IntervalReal {
            lo: lo.lo,
            hi: hi.hi,
            bits: wp,
        })
    }

    /// Outward decimal rendering of both endpoints.
    pub fn to_decimal_pair(&self, sig: u32) -> (String, String) {
        (
            self.lo.to_decimal(sig, Rounding::Down),
            self.hi.to_decimal(sig, Rounding::Up),
        )
    }
}

/// Rigorous enclosure of `e^x` for a dyadic point `x`.
///
/// Reduction: r = x / 2^m with |r| <= 1/32, Taylor series with a
/// geometric tail bound, then m interval squarings.
pub fn exp_point(x: &Dyadic, wp: u32) -> Result<IntervalReal, RealError> {
    if x.is_zero() {
        return Ok(IntervalReal::singleton(Dyadic::one(), wp));
    }
    if x.log2_floor() > 24 {
        return Err(RealError::domain("exp argument too large"));
    }
    // Halvings to bring |r| <= 2^-5.
    let m = (x.log2_floor() + 6).max(0) as u32;
    let wpi = wp + m + 16;
    let r = IntervalReal::singleton(x.mul_pow2(-(m as i64)), wpi);

    // Taylor: sum_{i<=N} r^i / i! with tail |R| <= |t_{N+1}| * 32/31.
    let one = IntervalReal::singleton(Dyadic::one(), wpi);
    let mut term = one.clone();
    let mut sum = one;
    let mut i: u32 = 1;
    let threshold = Dyadic::pow2(-((wpi + 4) as i64));
    loop {
        let divisor = IntervalReal::singleton(Dyadic::from_u64(i as u64), wpi);
        term = term.mul(&r, wpi).div(&divisor, wpi)?;
        sum = sum.add(&term, wpi);
        let mag = term.lo.abs().add(&term.hi.abs());
        if mag < threshold {
            break;
        }
        i += 1;
        if i > 10_000 {
            return Err(RealError::domain("exp series failed to converge"));
        }
    }
    // Tail bound from the next term: |t_{N+1}| <= max|term| * max|r|,
    // whole tail <= that * 32/31 <= that * 2.
    let r_mag = r.lo.abs().max(r.hi.abs());
    let next_mag = term
        .lo
        .abs()
        .add(&term.hi.abs())
        .mul(&r_mag)
        .round(wpi, Rounding::Up);
    let tail = next_mag.mul_pow2(1);
    let mut enc = IntervalReal::new(
        sum.lo.sub(&tail).round(wpi, Rounding::Down),
        sum.hi.add(&tail).round(wpi, Rounding::Up),
        wpi,
    );
    for _ in 0..m {
        enc = enc.mul(&enc, wpi);
    }
    Ok(enc.round_to(wp))
}

/// Rigorous enclosure of `ln x` for a dyadic point `x > 0`.
///
/// Reduction: x = m * 2^k with m in [1, 2), then
/// ln m = 2 atanh(z), z = (m-1)/(m+1) in [0, 1/3].
pub fn log_point(x: &Dyadic, wp: u32, ln2: &IntervalReal) -> IntervalReal {
    debug_assert!(x.is_positive());
    let wpi = wp + 12;
    let k = x.log2_floor();
    let m = IntervalReal::singleton(x.mul_pow2(-k), wpi);
    let one = IntervalReal::singleton(Dyadic::one(), wpi);
    let num = m.sub(&one, wpi);
    let den = m.add(&one, wpi);
    let z = num.div(&den, wpi).expect("m+1 > 0");
    let zz = z.mul(&z, wpi);

    let mut power = z.clone(); // z^(2j+1)
    let mut sum = z.clone();
    let mut j: u64 = 1;
    let threshold = Dyadic::pow2(-((wpi + 4) as i64));
    loop {
        power = power.mul(&zz, wpi);
        let divisor = IntervalReal::singleton(Dyadic::from_u64(2 * j + 1), wpi);
        let term = power.div(&divisor, wpi).expect("odd divisor");
        sum = sum.add(&term, wpi);
        let mag = term.lo.abs().add(&term.hi.abs());
        if mag < threshold {
            break;
        }
        j += 1;
    }
    // Tail: sum_{i>j} z^(2i+1)/(2i+1) <= z^(2j+3)/(2j+3) * 1/(1-z^2)
    //       <= |last term| * z^2 * 9/8.
    let tail = power
        .hi
        .abs()
        .mul(&zz.hi.abs())
        .mul(&Dyadic::new(BigInt::from(9), -3))
        .round(wpi, Rounding::Up);
    let ln_m = IntervalReal::new(
        sum.lo.mul_pow2(1).sub(&tail).round(wpi, Rounding::Down),
        sum.hi.mul_pow2(1).add(&tail).round(wpi, Rounding::Up),
        wpi,
    );
    ln_m.add(&ln2.scale_int(k, wpi), wpi).round_to(wp)
}

/// Sound enclosure of ln 2 = 2 atanh(1/3) = sum 2 / ((2j+1) 3^(2j+1)).
pub fn ln2_interval(wp: u32) -> IntervalReal {
    let scale = wp + 8;
    let unit = one_shl(scale);
    let mut lo_acc = BigInt::zero();
    let mut terms: u64 = 0;
    let mut pow3 = BigInt::from(3u32); // 3^(2j+1)
    let mut j: u64 = 0;
    loop {
        let denom = &pow3 * BigInt::from(2 * j + 1);
        let t = (&unit << 1usize) / &denom; // floor(2 * 2^scale / denom)
        if t.is_zero() {
            break;
        }
        lo_acc += t;
        terms += 1;
        j += 1;
        pow3 *= 9u32;
    }
    // Each floored term loses < 1 unit; the untaken tail is < 2 units
    // (first skipped term < 1 unit, ratio 1/9).
    let hi_acc = &lo_acc + BigInt::from(terms + 2);
    IntervalReal::new(
        Dyadic::new(lo_acc, -(scale as i64)).round(wp, Rounding::Down),
        Dyadic::new(hi_acc, -(scale as i64)).round(wp, Rounding::Up),
        wp,
    )
}

/// Sound enclosure of pi via Machin's formula
/// pi = 16 atan(1/5) - 4 atan(1/239).
pub fn pi_interval(wp: u32) -> IntervalReal {
    let scale = wp + 10;
    let a5 = atan_inv_scaled(5, 16, scale);
    let a239 = atan_inv_scaled(239, 4, scale);
    let lo = &a5.0 - &a239.1;
    let hi = &a5.1 - &a239.0;
    IntervalReal::new(
        Dyadic::new(lo, -(scale as i64)).round(wp, Rounding::Down),
        Dyadic::new(hi, -(scale as i64)).round(wp, Rounding::Up),
        wp,
    )
}

/// (lo, hi) integer brackets of `coeff * atan(1/x) * 2^scale` using the
/// alternating series with directed rounding per term.
fn atan_inv_scaled(x: u64, coeff: u64, scale: u32) -> (BigInt, BigInt) {
    let unit = one_shl(scale) * BigInt::from(coeff);
    let xx = BigInt::from(x) * BigInt::from(x);
    let mut pow = BigInt::from(x); // x^(2j+1)
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut j: u64 = 0;
    loop {
        let denom = &pow * BigInt::from(2 * j + 1);
        let t = &unit / &denom; // floor
        if t.is_zero() {
            // Remaining alternating tail is below one unit in magnitude.
            if j % 2 == 0 {
                hi += 2;
            } else {
                lo -= 2;
            }
            break;
        }
        if j % 2 == 0 {
            lo += &t;
            hi += &t + 1;
        } else {
            lo -= &t + 1;
            hi -= &t;
        }
        j += 1;
        pow *= &xx;
    }
    (lo, hi)
}

fn one_shl(k: u32) -> BigInt {
    BigInt::from(1u32) << k as u64
}
