//! Verified constants.
//!
//! Euler's constant is stored as a validated truncated decimal literal;
//! the true value lies in `[literal, literal + 10^-len]`. The literal is
//! cross-checked by tests against an independent Euler-Maclaurin
//! evaluation with exact harmonic numbers and exact Bernoulli numbers,
//! and against the integral-representation bracket
//! `H_n - log n - 1/n < gamma < H_n - log n`.

use num_bigint::BigInt;

use super::dyadic::{Dyadic, Rounding};
use super::interval::IntervalReal;
use super::RealError;

/// Truncated decimal digits of Euler's constant (0.GAMMA_DIGITS...).
/// 205 digits; every digit is certified by the Euler-Maclaurin
/// cross-check test.
pub(crate) const GAMMA_DIGITS: &str = "5772156649015328606065120900824024310421593359399235988057672348848677267776646709369470632917467495146314472498070824809605040144865428362241739976449235362535003337429373377376739427925952582470949160087";

/// Highest precision at which the stored literal can honor a width
/// bound of `2^(2-bits)`.
pub fn gamma_max_bits() -> u32 {
    // literal width is 10^-len ~ 2^(-3.32 len); keep a safety margin.
    (GAMMA_DIGITS.len() as u32 * 10) / 3 - 4
}

/// Enclosure of Euler's constant at up to `gamma_max_bits()` of
/// precision. Wider `bits` are clamped: the result is always sound but
/// its width bottoms out at the literal's.
pub fn gamma_interval_clamped(bits: u32) -> IntervalReal {
    let eff = bits.min(gamma_max_bits());
    let len = GAMMA_DIGITS.len() as u32;
    let num = BigInt::parse_bytes(GAMMA_DIGITS.as_bytes(), 10).expect("gamma literal");
    let den = BigInt::from(10u32).pow(len);
    let lo = Dyadic::ratio(&num, &den, eff + 8, Rounding::Down);
    let hi = Dyadic::ratio(&(num + 1), &den, eff + 8, Rounding::Up);
    IntervalReal::new(lo, hi, eff).round_to(eff)
}

/// Enclosure of Euler's constant of width at most `2^(2-bits)`.
pub fn gamma_interval(bits: u32) -> Result<IntervalReal, RealError> {
    if bits > gamma_max_bits() {
        return Err(RealError::PrecisionOverflow {
            requested: bits,
            cap: gamma_max_bits(),
        });
    }
    Ok(gamma_interval_clamped(bits))
}
