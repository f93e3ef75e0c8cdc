//! Independent validation of the embedded Euler-constant literal.
//!
//! Two oracles, both independent of the stored digits:
//!
//! 1. Euler-Maclaurin at n = 2^18 with the harmonic number exact, the
//!    Bernoulli numbers exact from their defining recurrence, and the
//!    remainder enclosed by the magnitude of the first omitted term.
//!    This pins gamma to ~2^-700, certifying every stored digit.
//! 2. The integral-representation bracket
//!    `H_n - log n - 1/n < gamma < H_n - log n` with H_n exact, the
//!    bound the enclosure form is built on.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use abundance_core::harmonic::harmonic_sum_raw;
use abundance_core::realnum::{euler_gamma, eval, gamma_max_bits, Dyadic, RealExpr, Rounding};

/// Exact Bernoulli numbers B_0..B_max via
/// sum_{j=0}^{m} C(m+1, j) B_j = 0.
fn bernoulli_numbers(max: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(max + 1);
    b.push(BigRational::one());
    for m in 1..=max {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bj;
            // C(m+1, j+1) = C(m+1, j) * (m+1-j) / (j+1)
            binom = binom * BigInt::from((m + 1 - j) as u64) / BigInt::from((j + 1) as u64);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from((m + 1) as u64)));
    }
    b
}

#[test]
fn bernoulli_recurrence_known_values() {
    let b = bernoulli_numbers(12);
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    assert_eq!(b[1], q(-1, 2));
    assert_eq!(b[2], q(1, 6));
    assert_eq!(b[3], BigRational::zero());
    assert_eq!(b[4], q(-1, 30));
    assert_eq!(b[6], q(1, 42));
    assert_eq!(b[8], q(-1, 30));
    assert_eq!(b[10], q(5, 66));
    assert_eq!(b[12], q(-691, 2730));
}

/// gamma = H_n - ln n - 1/(2n) + sum_{j=1}^K B_2j/(2j n^2j) + R,
/// |R| <= |B_{2K+2}| / ((2K+2) n^(2K+2)).
#[test]
fn gamma_literal_matches_euler_maclaurin() {
    const LOG2_N: u32 = 18;
    const K: usize = 20;
    let n: u64 = 1 << LOG2_N;
    let bits: u32 = 760;

    let (h_num, h_den) = harmonic_sum_raw(n);
    let h = RealExpr::rational(BigRational::new_raw(
        BigInt::from(h_num),
        BigInt::from(h_den),
    ));
    let ln_n = RealExpr::integer(2)
        .ln()
        .mul(&RealExpr::integer(LOG2_N as i64));
    let mut series = RealExpr::rational(BigRational::new(BigInt::from(-1), BigInt::from(2u64 * n)));
    let bern = bernoulli_numbers(2 * K + 2);
    let nq = BigRational::from_integer(BigInt::from(n));
    let mut n_pow = BigRational::one();
    for j in 1..=K {
        n_pow *= &nq * &nq;
        let term = &bern[2 * j] / (BigRational::from_integer(BigInt::from(2 * j as u64)) * &n_pow);
        series = series.add(&RealExpr::rational(term));
    }
    // Remainder enclosure from the first omitted term's magnitude.
    n_pow *= &nq * &nq;
    let bound = (&bern[2 * K + 2]
        / (BigRational::from_integer(BigInt::from((2 * K + 2) as u64)) * n_pow))
        .abs();
    let remainder = RealExpr::rational_bracket(-bound.clone(), bound);

    let gamma_em = h.sub(&ln_n).add(&series).add(&remainder);
    let em = eval(&gamma_em, bits).expect("euler-maclaurin evaluation");

    // The enclosure really achieved its precision.
    assert!(em.width() <= Dyadic::pow2(-690), "width {:?}", em.width());
    eprintln!(
        "gamma (euler-maclaurin) in\n  [{},\n   {}]",
        em.lo().to_decimal(215, Rounding::Down),
        em.hi().to_decimal(215, Rounding::Up)
    );

    let lit = euler_gamma(gamma_max_bits()).expect("literal at max precision");
    // Both enclose gamma: they must intersect ...
    assert!(em.intersects(&lit), "literal and oracle disjoint");
    // ... and a wrong digit anywhere in the literal would displace its
    // midpoint by at least 10^-205, far more than the two widths.
    let lit_width = Dyadic::ratio(
        &BigInt::one(),
        &BigInt::from(10u32).pow(205),
        64,
        Rounding::Up,
    );
    let diff = em.midpoint().sub(&lit.midpoint()).abs();
    let tolerance = lit_width.add(&em.width()).add(&lit.width());
    assert!(
        diff <= tolerance,
        "literal drifts from the oracle: |diff| = {:?}",
        diff
    );
}

/// Classical bracket at n = 10^6 with exact H: the tail of the integral
/// representation lies strictly between 0 and 1/n.
#[test]
fn gamma_bracket_at_1e6_with_exact_harmonic() {
    let n: u64 = 1_000_000;
    let (h_num, h_den) = harmonic_sum_raw(n);
    let h = RealExpr::rational(BigRational::new_raw(
        BigInt::from(h_num),
        BigInt::from(h_den),
    ));
    let ln_n = RealExpr::from_bigint(BigInt::from(n)).ln();
    let upper = h.sub(&ln_n); // H_n - log n > gamma
    let lower = upper.sub(&RealExpr::rational(BigRational::new(
        BigInt::one(),
        BigInt::from(n),
    ))); // H_n - log n - 1/n < gamma

    let gamma = euler_gamma(256).unwrap();
    let upper_enc = eval(&upper, 256).unwrap();
    let lower_enc = eval(&lower, 256).unwrap();
    assert!(
        gamma.hi() < upper_enc.lo(),
        "gamma must lie strictly below H_n - log n"
    );
    assert!(
        gamma.lo() > lower_enc.hi(),
        "gamma must lie strictly above H_n - log n - 1/n"
    );
}

/// Enclosures at different precisions all contain the same constant, so
/// they pairwise intersect.
#[test]
fn gamma_enclosures_pairwise_intersect() {
    let precisions = [8u32, 16, 32, 64, 128, 256, 512, 640];
    let enclosures: Vec<_> = precisions
        .iter()
        .map(|&b| euler_gamma(b).unwrap())
        .collect();
    for a in &enclosures {
        for b in &enclosures {
            assert!(a.intersects(b));
        }
    }
}
