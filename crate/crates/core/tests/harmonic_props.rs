//! Harmonic sweeps: enclosure containment for every n up to 10^4 and
//! the integral-representation bounds `log n + gamma < H_n <= log n + 1`
//! (equality only at n = 1).

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use abundance_core::harmonic::{harmonic_enclosure, ExactHarmonic, HarmonicForm};
use abundance_core::realnum::{eval, RealExpr};

#[test]
fn exact_values_inside_enclosures_up_to_1e4() {
    let mut exact = ExactHarmonic::new();
    exact.advance(); // H_1
    for n in 2u64..=10_000 {
        exact.advance();
        let (num, den) = exact.raw();
        let enclosure = harmonic_enclosure(&BigUint::from(n), 64).unwrap();
        match enclosure.form() {
            HarmonicForm::Enclosure { interval, .. } => {
                assert!(
                    interval.contains_ratio(&BigInt::from(num.clone()), &BigInt::from(den.clone())),
                    "H_{n} escaped its enclosure"
                );
            }
            _ => unreachable!(),
        }
    }
}

#[test]
fn harmonic_between_log_gamma_and_log_plus_one() {
    let mut exact = ExactHarmonic::new();
    for n in 1u64..=10_000 {
        exact.advance();
        if n == 1 {
            // H_1 = 1 = log 1 + 1 exactly; the lower bound gamma < 1.
            continue;
        }
        let (num, den) = exact.raw();
        let num = BigInt::from(num.clone());
        let den = BigInt::from(den.clone());
        let n_expr = RealExpr::integer(n as i64);
        let lower = eval(&n_expr.ln().add(&RealExpr::gamma()), 96).unwrap();
        let upper = eval(&n_expr.ln().add(&RealExpr::integer(1)), 96).unwrap();
        // strict: log n + gamma < H_n
        assert!(
            lower.hi().cmp_ratio(&num, &den) == core::cmp::Ordering::Less,
            "lower bound not strict at n={n}"
        );
        // strict for n >= 2: H_n < log n + 1
        assert!(
            upper.lo().cmp_ratio(&num, &den) == core::cmp::Ordering::Greater,
            "upper bound not strict at n={n}"
        );
    }
}

#[test]
fn enclosure_lower_endpoint_tracks_log_gamma() {
    // The lower endpoint sits within rounding slop of log n + gamma:
    // above log n + gamma - 2^-60 at 64 bits while the value is below
    // 16, and within a few value-relative ulp beyond that.
    for n in [2u64, 10, 1000, 100_000, 1_000_000, 1_000_000_000] {
        let enclosure = harmonic_enclosure(&BigUint::from(n), 64).unwrap();
        let interval = match enclosure.form() {
            HarmonicForm::Enclosure { interval, .. } => interval,
            _ => unreachable!(),
        };
        let base = eval(
            &RealExpr::integer(n as i64).ln().add(&RealExpr::gamma()),
            128,
        )
        .unwrap();
        let slack = if n <= 1_000_000 {
            abundance_core::realnum::Dyadic::pow2(-60)
        } else {
            abundance_core::realnum::Dyadic::pow2(base.lo().log2_floor() + 4 - 64)
        };
        assert!(
            interval.lo() > &base.lo().sub(&slack),
            "lower endpoint too low at n={n}"
        );
        // And it never exceeds the true H_n lower bound log n + gamma.
        assert!(interval.lo() <= base.hi());
    }
}

#[test]
fn enclosure_width_near_tail_bound() {
    // width <= 1/n plus rounding slop.
    let n = BigUint::from(1_000_000u64);
    let enclosure = harmonic_enclosure(&n, 64).unwrap();
    match enclosure.form() {
        HarmonicForm::Enclosure { interval, tail_hi } => {
            let width = interval.width();
            let budget = abundance_core::realnum::Dyadic::ratio(
                &BigInt::one(),
                &BigInt::from(1_000_000u64),
                96,
                abundance_core::realnum::Rounding::Up,
            )
            .add(&abundance_core::realnum::Dyadic::pow2(-50));
            assert!(width <= budget, "width {width:?}");
            assert_eq!(tail_hi.denom(), &BigInt::from(1_000_000u64));
        }
        _ => unreachable!(),
    }
}
