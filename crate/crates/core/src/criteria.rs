//! The inequality checks: the divisor-sum bound
//! `sigma(n) <= H_n + exp(H_n) log(H_n)`, Robin's criterion, the
//! unconditional Robin bound, and the effective lemma bounds that chain
//! them together.
//!
//! Every check decides a strict inequality by interval separation with
//! escalating precision; equality is detected only on the exact
//! rational path (n = 1 for the harmonic form). Undecided at the
//! precision cap is reported as a verdict, never silently passed.

use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::divisor::{self, Factorization};
use crate::harmonic::{self, HarmonicBracket, DEFAULT_EXACT_CUTOFF};
use crate::realnum::{
    ComparisonResult, Evaluator, IntervalReal, PrecisionBudget, RealError, RealExpr,
};

/// Walking the directed harmonic bracket is preferred over the 1/n-wide
/// integral enclosure up to this n; beyond it a point check of the
/// tail-tight bounds falls back to the log form.
const BRACKET_WALK_LIMIT: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("n must be a positive integer")]
    InputError,
    #[error(transparent)]
    Real(#[from] RealError),
}

/// Which inequality to check. Each kind carries its stated validity
/// range; checking outside the range is allowed but flagged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriterionKind {
    /// sigma(n) <= H_n + exp(H_n) log(H_n), equality only at n = 1.
    Lagarias101,
    /// sigma(n) < e^gamma n log log n for n >= 5041.
    Robin102,
    /// sigma(n) < e^gamma n log log n + 0.6482 n / log log n, n >= 3.
    RobinUnconditional202a,
    /// exp(H_n) log(H_n) >= e^gamma n log log n, n >= 3.
    Lemma203,
    /// exp(H_n) >= e^gamma n.
    Bound204,
    /// H_n + exp(H_n) log(H_n) <= e^gamma n log log n + 7n/log n, n >= 20.
    Lemma206,
    /// log H_n <= log log n + 1/log(n+1), n >= 3.
    Bound207,
    /// exp(H_n) <= e^gamma n (1 + 2/n).
    Bound210,
}

/// Orientation of a criterion: which way the inequality must point for
/// the criterion to hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    LhsBelowRhs,
    LhsAboveRhs,
}

impl CriterionKind {
    pub const ALL: [CriterionKind; 8] = [
        CriterionKind::Lagarias101,
        CriterionKind::Robin102,
        CriterionKind::RobinUnconditional202a,
        CriterionKind::Lemma203,
        CriterionKind::Bound204,
        CriterionKind::Lemma206,
        CriterionKind::Bound207,
        CriterionKind::Bound210,
    ];

    /// The five pure harmonic bounds (no sigma on the left side).
    pub const LEMMA_SUITE: [CriterionKind; 5] = [
        CriterionKind::Lemma203,
        CriterionKind::Bound204,
        CriterionKind::Lemma206,
        CriterionKind::Bound207,
        CriterionKind::Bound210,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            CriterionKind::Lagarias101 => "lagarias",
            CriterionKind::Robin102 => "robin",
            CriterionKind::RobinUnconditional202a => "robin-unconditional",
            CriterionKind::Lemma203 => "lemma203",
            CriterionKind::Bound204 => "bound204",
            CriterionKind::Lemma206 => "lemma206",
            CriterionKind::Bound207 => "bound207",
            CriterionKind::Bound210 => "bound210",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        CriterionKind::ALL
            .iter()
            .copied()
            .find(|k| k.token() == token)
    }

    /// Smallest n the criterion is stated for.
    pub fn validity_min(&self) -> u64 {
        match self {
            CriterionKind::Lagarias101 => 1,
            CriterionKind::Robin102 => 5041,
            CriterionKind::RobinUnconditional202a => 3,
            CriterionKind::Lemma203 => 3,
            CriterionKind::Bound204 => 1,
            CriterionKind::Lemma206 => 20,
            CriterionKind::Bound207 => 3,
            CriterionKind::Bound210 => 1,
        }
    }

    pub fn direction(&self) -> Direction {
        match self {
            CriterionKind::Lemma203 | CriterionKind::Bound204 => Direction::LhsAboveRhs,
            _ => Direction::LhsBelowRhs,
        }
    }

    /// Whether the left side is sigma(n) (as opposed to a pure
    /// harmonic-number expression).
    pub fn uses_sigma(&self) -> bool {
        matches!(
            self,
            CriterionKind::Lagarias101
                | CriterionKind::Robin102
                | CriterionKind::RobinUnconditional202a
        )
    }

    /// Smallest n at which the sides evaluate without domain errors
    /// (log log n needs n >= 3; the harmonic forms need H_n > 1).
    pub fn evaluable_min(&self) -> u64 {
        match self {
            CriterionKind::Lagarias101 => 1,
            CriterionKind::Bound204 | CriterionKind::Bound210 => 1,
            CriterionKind::Bound207 => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    StrictHolds,
    Equality,
    Violated,
    Undecided,
}

impl Verdict {
    pub fn token(&self) -> &'static str {
        match self {
            Verdict::StrictHolds => "strict_holds",
            Verdict::Equality => "equality",
            Verdict::Violated => "violated",
            Verdict::Undecided => "undecided",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        [
            Verdict::StrictHolds,
            Verdict::Equality,
            Verdict::Violated,
            Verdict::Undecided,
        ]
        .into_iter()
        .find(|v| v.token() == token)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Outcome of one inequality check with the enclosures that justify it.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub n: BigUint,
    pub kind: CriterionKind,
    pub verdict: Verdict,
    pub lhs: IntervalReal,
    pub rhs: IntervalReal,
    pub precision_used: u32,
    /// False when n is outside the criterion's stated validity range
    /// (exploration is allowed; the flag records it).
    pub in_range: bool,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, Verdict::StrictHolds | Verdict::Equality)
    }
}

/// How H_n enters a check.
pub(crate) enum HSource {
    /// Exact rational H_n (refines fully with precision).
    Exact(BigRational),
    /// Exact rational bracket (fixed floor, directed walker output).
    Bracket(BigRational, BigRational),
    /// log n + gamma + [0, 1/n] built from n itself.
    LogForm(BigUint),
}

impl HSource {
    pub(crate) fn to_expr(&self) -> RealExpr {
        match self {
            HSource::Exact(q) => RealExpr::rational(q.clone()),
            HSource::Bracket(lo, hi) => RealExpr::rational_bracket(lo.clone(), hi.clone()),
            HSource::LogForm(n) => harmonic::log_form_expr(n),
        }
    }
}

/// Pick the tightest affordable harmonic source for a point check.
pub(crate) fn h_source_for(n: &BigUint) -> Result<HSource, CheckError> {
    let small = n.to_u64();
    match small {
        Some(v) if v <= DEFAULT_EXACT_CUTOFF => {
            let h = harmonic::harmonic_exact(v).map_err(|_| CheckError::InputError)?;
            Ok(HSource::Exact(h.as_exact().expect("exact form").clone()))
        }
        Some(v) if v <= BRACKET_WALK_LIMIT => {
            let mut bracket = HarmonicBracket::new();
            bracket.step_to(v);
            let (lo, hi) = bracket.to_rationals();
            Ok(HSource::Bracket(lo, hi))
        }
        _ => Ok(HSource::LogForm(n.clone())),
    }
}

/// e^gamma as an expression.
fn e_gamma() -> RealExpr {
    RealExpr::gamma().exp()
}

/// log log n with the inner enclosure positive for n >= 2.
fn log_log(n_expr: &RealExpr) -> RealExpr {
    n_expr.ln().ln()
}

/// Left side of a pure-harmonic criterion.
pub(crate) fn lhs_expr_pure(kind: CriterionKind, h: &RealExpr) -> RealExpr {
    match kind {
        CriterionKind::Lemma203 => h.exp().mul(&h.ln()),
        CriterionKind::Bound204 | CriterionKind::Bound210 => h.exp(),
        CriterionKind::Lemma206 => h.add(&h.exp().mul(&h.ln())),
        CriterionKind::Bound207 => h.ln(),
        _ => unreachable!("sigma criteria have rational left sides"),
    }
}

/// Right side of any criterion. `h` is required for the harmonic forms.
pub(crate) fn rhs_expr(kind: CriterionKind, n_expr: &RealExpr, h: Option<&RealExpr>) -> RealExpr {
    match kind {
        CriterionKind::Lagarias101 => {
            let h = h.expect("harmonic source required");
            h.add(&h.exp().mul(&h.ln()))
        }
        CriterionKind::Robin102 | CriterionKind::Lemma203 => {
            e_gamma().mul(n_expr).mul(&log_log(n_expr))
        }
        CriterionKind::RobinUnconditional202a => {
            let ll = log_log(n_expr);
            e_gamma()
                .mul(n_expr)
                .mul(&ll)
                .add(&RealExpr::from_ratio(6482, 10000).mul(n_expr).div(&ll))
        }
        CriterionKind::Bound204 => e_gamma().mul(n_expr),
        CriterionKind::Lemma206 => e_gamma()
            .mul(n_expr)
            .mul(&log_log(n_expr))
            .add(&RealExpr::integer(7).mul(n_expr).div(&n_expr.ln())),
        CriterionKind::Bound207 => {
            log_log(n_expr).add(&RealExpr::integer(1).div(&n_expr.add(&RealExpr::integer(1)).ln()))
        }
        CriterionKind::Bound210 => e_gamma()
            .mul(n_expr)
            .mul(&RealExpr::integer(1).add(&RealExpr::integer(2).div(n_expr))),
    }
}

/// Adaptive comparison that also returns the separating (or final)
/// enclosures for the report.
pub(crate) fn decide(
    lhs: &RealExpr,
    rhs: &RealExpr,
    budget: PrecisionBudget,
) -> Result<(ComparisonResult, IntervalReal, IntervalReal, u32), RealError> {
    if let (Some(a), Some(b)) = (lhs.exact_rational()?, rhs.exact_rational()?) {
        let bits = budget.initial_bits;
        let ia = IntervalReal::from_ratio(a.numer(), a.denom(), bits)?;
        let ib = IntervalReal::from_ratio(b.numer(), b.denom(), bits)?;
        let result = match a.cmp(&b) {
            core::cmp::Ordering::Less => ComparisonResult::Less,
            core::cmp::Ordering::Equal => ComparisonResult::ProvenEqual,
            core::cmp::Ordering::Greater => ComparisonResult::Greater,
        };
        return Ok((result, ia, ib, bits));
    }
    let mut bits = budget.initial_bits;
    loop {
        let mut ev = Evaluator::new(bits + 32);
        let a = ev.eval(lhs)?.round_to(bits);
        let b = ev.eval(rhs)?.round_to(bits);
        if a.strictly_below(&b) {
            return Ok((ComparisonResult::Less, a, b, bits));
        }
        if b.strictly_below(&a) {
            return Ok((ComparisonResult::Greater, a, b, bits));
        }
        if bits >= budget.max_bits {
            return Ok((ComparisonResult::Undecided(bits), a, b, bits));
        }
        bits = bits
            .saturating_mul(budget.growth_factor)
            .min(budget.max_bits);
    }
}

pub(crate) fn verdict_for(kind: CriterionKind, result: ComparisonResult) -> Verdict {
    match (result, kind.direction()) {
        (ComparisonResult::Less, Direction::LhsBelowRhs) => Verdict::StrictHolds,
        (ComparisonResult::Less, Direction::LhsAboveRhs) => Verdict::Violated,
        (ComparisonResult::Greater, Direction::LhsBelowRhs) => Verdict::Violated,
        (ComparisonResult::Greater, Direction::LhsAboveRhs) => Verdict::StrictHolds,
        (ComparisonResult::ProvenEqual, _) => Verdict::Equality,
        (ComparisonResult::Undecided(_), _) => Verdict::Undecided,
    }
}

/// Check one criterion at n with an explicit factorization (used when
/// the caller already knows it, e.g. for generated colossally abundant
/// values).
pub fn check_factored(
    kind: CriterionKind,
    f: &Factorization,
    budget: PrecisionBudget,
) -> Result<CheckReport, CheckError> {
    let n = f.value();
    if n.is_zero() {
        return Err(CheckError::InputError);
    }
    let in_range = n >= BigUint::from(kind.validity_min());

    // Symbolic path: H_1 = 1 makes log H_1 = 0, so the harmonic form
    // equals 1 exactly and sigma(1) = 1.
    if kind == CriterionKind::Lagarias101 && n.is_one() {
        let one = IntervalReal::singleton(crate::realnum::Dyadic::one(), budget.initial_bits);
        return Ok(CheckReport {
            n,
            kind,
            verdict: Verdict::Equality,
            lhs: one.clone(),
            rhs: one,
            precision_used: budget.initial_bits,
            in_range,
        });
    }
    if n < BigUint::from(kind.evaluable_min()) {
        return Err(CheckError::Real(RealError::Domain(
            "n below the evaluable range of this criterion",
        )));
    }

    let n_expr = RealExpr::from_bigint(BigInt::from(n.clone()));
    let (lhs, rhs) = if kind.uses_sigma() {
        let sigma = divisor::sigma(f);
        let lhs = RealExpr::from_bigint(BigInt::from(sigma));
        let h_needed = matches!(kind, CriterionKind::Lagarias101);
        let h = if h_needed {
            Some(h_source_for(&n)?.to_expr())
        } else {
            None
        };
        (lhs, rhs_expr(kind, &n_expr, h.as_ref()))
    } else {
        let h = h_source_for(&n)?.to_expr();
        (lhs_expr_pure(kind, &h), rhs_expr(kind, &n_expr, Some(&h)))
    };

    let (result, lhs_enc, rhs_enc, bits) = decide(&lhs, &rhs, budget)?;
    Ok(CheckReport {
        n,
        kind,
        verdict: verdict_for(kind, result),
        lhs: lhs_enc,
        rhs: rhs_enc,
        precision_used: bits,
        in_range,
    })
}

/// Check one criterion at n.
pub fn check(
    kind: CriterionKind,
    n: &BigUint,
    budget: PrecisionBudget,
) -> Result<CheckReport, CheckError> {
    if n.is_zero() {
        return Err(CheckError::InputError);
    }
    let f = if kind.uses_sigma() {
        divisor::factorize(n).map_err(|_| CheckError::InputError)?
    } else {
        // Pure-harmonic criteria never consult the factorization; carry
        // n through a trivial one to share the path.
        return check_pure(kind, n, budget);
    };
    check_factored(kind, &f, budget)
}

fn check_pure(
    kind: CriterionKind,
    n: &BigUint,
    budget: PrecisionBudget,
) -> Result<CheckReport, CheckError> {
    debug_assert!(!kind.uses_sigma());
    let in_range = *n >= BigUint::from(kind.validity_min());
    if *n < BigUint::from(kind.evaluable_min()) {
        return Err(CheckError::Real(RealError::Domain(
            "n below the evaluable range of this criterion",
        )));
    }
    let n_expr = RealExpr::from_bigint(BigInt::from(n.clone()));
    let h = h_source_for(n)?.to_expr();
    let lhs = lhs_expr_pure(kind, &h);
    let rhs = rhs_expr(kind, &n_expr, Some(&h));
    let (result, lhs_enc, rhs_enc, bits) = decide(&lhs, &rhs, budget)?;
    Ok(CheckReport {
        n: n.clone(),
        kind,
        verdict: verdict_for(kind, result),
        lhs: lhs_enc,
        rhs: rhs_enc,
        precision_used: bits,
        in_range,
    })
}

/// Sound enclosure of `H_n + exp(H_n) log(H_n)`.
pub fn lagarias_rhs(n: &BigUint, bits: u32) -> Result<IntervalReal, CheckError> {
    if n.is_zero() {
        return Err(CheckError::InputError);
    }
    if n.is_one() {
        return Ok(IntervalReal::singleton(crate::realnum::Dyadic::one(), bits));
    }
    let h = h_source_for(n)?.to_expr();
    let expr = h.add(&h.exp().mul(&h.ln()));
    Ok(crate::realnum::eval(&expr, bits)?)
}

/// Sound enclosure of `sigma(n) / (n log log n)`; requires n >= 3.
pub fn gronwall_ratio(f: &Factorization, bits: u32) -> Result<IntervalReal, CheckError> {
    let n = f.value();
    if n < BigUint::from(3u32) {
        return Err(CheckError::Real(RealError::Domain(
            "gronwall ratio needs n >= 3 so that log log n > 0",
        )));
    }
    let sigma = divisor::sigma(f);
    let ratio = RealExpr::rational(BigRational::new(
        BigInt::from(sigma),
        BigInt::from(n.clone()),
    ));
    let n_expr = RealExpr::from_bigint(BigInt::from(n));
    Ok(crate::realnum::eval(&ratio.div(&log_log(&n_expr)), bits)?)
}

/// One CSV row: `n,kind,verdict,lhs_lo,lhs_hi,rhs_lo,rhs_hi,bits`.
/// Interval endpoints are rendered outward to 20 significant digits.
pub fn report_csv_row(report: &CheckReport) -> String {
    let (lhs_lo, lhs_hi) = report.lhs.to_decimal_pair(20);
    let (rhs_lo, rhs_hi) = report.rhs.to_decimal_pair(20);
    let mut out = String::new();
    out.push_str(&report.n.to_string());
    for field in [
        report.kind.token(),
        report.verdict.token(),
        &lhs_lo,
        &lhs_hi,
        &rhs_lo,
        &rhs_hi,
    ] {
        out.push(',');
        out.push_str(field);
    }
    out.push(',');
    out.push_str(&report.precision_used.to_string());
    out
}
