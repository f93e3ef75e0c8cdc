//! Expression trees over the reals with sound interval evaluation.
//!
//! A `RealExpr` is an evaluation contract: given a precision in bits it
//! produces a sound enclosure. Leaves are exact rationals, exact
//! rational brackets, or the named constants gamma and pi. Evaluation is
//! deterministic: the same expression at the same precision always
//! yields the same interval.

use alloc::sync::Arc;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::constants::gamma_interval_clamped;
use super::interval::{ln2_interval, pi_interval, IntervalReal};
use super::RealError;

/// Hard cap on evaluation precision.
pub const MAX_EVAL_BITS: u32 = 1 << 20;

/// Extra working bits used internally by `eval`.
const GUARD_BITS: u32 = 32;

#[derive(Debug)]
enum Node {
    Rational(BigRational),
    /// Exact rational bracket [lo, hi]; does not shrink with precision.
    RationalBracket(BigRational, BigRational),
    Gamma,
    Pi,
    Add(RealExpr, RealExpr),
    Sub(RealExpr, RealExpr),
    Mul(RealExpr, RealExpr),
    Div(RealExpr, RealExpr),
    Neg(RealExpr),
    Exp(RealExpr),
    Ln(RealExpr),
}

/// A shareable real-valued expression.
#[derive(Clone, Debug)]
pub struct RealExpr(Arc<Node>);

impl RealExpr {
    fn wrap(node: Node) -> Self {
        RealExpr(Arc::new(node))
    }

    pub fn rational(value: BigRational) -> Self {
        RealExpr::wrap(Node::Rational(value))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        RealExpr::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn integer(value: i64) -> Self {
        RealExpr::rational(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_bigint(value: BigInt) -> Self {
        RealExpr::rational(BigRational::from_integer(value))
    }

    /// Exact bracket known to contain the represented value. The
    /// bracket's width is a floor on the evaluation width.
    pub fn rational_bracket(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "bracket endpoints out of order");
        RealExpr::wrap(Node::RationalBracket(lo, hi))
    }

    pub fn gamma() -> Self {
        RealExpr::wrap(Node::Gamma)
    }

    pub fn pi() -> Self {
        RealExpr::wrap(Node::Pi)
    }

    pub fn add(&self, other: &RealExpr) -> Self {
        RealExpr::wrap(Node::Add(self.clone(), other.clone()))
    }

    pub fn sub(&self, other: &RealExpr) -> Self {
        RealExpr::wrap(Node::Sub(self.clone(), other.clone()))
    }

    pub fn mul(&self, other: &RealExpr) -> Self {
        RealExpr::wrap(Node::Mul(self.clone(), other.clone()))
    }

    pub fn div(&self, other: &RealExpr) -> Self {
        RealExpr::wrap(Node::Div(self.clone(), other.clone()))
    }

    pub fn neg(&self) -> Self {
        RealExpr::wrap(Node::Neg(self.clone()))
    }

    pub fn exp(&self) -> Self {
        RealExpr::wrap(Node::Exp(self.clone()))
    }

    pub fn ln(&self) -> Self {
        RealExpr::wrap(Node::Ln(self.clone()))
    }

    /// Exact-rational reduction: `Some(q)` when the whole tree is
    /// rational arithmetic over rational leaves. Transcendental nodes
    /// and nondegenerate brackets yield `None`; division by an exact
    /// rational zero is a domain error, matching evaluation.
    pub fn exact_rational(&self) -> Result<Option<BigRational>, RealError> {
        match &*self.0 {
            Node::Rational(q) => Ok(Some(q.clone())),
            Node::RationalBracket(lo, hi) => {
                if lo == hi {
                    Ok(Some(lo.clone()))
                } else {
                    Ok(None)
                }
            }
            Node::Gamma | Node::Pi => Ok(None),
            Node::Add(a, b) => combine(a, b, |x, y| x + y),
            Node::Sub(a, b) => combine(a, b, |x, y| x - y),
            Node::Mul(a, b) => combine(a, b, |x, y| x * y),
            Node::Div(a, b) => {
                let db = b.exact_rational()?;
                if let Some(q) = &db {
                    if q.is_zero() {
                        return Err(RealError::domain("division by exact rational zero"));
                    }
                }
                match (a.exact_rational()?, db) {
                    (Some(x), Some(y)) => Ok(Some(x / y)),
                    _ => Ok(None),
                }
            }
            Node::Neg(a) => Ok(a.exact_rational()?.map(|x| -x)),
            Node::Exp(_) | Node::Ln(_) => Ok(None),
        }
    }
}

fn combine(
    a: &RealExpr,
    b: &RealExpr,
    op: impl Fn(BigRational, BigRational) -> BigRational,
) -> Result<Option<BigRational>, RealError> {
    match (a.exact_rational()?, b.exact_rational()?) {
        (Some(x), Some(y)) => Ok(Some(op(x, y))),
        _ => Ok(None),
    }
}

/// Evaluation context: caches the transcendental constants at one
/// working precision so repeated leaves share the work.
pub struct Evaluator {
    wp: u32,
    ln2: Option<IntervalReal>,
    gamma: Option<IntervalReal>,
    pi: Option<IntervalReal>,
}

impl Evaluator {
    pub fn new(wp: u32) -> Self {
        Evaluator {
            wp,
            ln2: None,
            gamma: None,
            pi: None,
        }
    }

    pub fn wp(&self) -> u32 {
        self.wp
    }

    fn ln2(&mut self) -> IntervalReal {
        if self.ln2.is_none() {
            self.ln2 = Some(ln2_interval(self.wp + 16));
        }
        self.ln2.clone().unwrap()
    }

    fn gamma(&mut self) -> IntervalReal {
        if self.gamma.is_none() {
            self.gamma = Some(gamma_interval_clamped(self.wp));
        }
        self.gamma.clone().unwrap()
    }

    fn pi(&mut self) -> IntervalReal {
        if self.pi.is_none() {
            self.pi = Some(pi_interval(self.wp));
        }
        self.pi.clone().unwrap()
    }

    pub fn eval(&mut self, expr: &RealExpr) -> Result<IntervalReal, RealError> {
        let wp = self.wp;
        match &*expr.0 {
            Node::Rational(q) => IntervalReal::from_ratio(q.numer(), q.denom(), wp),
            Node::RationalBracket(lo, hi) => {
                IntervalReal::from_ratio_bracket(lo.numer(), lo.denom(), hi.numer(), hi.denom(), wp)
            }
            Node::Gamma => Ok(self.gamma()),
            Node::Pi => Ok(self.pi()),
            Node::Add(a, b) => Ok(self.eval(a)?.add(&self.eval(b)?, wp)),
            Node::Sub(a, b) => Ok(self.eval(a)?.sub(&self.eval(b)?, wp)),
            Node::Mul(a, b) => Ok(self.eval(a)?.mul(&self.eval(b)?, wp)),
            Node::Div(a, b) => self.eval(a)?.div(&self.eval(b)?, wp),
            Node::Neg(a) => Ok(self.eval(a)?.neg()),
            Node::Exp(a) => self.eval(a)?.exp(wp),
            Node::Ln(a) => {
                let inner = self.eval(a)?;
                if !inner.lo().is_positive() {
                    return Err(RealError::domain("log of a nonpositive enclosure"));
                }
                let ln2 = self.ln2();
                let lo = super::interval::log_point(inner.lo(), wp, &ln2);
                let hi = super::interval::log_point(inner.hi(), wp, &ln2);
                Ok(IntervalReal::new(lo.lo().clone(), hi.hi().clone(), wp))
            }
        }
    }
}

/// Sound enclosure of `expr` at the requested precision.
pub fn eval(expr: &RealExpr, bits: u32) -> Result<IntervalReal, RealError> {
    if bits < 2 {
        return Err(RealError::domain("precision must be at least 2 bits"));
    }
    if bits > MAX_EVAL_BITS {
        return Err(RealError::PrecisionOverflow {
            requested: bits,
            cap: MAX_EVAL_BITS,
        });
    }
    let mut ev = Evaluator::new(bits + GUARD_BITS);
    Ok(ev.eval(expr)?.round_to(bits))
}

/// Result of an adaptive comparison of two real expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonResult {
    Less,
    Greater,
    /// Both sides reduce to the same exact rational. Never produced
    /// from overlapping nondegenerate intervals.
    ProvenEqual,
    /// Interval separation failed up to the recorded precision.
    Undecided(u32),
}

/// Escalation schedule for adaptive comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionBudget {
    pub initial_bits: u32,
    pub max_bits: u32,
    pub growth_factor: u32,
}

impl PrecisionBudget {
    pub fn new(initial_bits: u32, max_bits: u32, growth_factor: u32) -> Result<Self, RealError> {
        if initial_bits < 2 || initial_bits > max_bits || growth_factor < 2 {
            return Err(RealError::domain("invalid precision budget"));
        }
        Ok(PrecisionBudget {
            initial_bits,
            max_bits: max_bits.min(MAX_EVAL_BITS),
            growth_factor,
        })
    }

    /// 64 bits doubling up to 16384: every inequality in scope separates
    /// far below the cap, which only bounds adversarial ties.
    pub fn default_schedule() -> Self {
        PrecisionBudget {
            initial_bits: 64,
            max_bits: 16384,
            growth_factor: 2,
        }
    }

    pub fn with_max_bits(mut self, max_bits: u32) -> Self {
        self.max_bits = max_bits.clamp(self.initial_bits, MAX_EVAL_BITS);
        self
    }
}

/// Decide `lhs ? rhs` by exact rational reduction when possible,
/// otherwise by interval separation with escalating precision.
pub fn compare_adaptive(
    lhs: &RealExpr,
    rhs: &RealExpr,
    budget: PrecisionBudget,
) -> Result<ComparisonResult, RealError> {
    if let (Some(a), Some(b)) = (lhs.exact_rational()?, rhs.exact_rational()?) {
        return Ok(match a.cmp(&b) {
            Ordering::Less => ComparisonResult::Less,
            Ordering::Equal => ComparisonResult::ProvenEqual,
            Ordering::Greater => ComparisonResult::Greater,
        });
    }
    let mut bits = budget.initial_bits;
    loop {
        let a = eval(lhs, bits)?;
        let b = eval(rhs, bits)?;
        if a.strictly_below(&b) {
            return Ok(ComparisonResult::Less);
        }
        if b.strictly_below(&a) {
            return Ok(ComparisonResult::Greater);
        }
        if bits >= budget.max_bits {
            return Ok(ComparisonResult::Undecided(bits));
        }
        bits = bits
            .saturating_mul(budget.growth_factor)
            .min(budget.max_bits);
    }
}
