//! Farey fractions and the three-term neighbor recurrence.
//!
//! Everything here is exact integer arithmetic. The key facts: two fractions
//! a'/q', a''/q'' are consecutive in the order-Q Farey sequence iff
//! a''q' - a'q'' = 1, q' + q'' > Q and both denominators are at most Q; and
//! the fraction after a consecutive pair (f', f'') is k*f'' - f' computed
//! componentwise, with k = floor((q' + Q)/q'').

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact::Rational;

/// An irreducible fraction a/q with 0 <= a <= q.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fraction {
    a: u64,
    q: u64,
}

impl Fraction {
    pub fn new(a: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("denominator must be positive".into()));
        }
        if a > q {
            return Err(Error::InvalidArgument(format!("{a}/{q} is larger than 1")));
        }
        if a.gcd(&q) != 1 {
            return Err(Error::InvalidArgument(format!("{a}/{q} is not reduced")));
        }
        Ok(Self { a, q })
    }

    pub const fn zero() -> Self {
        Self { a: 0, q: 1 }
    }

    pub const fn one() -> Self {
        Self { a: 1, q: 1 }
    }

    pub fn numer(&self) -> u64 {
        self.a
    }

    pub fn denom(&self) -> u64 {
        self.q
    }

    pub fn value(&self) -> f64 {
        self.a as f64 / self.q as f64
    }

    pub fn as_rational(&self) -> Rational {
        Rational::new(self.a as i64, self.q as i64)
    }

    /// Compares against an arbitrary rational by cross multiplication.
    pub fn cmp_rational(&self, r: &Rational) -> std::cmp::Ordering {
        let lhs = self.a as i128 * *r.denom() as i128;
        let rhs = *r.numer() as i128 * self.q as i128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.q)
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let lhs = self.a as u128 * other.q as u128;
        let rhs = other.a as u128 * self.q as u128;
        lhs.cmp(&rhs)
    }
}

/// Numerator of g - f over the common denominator q_f * q_g.
/// Consecutive Farey fractions give +1.
pub fn delta(f: Fraction, g: Fraction) -> i64 {
    let d = g.a as i128 * f.q as i128 - f.a as i128 * g.q as i128;
    debug_assert!(i64::try_from(d).is_ok(), "delta overflow");
    d as i64
}

fn check_consecutive(f: Fraction, g: Fraction, q_order: u64) -> Result<()> {
    if q_order == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    let ok = delta(f, g) == 1
        && f.q <= q_order
        && g.q <= q_order
        && f.q + g.q > q_order;
    if ok {
        Ok(())
    } else {
        Err(Error::NotConsecutive(f, g, q_order))
    }
}

/// Successor of `curr` in the Farey sequence of order `q_order`, given its
/// predecessor `prev`.
pub fn next_fraction(prev: Fraction, curr: Fraction, q_order: u64) -> Result<Fraction> {
    if curr == Fraction::one() {
        return Err(Error::EndOfSequence(curr));
    }
    check_consecutive(prev, curr, q_order)?;
    let k = (prev.q + q_order) / curr.q;
    let a = (k as u128 * curr.a as u128 - prev.a as u128) as u64;
    let q = (k as u128 * curr.q as u128 - prev.q as u128) as u64;
    debug_assert_eq!(a.gcd(&q), 1);
    Ok(Fraction { a, q })
}

/// Predecessor of `curr`, given its successor `next`. Inverse of
/// `next_fraction`.
pub fn prev_fraction(curr: Fraction, next: Fraction, q_order: u64) -> Result<Fraction> {
    if curr == Fraction::zero() {
        return Err(Error::EndOfSequence(curr));
    }
    check_consecutive(curr, next, q_order)?;
    let k = (next.q + q_order) / curr.q;
    let a = (k as u128 * curr.a as u128 - next.a as u128) as u64;
    let q = (k as u128 * curr.q as u128 - next.q as u128) as u64;
    debug_assert_eq!(a.gcd(&q), 1);
    Ok(Fraction { a, q })
}

/// The consecutive order-Q pair (f, g) with f <= x0 < g (f = x0 when x0 is
/// itself a Farey fraction of this order).
///
/// Stern-Brocot bisection with run-length batching, so the step count is
/// logarithmic in Q rather than linear.
pub fn initial_pair(x0: Rational, q_order: u64) -> Result<(Fraction, Fraction)> {
    if q_order == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    let xn = *x0.numer() as i128;
    let xd = *x0.denom() as i128;
    if xn < 0 || xn >= xd {
        return Err(Error::OutOfDomain(format!("{x0} is outside [0, 1)")));
    }
    let q = q_order as i128;
    // bracket l <= x0 < r; l, r stay Stern-Brocot neighbors (det 1)
    let (mut la, mut lq) = (0i128, 1i128);
    let (mut ra, mut rq) = (1i128, 1i128);
    while lq + rq <= q {
        let a = ra * xd - xn * rq; // r - x0, positive
        let b = xn * lq - la * xd; // x0 - l, non-negative
        debug_assert!(a > 0 && b >= 0);
        if b == 0 {
            // x0 equals l; push r onto it as far as the order allows
            let t = (q - rq) / lq;
            ra += t * la;
            rq += t * lq;
            break;
        }
        let tl = b / a;
        if tl >= 1 {
            // mediants stay at or below x0 for tl steps
            let t = tl.min((q - lq) / rq);
            la += t * ra;
            lq += t * rq;
        } else {
            // mediants stay above x0 for (a-1)/b steps
            let t = ((a - 1) / b).min((q - rq) / lq);
            ra += t * la;
            rq += t * lq;
        }
    }
    debug_assert!(ra * lq - la * rq == 1);
    let f = Fraction { a: la as u64, q: lq as u64 };
    let g = Fraction { a: ra as u64, q: rq as u64 };
    debug_assert!(check_consecutive(f, g, q_order).is_ok());
    Ok((f, g))
}
