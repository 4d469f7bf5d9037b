//! Streaming enumeration of Farey sequences and their normalized third gaps.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::fraction::{delta, initial_pair, next_fraction, Fraction};

/// Order Q plus the closed subinterval [lo, hi] of [0, 1] to enumerate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SequenceParams {
    pub order: u64,
    pub lo: Rational,
    pub hi: Rational,
}

impl SequenceParams {
    pub fn new(order: u64, lo: Rational, hi: Rational) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("order must be positive".into()));
        }
        let zero = Rational::new(0, 1);
        let one = Rational::new(1, 1);
        if lo < zero || hi > one || lo >= hi {
            return Err(Error::InvalidArgument(format!(
                "bad interval [{lo}, {hi}]: need 0 <= lo < hi <= 1"
            )));
        }
        Ok(Self { order, lo, hi })
    }

    /// The full interval [0, 1].
    pub fn unit(order: u64) -> Result<Self> {
        Self::new(order, Rational::new(0, 1), Rational::new(1, 1))
    }

    pub fn is_unit(&self) -> bool {
        self.lo == Rational::new(0, 1) && self.hi == Rational::new(1, 1)
    }

    /// |I| = hi - lo.
    pub fn length(&self) -> Rational {
        self.hi - self.lo
    }
}

/// Iterator over the Farey fractions of order Q inside [lo, hi], ascending.
/// Constant memory: only the fraction to emit and its successor are kept.
pub struct FareySeq {
    q_order: u64,
    hi: Rational,
    // (next fraction to emit, its successor in the full sequence if any)
    state: Option<(Fraction, Option<Fraction>)>,
}

impl FareySeq {
    fn successor(&self, prev: Fraction, curr: Fraction) -> Option<Fraction> {
        if curr == Fraction::one() {
            None
        } else {
            Some(
                next_fraction(prev, curr, self.q_order)
                    .expect("iterator state is always a consecutive pair"),
            )
        }
    }
}

impl Iterator for FareySeq {
    type Item = Fraction;

    fn next(&mut self) -> Option<Fraction> {
        let (curr, succ) = self.state?;
        self.state = match succ {
            Some(s) if s.cmp_rational(&self.hi) != std::cmp::Ordering::Greater => {
                Some((s, self.successor(curr, s)))
            }
            _ => None,
        };
        Some(curr)
    }
}

/// All fractions of F_Q in the closed interval of `params`, ascending.
pub fn farey_sequence(params: SequenceParams) -> Result<FareySeq> {
    let (f, g) = initial_pair(params.lo, params.order)?;
    let mut seq = FareySeq { q_order: params.order, hi: params.hi, state: None };
    // f <= lo < g with f, g consecutive; f is in range only when it is lo
    let start = if f.cmp_rational(&params.lo) == std::cmp::Ordering::Equal {
        (f, Some(g))
    } else {
        (g, seq.successor(f, g))
    };
    if start.0.cmp_rational(&params.hi) != std::cmp::Ordering::Greater {
        seq.state = Some(start);
    }
    Ok(seq)
}

/// N_I(Q): how many Farey fractions of order Q lie in the interval.
pub fn count(params: SequenceParams) -> u64 {
    if params.is_unit() {
        // 1 + sum of totients up to Q, via a sieve
        let q = params.order as usize;
        let mut phi: Vec<u64> = (0..=q as u64).collect();
        for p in 2..=q {
            if phi[p] == p as u64 {
                let mut m = p;
                while m <= q {
                    phi[m] -= phi[m] / p as u64;
                    m += p;
                }
            }
        }
        1 + phi[1..].iter().sum::<u64>()
    } else {
        farey_sequence(params).map(|it| it.count() as u64).unwrap_or(0)
    }
}

/// One window of h normalized third gaps starting at 1-based index j.
#[derive(Clone, Debug, PartialEq)]
pub struct GapTuple {
    pub start_index: u64,
    pub values: Vec<f64>,
}

/// Iterator over all windows of normalized third gaps.
pub struct GapTuples {
    seq: FareySeq,
    h: usize,
    // scale = count * interval-denominator / interval-numerator
    scale_num: u128,
    scale_den: u128,
    window: std::collections::VecDeque<Fraction>,
    j: u64,
    emitted: u64,
    max_windows: u64,
}

impl Iterator for GapTuples {
    type Item = GapTuple;

    fn next(&mut self) -> Option<GapTuple> {
        if self.emitted == self.max_windows {
            return None;
        }
        while self.window.len() < self.h + 2 {
            self.window.push_back(self.seq.next()?);
        }
        let values = (0..self.h)
            .map(|i| {
                let lo = self.window[i];
                let hi = self.window[i + 2];
                let k = delta(lo, hi) as u128;
                let num = self.scale_num * k;
                let den = self.scale_den * lo.denom() as u128 * hi.denom() as u128;
                num as f64 / den as f64
            })
            .collect();
        let out = GapTuple { start_index: self.j, values };
        self.window.pop_front();
        self.j += 1;
        self.emitted += 1;
        Some(out)
    }
}

/// Normalized third-gap windows: for j = 1 .. N-h-1 the h values
/// (N/|I|) * (g_{j+i+1} - g_{j+i-1}), i = 1..h.
pub fn gap_tuples(params: SequenceParams, h: usize) -> Result<GapTuples> {
    if h == 0 {
        return Err(Error::InvalidArgument("h must be at least 1".into()));
    }
    let n = count(params);
    if n < h as u64 + 2 {
        return Err(Error::InvalidArgument(format!(
            "{n} fractions in range cannot fill a window of h = {h}"
        )));
    }
    let len = params.length();
    Ok(GapTuples {
        seq: farey_sequence(params)?,
        h,
        scale_num: n as u128 * *len.denom() as u128,
        scale_den: *len.numer() as u128,
        window: std::collections::VecDeque::with_capacity(h + 2),
        j: 1,
        emitted: 0,
        max_windows: n - h as u64 - 1,
    })
}

/// Whether the successor fraction determined by the consecutive denominator
/// pair (q', q'') lands in the interval, decided purely from the modular
/// inverse of q' mod q''.
pub fn inverse_membership(qprime: u64, qsecond: u64, lo: Rational, hi: Rational) -> Result<bool> {
    if qprime == 0 || qsecond == 0 {
        return Err(Error::InvalidArgument("denominators must be positive".into()));
    }
    if qprime.gcd(&qsecond) != 1 {
        return Err(Error::InvalidArgument(format!(
            "{qprime} and {qsecond} are not coprime"
        )));
    }
    let f = if qsecond == 1 {
        Fraction::one()
    } else {
        let a = mod_inverse(qprime % qsecond, qsecond);
        Fraction::new(a, qsecond).expect("a'' coprime to q'' by construction")
    };
    Ok(f.cmp_rational(&lo) != std::cmp::Ordering::Less
        && f.cmp_rational(&hi) != std::cmp::Ordering::Greater)
}

// inverse of a mod m for gcd(a, m) = 1, m >= 2, result in [1, m-1]
fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u64
}
