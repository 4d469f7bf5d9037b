//! The triangle T = { 0 < x <= 1, 0 < y <= 1, x + y > 1 } of scaled
//! consecutive-denominator pairs, the L-chain recurrence on it, and the
//! cell symmetry involution.
//!
//! The chain is L_0 = x, L_1 = y, L_{i+1} = k_i L_i - L_{i-1} with
//! k_i = floor((1 + L_{i-1})/L_i). Each (L_i, L_{i+1}) is again a triangle
//! point, which is why the recurrence never leaves (0, 1].

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::{exact_int, Exact};

/// Quotient ratios within this distance below an integer are rounded up.
///
/// Points exactly on a closed cell boundary have an integer ratio
/// (1 + L_{i-1})/L_i in real arithmetic, but roundoff can land the double
/// version a hair below the integer, which would misclassify the point by
/// a whole cell. The snap restores the closed-boundary semantics at the
/// cost of misreading points genuinely within 1e-9 of the open side, a
/// region of negligible measure. The exact-rational chain needs no snap.
const BOUNDARY_SNAP: f64 = 1e-9;

/// A point of T. Construction validates membership.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrianglePoint {
    x: f64,
    y: f64,
}

impl TrianglePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && in_triangle(x, y) {
            Ok(Self { x, y })
        } else {
            Err(Error::OutOfDomain(format!("({x}, {y}) is not in the triangle")))
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

pub fn in_triangle(x: f64, y: f64) -> bool {
    0.0 < x && x <= 1.0 && 0.0 < y && y <= 1.0 && x + y > 1.0
}

pub fn in_triangle_exact(x: &Exact, y: &Exact) -> bool {
    let zero = exact_int(0);
    let one = exact_int(1);
    *x > zero && *x <= one && *y > zero && *y <= one && x + y > one
}

/// One step of the recurrence: the quotient k = floor((1 + prev)/curr)
/// with the boundary snap, and the next chain value k*curr - prev clamped
/// back into (0, 1].
pub(crate) fn quotient_step(prev: f64, curr: f64) -> Result<(u64, f64)> {
    if curr <= 0.0 {
        return Err(Error::Internal(format!("chain value {curr} is not positive")));
    }
    let ratio = (1.0 + prev) / curr;
    let k = (ratio + BOUNDARY_SNAP).floor();
    if k < 1.0 || k > u64::MAX as f64 {
        return Err(Error::Internal(format!("chain quotient {k} out of range")));
    }
    let mut next = k * curr - prev;
    // the recurrence keeps L in (0, 1]; roundoff and the snap may
    // overshoot 1 by a few ulp
    if next > 1.0 {
        if next > 1.0 + 1e-9 {
            return Err(Error::Internal(format!("chain value {next} exceeds 1")));
        }
        next = 1.0;
    }
    if next <= 0.0 {
        return Err(Error::Internal(format!("chain value {next} is not positive")));
    }
    Ok((k as u64, next))
}

/// Runs the recurrence for `steps` quotients, producing `steps` k values
/// and the chain L_0 .. L_{steps+1}.
pub(crate) fn chain_with_ks(x: f64, y: f64, steps: usize) -> Result<(Vec<f64>, Vec<u64>)> {
    let mut ls = Vec::with_capacity(steps + 2);
    ls.push(x);
    ls.push(y);
    let mut ks = Vec::with_capacity(steps);
    for i in 1..=steps {
        let (k, next) = quotient_step(ls[i - 1], ls[i])?;
        ks.push(k);
        ls.push(next);
    }
    Ok((ls, ks))
}

/// The chain (L_0, ..., L_n).
pub fn l_chain(p: TrianglePoint, n: usize) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::InvalidArgument("chain length must be at least 1".into()));
    }
    let (mut ls, _) = chain_with_ks(p.x, p.y, n - 1)?;
    ls.truncate(n + 1);
    Ok(ls)
}

/// The quotient vector (k_1, ..., k_h) naming the cell of p.
pub fn k_vector(p: TrianglePoint, h: usize) -> Result<Vec<u32>> {
    if h < 1 {
        return Err(Error::InvalidArgument("h must be at least 1".into()));
    }
    let (_, ks) = chain_with_ks(p.x, p.y, h)?;
    ks.into_iter()
        .map(|k| u32::try_from(k).map_err(|_| Error::OutOfDomain(format!("cell index {k} too large"))))
        .collect()
}

/// Exact-rational chain (L_0, ..., L_n); plain floor semantics.
pub fn l_chain_exact(x: &Exact, y: &Exact, n: usize) -> Result<Vec<Exact>> {
    if n < 1 {
        return Err(Error::InvalidArgument("chain length must be at least 1".into()));
    }
    if !in_triangle_exact(x, y) {
        return Err(Error::OutOfDomain(format!("({x}, {y}) is not in the triangle")));
    }
    let one = exact_int(1);
    let mut ls = vec![x.clone(), y.clone()];
    for i in 1..n {
        let (prev, curr) = (&ls[i - 1], &ls[i]);
        let k = ((&one + prev) / curr).floor();
        let next = &k * curr - prev;
        debug_assert!(next > exact_int(0) && next <= one);
        ls.push(next);
    }
    Ok(ls)
}

/// Exact-rational quotient vector.
pub fn k_vector_exact(x: &Exact, y: &Exact, h: usize) -> Result<Vec<u32>> {
    if h < 1 {
        return Err(Error::InvalidArgument("h must be at least 1".into()));
    }
    if !in_triangle_exact(x, y) {
        return Err(Error::OutOfDomain(format!("({x}, {y}) is not in the triangle")));
    }
    let one = exact_int(1);
    let mut prev = x.clone();
    let mut curr = y.clone();
    let mut ks = Vec::with_capacity(h);
    for _ in 0..h {
        let k = ((&one + &prev) / &curr).floor();
        let next = &k * &curr - &prev;
        let k = k
            .to_integer()
            .to_u32()
            .ok_or_else(|| Error::OutOfDomain("cell index too large".into()))?;
        ks.push(k);
        prev = curr;
        curr = next;
    }
    Ok(ks)
}

/// The involution sigma(p) = (L_3, L_2), mapping the cell (k, l) onto the
/// cell (l, k) and reversing the quotient vector.
///
/// The result is checked for consistency: the image must have the reversed
/// quotients and map back to p. The check rejects points so close to a
/// cell boundary that double-precision floors cannot resolve them
/// reliably; points exactly on closed edges usually pass because the
/// floor convention extends the involution continuously onto them.
pub fn symmetry_involution(p: TrianglePoint) -> Result<TrianglePoint> {
    let (ls, ks) = chain_with_ks(p.x, p.y, 2)?;
    let image = TrianglePoint::new(ls[3], ls[2])?;
    let (back, back_ks) = chain_with_ks(image.x, image.y, 2)?;
    let reversed = back_ks[0] == ks[1] && back_ks[1] == ks[0];
    // tight enough to reject points the snap displaced, loose enough for
    // ordinary roundoff
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
    if !reversed || !close(back[3], p.x) || !close(back[2], p.y) {
        return Err(Error::OutOfDomain(format!(
            "({}, {}) is on a cell boundary, where the involution is not defined",
            p.x, p.y
        )));
    }
    Ok(image)
}
