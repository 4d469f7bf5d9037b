//! Exact rational scalars used by the geometry code.
//!
//! Cell constraint coefficients grow like k*l and clipped vertices stack
//! several such factors, so polygon geometry uses arbitrary precision.
//! None of it sits in a per-sample hot loop; the subdivision engine does
//! its inner-loop sign tests in plain integers instead.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;

/// Scalar for exact geometry (cell polygons, clipping, areas, chains).
pub type Exact = BigRational;

/// Scalar for interval endpoints and other user-facing rationals.
pub type Rational = Ratio<i64>;

pub fn exact(n: i128, d: i128) -> Exact {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn exact_int(n: i128) -> Exact {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact value of a finite double. Every f64 is a dyadic rational, so this
/// is lossless; panics on NaN or infinity.
pub fn exact_from_f64(v: f64) -> Exact {
    assert!(v.is_finite(), "exact_from_f64 needs a finite value");
    if v == 0.0 {
        return exact_int(0);
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    // subnormals have an implicit leading 0 and a fixed exponent
    let (mantissa, exp) = if exp_bits == 0 {
        (frac, -1074i64)
    } else {
        (frac | (1i64 << 52), exp_bits - 1075)
    };
    let m = BigInt::from(sign * mantissa);
    if exp >= 0 {
        BigRational::from_integer(m << exp)
    } else {
        BigRational::new(m, BigInt::from(1) << (-exp))
    }
}

pub fn exact_to_f64(x: &Exact) -> f64 {
    x.to_f64().expect("BigRational always converts to f64")
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}
