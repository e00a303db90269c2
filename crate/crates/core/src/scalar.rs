//! Floating-point scalar abstraction shared by the numeric layers.
//!
//! Everything numeric in the crate (interval enclosures, complex evaluation,
//! branch-and-bound) is written against [`Scalar`], which is implemented for
//! `f32` and `f64`. The symbolic layer never touches floats.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, ToPrimitive, Zero};

/// Number of ulps an inexact floating-point result is widened by on each
/// side when enclosing it.
pub const INFLATION_ULPS: u32 = 4;

/// An IEEE binary floating-point type usable for rigorous enclosures.
pub trait Scalar: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Smallest representable value strictly greater than `self`.
    fn next_up(self) -> Self;
    /// Largest representable value strictly less than `self`.
    fn next_down(self) -> Self;
    /// Exact rational value of a finite float.
    fn to_rational(self) -> Option<BigRational>;

    fn step_up(self, ulps: u32) -> Self {
        (0..ulps).fold(self, |v, _| v.next_up())
    }

    fn step_down(self, ulps: u32) -> Self {
        (0..ulps).fold(self, |v, _| v.next_down())
    }

    fn from_f64_lossy(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("every f64 converts to a float type")
    }

    /// Tightest pair `(lo, hi)` of representable values with
    /// `lo <= q <= hi`; `lo == hi` exactly when `q` is representable.
    fn bracket_rational(q: &BigRational) -> (Self, Self) {
        let approx = Self::from_f64_lossy(q.to_f64().unwrap_or(f64::NAN));
        if !approx.is_finite() {
            return (Self::neg_infinity(), Self::infinity());
        }
        let mut lo = approx;
        let mut hi = approx;
        while lo.to_rational().is_some_and(|r| &r > q) {
            lo = lo.next_down();
        }
        while hi.to_rational().is_some_and(|r| &r < q) {
            hi = hi.next_up();
        }
        if lo.to_rational().as_ref() == Some(q) {
            hi = lo;
        } else if hi.to_rational().as_ref() == Some(q) {
            lo = hi;
        }
        (lo, hi)
    }
}

macro_rules! impl_scalar {
    ($t:ty, $bits:ty) => {
        impl Scalar for $t {
            fn next_up(self) -> Self {
                if self.is_nan() || self == <$t>::INFINITY {
                    return self;
                }
                if self == 0.0 {
                    return <$t>::from_bits(1);
                }
                let bits = self.to_bits();
                if self > 0.0 {
                    <$t>::from_bits(bits + 1)
                } else {
                    <$t>::from_bits(bits - 1)
                }
            }

            fn next_down(self) -> Self {
                -(-self).next_up()
            }

            fn to_rational(self) -> Option<BigRational> {
                if self.is_zero() {
                    return Some(BigRational::zero());
                }
                BigRational::from_float(self)
            }
        }
    };
}

impl_scalar!(f64, u64);
impl_scalar!(f32, u32);

/// Convert an exact rational to the nearest float (not rigorous).
pub fn rational_to<F: Scalar>(q: &BigRational) -> F {
    F::from_f64_lossy(q.to_f64().unwrap_or(f64::NAN))
}

pub fn int_to_rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
