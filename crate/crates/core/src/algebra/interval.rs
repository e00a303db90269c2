//! Outward-rounded real intervals and axis-aligned boxes.
//!
//! Every arithmetic result is checked for exactness with an error-free
//! transformation (two-sum, fused multiply-add). Exact results are kept as
//! is; inexact ones are widened by [`INFLATION_ULPS`] ulps on each side, so
//! the enclosure contract holds in round-to-nearest without touching the
//! hardware rounding mode.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::scalar::{Scalar, INFLATION_ULPS};

fn sum_is_exact<F: Scalar>(a: F, b: F, s: F) -> bool {
    if !s.is_finite() {
        return false;
    }
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    err.is_zero()
}

fn product_is_exact<F: Scalar>(a: F, b: F, p: F) -> bool {
    if !p.is_finite() {
        return false;
    }
    if a.is_zero() || b.is_zero() {
        return true;
    }
    // fma residuals are unreliable once the product underflows
    if p.abs() < F::min_positive_value() {
        return false;
    }
    a.mul_add(b, -p).is_zero()
}

fn widen_down<F: Scalar>(v: F, exact: bool) -> F {
    if exact {
        v
    } else if v.is_nan() {
        F::neg_infinity()
    } else {
        v.step_down(INFLATION_ULPS)
    }
}

fn widen_up<F: Scalar>(v: F, exact: bool) -> F {
    if exact {
        v
    } else if v.is_nan() {
        F::infinity()
    } else {
        v.step_up(INFLATION_ULPS)
    }
}

fn add_down<F: Scalar>(a: F, b: F) -> F {
    let s = a + b;
    widen_down(s, sum_is_exact(a, b, s))
}

fn add_up<F: Scalar>(a: F, b: F) -> F {
    let s = a + b;
    widen_up(s, sum_is_exact(a, b, s))
}

fn mul_down<F: Scalar>(a: F, b: F) -> F {
    let p = a * b;
    widen_down(p, product_is_exact(a, b, p))
}

fn mul_up<F: Scalar>(a: F, b: F) -> F {
    let p = a * b;
    widen_up(p, product_is_exact(a, b, p))
}

/// Closed real interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval<F> {
    lo: F,
    hi: F,
}

impl<F: Scalar> Interval<F> {
    /// Panics if `lo > hi` or either bound is NaN.
    pub fn new(lo: F, hi: F) -> Self {
        assert!(lo <= hi, "interval bounds out of order: [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn try_new(lo: F, hi: F) -> Option<Self> {
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn point(v: F) -> Self {
        Self::new(v, v)
    }

    pub fn zero() -> Self {
        Self::point(F::zero())
    }

    pub fn entire() -> Self {
        Self::new(F::neg_infinity(), F::infinity())
    }

    /// Tightest enclosure of an exact rational.
    pub fn from_rational(q: &BigRational) -> Self {
        let (lo, hi) = F::bracket_rational(q);
        Self { lo, hi }
    }

    pub fn lo(&self) -> F {
        self.lo
    }

    pub fn hi(&self) -> F {
        self.hi
    }

    pub fn width(&self) -> F {
        self.hi - self.lo
    }

    pub fn mid(&self) -> F {
        if self.lo == self.hi {
            return self.lo;
        }
        let two = F::one() + F::one();
        let m = self.lo / two + self.hi / two;
        m.max(self.lo).min(self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: F) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        Self::try_new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    /// Smallest absolute value over the interval.
    pub fn mig(&self) -> F {
        if self.lo <= F::zero() && F::zero() <= self.hi {
            F::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    /// Largest absolute value over the interval.
    pub fn mag(&self) -> F {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn split(&self) -> (Self, Self) {
        let m = self.mid();
        (Self::new(self.lo, m), Self::new(m, self.hi))
    }

    pub fn powi(&self, n: u32) -> Self {
        fn point_pow<F: Scalar>(v: F, n: u32) -> Interval<F> {
            (0..n).fold(Interval::point(F::one()), |acc, _| acc * Interval::point(v))
        }
        match n {
            0 => Self::point(F::one()),
            1 => *self,
            _ if n % 2 == 1 => Self::new(point_pow(self.lo, n).lo, point_pow(self.hi, n).hi),
            _ => Self::new(point_pow(self.mig(), n).lo, point_pow(self.mag(), n).hi),
        }
    }
}

impl<F: fmt::Debug> fmt::Debug for Interval<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl<F: fmt::Display> fmt::Display for Interval<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl<F: Scalar> Add for Interval<F> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi))
    }
}

impl<F: Scalar> Neg for Interval<F> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.hi, -self.lo)
    }
}

impl<F: Scalar> Sub for Interval<F> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Scalar> Mul for Interval<F> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let pairs = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let lo = pairs.iter().map(|&(a, b)| mul_down(a, b)).fold(F::infinity(), F::min);
        let hi = pairs.iter().map(|&(a, b)| mul_up(a, b)).fold(F::neg_infinity(), F::max);
        Self::new(lo, hi)
    }
}

/// Which variable of a [`Box2`] an edge or split refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

/// Axis-aligned box in the `(x, y)` plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Box2<F> {
    pub x: Interval<F>,
    pub y: Interval<F>,
}

impl<F: Scalar> Box2<F> {
    pub fn new(x: Interval<F>, y: Interval<F>) -> Self {
        Self { x, y }
    }

    pub fn from_bounds(x: (F, F), y: (F, F)) -> Self {
        Self::new(Interval::new(x.0, x.1), Interval::new(y.0, y.1))
    }

    pub fn unit_square() -> Self {
        Self::from_bounds((F::zero(), F::one()), (F::zero(), F::one()))
    }

    pub fn center(&self) -> (F, F) {
        (self.x.mid(), self.y.mid())
    }

    pub fn corners(&self) -> [(F, F); 4] {
        [
            (self.x.lo(), self.y.lo()),
            (self.x.hi(), self.y.lo()),
            (self.x.lo(), self.y.hi()),
            (self.x.hi(), self.y.hi()),
        ]
    }

    pub fn contains(&self, p: (F, F)) -> bool {
        self.x.contains(p.0) && self.y.contains(p.1)
    }

    pub fn max_width(&self) -> F {
        self.x.width().max(self.y.width())
    }

    /// Bisect the wider side; ties split `x`.
    pub fn bisect(&self) -> (Self, Self) {
        match self.x.width().partial_cmp(&self.y.width()) {
            Some(Ordering::Less) => {
                let (a, b) = self.y.split();
                (Self::new(self.x, a), Self::new(self.x, b))
            }
            _ => {
                let (a, b) = self.x.split();
                (Self::new(a, self.y), Self::new(b, self.y))
            }
        }
    }

    pub fn vars(&self) -> [Interval<F>; 2] {
        [self.x, self.y]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type I = Interval<f64>;

    #[test]
    fn exact_operations_stay_tight() {
        let a = I::new(0.5, 2.0);
        let b = I::new(-1.0, 3.0);
        assert_eq!(a + b, I::new(-0.5, 5.0));
        assert_eq!(a * b, I::new(-2.0, 6.0));
        assert_eq!(a - a, I::new(-1.5, 1.5));
        assert_eq!(I::new(-2.0, 1.0).powi(2), I::new(0.0, 4.0));
        assert_eq!(I::new(-2.0, 1.0).powi(3), I::new(-8.0, 1.0));
    }

    #[test]
    fn inexact_results_are_widened() {
        let tenth = I::point(0.1);
        let s = tenth + I::point(0.2);
        assert!(s.lo() < 0.1 + 0.2 && s.hi() > 0.1 + 0.2);
        let exact = BigRational::from_float(0.1).unwrap() + BigRational::from_float(0.2).unwrap();
        assert!(s.lo().to_rational().unwrap() <= exact && exact <= s.hi().to_rational().unwrap());
        let third = I::point(1.0 / 3.0) * I::point(3.0);
        assert!(third.lo() < 1.0 && third.hi() > 1.0 - 1e-15);
    }

    #[test]
    fn zero_products_are_exact() {
        let z = I::point(0.0) * I::new(-7.0, 1e300);
        assert_eq!(z, I::zero());
    }

    #[test]
    fn box_bisects_wider_side() {
        let b = Box2::from_bounds((0.0, 1.0), (0.0, 4.0));
        let (l, r) = b.bisect();
        assert_eq!(l.y, I::new(0.0, 2.0));
        assert_eq!(r.y, I::new(2.0, 4.0));
        assert_eq!(l.x, b.x);
    }

    #[test]
    fn even_power_uses_magnitudes() {
        let p = I::new(-0.5, -0.25).powi(4);
        assert_eq!(p, I::new(0.00390625, 0.0625));
    }
}
