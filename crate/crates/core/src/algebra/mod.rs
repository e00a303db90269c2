//! Exact polynomial and series algebra plus interval evaluation.

pub mod interval;
pub mod parse;
pub mod poly;
pub mod series;

pub use interval::{Axis, Box2, Interval};
pub use parse::{int, parse_poly, ratio};
pub use poly::{Coefficient, Exponents, MultiPoly, VarSet};
pub use series::{TruncSeries, DEFAULT_FUNCTION_ORDER};

use num_complex::Complex;
use num_rational::BigRational;

use crate::error::Result;
use crate::scalar::Scalar;

/// Evaluate an exact polynomial at a complex point in floating point.
pub fn poly_eval_complex<F: Scalar>(p: &MultiPoly<BigRational>, point: &[Complex<F>]) -> Result<Complex<F>> {
    p.eval_complex(point)
}

/// Naive monomial-sum enclosure of a polynomial in `{x, y}` over a box.
pub fn poly_eval_interval<T: Coefficient, F: Scalar>(p: &MultiPoly<T>, b: &Box2<F>) -> Result<Interval<F>> {
    if p.vars() != VarSet::Xy {
        return Err(crate::Error::VarSetMismatch {
            left: p.vars(),
            right: VarSet::Xy,
        });
    }
    p.eval_interval(&b.vars())
}
