//! Exact and interval-certified verification of third Hankel determinant
//! bounds for the bounded-turning classes `R` (`Re f' > 0`) and `R1`
//! (`Re (f' + z f'') > 0`).
//!
//! The crate is layered bottom-up:
//!
//! * [`algebra`]: exact rational polynomials, truncated series, intervals.
//! * [`classes`]: coefficient formulas and Hankel functionals in `c1..c4`.
//! * [`schwarz`]: Schwarz-function samples and the coefficient lemmas.
//! * [`optimize`]: interval branch-and-bound with certificates.
//! * [`pipeline`]: the end-to-end reproduction of both bounds.
//! * [`cli`] / [`report`]: command-line driver and versioned JSON records.
//!
//! Numeric code is generic over [`Scalar`] (`f32`/`f64`); the aliases below
//! fix the concrete types used by the pipeline.

// `!(x > 0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod classes;
pub mod cli;
pub mod error;
pub mod optimize;
pub mod pipeline;
pub mod report;
pub mod scalar;
pub mod schwarz;

pub use error::{Error, Result};
pub use scalar::{Scalar, INFLATION_ULPS};

use num_complex::Complex;

pub type BigRational = num_rational::BigRational;
pub type RationalPoly = algebra::MultiPoly<BigRational>;
pub type RationalSeries = algebra::TruncSeries<BigRational>;
pub type Interval64 = algebra::Interval<f64>;
pub type Box64 = algebra::Box2<f64>;
pub type ComplexValue = Complex<f64>;

pub type SchwarzSample64 = schwarz::SchwarzSample<f64>;
pub type MaxCertificate64 = optimize::MaxCertificate<f64>;
