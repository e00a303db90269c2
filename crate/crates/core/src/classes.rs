//! Coefficient formulas and Hankel functionals for the classes `R` and `R1`.
//!
//! Both classes are parametrised by a Schwarz function `w` through the
//! Herglotz series `P = (1 + w) / (1 - w)`:
//!
//! * `R`:  `f'(z) = P(z)`, so `n a_n = [z^{n-1}] P`;
//! * `R1`: `f'(z) + z f''(z) = P(z)`, so `n^2 a_n = [z^{n-1}] P`.
//!
//! Each `a_n` is read off by coefficient matching, which is linear in `a_n`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{int, parse_poly, ratio, MultiPoly, TruncSeries, VarSet, DEFAULT_FUNCTION_ORDER};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::RationalPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassId {
    #[serde(rename = "r")]
    R,
    #[serde(rename = "r1")]
    R1,
}

impl ClassId {
    pub const ALL: [ClassId; 2] = [ClassId::R, ClassId::R1];

    /// Factor multiplying `a_n` when matching `z^{n-1}`.
    pub fn matching_weight(&self, n: usize) -> BigRational {
        let n = int(n as i64);
        match self {
            ClassId::R => n,
            ClassId::R1 => n.clone() * n,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ClassId::R => "r",
            ClassId::R1 => "r1",
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassId::R => "R",
            ClassId::R1 => "R1",
        })
    }
}

impl FromStr for ClassId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r" => Ok(ClassId::R),
            "r1" => Ok(ClassId::R1),
            _ => Err(Error::Unknown {
                kind: "class",
                name: s.to_string(),
            }),
        }
    }
}

/// `a_2..a_n` as polynomials in `c1..c_{n-1}`; `a_1 = 1` is implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientFormulas {
    pub class: ClassId,
    coeffs: Vec<RationalPoly>,
}

impl CoefficientFormulas {
    /// `a_n` for `2 <= n <= max_index()`.
    pub fn a(&self, n: usize) -> &RationalPoly {
        assert!(n >= 2 && n <= self.max_index(), "a_{n} not derived");
        &self.coeffs[n - 2]
    }

    pub fn max_index(&self) -> usize {
        self.coeffs.len() + 1
    }

    pub fn vars(&self) -> VarSet {
        self.coeffs[0].vars()
    }
}

pub fn derive_coefficients(class: ClassId) -> CoefficientFormulas {
    derive_coefficients_to(class, DEFAULT_FUNCTION_ORDER)
}

/// Coefficients `a_2..a_order`, which need `w` through `z^{order-1}`.
pub fn derive_coefficients_to(class: ClassId, order: usize) -> CoefficientFormulas {
    assert!(order >= 2, "need at least a_2");
    let herglotz = TruncSeries::<BigRational>::symbolic_schwarz(order - 1)
        .herglotz_expand()
        .expect("symbolic Schwarz series has zero constant term");
    let coeffs = (2..=order)
        .map(|n| {
            let rhs = herglotz.coeff(n - 1).expect("within order");
            rhs.scale(&(BigRational::one() / class.matching_weight(n)))
        })
        .collect();
    CoefficientFormulas { class, coeffs }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HankelKind {
    /// `H_2(2) = a_2 a_4 - a_3^2`
    H2_2,
    /// `H_3(1) = a_3(a_2 a_4 - a_3^2) - a_4(a_4 - a_2 a_3) + a_5(a_3 - a_2^2)`
    H3_1,
}

/// A Hankel functional stored as `scale * poly` with `poly` integral.
#[derive(Clone, Debug, PartialEq)]
pub struct HankelPoly {
    pub kind: HankelKind,
    pub class: ClassId,
    pub poly: RationalPoly,
    pub scale: BigRational,
}

impl HankelPoly {
    fn from_exact(kind: HankelKind, class: ClassId, exact: RationalPoly) -> Self {
        let (d, poly) = exact.clear_denominators();
        Self {
            kind,
            class,
            poly,
            scale: BigRational::new(BigInt::one(), d),
        }
    }

    /// The functional with the scale multiplied back in.
    pub fn exact(&self) -> RationalPoly {
        self.poly.scale(&self.scale)
    }

    pub fn denominator(&self) -> BigInt {
        self.scale.denom().clone()
    }

    pub fn eval_exact(&self, c: &[BigRational]) -> Result<BigRational> {
        Ok(self.poly.eval(c)? * self.scale.clone())
    }
}

pub fn hankel3_poly(formulas: &CoefficientFormulas) -> HankelPoly {
    assert!(formulas.max_index() >= 5, "H_3(1) needs a_2..a_5");
    let (a2, a3, a4, a5) = (formulas.a(2), formulas.a(3), formulas.a(4), formulas.a(5));
    // cofactor expansion of [[1,a2,a3],[a2,a3,a4],[a3,a4,a5]] along the last column
    let det = &(&(a3 * &(&(a2 * a4) - &(a3 * a3))) - &(a4 * &(a4 - &(a2 * a3)))) + &(a5 * &(a3 - &(a2 * a2)));
    HankelPoly::from_exact(HankelKind::H3_1, formulas.class, det)
}

pub fn hankel2_poly(formulas: &CoefficientFormulas) -> HankelPoly {
    assert!(formulas.max_index() >= 4, "H_2(2) needs a_2..a_4");
    let (a2, a3, a4) = (formulas.a(2), formulas.a(3), formulas.a(4));
    HankelPoly::from_exact(HankelKind::H2_2, formulas.class, &(a2 * a4) - &(a3 * a3))
}

/// Double-precision value of `scale * poly` at `c = (c1, .., c4)`.
pub fn eval_functional<F: Scalar>(h: &HankelPoly, c: &[Complex<F>]) -> Result<Complex<F>> {
    let v = h.poly.eval_complex(c)?;
    let s = crate::scalar::rational_to::<F>(&h.scale);
    Ok(v * s)
}

/// The determinant and its regrouping exactly as printed in the source
/// derivation, together with the Prokhorov-Szynal parameters each regrouping uses.
#[derive(Clone, Debug)]
pub struct PrintedForms {
    pub class: ClassId,
    pub denominator: BigInt,
    pub expansion_text: &'static str,
    pub regrouped_text: &'static str,
    /// `a_2..a_5` as printed.
    pub coefficient_texts: [&'static str; 4],
    /// `(mu, nu)` in `|c3 + mu c1 c2 + nu c1^3| <= 1`.
    pub prokhorov: (BigRational, BigRational),
}

impl PrintedForms {
    pub fn for_class(class: ClassId) -> Self {
        match class {
            ClassId::R => Self {
                class,
                denominator: BigInt::from(540),
                expansion_text: "-12c1^4c2 - 16c2^3 - 54c1^3c3 + 108c1c2c3 - 135c3^2 \
                                 + 60c1^2c2^2 - 7c1^6 - 72c1^2c4 + 144c2c4",
                regrouped_text: "-54c3(c3 - 2c1c2 + c1^3) - 81c3^2 - 12c1^4c2 - 16c2^3 \
                                 + 60c1^2c2^2 - 7c1^6 + 72(2c2 - c1^2)c4",
                coefficient_texts: [
                    "c1",
                    "2/3 (c1^2 + c2)",
                    "1/2 (c3 + 2c1c2 + c1^3)",
                    "2/5 (c4 + 2c1c3 + 3c1^2c2 + c1^4 + c2^2)",
                ],
                prokhorov: (int(-2), int(1)),
            },
            ClassId::R1 => Self {
                class,
                denominator: BigInt::from(1_166_400),
                expansion_text: "-1217c1^6 - 1140c1^4c2 + 13116c1^2c2^2 + 7936c2^3 - 9234c1^3c3 \
                                 + 972c1c2c3 - 18225c3^2 + 2592(8c2 - c1^2)c4",
                regrouped_text: "-8991c3^2 - 9234c3(c3 - 2/19 c1c2 + c1^3) - 1140c1^4c2 \
                                 + 13116c1^2c2^2 + 7936c2^3 - 1217c1^6 + 2592(8c2 - c1^2)c4",
                coefficient_texts: [
                    "c1/2",
                    "2/9 (c1^2 + c2)",
                    "1/8 (c3 + 2c1c2 + c1^3)",
                    "2/25 (c4 + 2c1c3 + 3c1^2c2 + c1^4 + c2^2)",
                ],
                prokhorov: (ratio(-2, 19), int(1)),
            },
        }
    }

    pub fn expansion(&self) -> RationalPoly {
        parse_poly(VarSet::C4, self.expansion_text).expect("printed expansion parses")
    }

    /// Printed `a_n`, `2 <= n <= 5`.
    pub fn coefficient(&self, n: usize) -> RationalPoly {
        parse_poly(VarSet::C4, self.coefficient_texts[n - 2]).expect("printed coefficient parses")
    }

    pub fn regrouped(&self) -> RationalPoly {
        parse_poly(VarSet::C4, self.regrouped_text).expect("printed regrouping parses")
    }

    /// `c3 + mu c1 c2 + nu c1^3`.
    pub fn prokhorov_factor(&self) -> RationalPoly {
        let v = VarSet::C4;
        let (mu, nu) = &self.prokhorov;
        let c = |i| MultiPoly::var(v, i);
        &(&c(2) + &(&c(0) * &c(1)).scale(mu)) + &c(0).pow(3).scale(nu)
    }
}
