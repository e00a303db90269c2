//! Sign certification for polynomials given as a product of factors.
//!
//! Grouped terms such as `16 y^2 (y - 1)` are zero on part of the boundary,
//! which no expanded-form enclosure can certify. Enclosing each factor
//! separately (and narrowing factors that coincide with a region constraint)
//! certifies their sign directly.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use crate::algebra::{Box2, Coefficient, Interval, MultiPoly, VarSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::RationalPoly;

use super::engine::Objective;
use super::region::RegionSpec;

#[derive(Clone, Debug, PartialEq)]
pub struct ProductForm {
    pub name: String,
    pub coefficient: BigRational,
    pub factors: Vec<(RationalPoly, u32)>,
}

impl ProductForm {
    pub fn new(name: &str, coefficient: BigRational, factors: Vec<(RationalPoly, u32)>) -> Result<Self> {
        if let Some((bad, _)) = factors.iter().find(|(f, _)| f.vars() != VarSet::Xy) {
            return Err(Error::VarSetMismatch {
                left: bad.vars(),
                right: VarSet::Xy,
            });
        }
        Ok(Self {
            name: name.to_string(),
            coefficient,
            factors,
        })
    }

    pub fn expand(&self) -> RationalPoly {
        self.factors.iter().fold(
            MultiPoly::constant(VarSet::Xy, self.coefficient.clone()),
            |acc, (f, k)| &acc * &f.pow(*k),
        )
    }

    pub fn negated(&self) -> Self {
        Self {
            name: format!("-({})", self.name),
            coefficient: -self.coefficient.clone(),
            factors: self.factors.clone(),
        }
    }
}

impl fmt::Display for ProductForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.coefficient.is_one() {
            write!(f, "{}", self.coefficient)?;
        }
        for (p, k) in &self.factors {
            if *k == 1 {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})^{k}")?;
            }
        }
        Ok(())
    }
}

impl<F: Scalar> Objective<F> for ProductForm {
    fn enclose(&self, b: &Box2<F>, region: &RegionSpec<F>) -> Interval<F> {
        self.factors
            .iter()
            .fold(self.coefficient.enclose::<F>(), |acc, (p, k)| {
                let enc = p.eval_interval_tight(&b.vars()).expect("factors are in {x,y}");
                acc * region.clamp(p, enc).powi(*k)
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, parse_poly};
    use crate::optimize::{check_positive, standard_region, BbOptions, Strictness};

    fn xy(s: &str) -> RationalPoly {
        parse_poly(VarSet::Xy, s).unwrap()
    }

    #[test]
    fn boundary_zero_product_certifies() {
        // 16 y^2 (1 - y) >= 0 vanishes on y = 0 and y = 1
        let p = ProductForm::new("t", int(16), vec![(xy("y"), 2), (xy("1 - y"), 1)]).unwrap();
        let r = standard_region::<f64>("unit-square").unwrap();
        let c = check_positive(&p, "t", &r, Strictness::NonNegative, &BbOptions::new(1e-6, 1000)).unwrap();
        assert!(c.verified, "{c:?}");
        assert_eq!(p.expand(), xy("16y^2 - 16y^3"));
    }

    #[test]
    fn constraint_factor_is_clamped() {
        let p = ProductForm::new("t", int(1), vec![(xy("x"), 1), (xy("1 - x - y"), 1)]).unwrap();
        let square = standard_region::<f64>("unit-square").unwrap();
        let tri = standard_region::<f64>("triangle-E").unwrap();
        let opts = BbOptions::new(1e-6, 2000);
        assert!(
            check_positive(&p, "t", &tri, Strictness::NonNegative, &opts)
                .unwrap()
                .verified
        );
        assert!(
            !check_positive(&p, "t", &square, Strictness::NonNegative, &opts)
                .unwrap()
                .verified
        );
    }
}
