//! The printed inequality chain for each class, and its exact re-derivation.
//!
//! Variables: `x = |c1|^2`, `y = |c2|`, `t = |c3|`. All polynomials here are
//! scaled by the class denominator (540 or 1166400).

use num_traits::{Signed, Zero};

use crate::algebra::{int, parse_poly, ratio, MultiPoly, VarSet};
use crate::classes::{derive_coefficients, hankel3_poly, ClassId, PrintedForms};
use crate::error::{Error, Result};
use crate::optimize::ProductForm;
use crate::{BigRational, RationalPoly};

/// A grouped case-1 term that the argument drops as nonpositive, with a
/// factored form of its negation used to certify the sign.
#[derive(Clone, Debug)]
pub struct TermSpec {
    pub printed: &'static str,
    /// `-term = sum coef * prod factor^k`, each factor nonnegative on `E`.
    pub parts: &'static [(i64, &'static [(&'static str, u32)])],
}

impl TermSpec {
    pub fn poly(&self) -> RationalPoly {
        parse_poly(VarSet::Xy, self.printed).expect("term parses")
    }

    pub fn negation_parts(&self) -> Vec<ProductForm> {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, (coef, factors))| {
                let fs = factors
                    .iter()
                    .map(|(f, k)| (parse_poly(VarSet::Xy, f).expect("factor parses"), *k))
                    .collect();
                ProductForm::new(&format!("-({})#{i}", self.printed), int(*coef), fs).expect("factors in x,y")
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct ClassChain {
    pub class: ClassId,
    pub denominator: i64,
    /// Bound after the triangle inequality and the coefficient lemma, less
    /// the `|c4|` term.
    pub printed_majorant: &'static str,
    /// Coefficient of `|c4|` in that bound.
    pub printed_weight: &'static str,
    /// Case 1 is `y <= threshold * (1 - x)`.
    pub threshold: (i64, i64),
    /// Bound on the weight under the case-1 condition.
    pub printed_weight_bound: &'static str,
    pub printed_case1: &'static str,
    pub terms: &'static [TermSpec],
    pub printed_case1_value: (i64, i64),
    pub printed_final: (i64, i64),
    /// Registry name of the printed case-2 polynomial.
    pub case2_poly: &'static str,
    /// Registry name of the polynomial actually maximised in case 2.
    pub case2_objective: &'static str,
    pub case2_search_region: &'static str,
    pub derived_region: &'static str,
    pub printed_region: &'static str,
}

const R_TERMS: &[TermSpec] = &[
    TermSpec {
        printed: "16y^2(y - 1)",
        parts: &[(16, &[("y", 2), ("1 - y", 1)])],
    },
    TermSpec {
        printed: "56y^2(x - 1)",
        parts: &[(56, &[("y", 2), ("1 - x", 1)])],
    },
    TermSpec {
        printed: "4x(y^2 - 1)",
        parts: &[(4, &[("x", 1), ("1 - y", 1), ("1 + y", 1)])],
    },
    TermSpec {
        printed: "7x(x^2 - 1)",
        parts: &[(7, &[("x", 1), ("1 - x", 1), ("1 + x", 1)])],
    },
    TermSpec {
        printed: "12x(xy - 1)",
        parts: &[(12, &[("x", 1), ("1 - x y", 1)])],
    },
    TermSpec {
        printed: "-49x",
        parts: &[(49, &[("x", 1)])],
    },
];

const R1_TERMS: &[TermSpec] = &[
    TermSpec {
        printed: "7936y^2(y - 1)",
        parts: &[(7936, &[("y", 2), ("1 - y", 1)])],
    },
    TermSpec {
        printed: "7444x(y^2 - 1)",
        parts: &[(7444, &[("x", 1), ("1 - y", 1), ("1 + y", 1)])],
    },
    TermSpec {
        printed: "1140x(xy - 1)",
        parts: &[(1140, &[("x", 1), ("1 - x y", 1)])],
    },
    TermSpec {
        printed: "1217x(x^2 - 1)",
        parts: &[(1217, &[("x", 1), ("1 - x", 1), ("1 + x", 1)])],
    },
    TermSpec {
        printed: "5672y^2(x - 1)",
        parts: &[(5672, &[("y", 2), ("1 - x", 1)])],
    },
    TermSpec {
        printed: "-3807x",
        parts: &[(3807, &[("x", 1)])],
    },
    TermSpec {
        // 1 - x - y^2 = (1 - x - y) + y(1 - y)
        printed: "-11016x(1 - x - y^2)",
        parts: &[
            (11016, &[("x", 1), ("1 - x - y", 1)]),
            (11016, &[("x", 1), ("y", 1), ("1 - y", 1)]),
        ],
    },
];

impl ClassChain {
    pub fn for_class(class: ClassId) -> Self {
        match class {
            ClassId::R => Self {
                class,
                denominator: 540,
                printed_majorant: "54t + 81t^2 + 12x^2 y + 16y^3 + 60x y^2 + 7x^3",
                printed_weight: "72(2y + x)",
                threshold: (1, 2),
                printed_weight_bound: "72",
                printed_case1: "72 + 54t + 81t^2 + 16y^2(y - 1) + 56y^2(x - 1) + 4x(y^2 - 1) \
                                + 7x(x^2 - 1) + 12x(x y - 1) - 49x",
                terms: R_TERMS,
                printed_case1_value: (207, 540),
                printed_final: (207, 540),
                case2_poly: "h1",
                case2_objective: "g1",
                case2_search_region: "unit-square",
                derived_region: "region-D-r",
                printed_region: "region-D-r",
            },
            ClassId::R1 => Self {
                class,
                denominator: 1_166_400,
                printed_majorant: "9234t + 8991t^2 + 1140x^2 y + 7936y^3 + 13116x y^2 + 1217x^3",
                printed_weight: "2592(8y + x)",
                threshold: (21, 32),
                printed_weight_bound: "648(21 - 17x)",
                printed_case1: "13608 + 9234t + 8991t^2 + 7936y^2(y - 1) + 7444x(y^2 - 1) \
                                + 1140x(x y - 1) + 1217x(x^2 - 1) + 5672y^2(x - 1) - 3807x \
                                - 11016x(1 - x - y^2)",
                terms: R1_TERMS,
                printed_case1_value: (31833, 1_166_400),
                printed_final: (3537, 129_600),
                case2_poly: "h2",
                case2_objective: "h2",
                case2_search_region: "triangle-E",
                derived_region: "region-D-r1",
                printed_region: "region-D-r1-printed",
            },
        }
    }

    pub fn threshold(&self) -> BigRational {
        ratio(self.threshold.0, self.threshold.1)
    }

    pub fn denominator_q(&self) -> BigRational {
        int(self.denominator)
    }

    pub fn printed_case1_poly(&self) -> RationalPoly {
        parse_poly(VarSet::Xyt, self.printed_case1).expect("printed case-1 bound parses")
    }

    /// `1 - x - y^2`: the Carlson bound on `|c4|`.
    pub fn c4_bound() -> RationalPoly {
        parse_poly(VarSet::Xy, "1 - x - y^2").expect("literal")
    }

    /// The weight evaluated on the case boundary `y = threshold (1 - x)`.
    /// The weight has nonnegative coefficients, so this bounds it in case 1.
    pub fn weight_at_threshold(&self, m: &Majorant) -> Result<RationalPoly> {
        let boundary = parse_poly(VarSet::Xy, "1 - x")?.scale(&self.threshold());
        m.weight.substitute(1, &boundary)
    }

    /// The case-1 bound re-derived from the majorant.
    pub fn derived_case1(&self, m: &Majorant) -> Result<RationalPoly> {
        let tail = &self.weight_at_threshold(m)? * &Self::c4_bound();
        Ok(&m.base + &tail.embed(VarSet::Xyt)?)
    }

    /// The case-2 polynomial in `(x, y)` re-derived from the majorant.
    pub fn derived_case2(&self, m: &Majorant) -> Result<RationalPoly> {
        let xy = drop_t(&(&m.base - &m.t_part()))?;
        Ok(&xy + &(&m.weight * &Self::c4_bound()))
    }

    /// `y - threshold (1 - x) >= 0` with integer coefficients.
    pub fn derived_region_constraint(&self) -> Result<RationalPoly> {
        let p = parse_poly(VarSet::Xy, "y")? - parse_poly(VarSet::Xy, "1 - x")?.scale(&self.threshold());
        Ok(p.clear_denominators().1)
    }
}

/// The triangle-inequality bound of `denominator * H_3(1)` after the
/// coefficient lemma has replaced the grouped `c3` factor by 1:
/// `base(x, y, t) + weight(x, y) * |c4|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Majorant {
    pub class: ClassId,
    /// Coefficient of `|c3|` coming from the grouped factor.
    pub prokhorov_coefficient: BigRational,
    pub base: RationalPoly,
    pub weight: RationalPoly,
}

impl Majorant {
    /// The part of `base` depending on `t` only.
    pub fn t_part(&self) -> RationalPoly {
        let terms = self
            .base
            .terms()
            .filter(|(e, _)| e[0] == 0 && e[1] == 0 && e[2] > 0)
            .map(|(e, c)| (c.clone(), e.clone()));
        MultiPoly::from_terms(VarSet::Xyt, terms).expect("same arity")
    }

    /// `(linear, quadratic)` coefficients of the `t` part.
    pub fn t_coefficients(&self) -> (BigRational, BigRational) {
        (self.base.coeff(&[0, 0, 1]), self.base.coeff(&[0, 0, 2]))
    }
}

fn drop_t(p: &RationalPoly) -> Result<RationalPoly> {
    let mut terms = Vec::new();
    for (e, c) in p.terms() {
        if e[2] != 0 {
            return Err(Error::Precondition(format!("{p} still depends on t")));
        }
        terms.push((c.clone(), vec![e[0], e[1]]));
    }
    MultiPoly::from_terms(VarSet::Xy, terms)
}

/// Derive the majorant from the determinant: split off
/// `-k c3 (c3 + mu c1 c2 + nu c1^3)`, bound that factor by 1, and bound
/// every remaining monomial by its absolute value.
pub fn triangle_majorant(class: ClassId) -> Result<Majorant> {
    let printed = PrintedForms::for_class(class);
    let h = hankel3_poly(&derive_coefficients(class));
    let nu = printed.prokhorov.1.clone();
    if nu.is_zero() {
        return Err(Error::Precondition("grouped factor has no c1^3 term".into()));
    }
    // the c1^3 c3 coefficient of -k c3 F is -k nu
    let k = -h.poly.coeff(&[3, 0, 1, 0]) / nu;
    let grouped = (&MultiPoly::var(VarSet::C4, 2) * &printed.prokhorov_factor()).scale(&k);
    let rest = &h.poly + &grouped;

    let xyt = VarSet::Xyt;
    let mut base = MultiPoly::monomial(xyt, k.abs(), vec![0, 0, 1]);
    let mut weight = MultiPoly::zero(VarSet::Xy);
    for (e, c) in rest.terms() {
        if e[0] % 2 == 1 {
            return Err(Error::Precondition(format!(
                "odd power of c1 left after grouping: {}",
                MultiPoly::monomial(VarSet::C4, c.clone(), e.clone())
            )));
        }
        match e[3] {
            0 => base = &base + &MultiPoly::monomial(xyt, c.abs(), vec![e[0] / 2, e[1], e[2]]),
            1 if e[2] == 0 => {
                weight = &weight + &MultiPoly::monomial(VarSet::Xy, c.abs(), vec![e[0] / 2, e[1]]);
            }
            _ => {
                return Err(Error::Precondition(format!(
                    "unexpected c4 monomial {}",
                    MultiPoly::monomial(VarSet::C4, c.clone(), e.clone())
                )))
            }
        }
    }
    Ok(Majorant {
        class,
        prokhorov_coefficient: k,
        base,
        weight,
    })
}

/// Sum of the printed case-1 terms, and the printed bound with them removed.
pub(crate) fn split_case1(chain: &ClassChain) -> Result<(RationalPoly, RationalPoly)> {
    let terms = chain
        .terms
        .iter()
        .try_fold(MultiPoly::zero(VarSet::Xy), |acc, t| Ok::<_, Error>(&acc + &t.poly()))?;
    let rest = &chain.printed_case1_poly() - &terms.embed(VarSet::Xyt)?;
    Ok((terms, rest))
}

/// The bound left after dropping the nonpositive terms: constant plus the
/// `t` quadratic, maximised over `t in [0, 1]`. Requires nonnegative
/// coefficients so that the maximum sits at `t = 1`.
pub(crate) fn case1_value(rest: &RationalPoly, denominator: &BigRational) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for (e, c) in rest.terms() {
        if e[0] != 0 || e[1] != 0 {
            return Err(Error::Precondition(format!(
                "case-1 remainder {rest} depends on x or y"
            )));
        }
        if c.is_negative() {
            return Err(Error::Precondition(format!(
                "case-1 remainder {rest} has a negative coefficient"
            )));
        }
        total += c.clone();
    }
    Ok(total / denominator.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyt(s: &str) -> RationalPoly {
        parse_poly(VarSet::Xyt, s).unwrap()
    }

    #[test]
    fn majorants_match_printed() {
        for class in ClassId::ALL {
            let chain = ClassChain::for_class(class);
            let m = triangle_majorant(class).unwrap();
            assert_eq!(m.base, xyt(chain.printed_majorant), "{class}");
            assert_eq!(m.weight, parse_poly(VarSet::Xy, chain.printed_weight).unwrap());
        }
    }

    #[test]
    fn case1_chain_and_value() {
        for class in ClassId::ALL {
            let chain = ClassChain::for_class(class);
            let m = triangle_majorant(class).unwrap();
            assert_eq!(chain.derived_case1(&m).unwrap(), chain.printed_case1_poly(), "{class}");
            let (_, rest) = split_case1(&chain).unwrap();
            let v = case1_value(&rest, &chain.denominator_q()).unwrap();
            assert_eq!(v, ratio(chain.printed_case1_value.0, chain.printed_case1_value.1));
        }
    }

    #[test]
    fn term_negations_expand_correctly() {
        for class in ClassId::ALL {
            for t in ClassChain::for_class(class).terms {
                let sum = t
                    .negation_parts()
                    .iter()
                    .fold(MultiPoly::zero(VarSet::Xy), |acc, p| &acc + &p.expand());
                assert_eq!(sum, -t.poly(), "{}", t.printed);
            }
        }
    }

    #[test]
    fn derived_regions() {
        let r = ClassChain::for_class(ClassId::R).derived_region_constraint().unwrap();
        assert_eq!(r, parse_poly(VarSet::Xy, "x + 2y - 1").unwrap());
        let r1 = ClassChain::for_class(ClassId::R1).derived_region_constraint().unwrap();
        assert_eq!(r1, parse_poly(VarSet::Xy, "21x + 32y - 21").unwrap());
    }
}
