use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{ratio, Interval};
use crate::classes::ClassId;
use crate::error::{Error, Result};
use crate::optimize::{
    bb_maximize_with, check_positive, standard_region, MaxCertificate, NamedPolynomial, Registry, Strictness,
};
use crate::report::{ClosedForm, ExactValue};
use crate::scalar::Scalar;
use crate::BigRational;

use super::audit::audit;
use super::chain::{case1_value, split_case1, triangle_majorant, ClassChain};
use super::{AuditItem, PipelineOptions};

/// One case of the split on `|c2|`: the bound is
/// `(constant + t_linear t + t_quadratic t^2 + xy_part) / denominator`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseProfile {
    pub class: ClassId,
    pub case_index: u8,
    pub condition: String,
    pub denominator: ExactValue,
    pub constant: ExactValue,
    pub t_linear: ExactValue,
    pub t_quadratic: ExactValue,
    /// What remains in `(x, y)`: dropped as nonpositive in case 1, maximised
    /// in case 2.
    pub xy_part: String,
    /// Closed-form bound (case 1 only).
    pub bound: Option<ExactValue>,
}

impl CaseProfile {
    /// `(constant + t_linear t + t_quadratic t^2) / denominator`.
    pub fn value_at(&self, t: &BigRational) -> Result<BigRational> {
        let c = self.constant.parse()?;
        let l = self.t_linear.parse()?;
        let q = self.t_quadratic.parse()?;
        Ok((c + l * t.clone() + q * t.clone() * t.clone()) / self.denominator.parse()?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case2Report {
    pub profile: CaseProfile,
    pub polynomial: String,
    pub region: String,
    pub certificate: MaxCertificate<f64>,
    /// Sound upper bound on `|H_3(1)|` in this case.
    pub bound: f64,
    pub printed_value: ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinalBound {
    /// Present when the exact case-1 value dominates.
    pub exact: Option<ExactValue>,
    pub upper: f64,
    pub dominant_case: u8,
}

/// The bound obtained from the re-derived case-2 polynomial over the region
/// implied by the case assumption.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedReport {
    pub polynomial: String,
    pub region: String,
    pub certificate: MaxCertificate<f64>,
    pub case2_bound: f64,
    pub final_bound: FinalBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    /// Earlier published bound on `|H_3(1)|`.
    pub prior_bound: Option<ClosedForm>,
    /// Sharp bound on `|H_2(2)|`.
    pub h2_sharp: Option<ExactValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub class: ClassId,
    pub tol: f64,
    pub budget: usize,
    pub case1: CaseProfile,
    pub case2: Case2Report,
    /// The final bound as a string: `p/q` over the printed denominator when
    /// exact, a decimal upper bound otherwise.
    #[serde(rename = "final")]
    pub final_value: String,
    pub final_bound: FinalBound,
    pub printed_final: ExactValue,
    pub derived: DerivedReport,
    pub comparison: Comparison,
    pub audits: Vec<AuditItem>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.audits.iter().all(AuditItem::passed)
            && self
                .final_bound
                .exact
                .as_ref()
                .is_some_and(|e| e.exact == self.printed_final.exact)
    }
}

fn profiles(class: ClassId) -> Result<(CaseProfile, CaseProfile)> {
    let chain = ClassChain::for_class(class);
    let m = triangle_majorant(class)?;
    let (l, q) = m.t_coefficients();
    let (_, rest) = split_case1(&chain)?;
    let den = chain.denominator_q();
    let thr = chain.threshold();
    let case1 = CaseProfile {
        class,
        case_index: 1,
        condition: format!("y <= {thr}(1 - x)"),
        denominator: ExactValue::new(&den),
        constant: ExactValue::new(&rest.constant_term()),
        t_linear: ExactValue::new(&l),
        t_quadratic: ExactValue::new(&q),
        xy_part: split_case1(&chain)?.0.to_string(),
        bound: Some(ExactValue::over(&case1_value(&rest, &den)?, chain.denominator)),
    };
    let case2 = CaseProfile {
        class,
        case_index: 2,
        condition: format!("{thr}(1 - x) < y <= 1 - x"),
        denominator: ExactValue::new(&den),
        constant: ExactValue::new(&BigRational::zero()),
        t_linear: ExactValue::new(&l),
        t_quadratic: ExactValue::new(&q),
        xy_part: chain.case2_poly.to_string(),
        bound: None,
    };
    Ok((case1, case2))
}

pub fn case_profiles(class: ClassId) -> Result<(CaseProfile, CaseProfile)> {
    profiles(class)
}

/// Exact case-1 bound, after certifying that every dropped term is
/// nonpositive on `E`.
pub fn case1_bound(class: ClassId) -> Result<BigRational> {
    case1_bound_with(class, &PipelineOptions::default())
}

pub fn case1_bound_with(class: ClassId, opts: &PipelineOptions) -> Result<BigRational> {
    let chain = ClassChain::for_class(class);
    let m = triangle_majorant(class)?;
    if chain.derived_case1(&m)? != chain.printed_case1_poly() {
        return Err(Error::AuditFailed(format!(
            "case-1 regrouping for {class} does not match its derivation"
        )));
    }
    let region = standard_region::<f64>("triangle-E")?;
    for t in chain.terms {
        for part in t.negation_parts() {
            let c = check_positive(&part, &part.name, &region, Strictness::NonNegative, &opts.bb())?;
            if !c.verified && c.counterexample.is_none() && c.boxes >= c.budget {
                return Err(Error::BudgetExhausted {
                    budget: c.budget,
                    upper: f64::INFINITY,
                });
            }
            if !c.verified {
                return Err(Error::AuditFailed(format!(
                    "case-1 term {} is not certified nonpositive on E (factor {part}, lower bound {})",
                    t.printed, c.margin
                )));
            }
        }
    }
    let (_, rest) = split_case1(&chain)?;
    case1_value(&rest, &chain.denominator_q())
}

/// `(t_linear + t_quadratic + max) / denominator`, rounded up.
pub fn assemble_case2(class: ClassId, max: f64) -> Result<f64> {
    let chain = ClassChain::for_class(class);
    let (l, q) = triangle_majorant(class)?.t_coefficients();
    let num = Interval::<f64>::from_rational(&(l + q)) + Interval::point(max);
    let inv = Interval::<f64>::from_rational(&(BigRational::from_integer(1.into()) / chain.denominator_q()));
    Ok((num * inv).hi())
}

fn printed_case2_value(class: ClassId) -> ClosedForm {
    match class {
        ClassId::R => ClosedForm::new("(135 + 7 + 24*sqrt(6))/540", (142.0 + 24.0 * 6f64.sqrt()) / 540.0),
        ClassId::R1 => ClosedForm::new("15229/583200", 15229.0 / 583200.0),
    }
}

/// Certified case-2 bound using the printed polynomial.
pub fn case2_bound(class: ClassId, tol: f64) -> Result<Case2Report> {
    case2_bound_with(class, &Registry::standard(), &PipelineOptions::with_tol(tol))
}

pub fn case2_bound_with(class: ClassId, reg: &Registry, opts: &PipelineOptions) -> Result<Case2Report> {
    let chain = ClassChain::for_class(class);
    let p = reg.get(chain.case2_objective)?;
    let region = standard_region::<f64>(chain.case2_search_region)?;
    let certificate = bb_maximize_with(p, &region, &opts.bb())?;
    let bound = assemble_case2(class, certificate.upper)?;
    if !certificate.complete {
        return Err(Error::BudgetExhausted {
            budget: opts.budget,
            upper: bound,
        });
    }
    Ok(Case2Report {
        profile: profiles(class)?.1,
        polynomial: format!("{} = {}", p.name, p.poly),
        region: region.to_string(),
        certificate,
        bound,
        printed_value: printed_case2_value(class),
    })
}

fn final_bound(case1: &BigRational, case2: f64, den: i64) -> FinalBound {
    let case1_dominates = case2.to_rational().is_some_and(|c2| &c2 <= case1);
    if case1_dominates {
        FinalBound {
            exact: Some(ExactValue::over(case1, den)),
            upper: Interval::<f64>::from_rational(case1).hi(),
            dominant_case: 1,
        }
    } else {
        FinalBound {
            exact: None,
            upper: case2,
            dominant_case: 2,
        }
    }
}

pub fn reproduce_theorem(class: ClassId, tol: f64) -> Result<TheoremReport> {
    reproduce_theorem_with(class, &Registry::standard(), &PipelineOptions::with_tol(tol))
}

pub fn reproduce_theorem_with(class: ClassId, reg: &Registry, opts: &PipelineOptions) -> Result<TheoremReport> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let chain = ClassChain::for_class(class);
    let case1 = case1_bound_with(class, opts)?;
    let case2 = case2_bound_with(class, reg, opts)?;

    let m = triangle_majorant(class)?;
    let derived_poly = NamedPolynomial::new(
        &format!("{}-derived", chain.case2_poly),
        chain.derived_case2(&m)?,
        "derived",
    );
    let derived_region = standard_region::<f64>(chain.derived_region)?;
    let derived_cert = bb_maximize_with(&derived_poly, &derived_region, &opts.bb())?;
    let derived_case2 = assemble_case2(class, derived_cert.upper)?;
    let derived = DerivedReport {
        polynomial: format!("{} = {}", derived_poly.name, derived_poly.poly),
        region: derived_region.to_string(),
        certificate: derived_cert,
        case2_bound: derived_case2,
        final_bound: final_bound(&case1, derived_case2, chain.printed_final.1),
    };

    let comparison = match class {
        ClassId::R => Comparison {
            prior_bound: Some(ClosedForm::new(
                "(877/3 + 25*sqrt(5))/540",
                (877.0 / 3.0 + 25.0 * 5f64.sqrt()) / 540.0,
            )),
            h2_sharp: Some(ExactValue::new(&ratio(4, 9))),
        },
        ClassId::R1 => Comparison {
            prior_bound: None,
            h2_sharp: None,
        },
    };

    let (case1_profile, _) = profiles(class)?;
    let final_bound = final_bound(&case1, case2.bound, chain.printed_final.1);
    Ok(TheoremReport {
        class,
        tol: opts.tol,
        budget: opts.budget,
        case1: case1_profile,
        final_value: match &final_bound.exact {
            Some(e) => e.display().to_string(),
            None => final_bound.upper.to_string(),
        },
        final_bound,
        case2,
        printed_final: ExactValue::over(
            &ratio(chain.printed_final.0, chain.printed_final.1),
            chain.printed_final.1,
        ),
        derived,
        comparison,
        audits: audit(class, reg, opts),
    })
}
