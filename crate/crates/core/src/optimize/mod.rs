//! Certified maximisation and positivity checks for bivariate polynomials.

pub mod engine;
pub mod product;
pub mod region;
pub mod registry;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_poly, Box2, Interval, MultiPoly, VarSet};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, INFLATION_ULPS};
use crate::RationalPoly;

pub use engine::{BbOptions, Negated, Objective, Termination};
pub use product::ProductForm;
pub use region::{standard_region, Constraint, Feasibility, RegionSpec, Relation, REGION_NAMES};
pub use registry::Registry;

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// How box enclosures are computed; recorded in every certificate.
pub const ENCLOSURE_SCHEME: &str =
    "monomial-sum with outward rounding, intersected with the monomial-sum of the box-centred re-expansion";

/// A registered polynomial in `{x, y}` with its exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedPolynomial {
    pub name: String,
    pub poly: RationalPoly,
    /// Where the coefficients come from.
    pub provenance: String,
}

impl NamedPolynomial {
    pub fn new(name: &str, poly: RationalPoly, provenance: &str) -> Self {
        Self {
            name: name.to_string(),
            poly,
            provenance: provenance.to_string(),
        }
    }

    pub fn parse(name: &str, src: &str, provenance: &str) -> Result<Self> {
        Ok(Self::new(name, parse_poly(VarSet::Xy, src)?, provenance))
    }

    pub fn negated(&self) -> Self {
        Self::new(&format!("-({})", self.name), -&self.poly, &self.provenance)
    }
}

impl fmt::Display for NamedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.name, self.poly)
    }
}

impl<F: Scalar> Objective<F> for NamedPolynomial {
    fn enclose(&self, b: &Box2<F>, region: &RegionSpec<F>) -> Interval<F> {
        let enc = self
            .poly
            .eval_interval_tight(&b.vars())
            .expect("registered polynomials are in {x,y}");
        region.clamp(&self.poly, enc)
    }
}

/// Outcome of a certified maximisation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxCertificate<F> {
    pub polynomial: String,
    pub expression: String,
    pub region: String,
    pub region_description: String,
    pub tol: F,
    /// Sound upper bound on the maximum over the region.
    pub upper: F,
    /// Certified lower bound of the value at `witness`.
    pub lower: F,
    pub witness: Option<(F, F)>,
    pub gap: F,
    pub boxes: usize,
    pub budget: usize,
    pub complete: bool,
    pub inflation_ulps: u32,
    pub scheme: String,
    pub closure_note: Option<String>,
}

impl<F: Scalar> MaxCertificate<F> {
    fn from_outcome(
        name: &str,
        expression: String,
        region: &RegionSpec<F>,
        opts: &BbOptions<F>,
        out: engine::BbOutcome<F>,
    ) -> Self {
        Self {
            polynomial: name.to_string(),
            expression,
            region: region.name.clone(),
            region_description: region.description.clone(),
            tol: opts.tol,
            upper: out.upper,
            lower: out.lower,
            witness: out.witness,
            gap: out.upper - out.lower,
            boxes: out.boxes,
            budget: opts.budget,
            complete: out.termination == Termination::Converged,
            inflation_ulps: INFLATION_ULPS,
            scheme: ENCLOSURE_SCHEME.to_string(),
            closure_note: region.closure_note.clone(),
        }
    }
}

pub fn bb_maximize<F: Scalar>(
    p: &NamedPolynomial,
    region: &RegionSpec<F>,
    tol: F,
    budget: usize,
) -> Result<MaxCertificate<F>> {
    bb_maximize_with(p, region, &BbOptions::new(tol, budget))
}

pub fn bb_maximize_with<F: Scalar>(
    p: &NamedPolynomial,
    region: &RegionSpec<F>,
    opts: &BbOptions<F>,
) -> Result<MaxCertificate<F>> {
    check_xy(&p.poly)?;
    let out = engine::maximize(p, region, opts, |_, _| false)?;
    Ok(MaxCertificate::from_outcome(
        &p.name,
        p.poly.to_string(),
        region,
        opts,
        out,
    ))
}

fn check_xy(p: &RationalPoly) -> Result<()> {
    if p.vars() == VarSet::Xy {
        Ok(())
    } else {
        Err(Error::VarSetMismatch {
            left: p.vars(),
            right: VarSet::Xy,
        })
    }
}

/// Whether the sign to certify is `> 0` or the relaxed `>= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strictness {
    Positive,
    NonNegative,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityCertificate<F> {
    pub polynomial: String,
    pub region: String,
    pub strictness: Strictness,
    pub verified: bool,
    /// Certified lower bound of the polynomial on the region.
    pub margin: F,
    /// A feasible point where the sign was refuted, if one was found.
    pub counterexample: Option<(F, F)>,
    pub boxes: usize,
    pub budget: usize,
    pub inflation_ulps: u32,
}

/// Prove `p > 0` (or `p >= 0`) on `region`. Never reports a false positive:
/// `verified` is true only when the certified lower bound has the sign.
pub fn min_positive_check<F: Scalar>(
    p: &NamedPolynomial,
    region: &RegionSpec<F>,
    budget: usize,
) -> Result<PositivityCertificate<F>> {
    check_positive(
        p,
        &p.name,
        region,
        Strictness::Positive,
        &BbOptions::new(F::from_f64_lossy(DEFAULT_TOL), budget),
    )
}

/// [`min_positive_check`] with explicit strictness and tolerance.
pub fn check_positive<F: Scalar, O: Objective<F>>(
    obj: &O,
    name: &str,
    region: &RegionSpec<F>,
    strictness: Strictness,
    opts: &BbOptions<F>,
) -> Result<PositivityCertificate<F>> {
    // maximise -p; its upper bound u gives min p >= -u
    let neg = Negated(obj);
    let refuted = |neg_lower: F| match strictness {
        Strictness::Positive => neg_lower >= F::zero(),
        Strictness::NonNegative => neg_lower > F::zero(),
    };
    let out = engine::maximize(&neg, region, opts, |_, lower| refuted(lower))?;
    let margin = -out.upper;
    let verified = match strictness {
        Strictness::Positive => margin > F::zero(),
        Strictness::NonNegative => margin >= F::zero(),
    };
    Ok(PositivityCertificate {
        polynomial: name.to_string(),
        region: region.name.clone(),
        strictness,
        verified,
        margin,
        counterexample: if refuted(out.lower) { out.witness } else { None },
        boxes: out.boxes,
        budget: opts.budget,
        inflation_ulps: INFLATION_ULPS,
    })
}

/// A side of the unit square or the hypotenuse of the triangle `E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Edge {
    #[serde(rename = "y=0")]
    Y0,
    #[serde(rename = "y=1")]
    Y1,
    #[serde(rename = "x=0")]
    X0,
    #[serde(rename = "x=1")]
    X1,
    #[serde(rename = "y=1-x")]
    Hypotenuse,
}

impl Edge {
    pub const SQUARE: [Edge; 4] = [Edge::Y0, Edge::Y1, Edge::X1, Edge::X0];

    pub fn label(&self) -> &'static str {
        match self {
            Edge::Y0 => "y=0",
            Edge::Y1 => "y=1",
            Edge::X0 => "x=0",
            Edge::X1 => "x=1",
            Edge::Hypotenuse => "y=1-x",
        }
    }

    /// The polynomial restricted to the edge, as a polynomial in its free
    /// variable (`x` for horizontal edges and the hypotenuse, `y` otherwise).
    pub fn restrict(&self, p: &RationalPoly) -> Result<RationalPoly> {
        check_xy(p)?;
        let v = VarSet::Xy;
        let c = |s: &str| parse_poly(v, s).expect("literal");
        match self {
            Edge::Y0 => p.substitute(1, &MultiPoly::zero(v)),
            Edge::Y1 => p.substitute(1, &c("1")),
            Edge::X0 => p.substitute(0, &MultiPoly::zero(v)),
            Edge::X1 => p.substitute(0, &c("1")),
            Edge::Hypotenuse => p.substitute(1, &c("1 - x")),
        }
    }

    fn parameter_box<F: Scalar>(&self) -> Box2<F> {
        let (z, o) = (F::zero(), F::one());
        match self {
            Edge::Y0 | Edge::Y1 | Edge::Hypotenuse => Box2::from_bounds((z, o), (z, z)),
            Edge::X0 | Edge::X1 => Box2::from_bounds((z, z), (z, o)),
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeMaximum<F> {
    pub edge: Edge,
    /// Restriction to the edge, in its free variable.
    pub restricted: String,
    pub certificate: MaxCertificate<F>,
}

/// One-dimensional branch-and-bound of `p` along an edge. The witness is
/// reported in the edge's own parameter (`x` or `y`, as a point of the
/// parameter box).
pub fn edge_maximize<F: Scalar>(p: &NamedPolynomial, edge: Edge, tol: F, budget: usize) -> Result<EdgeMaximum<F>> {
    let restricted = edge.restrict(&p.poly)?;
    let named = NamedPolynomial::new(&format!("{}|{}", p.name, edge), restricted.clone(), &p.provenance);
    let region = RegionSpec::boxed(&format!("edge:{edge}"), edge.label(), edge.parameter_box());
    let certificate = bb_maximize(&named, &region, tol, budget)?;
    Ok(EdgeMaximum {
        edge,
        restricted: restricted.to_string(),
        certificate,
    })
}
