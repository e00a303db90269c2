use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_poly, Box2, Interval, VarSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::RationalPoly;

/// Sign requirement on a constraint polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `g <= 0`
    Le0,
    /// `g >= 0`
    Ge0,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub poly: RationalPoly,
    pub relation: Relation,
    /// Human-readable form, e.g. `x + 2y >= 1`.
    pub label: String,
}

impl Constraint {
    pub fn parse(src: &str, relation: Relation, label: &str) -> Result<Self> {
        Ok(Self {
            poly: parse_poly(VarSet::Xy, src)?,
            relation,
            label: label.to_string(),
        })
    }

    /// Range of values the constraint polynomial takes on feasible points.
    fn feasible_range<F: Scalar>(&self) -> Interval<F> {
        match self.relation {
            Relation::Ge0 => Interval::new(F::zero(), F::infinity()),
            Relation::Le0 => Interval::new(F::neg_infinity(), F::zero()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// Some constraint fails on the whole box.
    Infeasible,
    /// Every constraint holds on the whole box.
    Inside,
    /// Not decided at this resolution.
    Straddles,
}

/// A planar region: a bounding box cut down by polynomial sign constraints.
///
/// Strict inequalities are represented by their closures; suprema of
/// continuous functions agree on a set and its closure.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionSpec<F> {
    pub name: String,
    pub description: String,
    pub bounds: Box2<F>,
    pub constraints: Vec<Constraint>,
    pub closure_note: Option<String>,
}

pub const CLOSURE_NOTE: &str =
    "strict constraints replaced by their closures; the supremum of a continuous function is unchanged";

impl<F: Scalar> RegionSpec<F> {
    pub fn boxed(name: &str, description: &str, bounds: Box2<F>) -> Self {
        Self {
            name: name.to_string(),
            description: description.to_string(),
            bounds,
            constraints: Vec::new(),
            closure_note: None,
        }
    }

    pub fn with_constraint(mut self, c: Constraint) -> Self {
        self.constraints.push(c);
        self
    }

    pub fn with_closure_note(mut self) -> Self {
        self.closure_note = Some(CLOSURE_NOTE.to_string());
        self
    }

    pub fn feasibility(&self, b: &Box2<F>) -> Feasibility {
        let mut inside = true;
        for c in &self.constraints {
            let enc = match c.poly.eval_interval_tight(&b.vars()) {
                Ok(e) => e,
                Err(_) => return Feasibility::Straddles,
            };
            let range = c.feasible_range::<F>();
            if enc.intersect(&range).is_none() {
                return Feasibility::Infeasible;
            }
            if !range.contains_interval(&enc) {
                inside = false;
            }
        }
        if inside {
            Feasibility::Inside
        } else {
            Feasibility::Straddles
        }
    }

    /// A point is certified feasible when every constraint's enclosure at
    /// the point lies in its feasible range.
    pub fn contains_point(&self, p: (F, F)) -> bool {
        if !self.bounds.contains(p) {
            return false;
        }
        let b = Box2::new(Interval::point(p.0), Interval::point(p.1));
        self.feasibility(&b) == Feasibility::Inside
    }

    /// Narrow an enclosure of `poly` using the constraints: if `poly` is
    /// (plus or minus) a constraint polynomial its values on feasible points
    /// have a known sign.
    pub fn clamp(&self, poly: &RationalPoly, enc: Interval<F>) -> Interval<F> {
        let mut out = enc;
        for c in &self.constraints {
            let range = if &c.poly == poly {
                c.feasible_range::<F>()
            } else if (&c.poly + poly).is_zero() {
                -c.feasible_range::<F>()
            } else {
                continue;
            };
            if let Some(n) = out.intersect(&range) {
                out = n;
            }
        }
        out
    }

    /// Exact membership test for a rational point (used by tests and audits).
    pub fn contains_rational(&self, x: &crate::BigRational, y: &crate::BigRational) -> bool {
        use num_traits::{Signed, Zero};
        let lo_hi = |i: &Interval<F>| {
            (
                i.lo().to_rational().expect("finite bound"),
                i.hi().to_rational().expect("finite bound"),
            )
        };
        let (x0, x1) = lo_hi(&self.bounds.x);
        let (y0, y1) = lo_hi(&self.bounds.y);
        if x < &x0 || x > &x1 || y < &y0 || y > &y1 {
            return false;
        }
        self.constraints.iter().all(|c| {
            let v = c.poly.eval(&[x.clone(), y.clone()]).expect("xy arity");
            match c.relation {
                Relation::Ge0 => !v.is_negative(),
                Relation::Le0 => v.is_negative() || v.is_zero(),
            }
        })
    }
}

impl<F: Scalar> fmt::Display for RegionSpec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name, self.description)
    }
}

fn unit<F: Scalar>() -> F {
    F::one()
}

fn half<F: Scalar>() -> F {
    F::one() / (F::one() + F::one())
}

/// Names accepted by [`standard_region`].
pub const REGION_NAMES: &[&str] = &[
    "unit-square",
    "triangle-E",
    "region-D-r",
    "region-D-r1",
    "region-D-r1-printed",
    "unit-interval",
    "lower-half-interval",
    "upper-half-interval",
];

/// Regions used by the bound reproductions.
pub fn standard_region<F: Scalar>(name: &str) -> Result<RegionSpec<F>> {
    let z = F::zero();
    let one = unit::<F>();
    let square = Box2::from_bounds((z, one), (z, one));
    let hyp = || Constraint::parse("x + y - 1", Relation::Le0, "x + y <= 1").expect("literal");
    let region = match name {
        "unit-square" => RegionSpec::boxed(name, "[0,1] x [0,1]", square),
        "triangle-E" => RegionSpec::boxed(name, "x >= 0, y >= 0, x + y <= 1", square).with_constraint(hyp()),
        "region-D-r" => RegionSpec::boxed(name, "x + 2y > 1, x + y <= 1, x >= 0", square)
            .with_constraint(Constraint::parse("x + 2y - 1", Relation::Ge0, "x + 2y >= 1")?)
            .with_constraint(hyp())
            .with_closure_note(),
        "region-D-r1" => RegionSpec::boxed(name, "x + (32/21) y > 1, x + y <= 1, x >= 0", square)
            .with_constraint(Constraint::parse("21x + 32y - 21", Relation::Ge0, "21x + 32y >= 21")?)
            .with_constraint(hyp())
            .with_closure_note(),
        "region-D-r1-printed" => RegionSpec::boxed(name, "x + (21/32) y > 1, x + y <= 1, x >= 0", square)
            .with_constraint(Constraint::parse("32x + 21y - 32", Relation::Ge0, "32x + 21y >= 32")?)
            .with_constraint(hyp())
            .with_closure_note(),
        "unit-interval" => RegionSpec::boxed(name, "x in [0,1], y = 0", Box2::from_bounds((z, one), (z, z))),
        "lower-half-interval" => {
            RegionSpec::boxed(name, "x in [0,1/2], y = 0", Box2::from_bounds((z, half::<F>()), (z, z)))
        }
        "upper-half-interval" => RegionSpec::boxed(
            name,
            "x in [1/2,1], y = 0",
            Box2::from_bounds((half::<F>(), one), (z, z)),
        ),
        _ => {
            return Err(Error::Unknown {
                kind: "region",
                name: name.to_string(),
            })
        }
    };
    Ok(region)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    #[test]
    fn triangle_feasibility() {
        let e = standard_region::<f64>("triangle-E").unwrap();
        assert_eq!(
            e.feasibility(&Box2::from_bounds((0.0, 0.25), (0.0, 0.25))),
            Feasibility::Inside
        );
        assert_eq!(
            e.feasibility(&Box2::from_bounds((0.75, 1.0), (0.75, 1.0))),
            Feasibility::Infeasible
        );
        assert_eq!(
            e.feasibility(&Box2::from_bounds((0.25, 0.75), (0.25, 0.75))),
            Feasibility::Straddles
        );
        assert!(e.contains_point((0.5, 0.5)));
        assert!(!e.contains_point((0.5, 0.5000001)));
    }

    #[test]
    fn clamp_uses_constraint_sign() {
        let e = standard_region::<f64>("triangle-E").unwrap();
        let slack = parse_poly(VarSet::Xy, "1 - x - y").unwrap();
        let enc = Interval::new(-0.5, 0.75);
        assert_eq!(e.clamp(&slack, enc), Interval::new(0.0, 0.75));
        let other = parse_poly(VarSet::Xy, "1 - x").unwrap();
        assert_eq!(e.clamp(&other, enc), enc);
    }

    #[test]
    fn rational_membership_of_derived_region() {
        let d = standard_region::<f64>("region-D-r1").unwrap();
        // on the line y = (21/32)(1 - x)
        assert!(d.contains_rational(&ratio(0, 1), &ratio(21, 32)));
        assert!(!d.contains_rational(&ratio(0, 1), &ratio(20, 32)));
        let printed = standard_region::<f64>("region-D-r1-printed").unwrap();
        assert!(!printed.contains_rational(&ratio(0, 1), &ratio(21, 32)));
    }

    #[test]
    fn unknown_region_name() {
        assert!(matches!(standard_region::<f64>("disk"), Err(Error::Unknown { .. })));
        for n in REGION_NAMES {
            standard_region::<f32>(n).unwrap();
        }
    }
}
