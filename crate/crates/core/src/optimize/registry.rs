//! Named polynomials used by the bound reproductions.
//!
//! Coefficients are stored exactly as printed; `derived` entries are
//! recomputed from the preceding inequality and kept alongside so that the
//! two can be compared.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::NamedPolynomial;

pub const PRINTED: &str = "printed";
pub const DERIVED: &str = "derived";

const ENTRIES: &[(&str, &str, &str, &str)] = &[
    (
        "h1",
        "7x^3 - 72x^2 + 72x + 12x^2 y - 12x y^2 - 144x y - 128y^3 + 144y",
        PRINTED,
        "class R, case 2: bound on the x,y part after applying the coefficient inequalities",
    ),
    (
        "g1",
        "-128y^3 + (144 - 144x + 12x^2)y - 72x^2 + 72x + 7",
        PRINTED,
        "class R, case 2: majorant of h1 using -12xy^2 <= 0 and 7x^3 <= 7",
    ),
    ("g1-y0", "7 + 72x - 72x^2", PRINTED, "g1 on y = 0"),
    ("g1-y1", "23 - 72x - 60x^2", PRINTED, "g1 on y = 1"),
    ("g1-x1", "7 + 12y - 128y^3", PRINTED, "g1 on x = 1"),
    ("g1-x0", "7 + 144y - 128y^3", PRINTED, "g1 on x = 0"),
    (
        "g1-minus-h1",
        "7(1 - x^3) + 12x y^2",
        DERIVED,
        "g1 - h1; nonnegative on the unit square",
    ),
    (
        "critical-numerator",
        "6x - 3",
        DERIVED,
        "numerator of y = (6x-3)/(x-6) from the first critical equation of g1",
    ),
    (
        "critical-denominator",
        "6 - x",
        DERIVED,
        "negated denominator of y = (6x-3)/(x-6)",
    ),
    (
        "quartic",
        "144 + 480x(1 - 2x) + 6x(1 - 4x^2) + 90x + x^4",
        PRINTED,
        "critical system of g1 after eliminating y, for x in [0,1/2]",
    ),
    (
        "h2",
        "-12800y^3 + 10524x y^2 + (1140x^2 - 20736x + 20736)y + 1217x^3 - 2592x^2 + 13608x",
        PRINTED,
        "class R1, case 2: bound on the x,y part",
    ),
    (
        "h2-derived",
        "2592(8y + x)(1 - x - y^2) + 1140x^2 y + 7936y^3 + 13116x y^2 + 1217x^3",
        DERIVED,
        "class R1, case 2: re-expansion of the inequality preceding h2",
    ),
    ("h2-excess", "11016x", DERIVED, "h2 minus h2-derived"),
    (
        "dh2dx",
        "3(3508y^2 - 6912y + 760x y + 1217x^2 - 1728x + 4536)",
        PRINTED,
        "partial derivative of h2 in x",
    ),
    (
        "dh2dx-decomposition",
        "3(760(1 - x)(1 - y) + 3076(1 - y)^2 + 484(1 - x)^2 + 216 + 733x^2 + 432y^2)",
        PRINTED,
        "sum-of-nonnegatives form of the partial derivative of h2 in x",
    ),
    ("g2-x0", "1217x^3 + 11016x + 2592x(1 - x)", PRINTED, "h2 on y = 0"),
    ("g2-x0-majorant", "1217x^3 + 11016x", PRINTED, "majorant of h2 on y = 0"),
    (
        "g2-0y",
        "20736y - 12800y^2",
        PRINTED,
        "stated restriction of h2 to x = 0",
    ),
    ("g2-0y-derived", "20736y - 12800y^3", DERIVED, "h2 on x = 0"),
    (
        "g2-hyp",
        "7936 + 21060x - 40164x^2 + 23401x^3",
        PRINTED,
        "h2 on the hypotenuse y = 1 - x",
    ),
];

/// A name-indexed set of polynomials in `{x, y}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Registry {
    entries: BTreeMap<String, NamedPolynomial>,
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn standard() -> Self {
        let mut r = Self::empty();
        for (name, src, provenance, note) in ENTRIES {
            let p = NamedPolynomial::parse(name, src, &format!("{provenance}: {note}"))
                .expect("registered polynomial parses");
            r.insert(p);
        }
        r
    }

    /// Adds or replaces an entry.
    pub fn insert(&mut self, p: NamedPolynomial) {
        self.entries.insert(p.name.clone(), p);
    }

    pub fn get(&self, name: &str) -> Result<&NamedPolynomial> {
        self.entries.get(name).ok_or_else(|| Error::Unknown {
            kind: "polynomial",
            name: name.to_string(),
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &NamedPolynomial> {
        self.entries.values()
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::standard()
    }
}
