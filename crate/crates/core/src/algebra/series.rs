//! Truncated power series in `z` with polynomial coefficients.

use std::fmt;

use super::poly::{Coefficient, MultiPoly, VarSet};
use crate::error::{Error, Result};

/// Series order used for the coefficient derivations: `f` is carried
/// through `z^5`, so `f'` and the Herglotz series through `z^4`.
pub const DEFAULT_FUNCTION_ORDER: usize = 5;

/// `sum_{k=0}^{order} coeffs[k] z^k`; higher coefficients are unknown.
#[derive(Clone, PartialEq)]
pub struct TruncSeries<T> {
    vars: VarSet,
    coeffs: Vec<MultiPoly<T>>,
}

impl<T: Coefficient> TruncSeries<T> {
    pub fn new(vars: VarSet, coeffs: Vec<MultiPoly<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("a series needs at least one coefficient".into()));
        }
        if let Some(bad) = coeffs.iter().find(|c| c.vars() != vars) {
            return Err(Error::VarSetMismatch {
                left: vars,
                right: bad.vars(),
            });
        }
        Ok(Self { vars, coeffs })
    }

    /// Series with constant coefficients `c[k]`.
    pub fn from_constants(vars: VarSet, c: &[T]) -> Result<Self> {
        Self::new(vars, c.iter().map(|v| MultiPoly::constant(vars, v.clone())).collect())
    }

    pub fn zero(vars: VarSet, order: usize) -> Self {
        Self {
            vars,
            coeffs: vec![MultiPoly::zero(vars); order + 1],
        }
    }

    pub fn one(vars: VarSet, order: usize) -> Self {
        let mut s = Self::zero(vars, order);
        s.coeffs[0] = MultiPoly::one(vars);
        s
    }

    /// `c1 z + c2 z^2 + ... + c_order z^order` over `{c1..c_order}`.
    pub fn symbolic_schwarz(order: usize) -> Self {
        let vars = VarSet::Schwarz(order);
        let mut s = Self::zero(vars, order);
        for k in 1..=order {
            s.coeffs[k] = MultiPoly::var(vars, k - 1);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn coeff(&self, k: usize) -> Option<&MultiPoly<T>> {
        self.coeffs.get(k)
    }

    pub fn coeffs(&self) -> &[MultiPoly<T>] {
        &self.coeffs
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VarSetMismatch {
                left: self.vars,
                right: other.vars,
            });
        }
        if self.order() != other.order() {
            return Err(Error::InvalidInput(format!(
                "series orders differ: {} vs {}",
                self.order(),
                other.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self {
            vars: self.vars,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self {
            vars: self.vars,
            coeffs,
        })
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.order();
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k).fold(MultiPoly::zero(self.vars), |acc, i| {
                    &acc + &(&self.coeffs[i] * &other.coeffs[k - i])
                })
            })
            .collect();
        Ok(Self {
            vars: self.vars,
            coeffs,
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        Self {
            vars: self.vars,
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// `(1 + w) / (1 - w)` for `w` without constant term, computed as
    /// `1 + 2 (w + w^2 + ... + w^order)`.
    pub fn herglotz_expand(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InvalidInput(
                "herglotz expansion needs a series with zero constant term".into(),
            ));
        }
        let n = self.order();
        if n == 0 {
            return Ok(Self::one(self.vars, 0));
        }
        let mut geometric = Self::zero(self.vars, n);
        let mut power = self.clone();
        for _ in 1..=n {
            geometric = geometric.add(&power)?;
            power = power.mul(self)?;
        }
        Self::one(self.vars, n).add(&geometric.scale(&(T::one() + T::one())))
    }
}

impl<T: Coefficient> fmt::Debug for TruncSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c}) z^{k}"))
            .collect();
        write!(f, "{} + O(z^{})", parts.join(" + "), self.order() + 1)
    }
}
