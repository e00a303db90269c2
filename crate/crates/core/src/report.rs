//! Versioned JSON records and exact-value serialisation.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::BigRational;

/// Bumped on any breaking change to a payload's fields.
pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// An exact rational carried as `"p/q"` in lowest terms with a
/// convenience float, and optionally over a preferred denominator
/// (e.g. `207/540` for `23/60`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactValue {
    pub exact: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    pub approx: f64,
}

impl ExactValue {
    pub fn new(q: &BigRational) -> Self {
        Self {
            exact: format!("{}/{}", q.numer(), q.denom()),
            form: None,
            approx: q.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Also record `q` over `den`, when `den` is a multiple of its reduced
    /// denominator.
    pub fn over(q: &BigRational, den: i64) -> Self {
        let den = BigInt::from(den);
        let mut v = Self::new(q);
        if !den.is_zero() && (&den % q.denom()).is_zero() {
            let num = q.numer() * (&den / q.denom());
            v.form = Some(format!("{num}/{den}"));
        }
        v
    }

    /// The preferred form if present, else the reduced one.
    pub fn display(&self) -> &str {
        self.form.as_deref().unwrap_or(&self.exact)
    }

    pub fn parse(&self) -> Result<BigRational> {
        let (n, d) = self
            .exact
            .split_once('/')
            .ok_or_else(|| Error::InvalidInput(format!("not a p/q string: {}", self.exact)))?;
        let n = n
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad numerator in {}", self.exact)))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad denominator in {}", self.exact)))?;
        if d.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {}", self.exact)));
        }
        Ok(BigRational::new(n, d))
    }
}

impl From<&BigRational> for ExactValue {
    fn from(q: &BigRational) -> Self {
        Self::new(q)
    }
}

/// A closed-form irrational constant: its defining expression and a float.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub expression: String,
    pub approx: f64,
}

impl ClosedForm {
    pub fn new(expression: &str, approx: f64) -> Self {
        Self {
            expression: expression.to_string(),
            approx,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope<T> {
    pub schema_version: u32,
    pub tool_version: String,
    /// The command line that produced the payload.
    pub command: Vec<String>,
    /// RFC 3339, UTC.
    pub timestamp: String,
    pub payload: T,
}

impl<T: Serialize> ReportEnvelope<T> {
    pub fn new(command: Vec<String>, payload: T) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            command,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            payload,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl<T: serde::de::DeserializeOwned> ReportEnvelope<T> {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    #[test]
    fn exact_values_round_trip() {
        let q = ratio(31833, 1_166_400);
        let e = ExactValue::new(&q);
        assert_eq!(e.exact, "131/4800");
        assert_eq!(ExactValue::over(&q, 129_600).display(), "3537/129600");
        assert_eq!(ExactValue::over(&ratio(207, 540), 540).form.as_deref(), Some("207/540"));
        assert_eq!(ExactValue::over(&ratio(1, 3), 540).display(), "180/540");
        assert_eq!(ExactValue::over(&ratio(1, 7), 540).form, None);
        assert_eq!(e.parse().unwrap(), q);
        assert!((e.approx - 0.027291666).abs() < 1e-8);
        let neg = ExactValue::new(&ratio(-4, 9));
        assert_eq!(neg.exact, "-4/9");
        assert_eq!(neg.parse().unwrap(), ratio(-4, 9));
    }

    #[test]
    fn envelope_json_round_trip() {
        let env = ReportEnvelope::new(vec!["derive".into()], ExactValue::new(&ratio(207, 540)));
        let back: ReportEnvelope<ExactValue> = ReportEnvelope::from_json(&env.to_json().unwrap()).unwrap();
        assert_eq!(back, env);
    }
}
