//! Sparse multivariate polynomials over a named variable set.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so equality is
//! coefficient-wise and iteration order is deterministic. Zero coefficients
//! are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::interval::Interval;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The variables a polynomial is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarSet {
    /// Schwarz coefficients `c1..cn`.
    Schwarz(usize),
    /// `x = |c1|^2`, `y = |c2|`.
    Xy,
    /// `x`, `y` and `t = |c3|`.
    Xyt,
}

impl VarSet {
    pub const C4: VarSet = VarSet::Schwarz(4);

    pub fn arity(&self) -> usize {
        match self {
            VarSet::Schwarz(n) => *n,
            VarSet::Xy => 2,
            VarSet::Xyt => 3,
        }
    }

    pub fn name(&self, i: usize) -> String {
        match self {
            VarSet::Schwarz(_) => format!("c{}", i + 1),
            VarSet::Xy | VarSet::Xyt => ["x", "y", "t"][i].to_string(),
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        (0..self.arity()).find(|&i| self.name(i) == name)
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = (0..self.arity()).map(|i| self.name(i)).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// Ring elements usable as polynomial coefficients.
///
/// Implemented for `BigRational` (the exact symbolic layer) and for `f32` /
/// `f64`. The two conversion hooks are what numeric evaluation needs.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_int(n: i64) -> Self;
    /// Rigorous enclosure of the coefficient.
    fn enclose<F: Scalar>(&self) -> Interval<F>;
    /// Nearest float (not rigorous).
    fn approx<F: Scalar>(&self) -> F;
}

impl Coefficient for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn enclose<F: Scalar>(&self) -> Interval<F> {
        Interval::from_rational(self)
    }

    fn approx<F: Scalar>(&self) -> F {
        crate::scalar::rational_to(self)
    }
}

macro_rules! float_coefficient {
    ($t:ty) => {
        impl Coefficient for $t {
            fn from_int(n: i64) -> Self {
                n as $t
            }

            fn enclose<F: Scalar>(&self) -> Interval<F> {
                match self.to_rational() {
                    Some(q) => Interval::from_rational(&q),
                    None => Interval::entire(),
                }
            }

            fn approx<F: Scalar>(&self) -> F {
                F::from_f64_lossy(*self as f64)
            }
        }
    };
}

float_coefficient!(f64);
float_coefficient!(f32);

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de> + Ord"))]
pub struct MultiPoly<T> {
    vars: VarSet,
    terms: BTreeMap<Exponents, T>,
}

impl<T: Coefficient> MultiPoly<T> {
    pub fn zero(vars: VarSet) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: VarSet, c: T) -> Self {
        Self::monomial(vars, c, vec![0; vars.arity()])
    }

    pub fn one(vars: VarSet) -> Self {
        Self::constant(vars, T::one())
    }

    /// The `i`-th variable of `vars`.
    pub fn var(vars: VarSet, i: usize) -> Self {
        assert!(i < vars.arity(), "variable index {i} out of range for {vars}");
        let mut e = vec![0; vars.arity()];
        e[i] = 1;
        Self::monomial(vars, T::one(), e)
    }

    pub fn monomial(vars: VarSet, c: T, exps: Exponents) -> Self {
        assert_eq!(exps.len(), vars.arity(), "exponent vector arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { vars, terms }
    }

    /// Build from `(coefficient, exponents)` pairs, merging duplicates.
    pub fn from_terms(vars: VarSet, terms: impl IntoIterator<Item = (T, Exponents)>) -> Result<Self> {
        let mut p = Self::zero(vars);
        for (c, e) in terms {
            if e.len() != vars.arity() {
                return Err(Error::Arity {
                    expected: vars.arity(),
                    got: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> T {
        self.terms.get(exps).cloned().unwrap_or_else(T::zero)
    }

    /// Coefficient of a monomial written by variable name, e.g. `[("c3", 2)]`.
    pub fn coeff_of(&self, powers: &[(&str, u32)]) -> T {
        let mut e = vec![0; self.vars.arity()];
        for (name, k) in powers {
            match self.vars.index_of(name) {
                Some(i) => e[i] += k,
                None => return T::zero(),
            }
        }
        self.coeff(&e)
    }

    pub fn constant_term(&self) -> T {
        self.coeff(&vec![0; self.vars.arity()])
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Largest weighted degree, the `i`-th variable carrying `weights[i]`.
    pub fn weighted_degrees(&self, weights: &[u32]) -> Vec<u32> {
        let mut d: Vec<u32> = self
            .terms
            .keys()
            .map(|e| e.iter().zip(weights).map(|(a, w)| a * w).sum())
            .collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VarSetMismatch {
                left: self.vars,
                right: other.vars,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.vars);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn map_coeffs<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> MultiPoly<U> {
        let mut out = MultiPoly::zero(self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Re-express in a larger variable set whose first variables coincide
    /// with this one's (e.g. `{x,y}` into `{x,y,t}`).
    pub fn embed(&self, target: VarSet) -> Result<Self> {
        let n = self.vars.arity();
        if target.arity() < n || (0..n).any(|i| self.vars.name(i) != target.name(i)) {
            return Err(Error::VarSetMismatch {
                left: self.vars,
                right: target,
            });
        }
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.resize(target.arity(), 0);
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    /// Replace variable `i` by the polynomial `value`.
    pub fn substitute(&self, i: usize, value: &Self) -> Result<Self> {
        self.check_same(value)?;
        if i >= self.vars.arity() {
            return Err(Error::InvalidInput(format!(
                "variable index {i} out of range for {}",
                self.vars
            )));
        }
        let mut powers: Vec<Self> = vec![Self::one(self.vars)];
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[i] = 0;
            let term = Self::monomial(self.vars, c.clone(), rest);
            out = &out + &(&term * &powers[k]);
        }
        Ok(out)
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c.clone() * T::from_int(e[i] as i64));
        }
        out
    }

    /// Evaluate in any commutative ring `V`, converting coefficients with
    /// `conv`. Powers of each variable are cached.
    pub fn eval_in<V>(&self, point: &[V], conv: impl Fn(&T) -> V) -> Result<V>
    where
        V: Clone + Zero + One + Mul<Output = V>,
    {
        if point.len() != self.vars.arity() {
            return Err(Error::Arity {
                expected: self.vars.arity(),
                got: point.len(),
            });
        }
        let mut powers: Vec<Vec<V>> = point.iter().map(|v| vec![V::one(), v.clone()]).collect();
        let mut acc = V::zero();
        for (e, c) in &self.terms {
            let mut term = conv(c);
            for (i, &k) in e.iter().enumerate() {
                let cache = &mut powers[i];
                while cache.len() <= k as usize {
                    let next = cache.last().unwrap().clone() * point[i].clone();
                    cache.push(next);
                }
                if k > 0 {
                    term = term * cache[k as usize].clone();
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    pub fn eval(&self, point: &[T]) -> Result<T> {
        self.eval_in(point, T::clone)
    }

    /// Floating-point evaluation at a complex point.
    pub fn eval_complex<F: Scalar>(&self, point: &[Complex<F>]) -> Result<Complex<F>> {
        self.eval_in(point, |c| Complex::new(c.approx::<F>(), F::zero()))
    }

    /// Naive monomial-sum enclosure: each monomial is enclosed separately
    /// with outward rounding and the enclosures are summed.
    pub fn eval_interval<F: Scalar>(&self, vars: &[Interval<F>]) -> Result<Interval<F>> {
        if vars.len() != self.vars.arity() {
            return Err(Error::Arity {
                expected: self.vars.arity(),
                got: vars.len(),
            });
        }
        let mut acc = Interval::zero();
        for (e, c) in &self.terms {
            let mut term = c.enclose::<F>();
            for (v, &k) in vars.iter().zip(e) {
                if k > 0 {
                    term = term * v.powi(k);
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Monomial-sum enclosure after re-expanding the polynomial around
    /// `center`, which must lie in the box. The re-expansion coefficients are
    /// themselves interval enclosures, so the result is rigorous.
    pub fn eval_interval_centered<F: Scalar>(&self, vars: &[Interval<F>], center: &[F]) -> Result<Interval<F>> {
        let n = self.vars.arity();
        if vars.len() != n || center.len() != n {
            return Err(Error::Arity {
                expected: n,
                got: vars.len().min(center.len()),
            });
        }
        let mut shifted: BTreeMap<Exponents, Interval<F>> = BTreeMap::new();
        for (e, c) in &self.terms {
            // expand prod_i (center_i + d_i)^{e_i}
            let mut partial: Vec<(Exponents, Interval<F>)> = vec![(vec![0; n], c.enclose())];
            for i in 0..n {
                let k = e[i];
                if k == 0 {
                    continue;
                }
                let ci = Interval::point(center[i]);
                let mut next = Vec::with_capacity(partial.len() * (k as usize + 1));
                for (pe, pc) in &partial {
                    for j in 0..=k {
                        let binom = F::from_f64_lossy(binomial(k, j) as f64);
                        let coef = *pc * Interval::point(binom) * ci.powi(k - j);
                        let mut ne = pe.clone();
                        ne[i] = j;
                        next.push((ne, coef));
                    }
                }
                partial = next;
            }
            for (pe, pc) in partial {
                let slot = shifted.entry(pe).or_insert_with(Interval::zero);
                *slot = *slot + pc;
            }
        }
        let offsets: Vec<Interval<F>> = vars.iter().zip(center).map(|(v, &c)| *v - Interval::point(c)).collect();
        let mut acc = Interval::zero();
        for (e, c) in &shifted {
            let mut term = *c;
            for (d, &k) in offsets.iter().zip(e) {
                if k > 0 {
                    term = term * d.powi(k);
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Intersection of the naive and centered enclosures (both sound).
    pub fn eval_interval_tight<F: Scalar>(&self, vars: &[Interval<F>]) -> Result<Interval<F>> {
        let naive = self.eval_interval(vars)?;
        if vars.iter().all(Interval::is_point) {
            return Ok(naive);
        }
        let center: Vec<F> = vars.iter().map(Interval::mid).collect();
        let centered = self.eval_interval_centered(vars, &center)?;
        Ok(naive.intersect(&centered).unwrap_or(naive))
    }
}

fn binomial(n: u32, k: u32) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

impl MultiPoly<BigRational> {
    /// Least common multiple of all coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// `(d, p)` with `p = d * self` having integer coefficients and `d` minimal.
    pub fn clear_denominators(&self) -> (BigInt, Self) {
        let d = self.denominator_lcm();
        let scaled = self.scale(&BigRational::from_integer(d.clone()));
        (d, scaled)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Every coefficient is `>= 0`.
    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn to_f64(&self) -> MultiPoly<f64> {
        self.map_coeffs(|c| c.approx::<f64>())
    }
}

impl<T: Coefficient> fmt::Display for MultiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // graded order, highest total degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = self.vars.name(i);
                    if k == 1 {
                        name
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<T: Coefficient> fmt::Debug for MultiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly{}({})", self.vars, self)
    }
}

// Operator forms panic on variable-set mismatch; use the `checked_*`
// methods where the operands come from outside the crate.
impl<T: Coefficient> Add for &MultiPoly<T> {
    type Output = MultiPoly<T>;

    fn add(self, rhs: Self) -> MultiPoly<T> {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl<T: Coefficient> Sub for &MultiPoly<T> {
    type Output = MultiPoly<T>;

    fn sub(self, rhs: Self) -> MultiPoly<T> {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl<T: Coefficient> Mul for &MultiPoly<T> {
    type Output = MultiPoly<T>;

    fn mul(self, rhs: Self) -> MultiPoly<T> {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl<T: Coefficient> Neg for &MultiPoly<T> {
    type Output = MultiPoly<T>;

    fn neg(self) -> MultiPoly<T> {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<T: Coefficient> $tr for MultiPoly<T> {
            type Output = MultiPoly<T>;

            fn $m(self, rhs: Self) -> MultiPoly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<T: Coefficient> Neg for MultiPoly<T> {
    type Output = MultiPoly<T>;

    fn neg(self) -> MultiPoly<T> {
        -&self
    }
}
