//! Admissible Schwarz-function coefficient tuples and the two coefficient
//! lemmas they are checked against.
//!
//! Samples come from finite Blaschke products `w(z) = r e^{i theta} z B(z)`
//! with `B` a product of disk automorphisms, and from convex combinations of
//! earlier samples (the Schwarz class is convex). Only `c1..c4` are kept.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{int, ratio};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Number of Schwarz coefficients carried by a sample.
pub const COEFFS: usize = 4;

/// Lemma residual tolerance: samples pass when every residual is `>= -LEMMA_TOL`.
pub const LEMMA_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeSpec<F> {
    /// Rotation angle in radians.
    pub rotation: F,
    /// Zeros other than the origin; each must satisfy `|a| < 1`.
    pub zeros: Vec<Complex<F>>,
    /// Radial scale in `(0, 1]`.
    pub scale: F,
}

impl<F: Scalar> BlaschkeSpec<F> {
    pub fn identity() -> Self {
        Self {
            rotation: F::zero(),
            zeros: Vec::new(),
            scale: F::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(z) = self.zeros.iter().find(|z| !(z.norm() < F::one())) {
            return Err(Error::InvalidInput(format!(
                "Blaschke zero {z} is not inside the unit disk"
            )));
        }
        if !(self.scale > F::zero() && self.scale <= F::one()) {
            return Err(Error::InvalidInput(format!("scale {} outside (0, 1]", self.scale)));
        }
        if !self.rotation.is_finite() {
            return Err(Error::InvalidInput("rotation must be finite".into()));
        }
        Ok(())
    }

    /// Direct evaluation of `w(z)`; used as an independent check of the
    /// coefficient expansion.
    pub fn eval(&self, z: Complex<F>) -> Complex<F> {
        let lead = Complex::from_polar(self.scale, self.rotation) * z;
        self.zeros.iter().fold(lead, |acc, &a| {
            acc * (a - z) / (Complex::new(F::one(), F::zero()) - a.conj() * z)
        })
    }
}

/// Where a sample came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Blaschke {
        rotation: f64,
        zeros: Vec<(f64, f64)>,
        scale: f64,
    },
    Mix {
        weight: f64,
        first: u64,
        second: u64,
    },
    Witness {
        name: String,
    },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Blaschke { rotation, zeros, scale } => {
                let zs: Vec<String> = zeros.iter().map(|(re, im)| format!("{re:+.6}{im:+.6}i")).collect();
                write!(f, "blaschke(theta={rotation:.6};r={scale:.6};zeros=[{}])", zs.join(" "))
            }
            Provenance::Mix { weight, first, second } => {
                write!(f, "mix({weight:.6}*#{first}+{:.6}*#{second})", 1.0 - weight)
            }
            Provenance::Witness { name } => write!(f, "witness({name})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchwarzSample<F> {
    pub c: [Complex<F>; COEFFS],
    pub provenance: Provenance,
    /// Stream seed and position, when produced by a sampler.
    pub seed: Option<u64>,
    pub index: u64,
}

impl<F: Scalar> SchwarzSample<F> {
    pub fn from_coeffs(c: [Complex<F>; COEFFS], provenance: Provenance) -> Self {
        Self {
            c,
            provenance,
            seed: None,
            index: 0,
        }
    }

    pub fn witness(name: &str, c: [(f64, f64); COEFFS]) -> Self {
        let c = c.map(|(re, im)| Complex::new(F::from_f64_lossy(re), F::from_f64_lossy(im)));
        Self::from_coeffs(c, Provenance::Witness { name: name.to_string() })
    }

    /// `|c1|^2`
    pub fn x(&self) -> F {
        self.c[0].norm_sqr()
    }

    /// `|c2|`
    pub fn y(&self) -> F {
        self.c[1].norm()
    }
}

/// Exact witness functions used across the toolkit.
pub fn witnesses<F: Scalar>() -> Vec<SchwarzSample<F>> {
    vec![
        SchwarzSample::witness("z", [(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]),
        SchwarzSample::witness("z^2", [(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]),
        SchwarzSample::witness("z^3", [(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]),
        SchwarzSample::witness(
            "z(z-1/2)/(1-z/2)",
            [(-0.5, 0.0), (0.75, 0.0), (0.375, 0.0), (0.1875, 0.0)],
        ),
    ]
}

/// Taylor coefficients `c1..c4` of `r e^{i theta} z prod (a - z)/(1 - conj(a) z)`.
///
/// Each factor expands as `a + (|a|^2 - 1)(z + conj(a) z^2 + conj(a)^2 z^3 + ..)`;
/// the factors are multiplied as series truncated at `z^3`.
pub fn blaschke_coefficients<F: Scalar>(spec: &BlaschkeSpec<F>) -> Result<SchwarzSample<F>> {
    spec.validate()?;
    let zero = Complex::new(F::zero(), F::zero());
    let mut product = [zero; COEFFS];
    product[0] = Complex::new(F::one(), F::zero());
    for &a in &spec.zeros {
        let k = Complex::new(a.norm_sqr() - F::one(), F::zero());
        let mut factor = [zero; COEFFS];
        factor[0] = a;
        let mut conj_pow = Complex::new(F::one(), F::zero());
        for slot in factor.iter_mut().skip(1) {
            *slot = k * conj_pow;
            conj_pow = conj_pow * a.conj();
        }
        let mut next = [zero; COEFFS];
        for i in 0..COEFFS {
            for j in 0..COEFFS - i {
                next[i + j] = next[i + j] + product[i] * factor[j];
            }
        }
        product = next;
    }
    let lead = Complex::from_polar(spec.scale, spec.rotation);
    let c = product.map(|d| lead * d);
    let provenance = Provenance::Blaschke {
        rotation: spec.rotation.to_f64().unwrap_or(f64::NAN),
        zeros: spec
            .zeros
            .iter()
            .map(|z| (z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN)))
            .collect(),
        scale: spec.scale.to_f64().unwrap_or(f64::NAN),
    };
    Ok(SchwarzSample::from_coeffs(c, provenance))
}

/// Convex combination `weight * a + (1 - weight) * b`.
pub fn mix<F: Scalar>(a: &SchwarzSample<F>, b: &SchwarzSample<F>, weight: F) -> SchwarzSample<F> {
    let w = Complex::new(weight, F::zero());
    let v = Complex::new(F::one() - weight, F::zero());
    let mut c = a.c;
    for (ci, bi) in c.iter_mut().zip(&b.c) {
        *ci = w * *ci + v * *bi;
    }
    SchwarzSample::from_coeffs(
        c,
        Provenance::Mix {
            weight: weight.to_f64().unwrap_or(f64::NAN),
            first: a.index,
            second: b.index,
        },
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub count: usize,
    /// Upper bound on the number of non-origin zeros.
    pub max_degree: usize,
    pub mix_probability: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            count: 100_000,
            max_degree: 4,
            mix_probability: 0.2,
        }
    }
}

/// Largest modulus a sampled zero may have.
pub const ZERO_RADIUS: f64 = 0.95;
const MIX_POOL: usize = 64;

/// Deterministic stream of Schwarz samples.
pub struct SchwarzSampler<F> {
    rng: ChaCha8Rng,
    seed: u64,
    config: SamplerConfig,
    emitted: u64,
    pool: VecDeque<SchwarzSample<F>>,
}

pub fn sample_schwarz<F: Scalar>(seed: u64, config: SamplerConfig) -> Result<SchwarzSampler<F>> {
    if config.count == 0 {
        return Err(Error::InvalidInput("sample count must be at least 1".into()));
    }
    if config.max_degree > COEFFS {
        return Err(Error::InvalidInput(format!(
            "max_degree {} exceeds {COEFFS}",
            config.max_degree
        )));
    }
    if !(0.0..=1.0).contains(&config.mix_probability) {
        return Err(Error::InvalidInput("mix_probability must lie in [0, 1]".into()));
    }
    Ok(SchwarzSampler {
        rng: ChaCha8Rng::seed_from_u64(seed),
        seed,
        config,
        emitted: 0,
        pool: VecDeque::with_capacity(MIX_POOL),
    })
}

impl<F: Scalar> SchwarzSampler<F> {
    fn draw_blaschke(&mut self) -> SchwarzSample<F> {
        let degree = self.rng.gen_range(0..=self.config.max_degree);
        let zeros = (0..degree)
            .map(|_| {
                let r = ZERO_RADIUS * self.rng.gen::<f64>().sqrt();
                let phi = self.rng.gen_range(0.0..2.0 * PI);
                Complex::from_polar(F::from_f64_lossy(r), F::from_f64_lossy(phi))
            })
            .collect();
        let spec = BlaschkeSpec {
            rotation: F::from_f64_lossy(self.rng.gen_range(0.0..2.0 * PI)),
            zeros,
            scale: F::from_f64_lossy(self.rng.gen_range(0.5..=1.0)),
        };
        blaschke_coefficients(&spec).expect("sampled zeros lie inside the disk")
    }
}

impl<F: Scalar> Iterator for SchwarzSampler<F> {
    type Item = SchwarzSample<F>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.emitted as usize >= self.config.count {
            return None;
        }
        let wants_mix = self.rng.gen_bool(self.config.mix_probability);
        let mut sample = if wants_mix && self.pool.len() >= 2 {
            let i = self.rng.gen_range(0..self.pool.len());
            let mut j = self.rng.gen_range(0..self.pool.len() - 1);
            if j >= i {
                j += 1;
            }
            let w = F::from_f64_lossy(self.rng.gen::<f64>());
            mix(&self.pool[i], &self.pool[j], w)
        } else {
            self.draw_blaschke()
        };
        sample.seed = Some(self.seed);
        sample.index = self.emitted;
        self.emitted += 1;
        if self.pool.len() == MIX_POOL {
            self.pool.pop_front();
        }
        self.pool.push_back(sample.clone());
        Some(sample)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.config.count - self.emitted as usize;
        (left, Some(left))
    }
}

/// `(1 - |c1|^2 - |c2|, 1 - |c1|^2 - |c2|^2 - |c4|)`; both are `>= 0` for a
/// genuine Schwarz function.
pub fn carlson_residuals<F: Scalar>(s: &SchwarzSample<F>) -> (F, F) {
    let x = s.c[0].norm_sqr();
    let r2 = F::one() - x - s.c[1].norm();
    let r4 = F::one() - x - s.c[1].norm_sqr() - s.c[3].norm();
    (r2, r4)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    D1,
    D2,
    Outside,
}

/// Parameters `(mu, nu)` of `|c3 + mu c1 c2 + nu c1^3| <= 1`, held exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProkhorovParams {
    pub mu: BigRational,
    pub nu: BigRational,
}

impl ProkhorovParams {
    pub fn new(mu: BigRational, nu: BigRational) -> Self {
        Self { mu, nu }
    }

    /// Exact conversion of two floats.
    pub fn from_f64(mu: f64, nu: f64) -> Result<Self> {
        let conv = |v: f64| {
            v.to_rational()
                .ok_or_else(|| Error::InvalidInput(format!("non-finite parameter {v}")))
        };
        Ok(Self::new(conv(mu)?, conv(nu)?))
    }

    pub fn mu_f<F: Scalar>(&self) -> F {
        crate::scalar::rational_to(&self.mu)
    }

    pub fn nu_f<F: Scalar>(&self) -> F {
        crate::scalar::rational_to(&self.nu)
    }
}

impl fmt::Display for ProkhorovParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(mu={}, nu={})", self.mu, self.nu)
    }
}

/// Exact membership in `D1` or `D2`; `D1` wins on the shared boundary.
pub fn region_membership(p: &ProkhorovParams) -> Region {
    let m = p.mu.abs();
    let one = BigRational::one();
    let half = ratio(1, 2);
    let nu_le_one = p.nu <= one;
    if m <= half && -one.clone() <= p.nu && nu_le_one {
        return Region::D1;
    }
    if m >= half && m <= int(2) {
        let s = m + one;
        let lower = ratio(4, 27) * s.clone() * s.clone() * s.clone() - s;
        if lower <= p.nu && nu_le_one {
            return Region::D2;
        }
    }
    Region::Outside
}

/// `1 - |c3 + mu c1 c2 + nu c1^3|`.
pub fn prokhorov_margin<F: Scalar>(s: &SchwarzSample<F>, p: &ProkhorovParams) -> Result<F> {
    if region_membership(p) == Region::Outside {
        return Err(Error::Precondition(format!(
            "{p} lies outside D1 and D2; the estimate makes no claim there"
        )));
    }
    let mu = Complex::new(p.mu_f::<F>(), F::zero());
    let nu = Complex::new(p.nu_f::<F>(), F::zero());
    let [c1, c2, c3, _] = s.c;
    let v = c3 + mu * c1 * c2 + nu * c1 * c1 * c1;
    Ok(F::one() - v.norm())
}

/// The parameter grid used by the lemma checks: the two pairs the bounds
/// rely on, followed by twenty points spread over `D1` and `D2`.
pub fn default_prokhorov_grid() -> Vec<ProkhorovParams> {
    let p = |mu: BigRational, nu: BigRational| ProkhorovParams::new(mu, nu);
    let d2_floor = |m: BigRational| {
        let s = m.abs() + BigRational::one();
        ratio(4, 27) * s.clone() * s.clone() * s.clone() - s
    };
    let mut grid = vec![p(int(-2), int(1)), p(ratio(-2, 19), int(1))];
    // D1: corners, centre and interior points
    for (mu, nu) in [
        (ratio(0, 1), int(-1)),
        (ratio(0, 1), int(0)),
        (ratio(0, 1), int(1)),
        (ratio(1, 2), int(-1)),
        (ratio(-1, 2), int(-1)),
        (ratio(1, 2), int(1)),
        (ratio(-1, 2), int(1)),
        (ratio(1, 4), ratio(1, 2)),
        (ratio(-1, 4), ratio(-1, 2)),
        (ratio(1, 2), int(0)),
    ] {
        grid.push(p(mu, nu));
    }
    // D2: points on the lower boundary curve and on nu = 1
    for mu in [ratio(1, 1), ratio(3, 2), ratio(3, 4), ratio(5, 4), ratio(-7, 4)] {
        grid.push(p(mu.clone(), d2_floor(mu)));
    }
    for (mu, nu) in [
        (int(-1), int(1)),
        (ratio(-3, 2), int(1)),
        (int(2), int(1)),
        (ratio(-5, 4), int(0)),
        (ratio(9, 5), ratio(9, 10)),
    ] {
        grid.push(p(mu, nu));
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    fn close(a: &[C; 4], b: &[C; 4], tol: f64) -> bool {
        a.iter().zip(b).all(|(u, v)| (u - v).norm() <= tol * v.norm().max(1.0))
    }

    #[test]
    fn blaschke_identity_and_origin_zero() {
        let s = blaschke_coefficients(&BlaschkeSpec::<f64>::identity()).unwrap();
        assert_eq!(s.c, [c(1.0), c(0.0), c(0.0), c(0.0)]);
        let spec = BlaschkeSpec {
            zeros: vec![C::new(0.0, 0.0)],
            ..BlaschkeSpec::identity()
        };
        let s = blaschke_coefficients(&spec).unwrap();
        assert!(close(&s.c, &[c(0.0), c(-1.0), c(0.0), c(0.0)], 1e-15));
    }

    #[test]
    fn blaschke_single_zero_at_half() {
        let spec = BlaschkeSpec {
            zeros: vec![c(0.5)],
            ..BlaschkeSpec::identity()
        };
        let s = blaschke_coefficients(&spec).unwrap();
        let expected = [c(0.5), c(-0.75), c(-0.375), c(-0.1875)];
        assert!(close(&s.c, &expected, 1e-12));
    }

    #[test]
    fn blaschke_rejects_boundary_zero_and_bad_scale() {
        let spec = BlaschkeSpec {
            zeros: vec![c(1.0)],
            ..BlaschkeSpec::<f64>::identity()
        };
        assert!(blaschke_coefficients(&spec).is_err());
        let spec = BlaschkeSpec {
            scale: 0.0,
            ..BlaschkeSpec::<f64>::identity()
        };
        assert!(blaschke_coefficients(&spec).is_err());
    }

    #[test]
    fn carlson_equality_cases() {
        for w in witnesses::<f64>() {
            let (r2, r4) = carlson_residuals(&w);
            if w.provenance != (Provenance::Witness { name: "z^3".into() }) {
                assert!(r2.abs() < 1e-15 && r4.abs() < 1e-15, "{:?}", w.provenance);
            }
        }
    }

    #[test]
    fn region_examples() {
        let p = |m: BigRational, n: BigRational| ProkhorovParams::new(m, n);
        assert_eq!(region_membership(&p(int(-2), int(1))), Region::D2);
        assert_eq!(region_membership(&p(ratio(-2, 19), int(1))), Region::D1);
        assert_eq!(region_membership(&p(int(3), int(0))), Region::Outside);
        // shared boundary |mu| = 1/2 goes to D1
        assert_eq!(region_membership(&p(ratio(1, 2), int(1))), Region::D1);
        // just below the D2 floor
        let floor = ratio(4, 27) * ratio(27, 8) - ratio(3, 2);
        assert_eq!(region_membership(&p(ratio(1, 2), floor.clone())), Region::D1);
        assert_eq!(region_membership(&p(int(1), ratio(-22, 27))), Region::D2);
        assert_eq!(region_membership(&p(int(1), ratio(-23, 27))), Region::Outside);
        assert_eq!(region_membership(&p(int(0), ratio(11, 10))), Region::Outside);
    }

    #[test]
    fn margin_examples() {
        let z3 = SchwarzSample::<f64>::witness("z^3", [(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        for p in default_prokhorov_grid() {
            assert_eq!(prokhorov_margin(&z3, &p).unwrap(), 0.0);
        }
        let b = SchwarzSample::<f64>::from_coeffs(
            [c(0.5), c(-0.75), c(-0.375), c(-0.1875)],
            Provenance::Witness { name: "b".into() },
        );
        let m = prokhorov_margin(&b, &ProkhorovParams::new(int(-2), int(1))).unwrap();
        assert!((m - 0.5).abs() < 1e-15);
        let z = &witnesses::<f64>()[0];
        let m = prokhorov_margin(z, &ProkhorovParams::new(ratio(-2, 19), int(1))).unwrap();
        assert!(m.abs() < 1e-15);
        assert!(prokhorov_margin(z, &ProkhorovParams::new(int(3), int(0))).is_err());
    }

    #[test]
    fn grid_is_admissible() {
        let g = default_prokhorov_grid();
        assert_eq!(g.len(), 22);
        assert!(g.iter().all(|p| region_membership(p) != Region::Outside));
        assert!(g.iter().any(|p| region_membership(p) == Region::D1));
        assert!(g.iter().filter(|p| region_membership(p) == Region::D2).count() >= 10);
    }

    #[test]
    fn sampler_is_deterministic_and_validated() {
        let cfg = SamplerConfig {
            count: 500,
            ..SamplerConfig::default()
        };
        let a: Vec<_> = sample_schwarz::<f64>(9, cfg).unwrap().collect();
        let b: Vec<_> = sample_schwarz::<f64>(9, cfg).unwrap().collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 500);
        let other: Vec<_> = sample_schwarz::<f64>(10, cfg).unwrap().collect();
        assert_ne!(a, other);
        assert!(a.iter().any(|s| matches!(s.provenance, Provenance::Mix { .. })));
        assert!(sample_schwarz::<f64>(1, SamplerConfig { count: 0, ..cfg }).is_err());
        assert!(sample_schwarz::<f64>(1, SamplerConfig { max_degree: 5, ..cfg }).is_err());
    }

    #[test]
    fn degenerate_mix_returns_first_parent() {
        let ws = witnesses::<f64>();
        let m = mix(&ws[3], &ws[1], 1.0);
        assert_eq!(m.c, ws[3].c);
    }
}
