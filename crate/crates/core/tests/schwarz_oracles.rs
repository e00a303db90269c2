use std::f64::consts::PI;

use hankel_audit::classes::{derive_coefficients, eval_functional, hankel2_poly, hankel3_poly, ClassId};
use hankel_audit::schwarz::{
    blaschke_coefficients, carlson_residuals, sample_schwarz, witnesses, BlaschkeSpec, SamplerConfig,
};
use hankel_audit::ComplexValue;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RADIUS: f64 = 0.5;
const POINTS: usize = 256;

/// Taylor coefficients `0..=n` of `f` by a discrete Fourier transform on the
/// circle `|z| = RADIUS`.
fn fourier_coefficients(f: impl Fn(ComplexValue) -> ComplexValue, n: usize) -> Vec<ComplexValue> {
    let samples: Vec<(f64, ComplexValue)> = (0..POINTS)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / POINTS as f64;
            (theta, f(Complex::from_polar(RADIUS, theta)))
        })
        .collect();
    (0..=n)
        .map(|k| {
            let sum: ComplexValue = samples
                .iter()
                .map(|&(theta, v)| v * Complex::from_polar(1.0, -(k as f64) * theta))
                .sum();
            sum / (POINTS as f64 * RADIUS.powi(k as i32))
        })
        .collect()
}

fn random_spec(rng: &mut ChaCha8Rng) -> BlaschkeSpec<f64> {
    let degree = rng.gen_range(0..=4);
    BlaschkeSpec {
        rotation: rng.gen_range(0.0..2.0 * PI),
        zeros: (0..degree)
            .map(|_| Complex::from_polar(0.9 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI)))
            .collect(),
        scale: rng.gen_range(0.5..=1.0),
    }
}

#[test]
fn blaschke_coefficients_match_fourier_extraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let spec = random_spec(&mut rng);
        let s = blaschke_coefficients(&spec).unwrap();
        let f = fourier_coefficients(|z| spec.eval(z), 4);
        assert!(f[0].norm() < 1e-12, "w(0) = {}", f[0]);
        for k in 0..4 {
            assert!(
                (s.c[k] - f[k + 1]).norm() < 1e-10,
                "c{} {} vs {}",
                k + 1,
                s.c[k],
                f[k + 1]
            );
        }
    }
}

#[test]
fn blaschke_zero_at_origin_gives_minus_z_squared() {
    let spec = BlaschkeSpec {
        rotation: 0.0,
        zeros: vec![Complex::new(0.0, 0.0)],
        scale: 1.0,
    };
    let s = blaschke_coefficients(&spec).unwrap();
    let expect = [0.0, -1.0, 0.0, 0.0];
    for (c, e) in s.c.iter().zip(expect) {
        assert_eq!(*c, Complex::new(e, 0.0));
    }
}

#[test]
fn blaschke_rejects_zero_on_the_circle() {
    let spec = BlaschkeSpec {
        rotation: 0.0,
        zeros: vec![Complex::new(1.0, 0.0)],
        scale: 1.0,
    };
    assert!(blaschke_coefficients(&spec).is_err());
}

/// `a_n` of the class from the Fourier coefficients of `(1 + w)/(1 - w)`,
/// independently of the symbolic series code.
#[test]
fn coefficient_formulas_match_numeric_subordination() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for class in ClassId::ALL {
        let formulas = derive_coefficients(class);
        let h3 = hankel3_poly(&formulas);
        for _ in 0..25 {
            let spec = random_spec(&mut rng);
            let s = blaschke_coefficients(&spec).unwrap();
            let p = fourier_coefficients(
                |z| {
                    let w = spec.eval(z);
                    (1.0 + w) / (1.0 - w)
                },
                4,
            );
            let mut a = [Complex::new(0.0, 0.0); 6];
            a[1] = Complex::new(1.0, 0.0);
            for n in 2..=5 {
                let weight = match class {
                    ClassId::R => n as f64,
                    ClassId::R1 => (n * n) as f64,
                };
                a[n] = p[n - 1] / weight;
                let v = formulas.a(n).eval_complex(&s.c).unwrap();
                assert!((v - a[n]).norm() < 1e-9, "{class} a{n}: {v} vs {}", a[n]);
            }
            let det = a[3] * (a[2] * a[4] - a[3] * a[3]) - a[4] * (a[4] - a[2] * a[3]) + a[5] * (a[3] - a[2] * a[2]);
            let v = eval_functional(&h3, &s.c).unwrap();
            assert!((v - det).norm() < 1e-9, "{class} H3: {v} vs {det}");
        }
    }
}

#[test]
fn functionals_are_weighted_homogeneous() {
    for class in ClassId::ALL {
        let f = derive_coefficients(class);
        for n in 2..=5 {
            assert_eq!(f.a(n).weighted_degrees(&[1, 2, 3, 4]), vec![n as u32 - 1]);
        }
        assert_eq!(hankel3_poly(&f).poly.weighted_degrees(&[1, 2, 3, 4]), vec![6]);
        assert_eq!(hankel2_poly(&f).poly.weighted_degrees(&[1, 2, 3, 4]), vec![4]);
    }
}

/// `w(z) -> w(e^{i phi} z)` rotates `c_k` by `e^{i k phi}`; by weighted
/// homogeneity `H_3(1)` picks up `e^{6 i phi}` and its modulus is unchanged.
#[test]
fn hankel_modulus_is_rotation_invariant() {
    let h3 = hankel3_poly(&derive_coefficients(ClassId::R));
    let samples: Vec<_> = sample_schwarz::<f64>(
        8,
        SamplerConfig {
            count: 200,
            ..SamplerConfig::default()
        },
    )
    .unwrap()
    .collect();
    for (i, s) in samples.iter().enumerate() {
        let phi = 0.1 + i as f64;
        let mut c = s.c;
        for (k, ck) in c.iter_mut().enumerate() {
            *ck *= Complex::from_polar(1.0, (k + 1) as f64 * phi);
        }
        let a = eval_functional(&h3, &s.c).unwrap().norm();
        let b = eval_functional(&h3, &c).unwrap().norm();
        assert!((a - b).abs() < 1e-12 * (1.0 + a));
    }
}

#[test]
fn sampler_is_deterministic_and_valid() {
    let cfg = SamplerConfig {
        count: 500,
        ..SamplerConfig::default()
    };
    let a: Vec<_> = sample_schwarz::<f64>(42, cfg).unwrap().collect();
    let b: Vec<_> = sample_schwarz::<f64>(42, cfg).unwrap().collect();
    assert_eq!(a, b);
    let c: Vec<_> = sample_schwarz::<f64>(43, cfg).unwrap().collect();
    assert_ne!(a, c);
    assert!(a.iter().all(|s| s.c[0].norm() <= 1.0 + 1e-12));
    assert!(a
        .iter()
        .enumerate()
        .all(|(i, s)| s.index == i as u64 && s.seed == Some(42)));
}

#[test]
fn witnesses_attain_carlson_equality() {
    for w in witnesses::<f64>() {
        let (r2, r4) = carlson_residuals(&w);
        assert!(r2 >= -1e-15 && r4 >= -1e-15, "{}", w.provenance);
    }
    let ws = witnesses::<f64>();
    assert_eq!(carlson_residuals(&ws[0]), (0.0, 0.0));
    assert_eq!(carlson_residuals(&ws[1]), (0.0, 0.0));
}

#[test]
fn f32_samples_track_f64() {
    let cfg = SamplerConfig {
        count: 100,
        ..SamplerConfig::default()
    };
    let h3 = hankel3_poly(&derive_coefficients(ClassId::R1));
    let wide: Vec<_> = sample_schwarz::<f64>(5, cfg).unwrap().collect();
    let narrow: Vec<_> = sample_schwarz::<f32>(5, cfg).unwrap().collect();
    for (a, b) in wide.iter().zip(&narrow) {
        let va = eval_functional(&h3, &a.c).unwrap().norm();
        let vb = eval_functional(&h3, &b.c).unwrap().norm() as f64;
        assert!((va - vb).abs() < 1e-4, "{va} vs {vb}");
    }
}
