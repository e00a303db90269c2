//! Acceptance run: one PASS/FAIL line per criterion, with the tolerance and
//! the measured runtime. Exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use hankel_audit::algebra::{parse_poly, ratio, VarSet};
use hankel_audit::classes::{derive_coefficients, hankel3_poly, ClassId, PrintedForms};
use hankel_audit::optimize::{
    bb_maximize, edge_maximize, min_positive_check, standard_region, Edge, Registry, DEFAULT_BUDGET,
};
use hankel_audit::pipeline::{
    audit, random_search, reproduce_theorem, verify_lemmas, AuditKind, AuditStatus, PipelineOptions,
};
use hankel_audit::BigRational;
use num_bigint::BigInt;

const OPT_TOL: f64 = 1e-6;
const LEMMA_TOL: f64 = 1e-9;
const SAMPLES: usize = 100_000;
const SEED: u64 = 42;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn from(checks: Vec<(bool, String)>) -> Self {
        let failed: Vec<_> = checks.iter().filter(|(ok, _)| !ok).map(|(_, d)| d.clone()).collect();
        if failed.is_empty() {
            Outcome {
                ok: true,
                detail: checks.into_iter().map(|(_, d)| d).collect::<Vec<_>>().join("; "),
            }
        } else {
            Outcome {
                ok: false,
                detail: format!("failed: {}", failed.join("; ")),
            }
        }
    }
}

fn close(v: f64, target: f64, tol: f64) -> bool {
    (v - target).abs() <= tol
}

fn c4(src: &str) -> hankel_audit::RationalPoly {
    parse_poly(VarSet::C4, src).unwrap()
}

fn coefficient_derivation() -> Outcome {
    let r = derive_coefficients(ClassId::R);
    let r1 = derive_coefficients(ClassId::R1);
    let a4 = c4("1/2 (c3 + 2c1c2 + c1^3)");
    let a3 = c4("2/9 (c1^2 + c2)");
    let mut checks = vec![
        (*r.a(4) == a4, format!("R a4 = {}", r.a(4))),
        (*r1.a(3) == a3, format!("R1 a3 = {}", r1.a(3))),
    ];
    for class in ClassId::ALL {
        let f = derive_coefficients(class);
        let p = PrintedForms::for_class(class);
        let all = (2..=5).all(|n| *f.a(n) == p.coefficient(n));
        checks.push((all, format!("{class} a2..a5 equal printed")));
    }
    Outcome::from(checks)
}

fn expansion_identity() -> Outcome {
    let mut checks = Vec::new();
    for class in ClassId::ALL {
        let h = hankel3_poly(&derive_coefficients(class));
        let p = PrintedForms::for_class(class);
        checks.push((
            h.denominator() == p.denominator && h.poly == p.expansion(),
            format!("{class}: determinant = printed expansion over {}", p.denominator),
        ));
        checks.push((
            h.poly == p.regrouped(),
            format!("{class}: determinant = printed regrouping"),
        ));
    }
    let r = hankel3_poly(&derive_coefficients(ClassId::R));
    let int = |n: i64| BigRational::from_integer(n.into());
    checks.push((r.poly.len() == 9, format!("R expansion has {} monomials", r.poly.len())));
    checks.push((
        r.poly.coeff(&[0, 0, 2, 0]) == int(-135) && r.poly.coeff(&[0, 1, 0, 1]) == int(144),
        "R: -135 c3^2, 144 c2 c4".into(),
    ));
    let r1 = hankel3_poly(&derive_coefficients(ClassId::R1));
    checks.push((r1.poly.coeff(&[6, 0, 0, 0]) == int(-1217), "R1: -1217 c1^6".into()));
    Outcome::from(checks)
}

fn optimization_reproductions() -> Outcome {
    let reg = Registry::standard();
    let square = standard_region::<f64>("unit-square").unwrap();
    let tri = standard_region::<f64>("triangle-E").unwrap();
    let interval = standard_region::<f64>("unit-interval").unwrap();
    let mut checks = Vec::new();

    let g1 = reg.get("g1").unwrap();
    let top = 7.0 + 24.0 * 6f64.sqrt();
    let c = bb_maximize(g1, &square, OPT_TOL, DEFAULT_BUDGET).unwrap();
    checks.push((
        c.complete && close(c.upper, top, OPT_TOL),
        format!("max g1 = {} (7+24sqrt6 = {top})", c.upper),
    ));

    for (edge, target, label) in [
        (Edge::Y0, 25.0, "25"),
        (Edge::Y1, 23.0, "23"),
        (Edge::X1, 7.0 + 2f64.sqrt(), "7+sqrt2"),
    ] {
        let e = edge_maximize(g1, edge, OPT_TOL, DEFAULT_BUDGET).unwrap();
        checks.push((
            e.certificate.complete && close(e.certificate.upper, target, OPT_TOL),
            format!("g1 on {edge}: {} ({label})", e.certificate.upper),
        ));
    }

    let c = bb_maximize(reg.get("h2").unwrap(), &tri, OPT_TOL, DEFAULT_BUDGET).unwrap();
    checks.push((
        c.complete && close(c.upper, 12233.0, OPT_TOL),
        format!("max h2 over E = {}", c.upper),
    ));

    let c = bb_maximize(reg.get("g2-hyp").unwrap(), &interval, OPT_TOL, DEFAULT_BUDGET).unwrap();
    let at_one = c.witness.is_some_and(|(x, _)| close(x, 1.0, 1e-3));
    checks.push((
        c.complete && close(c.upper, 12233.0, OPT_TOL) && at_one,
        format!("hypotenuse cubic max {} at x = {:?}", c.upper, c.witness.map(|w| w.0)),
    ));
    Outcome::from(checks)
}

fn positivity_certificates() -> Outcome {
    let reg = Registry::standard();
    let half = standard_region::<f64>("lower-half-interval").unwrap();
    let square = standard_region::<f64>("unit-square").unwrap();
    let q = min_positive_check(reg.get("quartic").unwrap(), &half, DEFAULT_BUDGET).unwrap();
    let d = min_positive_check(reg.get("dh2dx").unwrap(), &square, DEFAULT_BUDGET).unwrap();
    let h2 = &reg.get("h2").unwrap().poly;
    let decomposition = &reg.get("dh2dx-decomposition").unwrap().poly;
    Outcome::from(vec![
        (
            q.verified && q.margin > 0.0,
            format!("quartic min on [0,1/2] >= {}", q.margin),
        ),
        (
            d.verified && d.margin >= 648.0,
            format!("dh2/dx min on [0,1]^2 >= {}", d.margin),
        ),
        (
            h2.derivative(0) == *decomposition,
            "decomposition = dh2/dx exactly".into(),
        ),
    ])
}

fn theorem_reproduction() -> Outcome {
    let r = reproduce_theorem(ClassId::R, OPT_TOL).unwrap();
    let r1 = reproduce_theorem(ClassId::R1, OPT_TOL).unwrap();
    let exact =
        |rep: &hankel_audit::pipeline::TheoremReport| rep.final_bound.exact.as_ref().and_then(|e| e.parse().ok());
    let case2_r = (135.0 + 7.0 + 24.0 * 6f64.sqrt()) / 540.0;
    let case2_r1 = 15229.0 / 583200.0;
    Outcome::from(vec![
        (
            r.passed() && exact(&r) == Some(ratio(207, 540)),
            format!("R final = {}", r.final_value),
        ),
        (
            close(r.case2.bound, case2_r, OPT_TOL) && r.case2.bound < 207.0 / 540.0,
            format!("R case 2 = {:.9} < 207/540", r.case2.bound),
        ),
        (
            r1.passed() && exact(&r1) == Some(ratio(3537, 129_600)),
            format!("R1 final = {}", r1.final_value),
        ),
        (
            close(r1.case2.bound, case2_r1, OPT_TOL),
            format!("R1 case 2 = {:.9}", r1.case2.bound),
        ),
        (
            BigInt::from(31833) * BigInt::from(129_600) == BigInt::from(3537) * BigInt::from(1_166_400),
            "31833/1166400 = 3537/129600".into(),
        ),
    ])
}

fn lemma_suite() -> Outcome {
    let items = verify_lemmas(SAMPLES, SEED).unwrap();
    let failed: Vec<_> = items.iter().filter(|i| !i.passed()).map(|i| i.name.clone()).collect();
    let has = |n: &str| items.iter().any(|i| i.name == n);
    Outcome::from(vec![
        (
            failed.is_empty(),
            format!("{} items over {SAMPLES} samples, failures {failed:?}", items.len()),
        ),
        (has("prokhorov mu=-2 nu=1"), "grid has (-2, 1)".into()),
        (has("prokhorov mu=-2/19 nu=1"), "grid has (-2/19, 1)".into()),
    ])
}

fn explorer_consistency() -> Outcome {
    let r = random_search(ClassId::R, SAMPLES, SEED).unwrap();
    let r1 = random_search(ClassId::R1, SAMPLES, SEED).unwrap();
    let h2 = r.h2.as_ref().unwrap();
    Outcome::from(vec![
        (
            r.best_value >= 0.25 - 1e-15 && r.violations == 0,
            format!("R best {:.6}, violations {}", r.best_value, r.violations),
        ),
        (
            r1.best_value >= 1.0 / 64.0 - 1e-15 && r1.violations == 0,
            format!("R1 best {:.6}, violations {}", r1.best_value, r1.violations),
        ),
        (
            h2.violations == 0 && h2.best_value <= 4.0 / 9.0 + LEMMA_TOL,
            format!("|H2(2)| max {:.12}", h2.best_value),
        ),
        (
            close(h2.at_z_squared, 4.0 / 9.0, 1e-15),
            format!("|H2(2)| at z^2 = {:.12}", h2.at_z_squared),
        ),
    ])
}

fn discrepancy_audit() -> Outcome {
    let opts = PipelineOptions::default();
    let reg = Registry::standard();
    let r = audit(ClassId::R, &reg, &opts);
    let r1 = audit(ClassId::R1, &reg, &opts);
    let disc: Vec<_> = r
        .iter()
        .chain(&r1)
        .filter(|i| i.kind == AuditKind::Discrepancy)
        .collect();
    let detail = |n: &str| {
        disc.iter()
            .find(|i| i.name == n)
            .map(|i| i.detail.as_str())
            .unwrap_or("")
    };
    let rep = reproduce_theorem(ClassId::R1, OPT_TOL).unwrap();
    let derived_final = rep.derived.final_bound.exact.as_ref().and_then(|e| e.parse().ok());
    Outcome::from(vec![
        (
            disc.len() == 3 && disc.iter().all(|i| i.status == AuditStatus::Info),
            format!("{} discrepancy items", disc.len()),
        ),
        (
            detail("case2-assembly").contains("= 11016*x"),
            "h2 linear delta 11016x".into(),
        ),
        (
            detail("g2-0y").contains("12800*y^3 - 12800*y^2"),
            "g2(0,y) degree: y^2 vs y^3".into(),
        ),
        (
            detail("case2-region").contains("32*x + 21*y - 32") && detail("case2-region").contains("21*x + 32*y - 21"),
            "region 32x+21y>=32 vs 21x+32y>=21".into(),
        ),
        (
            r.iter().chain(&r1).all(|i| i.passed()) && rep.passed() && derived_final == Some(ratio(3537, 129_600)),
            "final bounds unaffected (printed and re-derived chains give 3537/129600)".into(),
        ),
    ])
}

type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "1 coefficient derivation",
            "exact",
            Duration::from_secs(1),
            coefficient_derivation,
        ),
        (
            "2 expansion identity",
            "exact",
            Duration::from_secs(1),
            expansion_identity,
        ),
        (
            "3 optimization reproductions",
            "1e-6",
            Duration::from_secs(30),
            optimization_reproductions,
        ),
        (
            "4 positivity certificates",
            "certified",
            Duration::from_secs(10),
            positivity_certificates,
        ),
        (
            "5 theorem reproduction",
            "exact / 1e-6",
            Duration::from_secs(60),
            theorem_reproduction,
        ),
        ("6 lemma property suite", "1e-9", Duration::from_secs(30), lemma_suite),
        (
            "7 explorer consistency",
            "1e-9",
            Duration::from_secs(30),
            explorer_consistency,
        ),
        (
            "8 discrepancy audit",
            "exact",
            Duration::from_secs(60),
            discrepancy_audit,
        ),
    ];
    let mut failures = 0;
    for (name, tol, limit, check) in criteria {
        let t0 = Instant::now();
        let out = check();
        let took = t0.elapsed();
        // runtime limits are for optimised builds; debug builds only report
        let in_time = cfg!(debug_assertions) || took <= limit;
        let ok = out.ok && in_time;
        if !ok {
            failures += 1;
        }
        println!(
            "[{}] {name} (tol {tol}, {:.2}s of {}s): {}{}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            out.detail,
            if in_time { "" } else { " [over time limit]" }
        );
    }
    println!("{} of 8 criteria passed", 8 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
