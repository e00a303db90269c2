use std::process::Command as Process;

use hankel_audit::cli::{parse_args_with_threads, run_with, AuditPayload, MaximizePayload, EXIT_BUDGET, EXIT_FAILED};
use hankel_audit::optimize::{NamedPolynomial, Registry};
use hankel_audit::pipeline::TheoremReport;
use hankel_audit::report::ReportEnvelope;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_hankel-audit");

fn run_bin(args: &[&str]) -> (i32, String, String) {
    let out = Process::new(BIN)
        .args(args)
        .env_remove("HANKEL_AUDIT_THREADS")
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run_lib(args: &[&str], reg: &Registry) -> (i32, String, String) {
    let cmd = parse_args_with_threads(std::iter::once("hankel-audit").chain(args.iter().copied()), None).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(&cmd, reg, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn without_timestamp(json: &str) -> Value {
    let mut v: Value = serde_json::from_str(json).unwrap();
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn reproduce_r_json() {
    let (code, out, _) = run_bin(&["reproduce", "--class", "r", "--format", "json"]);
    assert_eq!(code, 0);
    let env: ReportEnvelope<TheoremReport> = ReportEnvelope::from_json(&out).unwrap();
    assert_eq!(env.schema_version, 1);
    assert_eq!(env.command[1..], ["reproduce", "--class", "r", "--format", "json"]);
    assert_eq!(env.payload.final_value, "207/540");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["payload"]["final"], "207/540");
    assert_eq!(v["payload"]["final_bound"]["exact"]["exact"], "23/60");
}

#[test]
fn maximize_h2_over_e() {
    let (code, out, _) = run_bin(&["maximize", "--poly", "h2", "--region", "triangle-E", "--format", "json"]);
    assert_eq!(code, 0);
    let env: ReportEnvelope<MaximizePayload> = ReportEnvelope::from_json(&out).unwrap();
    let c = &env.payload.certificate;
    assert!((c.upper - 12233.0).abs() <= 1e-6 * 12233.0, "{}", c.upper);
    assert!(c.upper >= 12233.0);
    assert_eq!(c.inflation_ulps, hankel_audit::INFLATION_ULPS);
    assert_eq!(env.payload.edges.len(), 3);
}

#[test]
fn explore_r1_small() {
    let (code, out, _) = run_bin(&[
        "explore",
        "--class",
        "r1",
        "--samples",
        "1000",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["payload"]["result"]["violations"], 0);
    assert_eq!(v["payload"]["result"]["seed"], 7);
}

#[test]
fn explore_csv_is_a_sample_log() {
    let (code, out, _) = run_bin(&["explore", "--class", "r", "--samples", "50", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut rd = csv::Reader::from_reader(out.as_bytes());
    let headers = rd.headers().unwrap().clone();
    assert_eq!(&headers[0], "c1_re");
    assert!(headers.iter().any(|h| h == "h3_abs"));
    // four witnesses plus the samples
    assert_eq!(rd.records().count(), 54);
}

#[test]
fn usage_errors() {
    let (code, _, err) = run_bin(&["reproduce", "--class", "q"]);
    assert_eq!(code, 3);
    assert!(err.contains("possible values"));
    assert_eq!(run_bin(&["bogus"]).0, 3);
    assert_eq!(run_bin(&["maximize", "--poly", "g1", "--region", "nowhere"]).0, 3);
    let (code, out, _) = run_bin(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("reproduce"));
}

#[test]
fn thread_variable_is_validated() {
    let out = Process::new(BIN)
        .args(["lemmas", "--samples", "10"])
        .env("HANKEL_AUDIT_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = Process::new(BIN)
        .args([
            "maximize",
            "--poly",
            "g1",
            "--region",
            "unit-square",
            "--format",
            "json",
        ])
        .env("HANKEL_AUDIT_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let env: ReportEnvelope<MaximizePayload> =
        ReportEnvelope::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let top = 7.0 + 24.0 * 6f64.sqrt();
    assert!(env.payload.certificate.upper >= top && env.payload.certificate.upper - top <= 1e-6);
}

#[test]
fn output_is_deterministic_apart_from_timestamp() {
    for args in [
        &["reproduce", "--class", "r1", "--format", "json"][..],
        &["audit", "--class", "r", "--format", "json"],
        &["explore", "--class", "r", "--samples", "300", "--format", "json"],
        &["lemmas", "--samples", "300", "--format", "json"],
    ] {
        let (a, b) = (run_bin(args), run_bin(args));
        assert_eq!(a.0, 0, "{args:?}: {}", a.2);
        assert_eq!(without_timestamp(&a.1), without_timestamp(&b.1), "{args:?}");
    }
}

#[test]
fn envelopes_round_trip() {
    let (_, out, _) = run_bin(&["audit", "--class", "r1", "--format", "json"]);
    let env: ReportEnvelope<AuditPayload> = ReportEnvelope::from_json(&out).unwrap();
    assert!(env.payload.passed);
    let again: ReportEnvelope<AuditPayload> = ReportEnvelope::from_json(&env.to_json().unwrap()).unwrap();
    assert_eq!(again, env);

    let (_, out, _) = run_bin(&["reproduce", "--class", "r1", "--format", "json"]);
    let env: ReportEnvelope<TheoremReport> = ReportEnvelope::from_json(&out).unwrap();
    let again: ReportEnvelope<TheoremReport> = ReportEnvelope::from_json(&env.to_json().unwrap()).unwrap();
    assert_eq!(again, env);
}

/// A registry whose `name` entry has one coefficient changed.
fn corrupted(name: &str, src: &str) -> Registry {
    let mut reg = Registry::standard();
    reg.insert(NamedPolynomial::parse(name, src, "corrupted fixture").unwrap());
    reg
}

#[test]
fn corrupted_polynomials_fail_verification() {
    // h2 with 13609x instead of 13608x
    let reg = corrupted(
        "h2",
        "1217x^3 + 1140x^2y + 10524xy^2 - 12800y^3 - 2592x^2 - 20736xy + 13609x + 20736y",
    );
    let (code, _, err) = run_lib(&["reproduce", "--class", "r1"], &reg);
    assert_eq!(code, EXIT_FAILED, "{err}");
    assert!(err.contains("FAIL"));
    assert_eq!(run_lib(&["audit", "--class", "r1"], &reg).0, EXIT_FAILED);

    // g1 with 73x instead of 72x
    let reg = corrupted("g1", "7 + 73x - 72x^2 + 144y - 144xy + 12x^2y - 128y^3");
    assert_eq!(run_lib(&["reproduce", "--class", "r"], &reg).0, EXIT_FAILED);
    assert_eq!(run_lib(&["audit", "--class", "r"], &reg).0, EXIT_FAILED);

    // the uncorrupted registry passes
    assert_eq!(run_lib(&["audit", "--class", "r"], &Registry::standard()).0, 0);
}

#[test]
fn budget_exhaustion_exits_2_with_sound_output() {
    let (code, out, _) = run_lib(
        &[
            "maximize",
            "--poly",
            "g1",
            "--region",
            "unit-square",
            "--budget",
            "5",
            "--format",
            "json",
        ],
        &Registry::standard(),
    );
    assert_eq!(code, EXIT_BUDGET);
    let env: ReportEnvelope<MaximizePayload> = ReportEnvelope::from_json(&out).unwrap();
    assert!(!env.payload.certificate.complete);
    assert!(env.payload.certificate.upper >= 7.0 + 24.0 * 6f64.sqrt());
    assert_eq!(
        run_lib(&["audit", "--class", "r", "--budget", "2"], &Registry::standard()).0,
        EXIT_BUDGET
    );
}

#[test]
fn text_reports() {
    let (code, out, _) = run_bin(&["reproduce", "--class", "r"]);
    assert_eq!(code, 0);
    for needle in [
        "case 1 bound",
        "207/540",
        "case 2 bound",
        "final bound",
        "prior bound",
        "0.6448796903",
    ] {
        assert!(out.contains(needle), "missing {needle}:\n{out}");
    }
    let (code, out, _) = run_bin(&["derive", "--class", "r"]);
    assert_eq!(code, 0);
    assert!(out.contains("H3(1)") && !out.contains("DIFFERS"));
}
