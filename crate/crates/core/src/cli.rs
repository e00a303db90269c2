//! Command-line driver.
//!
//! Exit codes: 0 when every check passed or the bound is certified, 1 when a
//! verification item failed, 2 when the branch-and-bound budget ran out (any
//! bound printed is still sound), 3 for invalid input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand as ClapSubcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::classes::{derive_coefficients, hankel2_poly, hankel3_poly, ClassId, PrintedForms};
use crate::error::{Error, Result};
use crate::optimize::{
    bb_maximize_with, edge_maximize, standard_region, Edge, EdgeMaximum, MaxCertificate, Registry, DEFAULT_BUDGET,
    DEFAULT_TOL,
};
use crate::pipeline::{
    audit, lemma_statistics, random_search_with, reproduce_theorem_with, verify_lemmas, AuditItem, LemmaStats,
    PipelineOptions, SampleRecord, SearchResult, TheoremReport, DEFAULT_SAMPLES, DEFAULT_SEED,
};
use crate::report::{ExactValue, ReportEnvelope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

/// Environment variable selecting the branch-and-bound worker count.
pub const THREADS_ENV: &str = "HANKEL_AUDIT_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subcommand {
    Derive,
    Audit,
    Maximize,
    Reproduce,
    Lemmas,
    Explore,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    R,
    R1,
}

impl From<ClassArg> for ClassId {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::R => ClassId::R,
            ClassArg::R1 => ClassId::R1,
        }
    }
}

/// A validated command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Command {
    pub subcommand: Subcommand,
    pub class: Option<ClassId>,
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
    pub budget: usize,
    pub format: Format,
    pub poly: Option<String>,
    pub region: Option<String>,
    pub threads: usize,
    /// Echoed into every report envelope.
    pub argv: Vec<String>,
}

impl Command {
    pub fn new(subcommand: Subcommand) -> Self {
        Self {
            subcommand,
            class: None,
            tol: DEFAULT_TOL,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            budget: DEFAULT_BUDGET,
            format: Format::Text,
            poly: None,
            region: None,
            threads: 0,
            argv: Vec::new(),
        }
    }

    fn options(&self) -> PipelineOptions {
        PipelineOptions {
            tol: self.tol,
            budget: self.budget,
            threads: self.threads,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::InvalidInput(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.budget == 0 {
            return Err(Error::InvalidInput("--budget must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(Error::InvalidInput("--samples must be at least 1".into()));
        }
        let csv_ok = matches!(self.subcommand, Subcommand::Explore | Subcommand::Maximize);
        if self.format == Format::Csv && !csv_ok {
            return Err(Error::InvalidInput(
                "csv output is only available for explore (sample log) and maximize (edge table)".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "hankel-audit",
    version,
    about = "Certified reproduction of third Hankel determinant bounds for bounded-turning functions"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(ClapSubcommand, Debug)]
enum CliCommand {
    /// Coefficient formulas and Hankel polynomials in c1..c4.
    Derive {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact identities, sign conditions and maxima behind a bound.
    Audit {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[command(flatten)]
        bb: BbArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Certified maximum of a registered polynomial over a named region.
    Maximize {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        region: String,
        #[command(flatten)]
        bb: BbArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// End-to-end reproduction of the H3(1) bound.
    Reproduce {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[command(flatten)]
        bb: BbArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sampling test of the Carlson and Prokhorov coefficient lemmas.
    Lemmas {
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Random search for large |H3(1)| against the bound.
    Explore {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct BbArgs {
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Args, Debug)]
struct SamplingArgs {
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// Why argument parsing did not produce a [`Command`].
#[derive(Debug)]
pub enum ParseOutcome {
    /// `--help` or `--version`: print the text and exit 0.
    Info(String),
    /// Usage error: print the text and exit 3.
    Usage(String),
}

impl ParseOutcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            ParseOutcome::Info(_) => EXIT_OK,
            ParseOutcome::Usage(_) => EXIT_INVALID,
        }
    }

    pub fn text(&self) -> &str {
        match self {
            ParseOutcome::Info(s) | ParseOutcome::Usage(s) => s,
        }
    }
}

/// Parse a full argument vector (program name first). The thread count is
/// taken from `HANKEL_AUDIT_THREADS` when set.
pub fn parse_args<I, T>(argv: I) -> std::result::Result<Command, ParseOutcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let threads = std::env::var(THREADS_ENV).ok();
    parse_args_with_threads(argv, threads.as_deref())
}

pub fn parse_args_with_threads<I, T>(argv: I, threads: Option<&str>) -> std::result::Result<Command, ParseOutcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv).map_err(|e| {
        let text = e.render().to_string();
        if e.use_stderr() {
            ParseOutcome::Usage(text)
        } else {
            ParseOutcome::Info(text)
        }
    })?;
    let mut cmd = match cli.command {
        CliCommand::Derive { class, out } => Command {
            class: Some(class.into()),
            format: out.format,
            ..Command::new(Subcommand::Derive)
        },
        CliCommand::Audit { class, bb, out } => Command {
            class: Some(class.into()),
            tol: bb.tol,
            budget: bb.budget,
            format: out.format,
            ..Command::new(Subcommand::Audit)
        },
        CliCommand::Maximize { poly, region, bb, out } => Command {
            poly: Some(poly),
            region: Some(region),
            tol: bb.tol,
            budget: bb.budget,
            format: out.format,
            ..Command::new(Subcommand::Maximize)
        },
        CliCommand::Reproduce { class, bb, out } => Command {
            class: Some(class.into()),
            tol: bb.tol,
            budget: bb.budget,
            format: out.format,
            ..Command::new(Subcommand::Reproduce)
        },
        CliCommand::Lemmas { sampling, out } => Command {
            samples: sampling.samples,
            seed: sampling.seed,
            format: out.format,
            ..Command::new(Subcommand::Lemmas)
        },
        CliCommand::Explore { class, sampling, out } => Command {
            class: Some(class.into()),
            samples: sampling.samples,
            seed: sampling.seed,
            format: out.format,
            ..Command::new(Subcommand::Explore)
        },
    };
    if let Some(t) = threads.map(str::trim).filter(|t| !t.is_empty()) {
        cmd.threads = t.parse().map_err(|_| {
            ParseOutcome::Usage(format!(
                "error: {THREADS_ENV} must be a non-negative integer, got `{t}`\n"
            ))
        })?;
    }
    cmd.argv = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    Ok(cmd)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub n: usize,
    pub formula: String,
    pub printed: String,
    pub matches_printed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalEntry {
    pub name: String,
    /// The functional equals `polynomial / denominator`.
    pub denominator: String,
    pub polynomial: String,
    pub matches_printed: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivePayload {
    pub class: ClassId,
    pub coefficients: Vec<CoefficientEntry>,
    pub functionals: Vec<FunctionalEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditPayload {
    pub class: ClassId,
    pub tol: f64,
    pub budget: usize,
    pub passed: bool,
    pub items: Vec<AuditItem>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximizePayload {
    pub certificate: MaxCertificate<f64>,
    /// Edge maxima for the square and the triangle `E`; empty otherwise.
    pub edges: Vec<EdgeMaximum<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmasPayload {
    pub statistics: LemmaStats,
    pub passed: bool,
    pub items: Vec<AuditItem>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorePayload {
    pub result: SearchResult,
    pub passed: bool,
}

#[derive(Serialize)]
struct EdgeRow<'a> {
    polynomial: &'a str,
    edge: &'a str,
    restricted: &'a str,
    upper: f64,
    lower: f64,
    argmax: Option<f64>,
    boxes: usize,
    complete: bool,
}

/// Run with the standard registry, writing to the process streams.
pub fn run(cmd: &Command) -> i32 {
    let reg = Registry::standard();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(cmd, &reg, &mut stdout.lock(), &mut stderr.lock())
}

/// Run against an explicit registry and output streams.
pub fn run_with(cmd: &Command, reg: &Registry, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = cmd.validate().and_then(|_| dispatch(cmd, reg, out, err));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            error_code(&e)
        }
    }
}

/// Parse and run; the body of `main`.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(argv) {
        Ok(cmd) => run(&cmd),
        Err(outcome) => {
            let code = outcome.exit_code();
            if code == EXIT_OK {
                print!("{}", outcome.text());
            } else {
                eprint!("{}", outcome.text());
            }
            code
        }
    }
}

pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExhausted { .. } => EXIT_BUDGET,
        Error::AuditFailed(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_) => EXIT_FAILED,
        Error::InvalidInput(_)
        | Error::VarSetMismatch { .. }
        | Error::Arity { .. }
        | Error::Parse { .. }
        | Error::Precondition(_)
        | Error::Unknown { .. } => EXIT_INVALID,
    }
}

/// 0 if all items passed, 2 if every failure is a budget shortfall, else 1.
fn items_code(items: &[AuditItem]) -> i32 {
    let failed: Vec<_> = items.iter().filter(|i| !i.passed()).collect();
    if failed.is_empty() {
        EXIT_OK
    } else if failed.iter().all(|i| i.inconclusive()) {
        EXIT_BUDGET
    } else {
        EXIT_FAILED
    }
}

fn class_of(cmd: &Command) -> Result<ClassId> {
    cmd.class
        .ok_or_else(|| Error::InvalidInput(format!("{:?} needs --class", cmd.subcommand)))
}

fn emit_json<T: Serialize>(cmd: &Command, payload: T, out: &mut dyn Write) -> Result<()> {
    let env = ReportEnvelope::new(cmd.argv.clone(), payload);
    writeln!(out, "{}", env.to_json()?)?;
    Ok(())
}

fn dispatch(cmd: &Command, reg: &Registry, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd.subcommand {
        Subcommand::Derive => run_derive(cmd, out),
        Subcommand::Audit => run_audit(cmd, reg, out),
        Subcommand::Maximize => run_maximize(cmd, reg, out),
        Subcommand::Reproduce => run_reproduce(cmd, reg, out, err),
        Subcommand::Lemmas => run_lemmas(cmd, out),
        Subcommand::Explore => run_explore(cmd, out),
    }
}

fn run_derive(cmd: &Command, out: &mut dyn Write) -> Result<i32> {
    let class = class_of(cmd)?;
    let formulas = derive_coefficients(class);
    let printed = PrintedForms::for_class(class);
    let coefficients: Vec<_> = (2..=5)
        .map(|n| {
            let p = printed.coefficient(n);
            CoefficientEntry {
                n,
                formula: formulas.a(n).to_string(),
                printed: printed.coefficient_texts[n - 2].to_string(),
                matches_printed: *formulas.a(n) == p,
            }
        })
        .collect();
    let h3 = hankel3_poly(&formulas);
    let mut functionals = vec![FunctionalEntry {
        name: "H3(1)".into(),
        denominator: h3.denominator().to_string(),
        polynomial: h3.poly.to_string(),
        matches_printed: Some(h3.denominator() == printed.denominator && h3.poly == printed.expansion()),
    }];
    if class == ClassId::R {
        let h2 = hankel2_poly(&formulas);
        functionals.push(FunctionalEntry {
            name: "H2(2)".into(),
            denominator: h2.denominator().to_string(),
            polynomial: h2.poly.to_string(),
            matches_printed: None,
        });
    }
    let ok =
        coefficients.iter().all(|c| c.matches_printed) && functionals.iter().all(|f| f.matches_printed != Some(false));
    let payload = DerivePayload {
        class,
        coefficients,
        functionals,
    };
    match cmd.format {
        Format::Json => emit_json(cmd, &payload, out)?,
        _ => {
            let mark = |b: bool| if b { "matches printed" } else { "DIFFERS from printed" };
            writeln!(out, "class {class}")?;
            for c in &payload.coefficients {
                writeln!(out, "  a{} = {}    [{}]", c.n, c.formula, mark(c.matches_printed))?;
            }
            for f in &payload.functionals {
                let m = f
                    .matches_printed
                    .map(|b| format!("    [{}]", mark(b)))
                    .unwrap_or_default();
                writeln!(out, "  {} = ({}) / {}{m}", f.name, f.polynomial, f.denominator)?;
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn write_items(items: &[AuditItem], out: &mut dyn Write) -> Result<()> {
    for i in items {
        writeln!(out, "{i}")?;
    }
    let failed = items.iter().filter(|i| !i.passed()).count();
    writeln!(out, "{} items, {} failed", items.len(), failed)?;
    Ok(())
}

fn run_audit(cmd: &Command, reg: &Registry, out: &mut dyn Write) -> Result<i32> {
    let class = class_of(cmd)?;
    let items = audit(class, reg, &cmd.options());
    let code = items_code(&items);
    let payload = AuditPayload {
        class,
        tol: cmd.tol,
        budget: cmd.budget,
        passed: code == EXIT_OK,
        items,
    };
    match cmd.format {
        Format::Json => emit_json(cmd, &payload, out)?,
        _ => write_items(&payload.items, out)?,
    }
    Ok(code)
}

fn edges_for(region: &str) -> &'static [Edge] {
    match region {
        "unit-square" => &Edge::SQUARE,
        "triangle-E" => &[Edge::Y0, Edge::X0, Edge::Hypotenuse],
        _ => &[],
    }
}

fn run_maximize(cmd: &Command, reg: &Registry, out: &mut dyn Write) -> Result<i32> {
    let name = cmd
        .poly
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("maximize needs --poly".into()))?;
    let region_name = cmd
        .region
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("maximize needs --region".into()))?;
    let p = reg.get(name)?;
    let region = standard_region::<f64>(region_name)?;
    let certificate = bb_maximize_with(p, &region, &cmd.options().bb())?;
    let edges = edges_for(region_name)
        .iter()
        .map(|&e| edge_maximize(p, e, cmd.tol, cmd.budget))
        .collect::<Result<Vec<_>>>()?;
    let complete = certificate.complete && edges.iter().all(|e| e.certificate.complete);
    let payload = MaximizePayload { certificate, edges };
    match cmd.format {
        Format::Json => emit_json(cmd, &payload, out)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for e in &payload.edges {
                let c = &e.certificate;
                w.serialize(EdgeRow {
                    polynomial: name,
                    edge: e.edge.label(),
                    restricted: &e.restricted,
                    upper: c.upper,
                    lower: c.lower,
                    argmax: c
                        .witness
                        .map(|(x, y)| if matches!(e.edge, Edge::X0 | Edge::X1) { y } else { x }),
                    boxes: c.boxes,
                    complete: c.complete,
                })?;
            }
            w.flush()?;
        }
        Format::Text => {
            let c = &payload.certificate;
            writeln!(
                out,
                "max of {} = {} over {} ({})",
                c.polynomial, c.expression, c.region, c.region_description
            )?;
            writeln!(out, "  certified upper  {}", c.upper)?;
            writeln!(out, "  witness value    {}", c.lower)?;
            if let Some((x, y)) = c.witness {
                writeln!(out, "  witness          ({x}, {y})")?;
            }
            writeln!(
                out,
                "  boxes            {} of {}{}",
                c.boxes,
                c.budget,
                if c.complete { "" } else { " (budget exhausted)" }
            )?;
            if let Some(note) = &c.closure_note {
                writeln!(out, "  note             {note}")?;
            }
            for e in &payload.edges {
                writeln!(
                    out,
                    "  edge {:<6} {:<40} max {}",
                    e.edge.label(),
                    e.restricted,
                    e.certificate.upper
                )?;
            }
        }
    }
    Ok(if complete { EXIT_OK } else { EXIT_BUDGET })
}

fn run_reproduce(cmd: &Command, reg: &Registry, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let class = class_of(cmd)?;
    let report = reproduce_theorem_with(class, reg, &cmd.options())?;
    let code = if report.passed() {
        EXIT_OK
    } else {
        for i in report.audits.iter().filter(|i| !i.passed()) {
            writeln!(err, "{i}")?;
        }
        match items_code(&report.audits) {
            EXIT_OK => EXIT_FAILED,
            c => c,
        }
    };
    match cmd.format {
        Format::Json => emit_json(cmd, &report, out)?,
        _ => out.write_all(theorem_table(&report).as_bytes())?,
    }
    Ok(code)
}

fn exact_cell(e: &ExactValue) -> String {
    format!("{} = {:.10}", e.display(), e.approx)
}

/// The report as a plain-text table.
pub fn theorem_table(r: &TheoremReport) -> String {
    let mut s = String::new();
    let row = |s: &mut String, k: &str, v: String| {
        let _ = writeln!(s, "{k:<34} {v}");
    };
    let _ = writeln!(
        s,
        "|H3(1)| bound for class {}  (tol {:e}, budget {})",
        r.class, r.tol, r.budget
    );
    row(&mut s, "case 1 condition", r.case1.condition.clone());
    if let Some(b) = &r.case1.bound {
        row(&mut s, "case 1 bound", exact_cell(b));
    }
    row(&mut s, "case 2 condition", r.case2.profile.condition.clone());
    row(&mut s, "case 2 maximised", r.case2.polynomial.clone());
    row(&mut s, "case 2 region", r.case2.region.clone());
    row(
        &mut s,
        "case 2 certified maximum",
        format!("{}", r.case2.certificate.upper),
    );
    row(&mut s, "case 2 bound", format!("{:.10}", r.case2.bound));
    row(
        &mut s,
        "case 2 printed value",
        format!(
            "{} = {:.10}",
            r.case2.printed_value.expression, r.case2.printed_value.approx
        ),
    );
    let final_cell = match &r.final_bound.exact {
        Some(e) => exact_cell(e),
        None => format!("{:.10}", r.final_bound.upper),
    };
    row(
        &mut s,
        "final bound",
        format!("{final_cell} (case {})", r.final_bound.dominant_case),
    );
    row(&mut s, "printed final bound", exact_cell(&r.printed_final));
    row(
        &mut s,
        "re-derived case 2 bound",
        format!("{:.10}", r.derived.case2_bound),
    );
    if let Some(p) = &r.comparison.prior_bound {
        row(&mut s, "prior bound", format!("{} = {:.10}", p.expression, p.approx));
    }
    if let Some(h) = &r.comparison.h2_sharp {
        row(&mut s, "sharp |H2(2)| bound", exact_cell(h));
    }
    let failed = r.audits.iter().filter(|i| !i.passed()).count();
    let info = r
        .audits
        .iter()
        .filter(|i| i.status == crate::pipeline::AuditStatus::Info)
        .count();
    row(
        &mut s,
        "audit items",
        format!("{} ({failed} failed, {info} info)", r.audits.len()),
    );
    for i in r
        .audits
        .iter()
        .filter(|i| i.status != crate::pipeline::AuditStatus::Pass)
    {
        let _ = writeln!(s, "  {i}");
    }
    s
}

fn run_lemmas(cmd: &Command, out: &mut dyn Write) -> Result<i32> {
    let items = verify_lemmas(cmd.samples, cmd.seed)?;
    let code = items_code(&items);
    match cmd.format {
        Format::Json => {
            let payload = LemmasPayload {
                statistics: lemma_statistics(cmd.samples, cmd.seed)?,
                passed: code == EXIT_OK,
                items,
            };
            emit_json(cmd, &payload, out)?
        }
        _ => write_items(&items, out)?,
    }
    Ok(code)
}

fn run_explore(cmd: &Command, out: &mut dyn Write) -> Result<i32> {
    let class = class_of(cmd)?;
    let result = if cmd.format == Format::Csv {
        let mut w = csv::Writer::from_writer(&mut *out);
        let mut failure = None;
        let r = random_search_with(class, cmd.samples, cmd.seed, |rec: &SampleRecord| {
            if failure.is_none() {
                failure = w.serialize(rec).err();
            }
        })?;
        if let Some(e) = failure {
            return Err(e.into());
        }
        w.flush()?;
        r
    } else {
        random_search_with(class, cmd.samples, cmd.seed, |_| {})?
    };
    let h2_violations = result.h2.as_ref().map_or(0, |h| h.violations);
    let passed = result.violations == 0 && h2_violations == 0;
    match cmd.format {
        Format::Json => emit_json(cmd, &ExplorePayload { result, passed }, out)?,
        Format::Csv => {}
        Format::Text => {
            writeln!(out, "class {}: {} samples, seed {}", class, result.samples, result.seed)?;
            writeln!(out, "  bound            {}", exact_cell(&result.bound))?;
            writeln!(
                out,
                "  best |H3(1)|     {:.12} ({})",
                result.best_value, result.best_sample.provenance
            )?;
            writeln!(out, "  violations       {}", result.violations)?;
            for (name, v) in &result.witness_values {
                writeln!(out, "  witness {name:<24} {v:.12}")?;
            }
            if let Some(h) = &result.h2 {
                writeln!(
                    out,
                    "  best |H2(2)|     {:.12} (bound {}, at z^2 {:.12}, violations {})",
                    h.best_value,
                    h.bound.display(),
                    h.at_z_squared,
                    h.violations
                )?;
            }
        }
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> std::result::Result<Command, ParseOutcome> {
        parse_args_with_threads(std::iter::once("hankel-audit").chain(args.iter().copied()), None)
    }

    #[test]
    fn reproduce_defaults() {
        let c = parse(&["reproduce", "--class", "r"]).unwrap();
        assert_eq!(c.subcommand, Subcommand::Reproduce);
        assert_eq!(c.class, Some(ClassId::R));
        assert_eq!((c.tol, c.seed, c.samples, c.budget), (1e-6, 42, 100_000, 1_000_000));
        assert_eq!(c.format, Format::Text);
        assert_eq!(c.threads, 0);
    }

    #[test]
    fn maximize_flags() {
        let c = parse(&["maximize", "--poly", "g1", "--region", "unit-square", "--tol", "1e-8"]).unwrap();
        assert_eq!(c.subcommand, Subcommand::Maximize);
        assert_eq!(c.poly.as_deref(), Some("g1"));
        assert_eq!(c.region.as_deref(), Some("unit-square"));
        assert_eq!(c.tol, 1e-8);
    }

    #[test]
    fn usage_errors_exit_3() {
        for args in [
            &["reproduce", "--class", "q"][..],
            &["frobnicate"],
            &["reproduce", "--class", "r", "--bogus"],
            &["explore"],
            &[],
        ] {
            let e = parse(args).unwrap_err();
            assert_eq!(e.exit_code(), EXIT_INVALID, "{args:?}");
        }
        assert_eq!(parse(&["--help"]).unwrap_err().exit_code(), EXIT_OK);
        assert_eq!(
            parse_args_with_threads(["hankel-audit", "lemmas"], Some("many"))
                .unwrap_err()
                .exit_code(),
            EXIT_INVALID
        );
        assert_eq!(
            parse_args_with_threads(["hankel-audit", "lemmas"], Some("4"))
                .unwrap()
                .threads,
            4
        );
    }

    #[test]
    fn invalid_values_exit_3() {
        let reg = Registry::standard();
        let (mut o, mut e) = (Vec::new(), Vec::new());
        for args in [
            &["maximize", "--poly", "nope", "--region", "unit-square"][..],
            &["maximize", "--poly", "g1", "--region", "nowhere"],
            &["reproduce", "--class", "r", "--tol", "0"],
            &["lemmas", "--samples", "0"],
            &["audit", "--class", "r", "--format", "csv"],
        ] {
            let c = parse(args).unwrap();
            assert_eq!(run_with(&c, &reg, &mut o, &mut e), EXIT_INVALID, "{args:?}");
        }
    }

    #[test]
    fn maximize_edge_table_csv() {
        let c = parse(&["maximize", "--poly", "g1", "--region", "unit-square", "--format", "csv"]).unwrap();
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run_with(&c, &Registry::standard(), &mut o, &mut e), EXIT_OK);
        let text = String::from_utf8(o).unwrap();
        let mut rows = csv::Reader::from_reader(text.as_bytes());
        let uppers: Vec<(String, f64)> = rows
            .records()
            .map(|r| {
                let r = r.unwrap();
                (r[1].to_string(), r[3].parse().unwrap())
            })
            .collect();
        assert_eq!(uppers.len(), 4);
        let get = |k: &str| uppers.iter().find(|(e, _)| e == k).unwrap().1;
        assert!((get("y=0") - 25.0).abs() < 1e-6);
        assert!((get("y=1") - 23.0).abs() < 1e-6);
        assert!((get("x=1") - (7.0 + 2f64.sqrt())).abs() < 1e-6);
    }

    #[test]
    fn tiny_budget_exits_2() {
        let c = parse(&["maximize", "--poly", "g1", "--region", "unit-square", "--budget", "3"]).unwrap();
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run_with(&c, &Registry::standard(), &mut o, &mut e), EXIT_BUDGET);
        let c = parse(&["reproduce", "--class", "r", "--budget", "3"]).unwrap();
        assert_eq!(run_with(&c, &Registry::standard(), &mut o, &mut e), EXIT_BUDGET);
    }
}
