//! Command-line front end.
//!
//! Human-readable output goes to `out`, diagnostics to `err`. With
//! `--records <path>` every query also writes one JSON object per line.
//! Exit codes: 0 success, 1 domain error, 2 syntax or usage error, 3 coset
//! enumeration ran out of budget.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::classifier::{CaseLabel, ClassifierContext, ClassifierError, HandleKind};
use crate::enumeration::{enumerate, EnumerationError, EnumerationLimits};
use crate::input::{parse_input, InputError, SurfaceKnotInput};
use crate::quotient::{quotient_separate, Separation, SeparationOptions};
use crate::selftest::run_selftest;
use crate::validation::{validate, CheckStatus};
use crate::word::Word;

/// Environment variable overriding the default live-coset cap.
pub const MAX_COSETS_ENV: &str = "HANDLE_COSET_MAX_COSETS";

const SELFTEST_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(
    name = "skg",
    version,
    about = "Classify cords and 1-handles on surface-knots"
)]
struct Cli {
    /// Write newline-delimited JSON records to this file.
    #[arg(long, global = true, value_name = "PATH")]
    records: Option<PathBuf>,
    /// Include wall-clock time in the output.
    #[arg(long, global = true)]
    timing: bool,
    /// Cap on live cosets during enumeration.
    #[arg(long, global = true, value_name = "N")]
    max_cosets: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct KindArgs {
    /// 1 or 2 for orientable surfaces, 3 for non-orientable ones.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    case: u8,
    /// The handle core carries an orientation.
    #[arg(long)]
    core_oriented: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the side conditions on P, P+ and n.
    Validate { file: PathBuf },
    /// Enumerate the cosets of P or P+.
    Enumerate {
        file: PathBuf,
        #[arg(long, default_value = "P", value_parser = ["P", "P+"])]
        subgroup: String,
    },
    /// Print the invariant of a handle.
    Invariant {
        file: PathBuf,
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        cord: String,
    },
    /// Decide whether two handles are equivalent.
    Equiv {
        file: PathBuf,
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long, num_args = 1)]
        cord: Vec<String>,
    },
    /// List every equivalence class with a representative.
    Classes {
        file: PathBuf,
        #[command(flatten)]
        kind: KindArgs,
    },
    /// Decide whether a candidate value is the invariant of some handle.
    ImageCheck {
        file: PathBuf,
        #[command(flatten)]
        kind: KindArgs,
        /// Words separated by `;`, one per double coset.
        #[arg(long)]
        candidate: String,
    },
    /// Try to tell two handles apart in a finite quotient.
    Separate {
        file: PathBuf,
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long, num_args = 1)]
        cord: Vec<String>,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[arg(long, default_value_t = 64)]
        max_homs: usize,
    },
    /// Run the built-in oracle suite.
    Selftest,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Input { path: String, source: InputError },
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input { .. } => 2,
            CliError::Classifier(ClassifierError::CandidateShape { .. }) => 2,
            CliError::Classifier(ClassifierError::Enumeration(e)) | CliError::Enumeration(e) => {
                if matches!(e, EnumerationError::ResourceExhausted { .. }) {
                    3
                } else {
                    1
                }
            }
            CliError::Domain(_) | CliError::Classifier(_) => 1,
        }
    }
}

struct Session<'a> {
    out: &'a mut dyn Write,
    records: Vec<Value>,
    timing: bool,
    started: Instant,
    limits: EnumerationLimits,
}

impl Session<'_> {
    fn say(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", line.as_ref());
    }

    fn record(&mut self, mut value: Value) {
        if self.timing {
            if let Value::Object(m) = &mut value {
                m.insert(
                    "elapsed_ms".into(),
                    json!(self.started.elapsed().as_secs_f64() * 1e3),
                );
            }
        }
        self.records.push(value);
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let limits = match limits(cli.max_cosets) {
        Ok(l) => l,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let mut session = Session {
        out,
        records: Vec::new(),
        timing: cli.timing,
        started: Instant::now(),
        limits,
    };
    let echo = echo(&cli.command);
    let result = dispatch(&cli.command, echo.clone(), &mut session);
    let code = match &result {
        Ok(code) => *code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let mut record = echo;
            record.insert("error".into(), json!(e.to_string()));
            record.insert("exit".into(), json!(e.exit_code()));
            session.record(Value::Object(record));
            e.exit_code()
        }
    };
    if let Some(path) = &cli.records {
        if let Err(e) = write_records(path, &session.records) {
            let _ = writeln!(
                err,
                "error: cannot write records to {}: {e}",
                path.display()
            );
            return code.max(1);
        }
    }
    code
}

fn write_records(path: &Path, records: &[Value]) -> std::io::Result<()> {
    let mut text = String::new();
    for r in records {
        text.push_str(&r.to_string());
        text.push('\n');
    }
    std::fs::write(path, text)
}

fn limits(flag: Option<usize>) -> Result<EnumerationLimits, CliError> {
    let cap = match flag {
        Some(n) => Some(n),
        None => match std::env::var(MAX_COSETS_ENV) {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
                CliError::Usage(format!(
                    "{MAX_COSETS_ENV} must be a positive integer, got `{v}`"
                ))
            })?),
            Err(_) => None,
        },
    };
    match cap {
        Some(n) => EnumerationLimits::with_max_live(n).map_err(|e| CliError::Usage(e.to_string())),
        None => Ok(EnumerationLimits::default()),
    }
}

fn label_for(path: &Path, input: &SurfaceKnotInput) -> String {
    if input.label.is_empty() {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    } else {
        input.label.clone()
    }
}

fn load(path: &Path) -> Result<SurfaceKnotInput, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_input(&text).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}

fn kind_of(args: &KindArgs) -> HandleKind {
    HandleKind::new(
        CaseLabel::from_number(args.case).expect("clap restricts the range"),
        args.core_oriented,
    )
}

fn words(input: &SurfaceKnotInput, texts: &[String]) -> Result<Vec<Word>, CliError> {
    texts
        .iter()
        .map(|t| {
            input
                .presentation
                .word(t)
                .map_err(|source| CliError::Input {
                    path: "word".into(),
                    source,
                })
        })
        .collect()
}

fn check_case(input: &SurfaceKnotInput, kind: HandleKind) -> Result<(), CliError> {
    if kind.case.requires_orientable() != input.surface_orientable {
        return Err(ClassifierError::CaseMismatch {
            case: kind.case.number(),
            orientable_required: kind.case.requires_orientable(),
        }
        .into());
    }
    Ok(())
}

fn echo(cmd: &Command) -> Map<String, Value> {
    let mut m = Map::new();
    let (name, file, kind, words): (&str, Option<&PathBuf>, Option<&KindArgs>, Vec<String>) =
        match cmd {
            Command::Validate { file } => ("validate", Some(file), None, vec![]),
            Command::Enumerate { file, .. } => ("enumerate", Some(file), None, vec![]),
            Command::Invariant { file, kind, cord } => {
                ("invariant", Some(file), Some(kind), vec![cord.clone()])
            }
            Command::Equiv { file, kind, cord } => ("equiv", Some(file), Some(kind), cord.clone()),
            Command::Classes { file, kind } => ("classes", Some(file), Some(kind), vec![]),
            Command::ImageCheck {
                file,
                kind,
                candidate,
            } => (
                "image-check",
                Some(file),
                Some(kind),
                candidate.split(';').map(|s| s.trim().to_string()).collect(),
            ),
            Command::Separate {
                file, kind, cord, ..
            } => ("separate", Some(file), Some(kind), cord.clone()),
            Command::Selftest => ("selftest", None, None, vec![]),
        };
    m.insert("command".into(), json!(name));
    if let Some(f) = file {
        let label = std::fs::read_to_string(f)
            .ok()
            .and_then(|t| parse_input(&t).ok())
            .map(|i| label_for(f, &i))
            .unwrap_or_else(|| {
                f.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default()
            });
        m.insert("input".into(), json!(label));
    }
    if let Some(k) = kind {
        m.insert("case".into(), json!(k.case));
        m.insert("core_oriented".into(), json!(k.core_oriented));
    }
    if !words.is_empty() {
        m.insert("words".into(), json!(words));
    }
    m
}

fn dispatch(cmd: &Command, base: Map<String, Value>, s: &mut Session) -> Result<i32, CliError> {
    match cmd {
        Command::Validate { file } => cmd_validate(file, base, s),
        Command::Enumerate { file, subgroup } => cmd_enumerate(file, subgroup, base, s),
        Command::Invariant { file, kind, cord } => {
            let (ctx, kind) = context(file, kind, s)?;
            let g = &words(ctx.input(), std::slice::from_ref(cord))?[0];
            let inv = ctx.handle_invariant(kind, g)?;
            s.say(format!("{}: {}", describe(kind), ctx.render(&inv)));
            let mut r = base;
            r.insert("result".into(), ctx.invariant_json(&inv));
            r.insert("resources".into(), resources(&ctx));
            s.record(Value::Object(r));
            Ok(0)
        }
        Command::Equiv { file, kind, cord } => {
            let [c1, c2] = two(cord)?;
            let (ctx, kind) = context(file, kind, s)?;
            let ws = words(ctx.input(), &[c1, c2])?;
            let eq = ctx.equivalent(kind, &ws[0], &ws[1])?;
            let verdict = if eq { "equivalent" } else { "inequivalent" };
            s.say(verdict);
            let mut r = base;
            r.insert("result".into(), json!(verdict));
            r.insert(
                "invariants".into(),
                json!([
                    ctx.invariant_json(&ctx.handle_invariant(kind, &ws[0])?),
                    ctx.invariant_json(&ctx.handle_invariant(kind, &ws[1])?)
                ]),
            );
            r.insert("resources".into(), resources(&ctx));
            s.record(Value::Object(r));
            Ok(0)
        }
        Command::Classes { file, kind } => {
            let (ctx, kind) = context(file, kind, s)?;
            let classes = ctx.enumerate_classes(kind)?;
            s.say(format!("{}: {} classes", describe(kind), classes.len()));
            let mut list = Vec::new();
            for (i, c) in classes.iter().enumerate() {
                let rep = ctx.input().presentation.render(&c.representative);
                s.say(format!(
                    "  [{}] {}  (cord {})",
                    i + 1,
                    ctx.render(&c.invariant),
                    rep
                ));
                list.push(
                    json!({ "representative": rep, "invariant": ctx.invariant_json(&c.invariant) }),
                );
            }
            let witness = ctx.nonsurjectivity_witness(kind)?;
            match &witness {
                Some(w) => s.say(format!("  not in the image: {}", ctx.render(w))),
                None => s.say("  every value is realized"),
            }
            let mut r = base;
            r.insert(
                "result".into(),
                json!({ "count": classes.len(), "classes": list }),
            );
            r.insert(
                "nonsurjectivity_witness".into(),
                witness
                    .as_ref()
                    .map_or(Value::Null, |w| ctx.invariant_json(w)),
            );
            r.insert("resources".into(), resources(&ctx));
            s.record(Value::Object(r));
            Ok(0)
        }
        Command::ImageCheck {
            file,
            kind,
            candidate,
        } => {
            let (ctx, kind) = context(file, kind, s)?;
            let texts: Vec<String> = candidate.split(';').map(|t| t.trim().to_string()).collect();
            let ws = words(ctx.input(), &texts)?;
            let cand = ctx.candidate_from_words(kind, &ws)?;
            let member = ctx.image_member(kind, &cand)?;
            let verdict = if member { "in-image" } else { "not-in-image" };
            s.say(format!("{verdict}: {}", ctx.render(&cand)));
            let mut r = base;
            r.insert("result".into(), json!(verdict));
            r.insert("candidate".into(), ctx.invariant_json(&cand));
            r.insert("resources".into(), resources(&ctx));
            s.record(Value::Object(r));
            Ok(0)
        }
        Command::Separate {
            file,
            kind,
            cord,
            max_degree,
            max_homs,
        } => {
            let [c1, c2] = two(cord)?;
            let input = load(file)?;
            let kind = kind_of(kind);
            check_case(&input, kind)?;
            let ws = words(&input, &[c1, c2])?;
            let options = SeparationOptions {
                max_degree: *max_degree,
                max_homs: *max_homs,
                ..SeparationOptions::default()
            };
            let verdict = quotient_separate(&input, kind, &ws[0], &ws[1], options)?;
            let mut r = base;
            match verdict {
                Separation::Distinct { degree, assignment } => {
                    let images = assignment.describe(input.presentation.generators());
                    s.say(format!("distinct (degree {degree}: {images})"));
                    r.insert(
                        "result".into(),
                        json!({ "verdict": "distinct", "degree": degree, "assignment": assignment }),
                    );
                }
                Separation::Unknown {
                    homomorphisms_tried,
                    truncated,
                } => {
                    let note = if truncated { ", search truncated" } else { "" };
                    s.say(format!(
                        "unknown ({homomorphisms_tried} homomorphisms tried{note})"
                    ));
                    r.insert(
                        "result".into(),
                        json!({ "verdict": "unknown", "homomorphisms_tried": homomorphisms_tried, "truncated": truncated }),
                    );
                }
            }
            s.record(Value::Object(r));
            Ok(0)
        }
        Command::Selftest => {
            let results = run_selftest(SELFTEST_SEED);
            let mut failed = 0;
            for p in &results {
                let tag = if p.passed { "PASS" } else { "FAIL" };
                failed += usize::from(!p.passed);
                s.say(format!("{tag} {} ({})", p.name, p.detail));
                let mut r = base.clone();
                r.insert("property".into(), json!(p.name));
                r.insert("passed".into(), json!(p.passed));
                r.insert("detail".into(), json!(p.detail));
                s.record(Value::Object(r));
            }
            s.say(format!(
                "{} of {} properties passed",
                results.len() - failed,
                results.len()
            ));
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

fn two(cords: &[String]) -> Result<[String; 2], CliError> {
    match cords {
        [a, b] => Ok([a.clone(), b.clone()]),
        _ => Err(CliError::Usage(format!(
            "expected exactly two --cord values, got {}",
            cords.len()
        ))),
    }
}

fn describe(kind: HandleKind) -> String {
    format!(
        "case {}, {} core",
        kind.case.number(),
        if kind.core_oriented {
            "oriented"
        } else {
            "unoriented"
        }
    )
}

fn context(
    file: &Path,
    args: &KindArgs,
    s: &Session,
) -> Result<(ClassifierContext, HandleKind), CliError> {
    let input = load(file)?;
    let kind = kind_of(args);
    check_case(&input, kind)?;
    Ok((ClassifierContext::build(input, s.limits)?, kind))
}

fn resources(ctx: &ClassifierContext) -> Value {
    let mut m = Map::new();
    m.insert("p".into(), json!(ctx.p_space().table().stats()));
    if let Some(pp) = ctx.p_plus_space() {
        m.insert("p_plus".into(), json!(pp.table().stats()));
    }
    Value::Object(m)
}

fn cmd_validate(file: &Path, base: Map<String, Value>, s: &mut Session) -> Result<i32, CliError> {
    let input = load(file)?;
    let report = validate(&input, s.limits);
    for c in &report.checks {
        let tag = match c.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Unknown => "unknown",
        };
        s.say(format!("{tag:>7}  {}: {}", c.name, c.detail));
    }
    let verdict = if report.has_failures() {
        "fail"
    } else if report.is_passing() {
        "pass"
    } else {
        "unknown"
    };
    s.say(format!("validation: {verdict}"));
    let mut r = base;
    r.insert("result".into(), json!(verdict));
    r.insert("checks".into(), json!(report.checks));
    s.record(Value::Object(r));
    if report.has_failures() {
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| c.name)
            .collect();
        return Err(CliError::Domain(format!(
            "validation failed: {}",
            failing.join(", ")
        )));
    }
    Ok(0)
}

fn cmd_enumerate(
    file: &Path,
    subgroup: &str,
    base: Map<String, Value>,
    s: &mut Session,
) -> Result<i32, CliError> {
    let input = load(file)?;
    let gens = match subgroup {
        "P+" => input
            .p_plus_generators
            .as_ref()
            .ok_or_else(|| CliError::Domain("the input has no P+ (orientable surface)".into()))?,
        _ => &input.p_generators,
    };
    let table = enumerate(&input.presentation, gens, s.limits)?;
    let stats = table.stats();
    s.say(format!("subgroup {subgroup}: index {}", table.index()));
    s.say(format!("cosets defined: {}", stats.total_defined));
    s.say(format!("max live cosets: {}", stats.max_live));
    s.say(format!("coincidences: {}", stats.coincidences));
    let mut r = base;
    r.insert("subgroup".into(), json!(subgroup));
    r.insert("result".into(), json!({ "index": table.index() }));
    r.insert("resources".into(), json!(stats));
    s.record(Value::Object(r));
    Ok(0)
}
