//! The `tauforms` command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{Map, Value};

use super::eval::{eval_expr, Grade};
use super::parser::parse;
use crate::forms::{sigma_table, tau_table, FormsError, GradedForm, TauStrategy};
use crate::identities::audit::{AuditEntry, AuditReport};
use crate::identities::{
    audit_all_with, builtin_registry, certify, certify_series, check_all_congruences,
    check_congruence_with, verify_range_with, verify_series, EvalContext, Status,
    VerificationReport,
};
use crate::par::{configure_threads, Execution};
use crate::qseries::Rational;
use crate::quasidecomp::decompose;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

const TOOL_VERSION: &str = concat!("tauforms ", env!("CARGO_PKG_VERSION"));

#[derive(Parser, Debug)]
#[command(
    name = "tauforms",
    version,
    about = "Exact modular-form arithmetic and tau identities"
)]
struct Cli {
    /// Worker threads for parallel sweeps (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print tau(n); without --strategy all strategies must agree.
    Tau {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_strategy)]
        strategy: Option<TauStrategy>,
    },
    /// Write tau(1..=max-n).
    TauTable {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[arg(long, value_parser = parse_strategy)]
        strategy: Option<TauStrategy>,
    },
    /// Check identities at every n up to --max-n.
    Verify {
        #[arg(long, default_value = "all")]
        identity: String,
        #[arg(long, default_value_t = 500)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
    },
    /// Certify identities by decomposing the difference of both sides.
    Certify {
        #[arg(long, default_value = "all")]
        identity: String,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
    },
    /// Verify and certify the whole registry, refitting what fails.
    Audit {
        #[arg(long, default_value_t = 500)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
    },
    /// Check the congruences at every admissible n up to --max-n.
    Congruences {
        #[arg(long, default_value_t = 500)]
        max_n: usize,
        #[arg(long)]
        id: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
    },
    /// Coordinates of an expression over the quasimodular generators.
    Decompose {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long, default_value_t = 64)]
        trunc: usize,
    },
    /// Evaluate an expression to a q-expansion.
    Eval {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 64)]
        trunc: usize,
        #[arg(long)]
        coeff: Option<usize>,
    },
    /// Time tau-table per strategy.
    Bench {
        #[arg(long, value_delimiter = ',', value_parser = parse_strategy, default_value = "product,eisenstein,vdp,niebur")]
        strategies: Vec<TauStrategy>,
        #[arg(long, default_value_t = 500)]
        max_n: usize,
        #[arg(long, default_value_t = 5)]
        repeat: usize,
    },
    /// Write sigma_k(1..=max-n) as CSV.
    Sigma {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_strategy(s: &str) -> Result<TauStrategy, String> {
    s.parse().map_err(|e: FormsError| e.to_string())
}

/// Outcome of a subcommand: text for stdout and an exit code.
struct Outcome {
    stdout: String,
    code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            code: EXIT_OK,
        }
    }
}

/// A failure with its exit code, reported on stderr.
struct CliError {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn failure(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_FAILURE,
        message: message.into(),
    }
}

/// Runs the command line and returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("warning: --threads ignored: {e}");
    }
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            out.code
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn run(command: Command) -> Result<Outcome, CliError> {
    let exec = Execution::Parallel;
    match command {
        Command::Tau { n, strategy } => cmd_tau(n, strategy, exec),
        Command::TauTable {
            max_n,
            out,
            format,
            strategy,
        } => cmd_tau_table(max_n, &out, format, strategy, exec),
        Command::Verify {
            identity,
            max_n,
            format,
        } => cmd_verify(&identity, max_n, format, exec),
        Command::Certify { identity, format } => cmd_certify(&identity, format, exec),
        Command::Audit { max_n, format } => cmd_audit(max_n, format, exec),
        Command::Congruences { max_n, id, format } => {
            cmd_congruences(max_n, id.as_deref(), format, exec)
        }
        Command::Decompose {
            expr,
            weight,
            depth,
            trunc,
        } => cmd_decompose(&expr, weight, depth, trunc),
        Command::Eval { expr, trunc, coeff } => cmd_eval(&expr, trunc, coeff),
        Command::Bench {
            strategies,
            max_n,
            repeat,
        } => cmd_bench(&strategies, max_n, repeat, exec),
        Command::Sigma { k, max_n, out } => cmd_sigma(k, max_n, &out),
    }
}

fn require_positive(name: &str, v: usize) -> Result<(), CliError> {
    if v == 0 {
        return Err(usage(format!("--{name} must be at least 1")));
    }
    Ok(())
}

/// `tau(0..=max_n)` by one strategy, or the agreed table of all four.
fn tau_values(
    max_n: usize,
    strategy: Option<TauStrategy>,
    exec: Execution,
) -> Result<Vec<BigInt>, CliError> {
    match strategy {
        Some(s) => Ok(tau_table(max_n, s, exec)),
        None => crate::forms::tau_consensus(max_n, exec).map_err(|e| CliError {
            code: EXIT_INCONSISTENT,
            message: e.to_string(),
        }),
    }
}

fn cmd_tau(n: usize, strategy: Option<TauStrategy>, exec: Execution) -> Result<Outcome, CliError> {
    require_positive("n", n)?;
    let t = tau_values(n, strategy, exec)?;
    Ok(Outcome::ok(format!("{}\n", t[n])))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| failure(format!("cannot write {}: {e}", path.display())))
}

fn csv_table(values: &[BigInt]) -> String {
    let mut s = String::from("n,value\n");
    for (n, v) in values.iter().enumerate().skip(1) {
        writeln!(s, "{n},{v}").expect("string write");
    }
    s
}

#[derive(Serialize)]
struct TableRow {
    n: usize,
    value: String,
}

#[derive(Serialize)]
struct TableJson<'a> {
    #[serde(rename = "tool-version")]
    tool_version: &'a str,
    strategy: &'a str,
    max_n: usize,
    values: Vec<TableRow>,
}

fn cmd_tau_table(
    max_n: usize,
    out: &Path,
    format: TableFormat,
    strategy: Option<TauStrategy>,
    exec: Execution,
) -> Result<Outcome, CliError> {
    require_positive("max-n", max_n)?;
    let values = tau_values(max_n, strategy, exec)?;
    let body = match format {
        TableFormat::Csv => csv_table(&values),
        TableFormat::Json => {
            let doc = TableJson {
                tool_version: TOOL_VERSION,
                strategy: strategy.map_or("consensus", TauStrategy::name),
                max_n,
                values: values
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(n, v)| TableRow {
                        n,
                        value: v.to_string(),
                    })
                    .collect(),
            };
            to_json(&doc)
        }
    };
    write_file(out, &body)?;
    Ok(Outcome::ok(String::new()))
}

fn cmd_sigma(k: u32, max_n: usize, out: &Path) -> Result<Outcome, CliError> {
    require_positive("max-n", max_n)?;
    let t = sigma_table(k, max_n);
    let values: Vec<BigInt> = std::iter::once(BigInt::from(0))
        .chain((1..=max_n).map(|n| t.get(n).clone()))
        .collect();
    write_file(out, &csv_table(&values))?;
    Ok(Outcome::ok(String::new()))
}

#[derive(Serialize)]
struct FailureJson {
    n: usize,
    lhs: String,
    rhs: String,
}

#[derive(Serialize)]
struct ResultJson {
    id: String,
    anchor: String,
    range: [usize; 2],
    status: &'static str,
    first_failure: Option<FailureJson>,
}

impl From<&VerificationReport> for ResultJson {
    fn from(r: &VerificationReport) -> Self {
        ResultJson {
            id: r.id.clone(),
            anchor: r.anchor.clone(),
            range: [r.range.0, r.range.1],
            status: r.status.name(),
            first_failure: r.first_failure.as_ref().map(|f| FailureJson {
                n: f.n,
                lhs: f.lhs.to_string(),
                rhs: f.rhs.to_string(),
            }),
        }
    }
}

#[derive(Serialize)]
struct ReportJson {
    #[serde(rename = "tool-version")]
    tool_version: &'static str,
    truncation: usize,
    results: Vec<ResultJson>,
    failures: Vec<String>,
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

fn render_reports(
    reports: &[VerificationReport],
    truncation: usize,
    format: ReportFormat,
) -> Outcome {
    let failures: Vec<String> = reports
        .iter()
        .filter(|r| r.status == Status::Failed)
        .map(|r| r.id.clone())
        .collect();
    let code = if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    };
    let stdout = match format {
        ReportFormat::Json => to_json(&ReportJson {
            tool_version: TOOL_VERSION,
            truncation,
            results: reports.iter().map(ResultJson::from).collect(),
            failures,
        }),
        ReportFormat::Text => {
            let mut s = String::new();
            for r in reports {
                write!(
                    s,
                    "{:<24} {:<13} [{}..={}]",
                    r.id,
                    r.status.name(),
                    r.range.0,
                    r.range.1
                )
                .expect("write");
                if let Some(f) = &r.first_failure {
                    write!(
                        s,
                        "  first failure n = {}: lhs = {}, rhs = {}",
                        f.n, f.lhs, f.rhs
                    )
                    .expect("write");
                }
                if let Some(c) = &r.certification {
                    write!(s, "  {}", c.detail()).expect("write");
                }
                s.push('\n');
            }
            s
        }
    };
    Outcome { stdout, code }
}

fn unknown_id(id: &str) -> CliError {
    usage(format!("unknown identity {id:?}"))
}

fn cmd_verify(
    identity: &str,
    max_n: usize,
    format: ReportFormat,
    exec: Execution,
) -> Result<Outcome, CliError> {
    require_positive("max-n", max_n)?;
    let reg = builtin_registry();
    let (records, series): (Vec<_>, Vec<_>) = if identity == "all" {
        (reg.identities.iter().collect(), reg.series.iter().collect())
    } else if let Some(r) = reg.identity(identity) {
        (vec![r], vec![])
    } else if let Some(s) = reg.series_identity(identity) {
        (vec![], vec![s])
    } else {
        return Err(unknown_id(identity));
    };
    let ctx = EvalContext::for_identities(records.iter().copied(), max_n, exec);
    let mut reports = Vec::new();
    for r in records {
        reports.push(verify_range_with(r, max_n, &ctx, exec).map_err(|e| failure(e.to_string()))?);
    }
    let series_reports: Vec<Result<VerificationReport, String>> = exec.map_slice(&series, |s| {
        verify_series(s, max_n).map_err(|e| format!("{}: {e}", s.id))
    });
    for r in series_reports {
        reports.push(r.map_err(failure)?);
    }
    Ok(render_reports(&reports, max_n, format))
}

fn cmd_certify(identity: &str, format: ReportFormat, exec: Execution) -> Result<Outcome, CliError> {
    let reg = builtin_registry();
    let (records, series): (Vec<_>, Vec<_>) = if identity == "all" {
        (reg.identities.iter().collect(), reg.series.iter().collect())
    } else if let Some(r) = reg.identity(identity) {
        (vec![r], vec![])
    } else if let Some(s) = reg.series_identity(identity) {
        (vec![], vec![s])
    } else {
        return Err(unknown_id(identity));
    };
    let mut reports: Vec<Result<VerificationReport, String>> = exec.map_slice(&records, |r| {
        certify(r).map_err(|e| format!("{}: {e}", r.id))
    });
    reports.extend(exec.map_slice(&series, |s| {
        certify_series(s).map_err(|e| format!("{}: {e}", s.id))
    }));
    let reports: Vec<VerificationReport> = reports
        .into_iter()
        .collect::<Result<_, _>>()
        .map_err(failure)?;
    let bound = reports.iter().map(|r| r.range.1).max().unwrap_or(0);
    Ok(render_reports(&reports, bound, format))
}

fn cmd_congruences(
    max_n: usize,
    id: Option<&str>,
    format: ReportFormat,
    exec: Execution,
) -> Result<Outcome, CliError> {
    require_positive("max-n", max_n)?;
    let reg = builtin_registry();
    let reports = match id {
        None => check_all_congruences(reg, max_n, exec).map_err(|e| failure(e.to_string()))?,
        Some(id) => {
            let c = reg
                .congruence(id)
                .ok_or_else(|| usage(format!("unknown congruence {id:?}")))?;
            let ctx = EvalContext::for_congruences([c], max_n, exec);
            vec![check_congruence_with(c, max_n, &ctx, exec).map_err(|e| failure(e.to_string()))?]
        }
    };
    Ok(render_reports(&reports, max_n, format))
}

#[derive(Serialize)]
struct AuditResultJson {
    #[serde(flatten)]
    result: ResultJson,
    kind: &'static str,
    declared: &'static str,
    certification: Option<String>,
    fitted: Option<String>,
    discrepancy: Option<String>,
}

#[derive(Serialize)]
struct NoteJson {
    topic: String,
    printed: String,
    fitted: String,
    detail: String,
}

#[derive(Serialize)]
struct AuditJson {
    #[serde(rename = "tool-version")]
    tool_version: &'static str,
    truncation: usize,
    results: Vec<AuditResultJson>,
    failures: Vec<String>,
    notes: Vec<NoteJson>,
}

fn audit_result(e: &AuditEntry) -> AuditResultJson {
    let mut result = ResultJson::from(&e.verification);
    result.status = e.status.name();
    AuditResultJson {
        result,
        kind: e.kind.name(),
        declared: match e.declared {
            crate::identities::RecordStatus::ExpectedTrue => "expected-true",
            crate::identities::RecordStatus::AuditFlagged => "audit-flagged",
        },
        certification: e
            .certification
            .as_ref()
            .and_then(|c| c.certification.as_ref())
            .map(|c| c.detail()),
        fitted: e.fitted.clone(),
        discrepancy: e.discrepancy.clone(),
    }
}

fn render_audit(rep: &AuditReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => to_json(&AuditJson {
            tool_version: TOOL_VERSION,
            truncation: rep.limit,
            results: rep.entries.iter().map(audit_result).collect(),
            failures: rep
                .entries
                .iter()
                .filter(|e| e.status == Status::Failed)
                .map(|e| e.id.clone())
                .collect(),
            notes: rep
                .notes
                .iter()
                .map(|n| NoteJson {
                    topic: n.topic.clone(),
                    printed: n.printed.clone(),
                    fitted: n.fitted.clone(),
                    detail: n.detail.clone(),
                })
                .collect(),
        }),
        ReportFormat::Text => {
            let mut s = String::new();
            for e in &rep.entries {
                writeln!(s, "{:<24} {:<10} {}", e.id, e.kind.name(), e.status.name())
                    .expect("write");
                if let Some(f) = &e.fitted {
                    writeln!(s, "    fitted: {f}").expect("write");
                }
                if let Some(d) = &e.discrepancy {
                    writeln!(s, "    {d}").expect("write");
                }
            }
            for n in &rep.notes {
                writeln!(
                    s,
                    "note {}:\n    printed: {}\n    fitted:  {}\n    {}",
                    n.topic, n.printed, n.fitted, n.detail
                )
                .expect("write");
            }
            s
        }
    }
}

fn cmd_audit(max_n: usize, format: ReportFormat, exec: Execution) -> Result<Outcome, CliError> {
    require_positive("max-n", max_n)?;
    let rep =
        audit_all_with(builtin_registry(), max_n, exec).map_err(|e| failure(e.to_string()))?;
    let code = if rep.ok() { EXIT_OK } else { EXIT_FAILURE };
    Ok(Outcome {
        stdout: render_audit(&rep, format),
        code,
    })
}

fn parse_expr(text: &str) -> Result<super::ast::Expr, CliError> {
    parse(text).map_err(|e| usage(e.to_string()))
}

fn cmd_decompose(
    text: &str,
    weight: u32,
    depth: Option<u32>,
    trunc: usize,
) -> Result<Outcome, CliError> {
    let e = parse_expr(text)?;
    let v = eval_expr(&e, trunc).map_err(|e| usage(e.to_string()))?;
    let form_depth = match v.grade {
        Grade::Graded { weight: w, depth } if w == weight => depth,
        Grade::Neutral if weight == 0 => 0,
        Grade::Inhomogeneous => return Err(usage("expression is not homogeneous in weight")),
        _ => {
            return Err(usage(format!(
                "expression has weight {}, not {weight}",
                v.weight().unwrap_or(0)
            )))
        }
    };
    let depth = depth.unwrap_or(weight / 2);
    let form = GradedForm::new(v.series, weight, form_depth.min(weight / 2))
        .map_err(|e| usage(e.to_string()))?;
    let rec = decompose(&form, weight, depth).map_err(|e| failure(e.to_string()))?;
    let mut coords = Map::new();
    for (label, c) in rec.nonzero() {
        coords.insert(label.to_string(), Value::String(c.to_string()));
    }
    let mut doc = Map::new();
    doc.insert("weight".into(), weight.into());
    doc.insert("depth".into(), depth.into());
    doc.insert("coordinates".into(), Value::Object(coords));
    Ok(Outcome::ok(to_json(&Value::Object(doc))))
}

fn cmd_eval(text: &str, trunc: usize, coeff: Option<usize>) -> Result<Outcome, CliError> {
    let e = parse_expr(text)?;
    let trunc = trunc.max(coeff.unwrap_or(0));
    let v = eval_expr(&e, trunc).map_err(|e| usage(e.to_string()))?;
    if let Some(n) = coeff {
        return Ok(Outcome::ok(format!("{}\n", v.series.coeffs()[n])));
    }
    let (weight, depth) = match v.grade {
        Grade::Neutral => (Value::from(0), Value::from(0)),
        Grade::Graded { weight, depth } => (weight.into(), depth.into()),
        Grade::Inhomogeneous => (Value::Null, Value::Null),
    };
    let mut doc = Map::new();
    doc.insert("expr".into(), e.to_string().into());
    doc.insert("truncation".into(), trunc.into());
    doc.insert("weight".into(), weight);
    doc.insert("depth".into(), depth);
    doc.insert(
        "coefficients".into(),
        Value::Array(
            v.series
                .coeffs()
                .iter()
                .map(|c: &Rational| Value::String(c.to_string()))
                .collect(),
        ),
    );
    Ok(Outcome::ok(to_json(&Value::Object(doc))))
}

#[derive(Serialize)]
struct BenchJson {
    strategy: &'static str,
    max_n: usize,
    repeat: usize,
    median_ns_per_value: u128,
}

fn cmd_bench(
    strategies: &[TauStrategy],
    max_n: usize,
    repeat: usize,
    exec: Execution,
) -> Result<Outcome, CliError> {
    require_positive("max-n", max_n)?;
    require_positive("repeat", repeat)?;
    let mut rows = Vec::new();
    let mut reference: Option<(TauStrategy, Vec<BigInt>)> = None;
    for &s in strategies {
        let mut times = Vec::with_capacity(repeat);
        let mut table = Vec::new();
        for _ in 0..repeat {
            let start = Instant::now();
            table = tau_table(max_n, s, exec);
            times.push(start.elapsed().as_nanos() / max_n as u128);
        }
        times.sort_unstable();
        match &reference {
            Some((r, t)) if *t != table => {
                let n = (1..=max_n).find(|&n| t[n] != table[n]).unwrap_or(0);
                return Err(CliError {
                    code: EXIT_INCONSISTENT,
                    message: format!("{} and {} disagree at n = {n}", r.name(), s.name()),
                });
            }
            Some(_) => {}
            None => reference = Some((s, table)),
        }
        rows.push(BenchJson {
            strategy: s.name(),
            max_n,
            repeat,
            median_ns_per_value: times[times.len() / 2],
        });
    }
    Ok(Outcome::ok(to_json(&rows)))
}
