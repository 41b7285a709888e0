//! Command-line front end. [`run`] takes the argument list and output sinks
//! and returns the process exit code, so it can be driven from tests.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::Error;
use crate::inversion::{integrality_report, IntegralityReport, COLUMNS};
use crate::mirror::{mahler_measure, pf2_applicable, pf_operator, MirrorData, OperatorForm, PFOperator};
use crate::series::Series;
use crate::weights::{aut_order, counts, enumerate, Model};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONSISTENCY: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;

const DEFAULT_CACHE: &str = ".mahler-cache";

#[derive(Parser, Debug)]
#[command(name = "mahler", version, about = "Mirror maps, Lambert tables and Mahler measures of Fermat-type weight systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List all k-vectors with Σ 1/k_i = 1 of a given length.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Show each solution's weight 1/|Aut|.
        #[arg(long)]
        weighted: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print coefficients of one of the model's series.
    Series {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        order: u64,
        #[arg(long, value_enum, default_value_t = Which::Q)]
        which: Which,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Show the reduced and local Picard-Fuchs operators.
    Pf {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Compute b, b̂, c, ĉ with integrality verdicts.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        order: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Also write the rendered report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run `verify` over every weight system of length n, with an on-disk cache.
    Batch {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        order: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: u64,
        /// Cache directory; defaults to $MAHLER_CACHE, then .mahler-cache.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Evaluate the Mahler measure of the family at a real ψ.
    Measure {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_negative_numbers = true)]
        psi: f64,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        order: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ModelArgs {
    /// Exponents k_1,…,k_n with Σ 1/k_i = 1, e.g. 2,3,6.
    #[arg(long)]
    model: Option<String>,
    /// Degree and weights k:w_1,…,w_n with Σ w_i = k, e.g. 6:3,2,1.
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    #[value(name = "g0")]
    G0,
    #[value(name = "h")]
    H,
    #[value(name = "f")]
    F,
    #[value(name = "Q")]
    Q,
    #[value(name = "q")]
    LowerQ,
    #[value(name = "zq")]
    ZOfQ,
    #[value(name = "zQ")]
    ZOfLocal,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Consistency(_) => EXIT_CONSISTENCY,
            Error::Convergence(_) => EXIT_CONVERGENCE,
            _ => EXIT_USAGE,
        };
        let message = match &e {
            Error::Convergence(detail) => format!("outside disk of convergence: {detail}"),
            other => other.to_string(),
        };
        Failure { code, message }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

type Outcome = std::result::Result<String, Failure>;

/// Parses `args` (including the program name), runs the command, writes to
/// `out`/`err` and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Enumerate { n, weighted, format } => cmd_enumerate(n, weighted, format),
        Command::Series { model, order, which, format } => {
            cmd_series(&parse_model(&model)?, order as usize, which, format)
        }
        Command::Pf { model, format } => cmd_pf(&parse_model(&model)?, format),
        Command::Verify { model, order, format, out } => {
            let text = cmd_verify(&parse_model(&model)?, order as usize, format)?;
            if let Some(path) = out {
                std::fs::write(&path, &text)
                    .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(text)
        }
        Command::Batch { n, order, jobs, cache, format } => {
            let dir = cache
                .or_else(|| std::env::var_os("MAHLER_CACHE").map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE));
            cmd_batch(n, order as usize, jobs as usize, &dir, format)
        }
        Command::Measure { model, psi, order, format } => {
            cmd_measure(&parse_model(&model)?, psi, order as usize, format)
        }
    }
}

fn parse_list(text: &str) -> std::result::Result<Vec<u64>, Failure> {
    text.split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|_| usage(format!("not a positive integer: {p:?}"))))
        .collect()
}

fn parse_model(args: &ModelArgs) -> std::result::Result<Model, Failure> {
    if let Some(text) = &args.model {
        return Ok(Model::from_parts(&parse_list(text)?)?);
    }
    let text = args.weights.as_deref().unwrap_or_default();
    let (degree, w) = text
        .split_once(':')
        .ok_or_else(|| usage(format!("expected k:w1,w2,… but got {text:?}")))?;
    let degree = degree
        .trim()
        .parse::<u64>()
        .map_err(|_| usage(format!("not a positive integer: {degree:?}")))?;
    Ok(Model::from_weights(degree, parse_list(w)?)?)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', ' ']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn join<T: ToString>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Left-aligned text table with a header row.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

fn cmd_enumerate(n: usize, weighted: bool, format: Format) -> Outcome {
    let solutions = enumerate(n)?;
    let summary = counts(n)?;
    let records: Vec<Value> = solutions
        .iter()
        .map(|kv| {
            let mut v = serde_json::to_value(kv.to_model()).expect("model serializes");
            v["aut"] = json!(aut_order(kv));
            v
        })
        .collect();
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&records).expect("json") + "\n",
        Format::Csv => {
            let mut out = String::from("k,lcm,w,aut\n");
            for kv in &solutions {
                let m = kv.to_model();
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    csv_field(&join(kv.parts())),
                    m.degree(),
                    csv_field(&join(m.weights())),
                    aut_order(kv)
                );
            }
            out
        }
        Format::Table => {
            let mut header = vec!["k", "lcm", "w", "|Aut|"];
            if weighted {
                header.push("1/|Aut|");
            }
            let rows: Vec<Vec<String>> = solutions
                .iter()
                .map(|kv| {
                    let m = kv.to_model();
                    let aut = aut_order(kv);
                    let mut row = vec![
                        kv.to_string(),
                        m.degree().to_string(),
                        format!("({})", join(m.weights())),
                        aut.to_string(),
                    ];
                    if weighted {
                        row.push(format!("1/{aut}"));
                    }
                    row
                })
                .collect();
            let mut out = table(&header, &rows);
            let _ = writeln!(out, "simple={} weighted={}", summary.simple, summary.weighted);
            out
        }
    })
}

fn cmd_series(model: &Model, order: usize, which: Which, format: Format) -> Outcome {
    let md = MirrorData::new(model, order)?;
    let series: &Series = match which {
        Which::G0 => &md.g0,
        Which::H => &md.h,
        Which::F => &md.f,
        Which::Q => &md.local_map,
        Which::LowerQ => &md.q,
        Which::ZOfQ => &md.z_of_q,
        Which::ZOfLocal => &md.z_of_local,
    };
    let coeffs: Vec<String> = series.truncate(order).coeffs().iter().map(|c| c.to_string()).collect();
    Ok(match format {
        Format::Json => serde_json::to_string(&coeffs).expect("json") + "\n",
        Format::Csv => {
            let mut out = String::from("m,coefficient\n");
            for (m, c) in coeffs.iter().enumerate() {
                let _ = writeln!(out, "{m},{c}");
            }
            out
        }
        Format::Table => coeffs.iter().map(|c| format!("{c}\n")).collect(),
    })
}

fn operator_json(op: &PFOperator) -> Value {
    json!({
        "a": op.a.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "b": op.b.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "operator": op.to_string(),
        "rescaled": op.rescaled(),
    })
}

fn cmd_pf(model: &Model, format: Format) -> Outcome {
    let reduced = pf_operator(model, OperatorForm::Reduced);
    let local = pf_operator(model, OperatorForm::Local);
    let pf2 = pf2_applicable(model);
    Ok(match format {
        Format::Json => {
            let v = json!({
                "model": model,
                "C": reduced.constant.to_string(),
                "reduced": operator_json(&reduced),
                "local": operator_json(&local),
                "pf2": pf2,
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        Format::Csv => {
            let mut out = String::from("form,C,a,b,operator\n");
            for (name, op) in [("reduced", &reduced), ("local", &local)] {
                let _ = writeln!(
                    out,
                    "{name},{},{},{},{}",
                    op.constant,
                    csv_field(&join(&op.a)),
                    csv_field(&join(&op.b)),
                    csv_field(&op.to_string())
                );
            }
            out
        }
        Format::Table => {
            let mut out = format!("model {model}  k={}  w=({})\n", model.degree(), join(model.weights()));
            let _ = writeln!(out, "C={}", reduced.constant);
            for (name, op) in [("reduced", &reduced), ("local", &local)] {
                let _ = writeln!(out, "{name}: a=[{}], b=[{}]", join(&op.a), join(&op.b));
                let _ = writeln!(out, "  {op}");
                let _ = writeln!(out, "  {}  (z̃ = Cz)", op.rescaled());
            }
            let _ = writeln!(out, "pf2={pf2}");
            out
        }
    })
}

fn report_csv(report: &IntegralityReport) -> String {
    let mut out = String::from("m,b,bhat,c,chat,b_over_m,chat_over_m,flags\n");
    for row in report.rows() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.m,
            row.values[0],
            row.values[1],
            row.values[2],
            row.values[3],
            row.over_m(0),
            row.over_m(3),
            csv_field(&row.flags())
        );
    }
    out
}

fn report_table(report: &IntegralityReport) -> String {
    let rows: Vec<Vec<String>> = report
        .rows()
        .iter()
        .map(|row| {
            let mut cells = vec![row.m.to_string()];
            cells.extend(row.values.iter().map(|v| v.to_string()));
            cells.push(row.over_m(0).to_string());
            cells.push(row.over_m(3).to_string());
            cells.push(row.flags());
            cells
        })
        .collect();
    let mut out = format!("model {}  order {}\n", report.model, report.order);
    out.push_str(&table(&["m", "b", "bhat", "c", "chat", "b/m", "chat/m", "flags"], &rows));
    let checks = [
        ("product_plain", report.product_plain()),
        ("product_alt", report.product_alt()),
        ("lagrange_integral", report.lagrange_integral()),
        ("g0_in_q_integral", report.g0_in_q_integral()),
        ("g0_in_Q_integral", report.g0_in_local_integral()),
        ("proposition_qQ_integral", report.proposition_integral()),
        ("conjecture1_root_integral", report.mirror_root_integral()),
        ("local_root_integral", report.local_root_integral()),
        ("cross_integral", report.cross_integral()),
    ];
    for (name, ok) in checks {
        let _ = writeln!(out, "{name}={ok}");
    }
    for e in report.errata() {
        let _ = writeln!(
            out,
            "erratum {}_{}: printed {}, computed {}",
            e.column, e.m, e.printed, e.computed
        );
    }
    out
}

fn cmd_verify(model: &Model, order: usize, format: Format) -> Outcome {
    let report = integrality_report(model, order)?;
    Ok(match format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report_csv(&report),
        Format::Table => report_table(&report),
    })
}

pub fn cache_file(dir: &Path, model: &Model, order: usize) -> PathBuf {
    dir.join(format!(
        "{}-N{order}-v{}.json",
        model.canonical_key(),
        env!("CARGO_PKG_VERSION")
    ))
}

struct BatchEntry {
    name: String,
    cached: bool,
    json: Value,
}

fn batch_one(model: &Model, order: usize, dir: &Path) -> std::result::Result<BatchEntry, Failure> {
    let path = cache_file(dir, model, order);
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(json) = serde_json::from_str(&text) {
            return Ok(BatchEntry { name: model.name().to_string(), cached: true, json });
        }
    }
    let report = integrality_report(model, order)?;
    let text = report.to_json();
    let io = |e: std::io::Error| usage(format!("cannot write cache {}: {e}", dir.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(&path).map_err(|e| io(e.error))?;
    let json = serde_json::from_str(&text).expect("report json parses");
    Ok(BatchEntry { name: model.name().to_string(), cached: false, json })
}

/// `(integer, fractional)` entry counts over the four Lambert columns.
fn verdict_counts(json: &Value) -> (usize, usize) {
    let mut counts = (0, 0);
    for row in json["rows"].as_array().into_iter().flatten() {
        for name in COLUMNS {
            if row[format!("{name}_integer")].as_bool() == Some(true) {
                counts.0 += 1;
            } else {
                counts.1 += 1;
            }
        }
    }
    counts
}

fn cmd_batch(n: usize, order: usize, jobs: usize, dir: &Path, format: Format) -> Outcome {
    let models: Vec<Model> = enumerate(n)?.iter().map(Model::from_kvector).collect();
    std::fs::create_dir_all(dir)
        .map_err(|e| usage(format!("cannot create cache {}: {e}", dir.display())))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| usage(e.to_string()))?;
    let entries: Vec<BatchEntry> = pool.install(|| {
        models
            .par_iter()
            .map(|m| batch_one(m, order, dir))
            .collect::<std::result::Result<_, _>>()
    })?;

    let cached = entries.iter().filter(|e| e.cached).count();
    let computed = entries.len() - cached;
    let (mut integer, mut fractional) = (0, 0);
    let mut rows = Vec::new();
    for e in &entries {
        let (i, f) = verdict_counts(&e.json);
        integer += i;
        fractional += f;
        rows.push(vec![
            e.name.clone(),
            i.to_string(),
            f.to_string(),
            if e.cached { "cached" } else { "computed" }.to_string(),
        ]);
    }
    let summary = format!(
        "{} reports, {cached} cached, {computed} computed; {integer} integer and {fractional} fractional entries",
        entries.len()
    );
    Ok(match format {
        Format::Json => {
            let v = json!({
                "n": n,
                "order": order,
                "cached": cached,
                "computed": computed,
                "integer": integer,
                "fractional": fractional,
                "models": entries.iter().map(|e| e.name.clone()).collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        Format::Csv => {
            let mut out = String::from("model,integer,fractional,source\n");
            for r in &rows {
                let _ = writeln!(out, "{},{},{},{}", csv_field(&r[0]), r[1], r[2], r[3]);
            }
            out
        }
        Format::Table => {
            let mut out = table(&["model", "integer", "fractional", "source"], &rows);
            out.push_str(&summary);
            out.push('\n');
            out
        }
    })
}

fn cmd_measure(model: &Model, psi: f64, order: usize, format: Format) -> Outcome {
    let mm = mahler_measure(model, psi, order)?;
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&mm).expect("json") + "\n",
        Format::Csv => format!(
            "psi,z,m,M,tail_bound\n{},{:e},{},{},{:e}\n",
            mm.psi, mm.z, mm.log_measure, mm.measure, mm.tail_bound
        ),
        Format::Table => format!(
            "model {model}  psi={}  z={:e}\nm={:.15}\nM={:.15}\ntail<={:e}\n",
            mm.psi, mm.z, mm.log_measure, mm.measure, mm.tail_bound
        ),
    })
}
