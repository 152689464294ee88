//! The `tdlc` command line.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 unreadable or invalid input,
//! 3 computation error, 4 formula not applicable.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::dynamics::{self, Backend, DEFAULT_L_MAX};
use crate::error::Error;
use crate::instance::{InstanceFile, Loaded};
use crate::theorems::{self, finite::describe_set, padic::describe_subspace, parse_selection, Status, Tag};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;
pub const EXIT_NOT_APPLICABLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "tdlc", version, about = "Scale, tidy subgroups and contraction groups of group endomorphisms")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Stage budget for tidy-above searches.
    #[arg(long, global = true, default_value_t = DEFAULT_L_MAX)]
    pub l_max: usize,
    /// Starting p-adic working precision.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the scale with a tidy subgroup attaining it.
    Scale { file: PathBuf },
    /// Produce a tidy subgroup, from the file's U when it has one.
    Tidy { file: PathBuf },
    /// Print con, con⁻, par, par⁻, lev, nub, bik and Ω.
    Decompose { file: PathBuf },
    /// Check the structure theorems on a file or on the generated suite.
    Verify {
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        all: bool,
        /// Comma-separated tags; a letter selects its group (`C`, `F`).
        #[arg(long)]
        theorem: Option<String>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Worker threads, 0 for one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Entropy as a multiple of ln p, with the addition identity for H.
    Entropy { file: PathBuf },
}

/// Everything a run prints, and its exit code.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Output {
        Output { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn err(code: i32, msg: impl std::fmt::Display) -> Output {
        Output { code, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidTable(_) | Error::NotASubgroup(_) | Error::IncompatibleRanks(_) => EXIT_PARSE,
        _ => EXIT_COMPUTE,
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Output::ok(text)
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(e) => Output::err(error_code(&e), e),
    }
}

fn load(cli: &Cli, path: &PathBuf) -> Result<Loaded, Output> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Output::err(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let file = InstanceFile::parse(&text).map_err(|e| Output::err(EXIT_PARSE, e))?;
    file.load(cli.precision).map_err(|e| Output::err(EXIT_PARSE, e))
}

fn execute(cli: &Cli) -> Result<Output, Error> {
    let loaded = |p: &PathBuf| load(cli, p);
    Ok(match &cli.command {
        Command::Scale { file } => match loaded(file) {
            Ok(l) => scale(cli, &l)?,
            Err(o) => o,
        },
        Command::Tidy { file } => match loaded(file) {
            Ok(l) => tidy(cli, &l)?,
            Err(o) => o,
        },
        Command::Decompose { file } => match loaded(file) {
            Ok(l) => decompose(cli, &l)?,
            Err(o) => o,
        },
        Command::Entropy { file } => match loaded(file) {
            Ok(l) => entropy(cli, &l)?,
            Err(o) => o,
        },
        Command::Verify { file, all, theorem, seed, jobs } => {
            let tags = match theorem {
                Some(t) => match parse_selection(t) {
                    Ok(t) => t,
                    Err(e) => return Ok(Output::err(EXIT_PARSE, e)),
                },
                None => Tag::ALL.to_vec(),
            };
            let report = match (file, all) {
                (Some(f), _) => match loaded(f) {
                    Ok(l) => theorems::SuiteReport::new(*seed, 1, theorems::check_loaded(&l, &tags)),
                    Err(o) => return Ok(o),
                },
                (None, true) => theorems::run_suite(*seed, &tags, *jobs)?,
                (None, false) => return Ok(Output::err(EXIT_PARSE, "verify needs a file or --all")),
            };
            verify_output(cli, &report)
        }
    })
}

fn scale(cli: &Cli, l: &Loaded) -> Result<Output, Error> {
    let inst = l.instance();
    let s = inst.scale()?;
    if cli.json {
        return Ok(Output::ok(to_json(&json!({ "instance": inst.key(), "scale": s }))));
    }
    Ok(Output::ok(format!(
        "instance: {}\ns = {}, method = {}\ntidy subgroup: {}\ndisplacement: {}\n",
        inst.key(),
        s.scale,
        s.method,
        s.tidy,
        s.displacement
    )))
}

#[derive(Serialize)]
struct TidyReport {
    instance: String,
    input: Option<String>,
    tidy_above_stage: Option<usize>,
    tidy: String,
    displacement: String,
    scale: String,
    note: Option<String>,
}

fn tidy(cli: &Cli, l: &Loaded) -> Result<Output, Error> {
    let key = l.instance().key();
    let r = match l {
        Loaded::Finite { inst, u, .. } => {
            let g = &inst.group;
            let start = u.clone().unwrap_or_else(|| g.whole());
            let (_, stage) = dynamics::tidy_above(inst, &start, cli.l_max)?;
            let t = inst.tidying_procedure(&start, cli.l_max)?;
            TidyReport {
                instance: key,
                input: Some(describe_set(g, &start)),
                tidy_above_stage: Some(stage),
                displacement: inst.displacement(&t).to_string(),
                tidy: describe_set(g, &t),
                scale: inst.scale()?.value.to_string(),
                note: None,
            }
        }
        Loaded::Padic { inst, u, .. } => match u {
            Some(u) => {
                let t = inst.tidying(u, cli.l_max)?;
                TidyReport {
                    instance: key,
                    input: Some(u.describe()),
                    tidy_above_stage: Some(t.stage),
                    tidy: t.result.describe(),
                    displacement: t.displacement.to_string(),
                    scale: inst.scale_value()?.to_string(),
                    note: None,
                }
            }
            None => {
                let r = inst.scale()?;
                TidyReport {
                    instance: key,
                    input: None,
                    tidy_above_stage: None,
                    tidy: r.tidy.describe(),
                    displacement: r.displacement.to_string(),
                    scale: r.value.to_string(),
                    note: Some(format!("method {}", r.method)),
                }
            }
        },
        Loaded::Shift { inst, u, .. } => {
            let stage = match u {
                Some(u) => Some(dynamics::tidy_above(inst, u, cli.l_max)?.1),
                None => None,
            };
            let r = inst.scale()?;
            TidyReport {
                instance: key,
                input: u.as_ref().map(|u| format!("{u:?}")),
                tidy_above_stage: stage,
                tidy: format!("{:?}", r.tidy),
                displacement: r.displacement.to_string(),
                scale: r.value.to_string(),
                note: Some("the Levi part of a cylinder is not materialized; G is returned".into()),
            }
        }
    };
    if cli.json {
        return Ok(Output::ok(to_json(&r)));
    }
    let mut s = format!("instance: {}\n", r.instance);
    if let Some(i) = &r.input {
        writeln!(s, "input U: {i}").unwrap();
    }
    if let Some(st) = r.tidy_above_stage {
        writeln!(s, "tidy above at stage {st}").unwrap();
    }
    writeln!(s, "tidy subgroup: {}\ndisplacement {} = s = {}", r.tidy, r.displacement, r.scale).unwrap();
    if let Some(n) = &r.note {
        writeln!(s, "note: {n}").unwrap();
    }
    Ok(Output::ok(s))
}

fn decompose(cli: &Cli, l: &Loaded) -> Result<Output, Error> {
    let inst = l.instance();
    let d = inst.decompose()?;
    let fields = d.fields();
    let violations = d.invariant_violations();
    if cli.json {
        let map: serde_json::Map<String, serde_json::Value> =
            fields.iter().map(|(k, v)| (k.to_string(), serde_json::to_value(v).expect("serializable"))).collect();
        return Ok(Output::ok(to_json(&json!({ "instance": inst.key(), "fields": map, "violations": violations }))));
    }
    let mut s = format!("instance: {}\n", inst.key());
    for (k, v) in &fields {
        writeln!(s, "{k:<6} {}", v.describe()).unwrap();
    }
    for v in &violations {
        writeln!(s, "violation: {v}").unwrap();
    }
    Ok(Output::ok(s))
}

fn verify_output(cli: &Cli, r: &theorems::SuiteReport) -> Output {
    let code = if r.summary.fail > 0 { EXIT_FAIL } else { EXIT_OK };
    if cli.json {
        return Output { code, stdout: to_json(r), stderr: String::new() };
    }
    let mut s = String::new();
    for rec in &r.records {
        let status = match rec.status {
            Status::Pass => "pass".to_string(),
            Status::Fail => "FAIL".to_string(),
            Status::Skipped => format!("skip ({})", rec.reason.map(|x| x.as_str()).unwrap_or("")),
        };
        let subject = rec.subject.as_deref().map(|x| format!(" [{x}]")).unwrap_or_default();
        write!(s, "{status:<30} {:<16} {}{subject}: {}", rec.tag.as_str(), rec.instance, rec.detail).unwrap();
        if let Some(cx) = &rec.counterexample {
            write!(s, " counterexample: {cx}").unwrap();
        }
        s.push('\n');
    }
    let m = &r.summary;
    writeln!(
        s,
        "{} instances, {} records: {} pass, {} fail, {} skipped",
        m.instances, m.records, m.pass, m.fail, m.skipped
    )
    .unwrap();
    Output { code, stdout: s, stderr: String::new() }
}

/// `k·ln p` as text.
pub fn ln_multiple(k: u64, p: u64) -> String {
    match k {
        0 => "0".into(),
        1 => format!("ln {p}"),
        _ => format!("{k}·ln {p}"),
    }
}

fn entropy(cli: &Cli, l: &Loaded) -> Result<Output, Error> {
    let key = l.instance().key();
    let refuse = |reason: String| {
        let stdout = if cli.json {
            to_json(&json!({ "instance": key, "applicable": false, "reason": reason }))
        } else {
            String::new()
        };
        Output { code: EXIT_NOT_APPLICABLE, stdout, stderr: format!("not applicable: {reason}\n") }
    };
    let (scale, h, addition) = match l {
        Loaded::Finite { inst, h, .. } => {
            let addition = match h {
                Some(h) => {
                    if !inst.is_invariant(h) {
                        return Ok(refuse("H is not α-invariant".into()));
                    }
                    if !inst.group.is_normal(h) {
                        return Ok(refuse("H is not normal, so G/H is not a group".into()));
                    }
                    Some(("0".to_string(), "0".to_string()))
                }
                None => None,
            };
            ("1".to_string(), "0".to_string(), addition)
        }
        Loaded::Padic { inst, h, .. } => {
            let p = inst.prime();
            let k = inst.scale_exponent();
            let addition = match h {
                Some(h) => {
                    if !inst.is_invariant(h) {
                        return Ok(refuse(format!("H = {} is not α-invariant", describe_subspace(h))));
                    }
                    let r = crate::padic::instance::rank(h);
                    let a = if r == 0 { 0 } else { inst.restrict(h)?.scale_exponent() };
                    let b = if r == inst.dim() { 0 } else { inst.quotient(h)?.scale_exponent() };
                    if a + b != k {
                        return Err(Error::NotComputable(format!("addition identity fails: {k} ≠ {a} + {b}")));
                    }
                    Some((ln_multiple(a, p), ln_multiple(b, p)))
                }
                None => None,
            };
            (format!("{} = {p}^{k}", inst.scale_value()?), ln_multiple(k, p), addition)
        }
        Loaded::Shift { inst, .. } => {
            let q = inst.group().order();
            return Ok(refuse(format!(
                "con(α) = {} is not closed on {}; h = ln s(α) needs con(α) closed (here s = 1 while the shift has entropy ln {q})",
                inst.decompose().con.describe(),
                inst.name()
            )));
        }
    };
    if cli.json {
        let add = addition.as_ref().map(|(a, b)| json!({ "h_H": a, "h_quotient": b }));
        return Ok(Output::ok(to_json(
            &json!({ "instance": key, "applicable": true, "s": scale, "h": h, "addition": add }),
        )));
    }
    let mut s = format!("instance: {key}\ns = {scale}\nh = ln s = {h}\n");
    if let Some((a, b)) = addition {
        writeln!(s, "h(α) = h(α|H) + h(α on G/H): {h} = {a} + {b}").unwrap();
    }
    Ok(Output::ok(s))
}
