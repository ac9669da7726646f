//! Command-line front end: `cf`, `solve`, `family`, `verify`.
//!
//! Exit codes: 0 determinate answer, 1 verification discrepancy, 2 domain or
//! usage error, 3 undetermined. JSON output carries every integer as a decimal
//! string.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cf::{cf_expand, SurdExpansion};
use crate::error::{PellError, Result};
use crate::family::{self, Corollary, Family, FamilyParams, Method, Rhs};
use crate::oracle::{self, CheckKind, CrossCheckReport, Grid};
use crate::pell::{self, PellSolution, Solvability, DEFAULT_SEARCH_BOUND};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISCREPANCY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;

/// Environment variable overriding the default `−4` search bound.
pub const BOUND_ENV: &str = "PELLKIT_BOUND";

#[derive(Debug, Parser)]
#[command(name = "pellkit", version, about = "Exact solver for x^2 - d*y^2 = N, N in {1, -1, 4, -4}")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Continued fraction expansion of sqrt(d).
    Cf(CfArgs),
    /// Solve x^2 - d*y^2 = N for any non-square d.
    #[command(allow_negative_numbers = true)]
    Solve(SolveArgs),
    /// Closed-form solutions for d = a^2b^2 - b, a^2b^2 - 2b and their 9k^2 - 3, 9k^2 - 6 cases.
    #[command(allow_negative_numbers = true)]
    Family(FamilyArgs),
    /// Cross-check every closed form against the generic solver and brute force.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct CfArgs {
    /// Radicand.
    #[arg(conflicts_with_all = ["family", "a", "b"])]
    pub d: Option<String>,
    /// 1 for a^2b^2 - b, 2 for a^2b^2 - 2b.
    #[arg(long, requires_all = ["a", "b"], value_parser = clap::value_parser!(u8).range(1..=2))]
    pub family: Option<u8>,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub b: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub d: String,
    /// Right-hand side: 1, -1, 4 or -4.
    pub rhs: i64,
    /// Solution index (1 = fundamental).
    #[arg(long, default_value_t = 1)]
    pub n: u64,
    /// Search bound for -4 when d = 1 (mod 4).
    #[arg(long, env = BOUND_ENV, default_value_t = DEFAULT_SEARCH_BOUND)]
    pub bound: u64,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// 1 for a^2b^2 - b, 2 for a^2b^2 - 2b.
    #[arg(long, requires_all = ["a", "b"], conflicts_with_all = ["corollary", "k"],
          value_parser = clap::value_parser!(u8).range(1..=2))]
    pub family: Option<u8>,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub b: Option<u64>,
    /// 9k2-3 or 9k2-6.
    #[arg(long, requires = "k", value_parser = ["9k2-3", "9k2-6"])]
    pub corollary: Option<String>,
    #[arg(long)]
    pub k: Option<u64>,
    /// Right-hand side: 1, -1, 4 or -4.
    pub rhs: i64,
    #[arg(long, default_value_t = 1)]
    pub n: u64,
    /// Solve outside the family hypotheses with the generic solver.
    #[arg(long)]
    pub force: bool,
    #[arg(long, env = BOUND_ENV, default_value_t = DEFAULT_SEARCH_BOUND)]
    pub bound: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 12)]
    pub a_max: u64,
    #[arg(long, default_value_t = 12)]
    pub b_max: u64,
    #[arg(long, default_value_t = 8)]
    pub n_max: u64,
    #[arg(long, default_value_t = 8)]
    pub k_max: u64,
    /// Brute-force bound on y.
    #[arg(long, default_value_t = oracle::DEFAULT_Y_BOUND)]
    pub y_bound: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
}

/// A big integer that serializes as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dec(pub BigInt);

impl Serialize for Dec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Dec {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(de)?;
        BigInt::from_str(&text).map(Dec).map_err(serde::de::Error::custom)
    }
}

impl<T: Into<BigInt>> From<T> for Dec {
    fn from(v: T) -> Self {
        Dec(v.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionBody {
    pub x: Dec,
    pub y: Dec,
    pub n: Dec,
    pub rhs: Dec,
}

impl From<&PellSolution> for SolutionBody {
    fn from(s: &PellSolution) -> Self {
        Self { x: Dec(s.x.clone()), y: Dec(s.y.clone()), n: s.n.into(), rhs: s.rhs.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Expansion {
        d: Dec,
        a0: Dec,
        period: Vec<Dec>,
        m: Dec,
    },
    Solvability {
        d: Dec,
        status: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        solution: Option<SolutionBody>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reason: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        searched_bound: Option<Dec>,
    },
    Report {
        checks: BTreeMap<String, Dec>,
        total_checks: Dec,
        oracle_certified: Dec,
        oracle_skipped: Dec,
        undetermined: Dec,
        discrepancies: Vec<String>,
    },
    Error {
        message: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub method: String,
    pub result: Payload,
    pub timing_ms: Dec,
}

/// Everything a run produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            Outcome { code, stdout, stderr }
        }
    }
}

struct Answer {
    method: Method,
    payload: Payload,
    code: i32,
    text: String,
}

pub fn execute(cli: &Cli) -> Outcome {
    let started = Instant::now();
    let (name, inputs, answer) = match &cli.command {
        Command::Cf(args) => ("cf", cf_inputs(args), cmd_cf(args)),
        Command::Solve(args) => ("solve", solve_inputs(args), cmd_solve(args)),
        Command::Family(args) => ("family", family_inputs(args), cmd_family(args)),
        Command::Verify(args) => ("verify", verify_inputs(args), Ok(cmd_verify(args))),
    };
    let elapsed = started.elapsed().as_millis() as u64;
    let (method, payload, code, text, stderr) = match answer {
        Ok(a) => (a.method.tag().to_string(), a.payload, a.code, a.text, String::new()),
        Err(e) => {
            let message = e.to_string();
            ("none".to_string(), Payload::Error { message: message.clone() }, EXIT_USAGE, String::new(), format!("error: {message}\n"))
        }
    };
    let stdout = match cli.format {
        Format::Text => text,
        Format::Json => {
            let record = OutputRecord { command: name.into(), inputs, method, result: payload, timing_ms: elapsed.into() };
            let mut s = serde_json::to_string_pretty(&record).expect("record serializes");
            s.push('\n');
            s
        }
    };
    let stderr = if name == "verify" && cli.format == Format::Text {
        format!("{stderr}elapsed: {elapsed} ms\n")
    } else {
        stderr
    };
    Outcome { code, stdout, stderr }
}

fn parse_d(text: &str) -> Result<BigInt> {
    BigInt::from_str(text.trim()).map_err(|_| PellError::Domain(format!("'{text}' is not an integer")))
}

fn parse_rhs(value: i64) -> Result<Rhs> {
    Rhs::from_value(value).ok_or_else(|| PellError::Domain(format!("rhs must be one of 1, -1, 4, -4 (got {value})")))
}

fn family_of(id: u8) -> Family {
    if id == 1 {
        Family::F1
    } else {
        Family::F2
    }
}

fn list(items: &[BigInt]) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

fn expansion_answer(e: &SurdExpansion, method: Method) -> Answer {
    let text = format!(
        "d = {}\na0 = {}\nperiod = [{}]\nm = {}\nmethod = {}\n",
        e.d(),
        e.a0(),
        list(e.period()),
        e.period_len(),
        method.tag()
    );
    let payload = Payload::Expansion {
        d: Dec(e.d().clone()),
        a0: Dec(e.a0().clone()),
        period: e.period().iter().cloned().map(Dec).collect(),
        m: e.period_len().into(),
    };
    Answer { method, payload, code: EXIT_OK, text }
}

fn cmd_cf(args: &CfArgs) -> Result<Answer> {
    match (&args.d, args.family) {
        (Some(d), None) => Ok(expansion_answer(&cf_expand(&parse_d(d)?)?, Method::GenericCf)),
        (None, Some(id)) => {
            let params = FamilyParams::new(family_of(id), args.a.unwrap_or(0), args.b.unwrap_or(0))?;
            Ok(expansion_answer(&params.expansion()?, Method::ClosedForm))
        }
        _ => Err(PellError::Domain("give either d or --family with --a and --b".into())),
    }
}

fn verdict_answer(d: &BigInt, verdict: Solvability, method: Method) -> Answer {
    let mut text = String::new();
    let (status, solution, reason, searched_bound, code) = match &verdict {
        Solvability::Solvable(s) => {
            let _ = write!(text, "x = {}\ny = {}\nn = {}\n", s.x, s.y, s.n);
            ("solvable", Some(SolutionBody::from(s)), None, None, EXIT_OK)
        }
        Solvability::NoSolution(r) => {
            let _ = writeln!(text, "no solution ({})", r.tag());
            ("no-solution", None, Some(r.tag().to_string()), None, EXIT_OK)
        }
        Solvability::Undetermined { searched_bound } => {
            let _ = writeln!(text, "undetermined: no solution with y <= {searched_bound}");
            ("undetermined", None, None, Some(Dec::from(*searched_bound)), EXIT_UNDETERMINED)
        }
    };
    let _ = writeln!(text, "method = {}", method.tag());
    let payload = Payload::Solvability { d: Dec(d.clone()), status: status.into(), solution, reason, searched_bound };
    Answer { method, payload, code, text }
}

fn generic_solve(d: &BigInt, rhs: Rhs, n: u64, bound: u64) -> Result<Answer> {
    if n == 0 {
        return Err(PellError::Domain("solution index starts at 1".into()));
    }
    let (verdict, method) = match rhs {
        Rhs::One => {
            let fund = pell::fundamental_unit(d)?;
            (Solvability::Solvable(pell::nth_solution(d, &fund, n)?), Method::GenericCf)
        }
        Rhs::Four => {
            let fund = pell::solve_four(d)?;
            (Solvability::Solvable(pell::nth_solution_four(d, &fund, n)?), Method::GenericCf)
        }
        Rhs::MinusOne | Rhs::MinusFour => {
            let verdict = if rhs == Rhs::MinusOne {
                pell::solve_negative_one(d)?
            } else {
                pell::solve_negative_four(d, bound)?
            };
            let brute = rhs == Rhs::MinusFour && (d % 4u8) == BigInt::from(1);
            let method = if brute { Method::BruteForce } else { Method::GenericCf };
            let verdict = match verdict {
                Solvability::Solvable(fund) => Solvability::Solvable(pell::nth_solution_negative(d, &fund, n)?),
                other => other,
            };
            (verdict, method)
        }
    };
    Ok(verdict_answer(d, verdict, method))
}

fn cmd_solve(args: &SolveArgs) -> Result<Answer> {
    let d = parse_d(&args.d)?;
    generic_solve(&d, parse_rhs(args.rhs)?, args.n, args.bound)
}

fn cmd_family(args: &FamilyArgs) -> Result<Answer> {
    let rhs = parse_rhs(args.rhs)?;
    if let (Some(form), Some(k)) = (&args.corollary, args.k) {
        let which = Corollary::from_form(form, rhs)
            .ok_or_else(|| PellError::Domain(format!("no {form} formula for rhs = {}", rhs.value())))?;
        let sol = family::corollary_solve(which, k, args.n)?;
        return Ok(verdict_answer(&which.d(k)?, Solvability::Solvable(sol), Method::ClosedForm));
    }
    let (Some(id), Some(a), Some(b)) = (args.family, args.a, args.b) else {
        return Err(PellError::Domain("give --family with --a and --b, or --corollary with --k".into()));
    };
    let fam = family_of(id);
    match FamilyParams::new(fam, a, b) {
        Ok(params) => {
            let out = family::family_solve_with_bound(&params, rhs, args.n, args.bound)?;
            Ok(verdict_answer(&params.d(), out.verdict, out.method))
        }
        Err(PellError::Domain(_)) if args.force => {
            generic_solve(&family::family_d(fam, a, b), rhs, args.n, args.bound)
        }
        Err(e) => Err(e),
    }
}

fn report_answer(report: &CrossCheckReport) -> Answer {
    let mut text = String::new();
    let mut checks = BTreeMap::new();
    for kind in CheckKind::ALL {
        let _ = writeln!(text, "{:<16} {}", kind.tag(), report.count(kind));
        checks.insert(kind.tag().to_string(), Dec::from(report.count(kind)));
    }
    let _ = writeln!(text, "{:<16} {}", "total", report.total_checks());
    let _ = writeln!(text, "oracle-certified {}", report.oracle_certified);
    let _ = writeln!(text, "oracle-skipped   {}", report.oracle_skipped);
    let _ = writeln!(text, "undetermined     {}", report.undetermined);
    let discrepancies: Vec<String> = report.discrepancies.iter().map(|d| d.to_string()).collect();
    for line in &discrepancies {
        let _ = writeln!(text, "DISCREPANCY {line}");
    }
    let _ = writeln!(text, "discrepancies: {}", discrepancies.len());
    let code = if discrepancies.is_empty() { EXIT_OK } else { EXIT_DISCREPANCY };
    let payload = Payload::Report {
        checks,
        total_checks: report.total_checks().into(),
        oracle_certified: report.oracle_certified.into(),
        oracle_skipped: report.oracle_skipped.into(),
        undetermined: report.undetermined.into(),
        discrepancies,
    };
    Answer { method: Method::BruteForce, payload, code, text }
}

fn cmd_verify(args: &VerifyArgs) -> Answer {
    let grid = Grid::full(args.a_max, args.b_max, args.n_max, args.k_max, args.y_bound);
    let report = oracle::cross_check(&grid, args.jobs as usize);
    report_answer(&report)
}

fn cf_inputs(args: &CfArgs) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    if let Some(d) = &args.d {
        m.insert("d".into(), d.trim().to_string());
    }
    for (key, value) in [("family", args.family.map(u64::from)), ("a", args.a), ("b", args.b)] {
        if let Some(v) = value {
            m.insert(key.into(), v.to_string());
        }
    }
    m
}

fn solve_inputs(args: &SolveArgs) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("d".into(), args.d.trim().to_string()),
        ("rhs".into(), args.rhs.to_string()),
        ("n".into(), args.n.to_string()),
        ("bound".into(), args.bound.to_string()),
    ])
}

fn family_inputs(args: &FamilyArgs) -> BTreeMap<String, String> {
    let mut m = BTreeMap::from([
        ("rhs".into(), args.rhs.to_string()),
        ("n".into(), args.n.to_string()),
        ("force".into(), args.force.to_string()),
        ("bound".into(), args.bound.to_string()),
    ]);
    for (key, value) in [("family", args.family.map(u64::from)), ("a", args.a), ("b", args.b), ("k", args.k)] {
        if let Some(v) = value {
            m.insert(key.into(), v.to_string());
        }
    }
    if let Some(c) = &args.corollary {
        m.insert("corollary".into(), c.clone());
    }
    m
}

fn verify_inputs(args: &VerifyArgs) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("a_max".into(), args.a_max.to_string()),
        ("b_max".into(), args.b_max.to_string()),
        ("n_max".into(), args.n_max.to_string()),
        ("k_max".into(), args.k_max.to_string()),
        ("y_bound".into(), args.y_bound.to_string()),
        ("jobs".into(), args.jobs.to_string()),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("pellkit").chain(args.iter().copied()))
    }

    #[test]
    fn cf_text() {
        let out = run_args(&["cf", "14"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("a0 = 3\nperiod = [1, 2, 1, 6]"), "{}", out.stdout);
        let out = run_args(&["cf", "16"]);
        assert_eq!(out.code, EXIT_USAGE);
        assert!(out.stderr.contains("perfect square"));
        let out = run_args(&["cf", "--family", "2", "--a", "3", "--b", "1"]);
        assert!(out.stdout.contains("period = [1, 1, 1, 4]") && out.stdout.contains("closed-form"));
        assert_eq!(run_args(&["cf"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["cf", "14", "--family", "1"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["cf", "--family", "3", "--a", "3", "--b", "1"]).code, EXIT_USAGE);
    }

    #[test]
    fn solve_text() {
        let out = run_args(&["solve", "3", "1", "--n", "3"]);
        assert_eq!((out.code, out.stdout.as_str()), (0, "x = 26\ny = 15\nn = 3\nmethod = generic-cf\n"));
        let out = run_args(&["solve", "7", "-1"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.starts_with("no solution (even-period)"));
        let out = run_args(&["solve", "3", "-4"]);
        assert!(out.stdout.starts_with("no solution (minus-one-equivalence)"));
        assert_eq!(run_args(&["solve", "3", "2"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["solve", "9", "1"]).code, EXIT_USAGE);
        let out = run_args(&["solve", "21", "-4", "--bound", "20"]);
        assert_eq!(out.code, EXIT_UNDETERMINED);
    }

    #[test]
    fn family_text() {
        let out = run_args(&["family", "--family", "1", "--a", "2", "--b", "2", "1", "--n", "2"]);
        assert!(out.stdout.starts_with("x = 449\ny = 120\n"), "{}", out.stdout);
        let out = run_args(&["family", "--corollary", "9k2-3", "--k", "1", "1"]);
        assert!(out.stdout.starts_with("x = 5\ny = 2\n"));
        let out = run_args(&["family", "--family", "2", "--a", "2", "--b", "1", "1"]);
        assert_eq!(out.code, EXIT_USAGE);
        let out = run_args(&["family", "--family", "2", "--a", "2", "--b", "1", "1", "--force"]);
        // d = 4 − 2 = 2
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("x = 3\ny = 2\n") && out.stdout.contains("generic-cf"));
        let out = run_args(&["family", "--family", "2", "--a", "3", "--b", "1", "-1"]);
        assert!(out.stdout.starts_with("no solution (even-period)\nmethod = theorem"));
    }

    #[test]
    fn json_record_round_trips() {
        let out = run_args(&["solve", "14", "1", "--n", "2", "--format", "json"]);
        let record: OutputRecord = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(record.command, "solve");
        assert_eq!(record.method, "generic-cf");
        match &record.result {
            Payload::Solvability { solution: Some(s), .. } => assert_eq!(s.x, Dec::from(449)),
            other => panic!("unexpected payload {other:?}"),
        }
        let again = serde_json::to_string_pretty(&record).unwrap();
        assert_eq!(serde_json::from_str::<OutputRecord>(&again).unwrap(), record);
        assert!(out.stdout.contains("\"449\""));
    }

    #[test]
    fn json_error_record() {
        let out = run_args(&["cf", "16", "--format", "json"]);
        assert_eq!(out.code, EXIT_USAGE);
        let record: OutputRecord = serde_json::from_str(&out.stdout).unwrap();
        assert!(matches!(record.result, Payload::Error { .. }));
    }
}
