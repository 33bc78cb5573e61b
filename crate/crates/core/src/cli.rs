//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::cyclo::{direct_cauchy_series, factor_cauchy};
use crate::elliptic::{green22_eval, green2n2_eval};
use crate::error::{Error, Result};
use crate::exact::XiSeries;
use crate::green::{lift_branch, spectral_radius_estimate, GreenSeries};
use crate::transform::{pipeline, r_series_from_cauchy, WalkSpec};
use crate::walk::{return_counts, DEFAULT_STATE_LIMIT};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "amalgam-green", version, about = "Exact Green functions of random walks on amalgamated free products of integers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the R-transform (Q) and Cauchy-transform (P) relations
    Relation(RunConfig),
    /// B-valued Cauchy series coefficients as polynomials in xi
    Bvalued(RunConfig),
    /// Return probabilities and path counts from the series
    Green(RunConfig),
    /// Closed-form Green function value (all factors of index two)
    Eval(RunConfig),
    /// Return probabilities by direct path counting
    Oracle(RunConfig),
    /// Spectral radius estimate with uncertainty
    Radius(RunConfig),
    /// Cross-check the series, relations, oracle and closed forms
    Verify(RunConfig),
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Comma-separated indices m_1,...,m_N (each at least 2)
    #[arg(long = "m", value_name = "LIST")]
    pub m: WalkSpec,
    /// Series order (highest power of z or b)
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub order: Option<u64>,
    /// Number of walk steps for the path-counting oracle
    #[arg(long, default_value_t = 12)]
    pub steps: usize,
    /// Evaluation point for `eval`
    #[arg(long)]
    pub z: Option<f64>,
    /// Write output here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for the oracle
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// A rendered result: JSON document plus CSV table.
struct Output {
    json: Value,
    csv: String,
    ok: bool,
}

fn ratio_json(n: usize, p: &BigRational) -> Value {
    json!({"n": n, "num": p.numer().to_string(), "den": p.denom().to_string()})
}

fn header(spec: &WalkSpec) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("spec".into(), json!({"m": spec.m(), "s_size": spec.s_size()}));
    m
}

fn relations_json(spec: &WalkSpec) -> Result<Value> {
    let (q, p) = pipeline(spec)?;
    Ok(json!({"Q": q.render(), "P": p.render()}))
}

fn series_table(gs: &GreenSeries, csv: &mut String) -> (Value, Value) {
    csv.push_str("n,moment,num,den\n");
    for (n, (c, p)) in gs.moments.iter().zip(&gs.probabilities).enumerate() {
        let _ = writeln!(csv, "{n},{c},{},{}", p.numer(), p.denom());
    }
    (
        Value::Array(gs.moments.iter().map(|c| json!(c.to_string())).collect()),
        Value::Array(gs.probabilities.iter().enumerate().map(|(n, p)| ratio_json(n, p)).collect()),
    )
}

fn cmd_relation(cfg: &RunConfig) -> Result<Output> {
    let rels = relations_json(&cfg.m)?;
    let mut doc = header(&cfg.m);
    let csv = format!(
        "name,polynomial\nQ,\"{}\"\nP,\"{}\"\n",
        rels["Q"].as_str().unwrap_or_default(),
        rels["P"].as_str().unwrap_or_default()
    );
    doc.insert("relations".into(), rels);
    Ok(Output { json: Value::Object(doc), csv, ok: true })
}

fn cmd_bvalued(cfg: &RunConfig) -> Result<Output> {
    let order = cfg.order.unwrap_or(12) as usize;
    let (q, p) = pipeline(&cfg.m)?;
    let c = lift_branch(&p, order)?;
    let mut csv = String::from("power,xi_power,num,den\n");
    let mut coeffs = Vec::new();
    for (k, f) in c.coeffs().iter().enumerate() {
        let mut terms = Vec::new();
        for (j, a) in f.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let _ = writeln!(csv, "{k},{j},{},{}", a.numer(), a.denom());
            terms.push(json!({"xi_power": j, "num": a.numer().to_string(), "den": a.denom().to_string()}));
        }
        coeffs.push(json!({"power": k, "poly": f.to_string(), "terms": terms}));
    }
    let mut doc = header(&cfg.m);
    doc.insert("order".into(), json!(order));
    doc.insert("bvalued".into(), Value::Array(coeffs));
    doc.insert("relations".into(), json!({"Q": q.render(), "P": p.render()}));
    Ok(Output { json: Value::Object(doc), csv, ok: true })
}

fn cmd_green(cfg: &RunConfig) -> Result<Output> {
    let order = cfg.order.unwrap_or(30) as usize;
    let (q, p) = pipeline(&cfg.m)?;
    let c = lift_branch(&p, order + 1)?;
    let gs = GreenSeries::from_branch(&cfg.m, &c, order)?;
    let mut csv = String::new();
    let (moments, probs) = series_table(&gs, &mut csv);
    let mut doc = header(&cfg.m);
    doc.insert("order".into(), json!(order));
    doc.insert("moments".into(), moments);
    doc.insert("p".into(), probs);
    doc.insert("relations".into(), json!({"Q": q.render(), "P": p.render()}));
    Ok(Output { json: Value::Object(doc), csv, ok: true })
}

fn closed_form(spec: &WalkSpec, z: f64) -> Result<f64> {
    if !spec.all_two() {
        return Err(Error::InvalidArgument(format!(
            "closed forms exist only when every index is 2, got {spec}"
        )));
    }
    match spec.factors() {
        2 => green22_eval(z),
        n => green2n2_eval(n, z),
    }
}

fn cmd_eval(cfg: &RunConfig) -> Result<Output> {
    let z = cfg.z.ok_or_else(|| Error::InvalidArgument("eval needs --z".into()))?;
    let value = closed_form(&cfg.m, z)?;
    let mut doc = header(&cfg.m);
    doc.insert("eval".into(), json!({"z": z, "value": value}));
    Ok(Output { json: Value::Object(doc), csv: format!("z,value\n{z:?},{value:?}\n"), ok: true })
}

fn oracle_probabilities(spec: &WalkSpec, steps: usize, threads: usize) -> Result<(Vec<BigInt>, Vec<BigRational>)> {
    let counts: Vec<BigInt> = return_counts(spec, steps, threads, DEFAULT_STATE_LIMIT)?
        .into_iter()
        .map(BigInt::from)
        .collect();
    let s = BigInt::from(spec.s_size());
    let probs = counts
        .iter()
        .enumerate()
        .map(|(n, c)| BigRational::new(c.clone(), num_traits::pow(s.clone(), n)))
        .collect();
    Ok((counts, probs))
}

fn cmd_oracle(cfg: &RunConfig) -> Result<Output> {
    let (counts, probs) = oracle_probabilities(&cfg.m, cfg.steps, cfg.threads)?;
    let mut csv = String::from("n,moment,num,den\n");
    for (n, (c, p)) in counts.iter().zip(&probs).enumerate() {
        let _ = writeln!(csv, "{n},{c},{},{}", p.numer(), p.denom());
    }
    let mut doc = header(&cfg.m);
    doc.insert("steps".into(), json!(cfg.steps));
    doc.insert("moments".into(), Value::Array(counts.iter().map(|c| json!(c.to_string())).collect()));
    doc.insert("p".into(), Value::Array(probs.iter().enumerate().map(|(n, p)| ratio_json(n, p)).collect()));
    Ok(Output { json: Value::Object(doc), csv, ok: true })
}

fn cmd_radius(cfg: &RunConfig) -> Result<Output> {
    let order = cfg.order.unwrap_or(60) as usize;
    let gs = crate::green::green_series(&cfg.m, order)?;
    let (estimate, uncertainty) = spectral_radius_estimate(&gs)?;
    let mut doc = header(&cfg.m);
    doc.insert("order".into(), json!(order));
    doc.insert("radius".into(), json!({"estimate": estimate, "uncertainty": uncertainty}));
    Ok(Output {
        json: Value::Object(doc),
        csv: format!("estimate,uncertainty\n{estimate:?},{uncertainty:?}\n"),
        ok: true,
    })
}

/// Series terms used when comparing closed forms with the series.
const CLOSED_FORM_TERMS: usize = 60;

/// Outcome of one cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// Runs every available cross-check for `spec`: single-factor
/// factorizations against the direct walk series, annihilation of the
/// relations by their branches to order `order`, series probabilities
/// against path counting through `steps`, and closed forms against the
/// series when every index is 2.
pub fn verify_all(spec: &WalkSpec, order: usize, steps: usize, threads: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut distinct = spec.m().to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for &m in &distinct {
        let f = factor_cauchy(m)?;
        let direct = direct_cauchy_series(m, order)?;
        let same = f.series(order) == direct;
        checks.push(Check::new(
            format!("factorization m={m}"),
            same,
            if same { format!("agrees with path counting through b^{order}") } else { "series differ".into() },
        ));
    }

    let (q, p) = pipeline(spec)?;
    let mut r = XiSeries::zero(order);
    for &m in spec.m() {
        r = &r + &r_series_from_cauchy(m, order)?;
    }
    let ok = q.annihilates(&r);
    checks.push(Check::new("Q annihilates R", ok, format!("{} through b^{order}", q.render())));
    let c = lift_branch(&p, order.max(steps) + 1)?;
    let ok = p.annihilates(&c);
    checks.push(Check::new("P annihilates C", ok, format!("{} through b^{}", p.render(), c.order())));

    let gs = GreenSeries::from_branch(spec, &c, order.max(steps))?;
    let (_, oracle) = oracle_probabilities(spec, steps, threads)?;
    let mismatch = (0..=steps).find(|&n| gs.probabilities[n] != oracle[n]);
    checks.push(Check::new(
        "series matches path counting",
        mismatch.is_none(),
        match mismatch {
            None => format!("p_0..p_{steps} equal"),
            Some(n) => format!("p_{n}: series {} vs oracle {}", gs.probabilities[n], oracle[n]),
        },
    ));

    if spec.all_two() {
        // the comparison needs a converged partial sum at z = 0.5
        let long = if gs.order >= CLOSED_FORM_TERMS {
            gs
        } else {
            GreenSeries::from_branch(spec, &lift_branch(&p, CLOSED_FORM_TERMS + 1)?, CLOSED_FORM_TERMS)?
        };
        let mut worst: f64 = 0.0;
        for i in 1..=5 {
            let z = i as f64 / 10.0;
            let err = (closed_form(spec, z)? - long.partial_sum(z)).abs();
            worst = worst.max(err);
        }
        checks.push(Check::new(
            "closed form matches series",
            worst < 1e-8,
            format!("max deviation {worst:.3e} on z = 0.1..0.5"),
        ));
    }
    Ok(checks)
}

fn cmd_verify(cfg: &RunConfig) -> Result<Output> {
    let order = cfg.order.unwrap_or(30) as usize;
    let checks = verify_all(&cfg.m, order, cfg.steps, cfg.threads)?;
    let ok = checks.iter().all(|c| c.passed);
    let mut csv = String::from("check,passed,detail\n");
    for c in &checks {
        let _ = writeln!(csv, "\"{}\",{},\"{}\"", c.name, c.passed, c.detail.replace('"', "'"));
    }
    let mut doc = header(&cfg.m);
    doc.insert("order".into(), json!(order));
    doc.insert("steps".into(), json!(cfg.steps));
    doc.insert("passed".into(), json!(ok));
    doc.insert(
        "checks".into(),
        Value::Array(
            checks
                .iter()
                .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                .collect(),
        ),
    );
    Ok(Output { json: Value::Object(doc), csv, ok })
}

fn emit(out: &Output, cfg: &RunConfig) -> std::io::Result<()> {
    let text = match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Csv => out.csv.clone(),
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code: 0 success, 1 usage or domain error,
/// 2 internal invariant failure or failed verification.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let (cfg, result) = match &cli.command {
        Command::Relation(c) => (c, cmd_relation(c)),
        Command::Bvalued(c) => (c, cmd_bvalued(c)),
        Command::Green(c) => (c, cmd_green(c)),
        Command::Eval(c) => (c, cmd_eval(c)),
        Command::Oracle(c) => (c, cmd_oracle(c)),
        Command::Radius(c) => (c, cmd_radius(c)),
        Command::Verify(c) => (c, cmd_verify(c)),
    };
    match result {
        Ok(out) => {
            if let Err(e) = emit(&out, cfg) {
                eprintln!("error: cannot write output: {e}");
                return 1;
            }
            if out.ok {
                0
            } else {
                eprintln!("error: verification failed");
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_internal() {
                2
            } else {
                1
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_to_string(args: &[&str]) -> (i32, String) {
        let dir = std::env::temp_dir().join(format!("amalgam-green-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(format!("{}.out", args.join("_").replace(['-', ',', '.', ' '], "")));
        let mut argv = vec!["amalgam-green"];
        argv.extend_from_slice(args);
        let p = path.to_str().unwrap().to_string();
        argv.extend_from_slice(&["--out", &p]);
        let code = run_command(argv);
        let text = std::fs::read_to_string(&path).unwrap_or_default();
        (code, text)
    }

    #[test]
    fn green_json() {
        let (code, text) = run_to_string(&["green", "--m", "2,3", "--order", "10"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&text).unwrap();
        let moments: Vec<&str> = v["moments"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
        assert_eq!(moments, ["1", "0", "4", "0", "28", "10", "244", "210", "2412", "3366", "26014"]);
        assert_eq!(v["spec"]["s_size"], 4);
        assert_eq!(v["p"][4]["num"], "7");
        assert_eq!(v["p"][4]["den"], "64");
    }

    #[test]
    fn relation_and_eval() {
        let (code, text) = run_to_string(&["relation", "--m", "2,2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert!(v["relations"]["Q"].as_str().unwrap().contains("R^2"));
        let (code, text) = run_to_string(&["eval", "--m", "2,2", "--z", "0"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["eval"]["value"], 1.0);
    }

    #[test]
    fn csv_matches_json() {
        let (_, json_text) = run_to_string(&["oracle", "--m", "2,2", "--steps", "6"]);
        let (_, csv) = run_to_string(&["oracle", "--m", "2,2", "--steps", "6", "--format", "csv"]);
        let v: Value = serde_json::from_str(&json_text).unwrap();
        for (n, line) in csv.lines().skip(1).enumerate() {
            let f: Vec<&str> = line.split(',').collect();
            assert_eq!(f[0], n.to_string());
            assert_eq!(f[1], v["moments"][n]);
            assert_eq!(f[2], v["p"][n]["num"]);
            assert_eq!(f[3], v["p"][n]["den"]);
        }
    }

    #[test]
    fn deterministic_output() {
        let a = run_to_string(&["green", "--m", "2,2", "--order", "8"]).1;
        let b = run_to_string(&["green", "--m", "2,2", "--order", "8"]).1;
        assert_eq!(a, b);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_command(["amalgam-green", "green", "--m", "2,1"]), 1);
        assert_eq!(run_command(["amalgam-green", "eval", "--m", "2,3", "--z", "0.1"]), 1);
        assert_eq!(run_command(["amalgam-green", "eval", "--m", "2,2", "--z", "1.5"]), 1);
        assert_eq!(run_command(["amalgam-green", "bogus"]), 1);
        assert_eq!(run_command(["amalgam-green", "green", "--m", "2,2", "--order", "0"]), 1);
    }

    #[test]
    fn verify_passes() {
        let checks = verify_all(&"2,3".parse().unwrap(), 30, 12, 1).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        let checks = verify_all(&"2,2".parse().unwrap(), 60, 12, 1).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        assert!(checks.iter().any(|c| c.name.contains("closed form")));
        let checks = verify_all(&"2,2,2".parse().unwrap(), 12, 8, 1).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }
}
