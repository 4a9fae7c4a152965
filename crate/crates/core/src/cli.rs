//! The `protection` command-line tool.
//!
//! Every subcommand emits one record per result line, as JSON lines (default)
//! or CSV with dotted column names. A record looks like
//!
//! ```text
//! {"command": "...", "parameters": {...}, "result": {...},
//!  "provenance": {"module": "...", "formula": "..."}, "timing_ms": 0.12}
//! ```
//!
//! Exact rationals are objects `{"num": "...", "den": "...", "decimal": "...", "digits": D}`
//! with numerator and denominator as decimal strings and `decimal` truncated
//! toward zero to `D` places.
//!
//! Exit codes: 0 success, 1 failed acceptance check under `verify`,
//! 2 usage error, 3 tree size beyond the enumeration bound.

use std::ffi::OsString;
use std::io::{self, Write};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::acceptance;
use crate::asymptotics::{
    asym_p_ge, constant, displayed_pmf_y_correction, limit_pmf, truncate_decimal, AsymptoticValue,
    ConstantName, Interval,
};
use crate::exact::{dist_x_exact, dist_y_exact, r_explicit, s_explicit, DistributionTable, Method};
use crate::mellin::{self, Series};
use crate::sampler::estimate_survival;
use crate::tree::{Oracle, DEFAULT_ORACLE_BOUND};
use crate::{Error, Statistic};

const DEFAULT_DECIMALS: usize = 20;
const DEFAULT_CONSTANT_DIGITS: usize = 60;
const DEFAULT_TRIALS: u64 = 100_000;
const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "protection", version, about = "Protection numbers of random plane trees")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
    /// Seed for Monte Carlo sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of Monte Carlo trials.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Decimal places: certified digits for `constants`, rendering precision elsewhere.
    #[arg(long, global = true)]
    digits: Option<usize>,
    /// Largest tree size the exhaustive oracle accepts.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_BOUND)]
    oracle_bound: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exhaustive counts r(n,k) and s(n,k).
    Oracle {
        /// Sizes: `5`, `1..8` (inclusive) or `3,5,7`.
        n: String,
        /// Protection levels, same syntax; defaults to `0..n-1`.
        k: Option<String>,
    },
    /// Exact distribution of X_n or Y_n.
    ExactDist {
        statistic: Statistic,
        n: usize,
        #[arg(default_value = "explicit")]
        method: Method,
    },
    /// r(n,k) and s(n,k) from the binomial sums.
    RExplicit { n: usize, k: usize },
    /// Limiting point probabilities with their 1/n terms.
    LimitDist {
        statistic: Statistic,
        /// Protection levels; defaults to `0..10`.
        k: Option<String>,
    },
    /// Two-term expansion of P(statistic >= k) at size n.
    Asym { statistic: Statistic, k: u32, n: u64 },
    /// Certified decimal digits of c0..c3, d0..d3.
    Constants {
        /// Constant names, optionally followed by a digit count.
        args: Vec<String>,
    },
    /// Functional equations of the harmonic sums F and G.
    MellinCheck {
        /// Abscissas; defaults to a fixed set including log 2 and pi.
        xs: Vec<f64>,
        #[arg(long, default_value_t = mellin::MIN_TOLERANCE)]
        tol: f64,
    },
    /// Monte Carlo survival counts.
    Sample {
        statistic: Statistic,
        n: usize,
        trials: Option<u64>,
        seed: Option<u64>,
    },
    /// Runs every acceptance check.
    Verify,
}

#[derive(Debug, Serialize)]
struct Provenance {
    module: &'static str,
    formula: &'static str,
}

#[derive(Debug, Serialize)]
struct ReportRecord {
    command: &'static str,
    parameters: Value,
    result: Value,
    provenance: Provenance,
    timing_ms: f64,
}

struct Context {
    decimals: usize,
    oracle: Oracle,
    records: Vec<ReportRecord>,
    started: Instant,
}

impl Context {
    fn push(&mut self, command: &'static str, parameters: Value, result: Value, module: &'static str, formula: &'static str) {
        let timing_ms = self.started.elapsed().as_secs_f64() * 1e3;
        self.records.push(ReportRecord {
            command,
            parameters,
            result,
            provenance: Provenance { module, formula },
            timing_ms,
        });
        self.started = Instant::now();
    }

    fn rational(&self, q: &BigRational) -> Value {
        rational_json(q, self.decimals)
    }
}

pub fn rational_json(q: &BigRational, digits: usize) -> Value {
    json!({
        "num": q.numer().to_string(),
        "den": q.denom().to_string(),
        "decimal": truncate_decimal(q, digits),
        "digits": digits,
    })
}

fn integer_json(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

/// Parses `5`, `1..8` (inclusive) or `3,5,7`.
fn parse_range(s: &str) -> Result<Vec<usize>, Error> {
    let bad = || Error::InvalidArgument(format!("cannot parse range {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    let mut v = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

fn asym_json(ctx: &Context, v: &AsymptoticValue) -> Value {
    json!({
        "leading": ctx.rational(&v.leading),
        "correction": ctx.rational(&v.correction),
        "error": v.error.to_string(),
    })
}

fn interval_json(i: &Interval, digits: usize) -> Value {
    json!({ "lower": rational_json(&i.lower, digits), "upper": rational_json(&i.upper, digits) })
}

fn table_json(ctx: &Context, t: &DistributionTable) -> Value {
    json!({
        "survival": t.survival.iter().map(|q| ctx.rational(q)).collect::<Vec<_>>(),
        "pmf": t.pmf.iter().map(|q| ctx.rational(q)).collect::<Vec<_>>(),
        "mean": ctx.rational(&t.mean),
        "second_moment": ctx.rational(&t.second_moment),
        "variance": ctx.rational(&t.variance),
    })
}

fn execute(cli: &Cli, ctx: &mut Context, err: &mut dyn Write) -> Result<i32, Error> {
    match &cli.command {
        Command::Oracle { n, k } => {
            let sizes = parse_range(n)?;
            for &n in &sizes {
                if n == 0 {
                    return Err(Error::InvalidArgument("tree size must be positive".into()));
                }
                let tally = ctx.oracle.tally(n)?;
                let ks = match k {
                    Some(k) => parse_range(k)?,
                    None => (0..n).collect(),
                };
                for k in ks {
                    ctx.push(
                        "oracle",
                        json!({ "n": n, "k": k }),
                        json!({ "trees": tally.trees.to_string(), "r": tally.r(k).to_string(), "s": tally.s(k).to_string() }),
                        "tree",
                        "exhaustive enumeration of plane trees",
                    );
                }
            }
        }
        Command::ExactDist { statistic, n, method } => {
            let table = match statistic {
                Statistic::X => dist_x_exact(*n, *method, &ctx.oracle)?,
                Statistic::Y => dist_y_exact(*n, *method, &ctx.oracle)?,
            };
            let formula = match (statistic, method) {
                (_, Method::Oracle) => "exhaustive enumeration",
                (Statistic::X, Method::Series) => "R_k = z R_{k-1} / (1 - R_{k-1})",
                (Statistic::Y, Method::Series) => "S_k = R_k (1 + (1-4z)^(-1/2)) / 2",
                (_, Method::Explicit) => "alternating binomial sums",
            };
            let result = table_json(ctx, &table);
            ctx.push(
                "exact-dist",
                json!({ "statistic": statistic, "n": n, "method": method.as_str() }),
                result,
                "exact",
                formula,
            );
        }
        Command::RExplicit { n, k } => {
            if *n == 0 {
                return Err(Error::InvalidArgument("tree size must be positive".into()));
            }
            ctx.push(
                "r-explicit",
                json!({ "n": n, "k": k }),
                json!({ "r": integer_json(&r_explicit(*n, *k)), "s": integer_json(&s_explicit(*n, *k)) }),
                "exact",
                "r = sum_j (-1)^(j-1) [C(2n-3-(2k-1)j, n-(k+1)j) - C(2n-3-(2k-1)j, n-3-(k+1)j)]",
            );
        }
        Command::LimitDist { statistic, k } => {
            let ks = match k {
                Some(k) => parse_range(k)?,
                None => (0..=10).collect(),
            };
            for k in ks {
                let k = k as u32;
                let pmf = limit_pmf(*statistic, k);
                let mut result = json!({
                    "pmf": asym_json(ctx, &pmf),
                    "survival": asym_json(ctx, &asym_p_ge(*statistic, k)),
                });
                if *statistic == Statistic::Y {
                    result["pmf_displayed_correction"] = ctx.rational(&displayed_pmf_y_correction(k));
                }
                ctx.push(
                    "limit-dist",
                    json!({ "statistic": statistic, "k": k }),
                    result,
                    "asymptotics",
                    "P(= k) = P(>= k) - P(>= k+1), q = 4^k",
                );
            }
        }
        Command::Asym { statistic, k, n } => {
            if *n == 0 {
                return Err(Error::InvalidArgument("n must be positive".into()));
            }
            let v = asym_p_ge(*statistic, *k);
            let mut result = asym_json(ctx, &v);
            result["value"] = ctx.rational(&v.eval(*n));
            ctx.push(
                "asym",
                json!({ "statistic": statistic, "k": k, "n": n }),
                result,
                "asymptotics",
                match statistic {
                    Statistic::X => "9q/(q+2)^2 + 9q((3k-8)q^2 + 28q - (12k+20)) / (2(q+2)^4 n)",
                    Statistic::Y => "3/(q+2) + ((3k-10)q^2 + (6k+26)q - 16) / (2(q+2)^3 n)",
                },
            );
        }
        Command::Constants { args } => {
            let mut names = Vec::new();
            let mut digits = cli.digits.unwrap_or(DEFAULT_CONSTANT_DIGITS);
            for a in args {
                match a.parse::<usize>() {
                    Ok(d) => digits = d,
                    Err(_) => names.push(a.parse::<ConstantName>()?),
                }
            }
            if names.is_empty() {
                names = ConstantName::ALL.to_vec();
            }
            names.sort();
            names.dedup();
            for name in names {
                let e = constant(name, digits)?;
                ctx.push(
                    "constants",
                    json!({ "name": name.as_str(), "digits": digits }),
                    json!({
                        "decimal": e.decimal,
                        "certified": e.certified,
                        "terms": e.terms,
                        "enclosure": interval_json(&e.interval(), digits + 5),
                    }),
                    "asymptotics",
                    "exact partial sums over k <= K plus a geometric tail bound",
                );
            }
        }
        Command::MellinCheck { xs, tol } => {
            let mut xs = if xs.is_empty() { mellin::standard_abscissas().to_vec() } else { xs.clone() };
            xs.sort_by(f64::total_cmp);
            for x in xs {
                for series in [Series::F, Series::G] {
                    let value = mellin::eval(series, x, *tol)?;
                    let check = mellin::check_functional_eq(series, x)?;
                    ctx.push(
                        "mellin-check",
                        json!({ "series": series, "x": x, "tol": tol }),
                        json!({
                            "value": value.value,
                            "truncation_bound": value.truncation_bound,
                            "terms": value.terms,
                            "lhs": check.lhs,
                            "rhs": check.rhs,
                            "residual": check.residual,
                        }),
                        "mellin",
                        match series {
                            Series::F => "F(x) = 1/(4x) - (pi^2/x^2) F(pi^2/x)",
                            Series::G => "G(x) = pi^2/(24x^2) + 1/24 - (pi^2/x^2) G(pi^2/x)",
                        },
                    );
                }
            }
        }
        Command::Sample { statistic, n, trials, seed } => {
            let trials = trials.or(cli.trials).unwrap_or(DEFAULT_TRIALS);
            let seed = seed.or(cli.seed).unwrap_or(DEFAULT_SEED);
            let stats = estimate_survival(*statistic, *n, trials, seed)?;
            let fractions: Vec<f64> = (0..stats.survival_counts.len()).map(|k| stats.fraction_at_least(k)).collect();
            ctx.push(
                "sample",
                json!({ "statistic": statistic, "n": n, "trials": trials, "seed": seed }),
                json!({
                    "survival_counts": stats.survival_counts,
                    "survival_fractions": fractions,
                    "mean": stats.mean(),
                    "workers": stats.workers,
                    "rng": stats.rng,
                }),
                "sampler",
                "cycle-lemma rotation of a shuffled step sequence",
            );
        }
        Command::Verify => {
            let mut all = true;
            for check in acceptance::CRITERIA {
                let outcome = check();
                let _ = writeln!(err, "{outcome}");
                all &= outcome.passed;
                let elapsed = outcome.elapsed_ms;
                ctx.push(
                    "verify",
                    json!({ "criterion": outcome.id }),
                    json!({ "name": outcome.name, "passed": outcome.passed, "detail": outcome.detail, "elapsed_ms": elapsed as u64 }),
                    "acceptance",
                    "end-to-end acceptance check",
                );
            }
            return Ok(if all { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn flatten(prefix: &str, value: &Value, out: &mut Map<String, Value>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}

/// Writes records as CSV. The header is the union of all dotted keys in
/// order of first appearance; missing cells are empty.
pub fn write_csv(records: &[Value], out: &mut dyn Write) -> io::Result<()> {
    let rows: Vec<Map<String, Value>> = records
        .iter()
        .map(|r| {
            let mut m = Map::new();
            flatten("", r, &mut m);
            m
        })
        .collect();
    let mut header: Vec<String> = Vec::new();
    for row in &rows {
        for k in row.keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&header)?;
    for row in &rows {
        w.write_record(header.iter().map(|k| match row.get(k) {
            None | Some(Value::Null) => String::new(),
            Some(Value::String(s)) => s.clone(),
            Some(v) => v.to_string(),
        }))?;
    }
    w.flush()
}

/// Runs the tool writing records to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let mut ctx = Context {
        decimals: cli.digits.unwrap_or(DEFAULT_DECIMALS),
        oracle: Oracle::with_bound(cli.oracle_bound),
        records: Vec::new(),
        started: Instant::now(),
    };
    let code = match execute(&cli, &mut ctx, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return match e {
                Error::OracleBoundExceeded { .. } => 3,
                _ => 2,
            };
        }
    };
    let values: Vec<Value> = ctx.records.iter().map(|r| serde_json::to_value(r).expect("records serialize")).collect();
    let written = match cli.format {
        Format::Jsonl => values.iter().try_for_each(|v| writeln!(out, "{v}")),
        Format::Csv => write_csv(&values, out),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return 1;
    }
    code
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("protection").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn records(text: &str) -> Vec<Value> {
        text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3").unwrap(), vec![3]);
        assert_eq!(parse_range("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_range("2..=3").unwrap(), vec![2, 3]);
        assert_eq!(parse_range("7,3,3").unwrap(), vec![3, 7]);
        assert!(parse_range("4..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn exact_dist_of_four() {
        let (code, out, _) = call(&["exact-dist", "X", "4", "oracle"]);
        assert_eq!(code, 0);
        let r = &records(&out)[0];
        let survival: Vec<String> = r["result"]["survival"]
            .as_array()
            .unwrap()
            .iter()
            .map(|q| format!("{}/{}", q["num"].as_str().unwrap(), q["den"].as_str().unwrap()))
            .collect();
        assert_eq!(survival, ["1/1", "1/1", "2/5", "1/5"]);
        assert_eq!(r["provenance"]["module"], "exact");
    }

    #[test]
    fn constants_prefix() {
        let (code, out, _) = call(&["constants", "c0", "50"]);
        assert_eq!(code, 0);
        let r = &records(&out)[0];
        assert_eq!(r["result"]["decimal"], "1.62297138471535304951465820318434598963551366898406");
        assert_eq!(r["result"]["certified"], true);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["no-such-command"]).0, 2);
        assert_eq!(call(&["exact-dist", "Z", "4"]).0, 2);
        assert_eq!(call(&["constants", "e9"]).0, 2);
        assert_eq!(call(&["oracle", "15"]).0, 3);
        assert_eq!(call(&["--oracle-bound", "6", "exact-dist", "Y", "7", "oracle"]).0, 3);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn oracle_rows_are_sorted() {
        let (code, out, _) = call(&["oracle", "3..4", "1..2"]);
        assert_eq!(code, 0);
        let params: Vec<(u64, u64)> = records(&out)
            .iter()
            .map(|r| (r["parameters"]["n"].as_u64().unwrap(), r["parameters"]["k"].as_u64().unwrap()))
            .collect();
        assert_eq!(params, [(3, 1), (3, 2), (4, 1), (4, 2)]);
    }

    #[test]
    fn csv_output() {
        let (code, out, _) = call(&["--format", "csv", "r-explicit", "6", "2"]);
        assert_eq!(code, 0);
        let mut reader = csv::Reader::from_reader(out.as_bytes());
        let header = reader.headers().unwrap().clone();
        let row = reader.records().next().unwrap().unwrap();
        let col = header.iter().position(|h| h == "result.r").unwrap();
        assert_eq!(&row[col], r_explicit(6, 2).to_string());
        assert!(header.iter().any(|h| h == "provenance.formula"));
    }

    #[test]
    fn sample_is_reproducible() {
        let a = call(&["sample", "Y", "20", "2000", "5"]).1;
        let b = call(&["--trials", "2000", "--seed", "5", "sample", "Y", "20"]).1;
        let strip = |s: &str| {
            let mut v = records(s)[0].clone();
            v["timing_ms"] = Value::Null;
            v
        };
        assert_eq!(strip(&a), strip(&b));
    }

    #[test]
    fn other_subcommands_run() {
        for args in [
            &["limit-dist", "Y", "0..3"][..],
            &["asym", "X", "2", "100"],
            &["mellin-check", "1", "2"],
            &["--digits", "5", "exact-dist", "Y", "10", "series"],
        ] {
            let (code, out, err) = call(args);
            assert_eq!(code, 0, "{args:?}: {err}");
            assert!(!records(&out).is_empty());
        }
    }
}
