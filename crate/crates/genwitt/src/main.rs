//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on mathematical failure (a verification
//! that does not hold, an unreached witness target, a box that passes
//! the ad-diagonalizability scan), 2 on usage errors such as syntax or
//! dimension problems. Reports go to standard output, diagnostics to
//! standard error. For a fixed seed every command is deterministic.

use std::cmp::Ordering;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_traits::Zero;

use genwitt::algebra::AlgebraConfig;
use genwitt::derivations::{self, DerivationTable};
use genwitt::error::Error;
use genwitt::ideals::{self, AdDiagOutcome, IndexBox};
use genwitt::rational::Rational;
use genwitt::structure;
use genwitt::suites;
use genwitt::text;

#[derive(Parser)]
#[command(
    name = "genwitt",
    about = "Exact computer algebra for generalized Witt algebras",
    version
)]
struct Cli {
    /// Rank n of the algebra.
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,

    /// Comma-separated nonzero slopes m_1,…,m_n (default: all 1).
    #[arg(long, global = true)]
    m: Option<String>,

    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bracket of two elements.
    Bracket { x: String, y: String },
    /// Homogeneous decomposition by degree, lex-descending.
    Grade { x: String },
    /// Lexicographic comparison of two basis elements: prints <, = or >.
    Cmp { a: String, b: String },
    /// String number: the count of distinct degrees in the support.
    St { x: String },
    /// Greatest lower index over all terms.
    Lp { x: String },
    /// Multiplier M = (0|j)_t with [M,l] nonzero and all lower indices positive.
    Lemma1 { l: String },
    /// Breadth-first ideal closure of l; succeeds when every (0,…,0|0,…,0)_k is reached.
    IdealWitness {
        l: String,
        /// Multiplier box A,I.
        #[arg(long, value_parser = parse_box, default_value = "2,2")]
        mbox: IndexBox,
        /// Result box A,I; products leaving it are discarded whole.
        #[arg(long, value_parser = parse_box, default_value = "4,4")]
        rbox: IndexBox,
        #[arg(long, default_value_t = 20)]
        max_iter: usize,
    },
    /// Scan a box for a basis element that ad l fails to scale.
    AdDiag {
        l: String,
        /// Scan box A,I.
        #[arg(long = "box", value_parser = parse_box, default_value = "2,1")]
        window: IndexBox,
    },
    /// Antiderivative with respect to ∂ = (0|0)_1 (rank one).
    Integrate { f: String },
    /// Check the derivation identity on a tabulated map.
    VerifyDerivation { file: PathBuf },
    /// Split a tabulated derivation into inner + c·ad_∂ + scalar parts.
    Decompose {
        file: PathBuf,
        /// Window A,I the table must cover.
        #[arg(long, value_parser = parse_box)]
        window: Option<IndexBox>,
    },
    /// Run the deterministic property suites.
    Selftest {
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

fn parse_box(s: &str) -> Result<IndexBox, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected two comma-separated bounds A,I".into());
    }
    let parse = |p: &str| -> Result<i64, String> {
        let v: i64 = p.trim().parse().map_err(|_| format!("invalid bound '{p}'"))?;
        if v < 0 {
            return Err(format!("bound {v} must be non-negative"));
        }
        Ok(v)
    };
    Ok(IndexBox::new(parse(parts[0])?, parse(parts[1])?))
}

fn parse_slopes(text: Option<&str>, n: usize) -> Result<Vec<Rational>, String> {
    let Some(text) = text else {
        return Ok(vec![Rational::from_integer(1.into()); n]);
    };
    let mut slopes = Vec::new();
    for (idx, part) in text.split(',').enumerate() {
        let slope = Rational::from_str(part.trim())
            .map_err(|_| format!("invalid slope '{}'", part.trim()))?;
        if slope.is_zero() {
            return Err(format!(
                "slope m_{} must be nonzero: g_{}(a) = m·a is injective only for m ≠ 0",
                idx + 1,
                idx + 1
            ));
        }
        slopes.push(slope);
    }
    if slopes.len() != n {
        return Err(format!("--m lists {} slopes, --n is {n}", slopes.len()));
    }
    Ok(slopes)
}

const USAGE: u8 = 2;
const MATH_FAILURE: u8 = 1;

fn usage_err(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(USAGE)
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let slopes = match parse_slopes(cli.m.as_deref(), cli.n) {
        Ok(s) => s,
        Err(msg) => return usage_err(msg),
    };
    let cfg = match AlgebraConfig::new(slopes) {
        Ok(c) => c,
        Err(e) => return usage_err(e),
    };

    match run(&cli.command, &cfg, cli.seed) {
        Ok(code) => code,
        Err(e) => match e {
            // mathematical verdicts about well-formed input
            Error::SearchExhausted { .. } | Error::NotADerivation(_) => {
                eprintln!("error: {e}");
                ExitCode::from(MATH_FAILURE)
            }
            other => usage_err(other),
        },
    }
}

fn run(command: &Command, cfg: &AlgebraConfig, seed: u64) -> Result<ExitCode, Error> {
    let n = cfg.n();
    match command {
        Command::Bracket { x, y } => {
            let x = text::parse_element(x, n)?;
            let y = text::parse_element(y, n)?;
            println!("{}", cfg.bracket(&x, &y)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Grade { x } => {
            let x = text::parse_element(x, n)?;
            for (degree, component) in structure::decompose(&x) {
                println!("{degree}: {component}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cmp { a, b } => {
            let a = text::parse_basis_element(a, n)?;
            let b = text::parse_basis_element(b, n)?;
            let sym = match structure::lex_cmp(&a, &b) {
                Ordering::Less => "<",
                Ordering::Equal => "=",
                Ordering::Greater => ">",
            };
            println!("{sym}");
            Ok(ExitCode::SUCCESS)
        }
        Command::St { x } => {
            let x = text::parse_element(x, n)?;
            println!("{}", structure::string_number(&x));
            Ok(ExitCode::SUCCESS)
        }
        Command::Lp { x } => {
            let x = text::parse_element(x, n)?;
            println!("{}", structure::lp(&x)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Lemma1 { l } => {
            let l = text::parse_element(l, n)?;
            let (multiplier, product) = ideals::lemma1_multiplier(cfg, &l)?;
            println!("M = {multiplier}");
            println!("[M,l] = {product}");
            Ok(ExitCode::SUCCESS)
        }
        Command::IdealWitness { l, mbox, rbox, max_iter } => {
            let l = text::parse_element(l, n)?;
            let report = ideals::ideal_closure(cfg, &l, *mbox, *rbox, *max_iter)?;
            let targets = report
                .reached_targets()
                .iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(",");
            println!("generator: {}", report.generator());
            println!("rank: {}", report.rank());
            println!("iterations: {}", report.iterations());
            println!("saturated: {}", report.saturated());
            println!("reached targets: [{targets}] ({} of {n})", report.reached_targets().len());
            if std::env::var("GENWITT_CLOSURE_STATS").is_ok() {
                eprintln!(
                    "stats: reduces={} hits={} deltas={} backsub={}",
                    genwitt::ideals::STAT_REDUCES.load(std::sync::atomic::Ordering::Relaxed),
                    genwitt::ideals::STAT_HITS.load(std::sync::atomic::Ordering::Relaxed),
                    genwitt::ideals::STAT_DELTAS.load(std::sync::atomic::Ordering::Relaxed),
                    genwitt::ideals::STAT_BACKSUB.load(std::sync::atomic::Ordering::Relaxed),
                );
            }
            if report.all_targets_reached() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(MATH_FAILURE))
            }
        }
        Command::AdDiag { l, window } => {
            let l = text::parse_element(l, n)?;
            match ideals::ad_diag_check(cfg, &l, *window)? {
                AdDiagOutcome::Counterexample(m) => {
                    println!("{m}");
                    Ok(ExitCode::SUCCESS)
                }
                AdDiagOutcome::PassesBox => {
                    println!("passes box");
                    Ok(ExitCode::from(MATH_FAILURE))
                }
            }
        }
        Command::Integrate { f } => {
            let f = text::parse_function_element(f, n)?;
            println!("{}", derivations::integrate(cfg, &f)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyDerivation { file } => {
            let table = read_table(file)?;
            let violations = derivations::verify_derivation(cfg, &table)?;
            if violations.is_empty() {
                println!("ok: derivation identity holds on every resolvable window pair");
                Ok(ExitCode::SUCCESS)
            } else {
                for v in &violations {
                    println!("violation at [{}, {}]: {}", v.left, v.right, v.discrepancy);
                }
                Ok(ExitCode::from(MATH_FAILURE))
            }
        }
        Command::Decompose { file, window } => {
            let table = read_table(file)?;
            if let Some(window) = window {
                for key in DerivationTable::window_keys(*window) {
                    if !table.contains_key(&key) {
                        return Err(Error::IncompleteTable { missing: key.to_string() });
                    }
                }
            }
            let deco = derivations::decompose(cfg, &table)?;
            println!("G = {}", deco.inner);
            println!("c = {}", deco.del_coeff);
            println!("s = {}", deco.scalar_slope);
            if deco.is_clean() {
                Ok(ExitCode::SUCCESS)
            } else {
                for r in &deco.residual_report {
                    println!("residual at {}: {}", r.at, r.discrepancy);
                }
                Ok(ExitCode::from(MATH_FAILURE))
            }
        }
        Command::Selftest { trials } => {
            let results = suites::run_selftest(cfg, seed, *trials);
            let mut all_ok = true;
            for r in &results {
                println!("{:<24}{}/{}", r.name, r.passed, r.total);
                all_ok &= r.ok();
            }
            if all_ok {
                println!("selftest: PASS (seed {seed}, n {n})");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("selftest: FAIL (seed {seed}, n {n})");
                Ok(ExitCode::from(MATH_FAILURE))
            }
        }
    }
}

fn read_table(path: &PathBuf) -> Result<DerivationTable, Error> {
    let contents = std::fs::read_to_string(path).map_err(|e| Error::FileRead {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    text::parse_derivation_table(&contents)
}
