mod config;

use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use congruent_core::criteria::classify_by_tables;
use congruent_core::descent::{run_descent, DescentSeed};
use congruent_core::ecparam::{
    point_from_triangle, points_from_tuple, triangle_from_point, tuple_from_point, CurvePoint, ParamTuple, Triangle,
};
use congruent_core::numth::{gauss_lemma_count, legendre_euler, legendre_reciprocity};
use congruent_core::oracle::{search_triangles, search_tuples, search_tuples_adaptive, search_tuples_square_classes};
use congruent_core::report::{report, Verdict};
use congruent_core::tunnell::tunnell_identity_with_workers;
use congruent_core::{Error, Rational};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::Config;

const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(name = "congruent", version, about = "Congruent number toolkit; all output is JSON")]
struct Cli {
    /// TOML file with default bounds.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Single-line JSON instead of pretty-printed.
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Criteria tables for a squarefree n.
    Classify { n: u64 },
    /// Tunnell's counts and identity for a squarefree n.
    Tunnell {
        n: u64,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Descent on a prime d, from one tuple or from all tuples up to a bound.
    Descent {
        d: u64,
        #[arg(long)]
        bound: Option<u64>,
        /// k,j,m,e
        #[arg(long, conflicts_with = "bound")]
        seed: Option<String>,
        #[arg(long)]
        trace_json: Option<PathBuf>,
        #[arg(long)]
        trace_dot: Option<PathBuf>,
    },
    /// Tuples (k, j, m, e) for d with m <= bound.
    SearchTuples {
        d: u64,
        #[arg(long)]
        bound: Option<u64>,
        /// Enumerate square classes instead of the whole box.
        #[arg(long)]
        fast: bool,
        /// Double the bound until a hit appears, up to this cap.
        #[arg(long)]
        adaptive: Option<u64>,
    },
    /// Rational right triangles of area d from primitive triples with m <= bound.
    SearchTriangles {
        d: u64,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Convert between a tuple, a curve point and a triangle.
    #[command(group(ArgGroup::new("input").required(true).args(["tuple", "point", "triangle"])))]
    Convert {
        /// k,j,m,e
        #[arg(long)]
        tuple: Option<String>,
        /// d,x,y with rational x, y
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// a,b,c with rational sides
        #[arg(long)]
        triangle: Option<String>,
    },
    /// Legendre symbol (a/p) three ways.
    Legendre {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        p: u64,
    },
    /// Full verdict for n, a range, or integers read from stdin.
    Report {
        #[arg(conflicts_with_all = ["range", "stdin"])]
        n: Option<u64>,
        /// a..b (b excluded) or a..=b
        #[arg(long)]
        range: Option<String>,
        /// One integer per line.
        #[arg(long)]
        stdin: bool,
        #[arg(long)]
        tuple_bound: Option<u64>,
        #[arg(long)]
        descent_bound: Option<u64>,
        #[arg(long)]
        tunnell_max: Option<u64>,
    },
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistency(_) | Error::RecursionSafety(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn io_failure(e: io::Error) -> Failure {
    Failure::Internal(e.to_string())
}

type Outcome = Result<u8, Failure>;

struct Out {
    compact: bool,
}

impl Out {
    fn emit<T: Serialize>(&self, value: &T) -> Result<(), Failure> {
        let text = if self.compact {
            serde_json::to_string(value)
        } else {
            serde_json::to_string_pretty(value)
        }
        .map_err(|e| Failure::Internal(e.to_string()))?;
        let mut stdout = io::stdout().lock();
        match writeln!(stdout, "{text}") {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(io_failure(e)),
            _ => Ok(()),
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, len: usize, what: &str) -> Result<Vec<T>, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != len {
        return Err(usage(format!("{what} needs {len} comma-separated values, got {s:?}")));
    }
    parts
        .iter()
        .map(|p| p.parse::<T>().map_err(|_| usage(format!("bad value {p:?} in {what}"))))
        .collect()
}

fn parse_range(s: &str) -> Result<Vec<u64>, Failure> {
    let bad = || usage(format!("range must look like a..b or a..=b, got {s:?}"));
    let (lo, hi, inclusive) = match s.split_once("..=") {
        Some((a, b)) => (a, b, true),
        None => {
            let (a, b) = s.split_once("..").ok_or_else(bad)?;
            (a, b, false)
        }
    };
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    Ok(if inclusive { (lo..=hi).collect() } else { (lo..hi).collect() })
}

fn read_stdin() -> Result<Vec<u64>, Failure> {
    let mut out = Vec::new();
    for line in io::stdin().lock().lines() {
        let line = line.map_err(io_failure)?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        out.push(line.parse().map_err(|_| usage(format!("not an integer: {line:?}")))?);
    }
    Ok(out)
}

fn verdict_exit(verdicts: &[Verdict]) -> u8 {
    if verdicts.iter().all(|v| v.status.is_decisive()) {
        0
    } else {
        EXIT_UNKNOWN
    }
}

fn convert(tuple: Option<String>, point: Option<String>, triangle: Option<String>, out: &Out) -> Outcome {
    if let Some(s) = tuple {
        let v: Vec<u64> = parse_list(&s, 4, "tuple")?;
        let t = ParamTuple::from_kjme(v[0], v[1], v[2], v[3])?;
        let points = points_from_tuple(&t)?;
        let triangles = [triangle_from_point(&points.first)?, triangle_from_point(&points.second)?];
        out.emit(&json!({ "tuple": t, "d": t.d, "points": points, "triangles": triangles }))?;
    } else if let Some(s) = point {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(usage("point needs d,x,y"));
        }
        let d: u64 = parts[0].trim().parse().map_err(|_| usage("bad d in point"))?;
        let x: Rational = parts[1].parse()?;
        let y: Rational = parts[2].parse()?;
        let p = CurvePoint::new(d, x, y)?;
        let t = tuple_from_point(&p)?;
        let tri = triangle_from_point(&p)?;
        out.emit(&json!({ "point": p, "tuple": t, "triangle": tri }))?;
    } else if let Some(s) = triangle {
        let v: Vec<Rational> = parse_list(&s, 3, "triangle")?;
        let tri = Triangle::from_sides(v[0].clone(), v[1].clone(), v[2].clone())?;
        let p = point_from_triangle(&tri)?;
        let t = tuple_from_point(&p)?;
        out.emit(&json!({ "triangle": tri, "point": p, "tuple": t }))?;
    }
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    let cfg = Config::load(cli.config.as_deref()).map_err(Failure::Usage)?;
    let out = Out { compact: cli.compact };
    match cli.command {
        Command::Classify { n } => {
            let v = classify_by_tables(n)?;
            v.recheck()?;
            out.emit(&v)?;
            Ok(0)
        }
        Command::Tunnell { n, workers } => {
            let r = tunnell_identity_with_workers(n, workers.unwrap_or(cfg.workers))?;
            out.emit(&r)?;
            Ok(0)
        }
        Command::Descent {
            d,
            bound,
            seed,
            trace_json,
            trace_dot,
        } => {
            let seed = match seed {
                Some(s) => {
                    let v: Vec<u64> = parse_list(&s, 4, "seed")?;
                    DescentSeed::Tuple(ParamTuple::new(v[0], v[1], v[2], v[3], d)?)
                }
                None => DescentSeed::Bound(bound.unwrap_or(cfg.descent_bound)),
            };
            let run = run_descent(d, seed)?;
            if let Some(path) = trace_json {
                let text = serde_json::to_string_pretty(&run).map_err(|e| Failure::Internal(e.to_string()))?;
                std::fs::write(&path, text).map_err(io_failure)?;
            }
            if let Some(path) = trace_dot {
                std::fs::write(&path, run.to_dot()).map_err(io_failure)?;
            }
            out.emit(&run)?;
            Ok(0)
        }
        Command::SearchTuples {
            d,
            bound,
            fast,
            adaptive,
        } => {
            let bound = bound.unwrap_or(cfg.tuple_bound);
            let r = match adaptive {
                Some(cap) => search_tuples_adaptive(d, bound, cap)?,
                None if fast => search_tuples_square_classes(d, bound)?,
                None => search_tuples(d, bound),
            };
            out.emit(&r)?;
            Ok(0)
        }
        Command::SearchTriangles { d, bound } => {
            out.emit(&search_triangles(d, bound.unwrap_or(cfg.triangle_bound)))?;
            Ok(0)
        }
        Command::Convert { tuple, point, triangle } => convert(tuple, point, triangle, &out),
        Command::Legendre { a, p } => {
            let euler = legendre_euler(a, p)?;
            let reciprocity = legendre_reciprocity(a, p)?;
            let gauss = gauss_lemma_count(a, p).ok();
            if euler != reciprocity {
                return Err(Failure::Internal(format!("({a}/{p}): Euler {euler}, reciprocity {reciprocity}")));
            }
            out.emit(&json!({ "a": a, "p": p, "value": euler, "euler": euler, "reciprocity": reciprocity, "gauss_count": gauss }))?;
            Ok(0)
        }
        Command::Report {
            n,
            range,
            stdin,
            tuple_bound,
            descent_bound,
            tunnell_max,
        } => {
            let mut rc = cfg.report();
            rc.tuple_bound = tuple_bound.unwrap_or(rc.tuple_bound);
            rc.descent_bound = descent_bound.unwrap_or(rc.descent_bound);
            rc.tunnell_max_n = tunnell_max.unwrap_or(rc.tunnell_max_n);
            if let Some(n) = n {
                let v = report(n, &rc)?;
                out.emit(&v)?;
                return Ok(verdict_exit(std::slice::from_ref(&v)));
            }
            let ns = match range {
                Some(r) => parse_range(&r)?,
                None if stdin => read_stdin()?,
                None => return Err(usage("report needs n, --range or --stdin")),
            };
            let verdicts = ns
                .par_iter()
                .map(|&n| report(n, &rc))
                .collect::<Result<Vec<_>, _>>()?;
            out.emit(&verdicts)?;
            Ok(verdict_exit(&verdicts))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal consistency failure: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
