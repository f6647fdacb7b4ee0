//! End-to-end verdict for one integer: squarefree reduction, criteria tables,
//! Tunnell, a bounded tuple search and, for primes `≡ 3 (mod 8)`, the descent.
//!
//! All stages run; the earliest decisive one is named in `decided_by`.
//! Disagreeing stages abort with [`Error::Inconsistency`].

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::criteria::{classify_by_tables, TableVerdict};
use crate::descent::{run_descent, DescentSeed, RunConclusion};
use crate::ecparam::{point_from_triangle, points_from_tuple, triangle_from_point, CurvePoint, ParamTuple, Triangle};
use crate::error::{ensure, Error, Result};
use crate::numth::{is_prime, squarefree_decomposition};
use crate::oracle::{search_tuples_square_classes, DEFAULT_TUPLE_BOUND};
use crate::tunnell::{tunnell_identity, IdentityStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReportConfig {
    /// Tunnell counts are skipped above this.
    pub tunnell_max_n: u64,
    pub tuple_bound: u64,
    pub descent_bound: u64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            tunnell_max_n: 100_000_000,
            tuple_bound: DEFAULT_TUPLE_BOUND,
            descent_bound: DEFAULT_TUPLE_BOUND,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    CongruentWitnessed,
    CongruentAssumingBsd,
    NonCongruent,
    Unknown,
}

impl Status {
    pub fn is_decisive(self) -> bool {
        self != Status::Unknown
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Scaling,
    Criteria,
    Tunnell,
    Oracle,
    Descent,
}

/// What a single stage says about the reduced number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Congruent,
    CongruentAssumingBsd,
    NonCongruent,
    Silent,
}

impl Claim {
    fn congruent_side(self) -> Option<bool> {
        match self {
            Claim::Congruent | Claim::CongruentAssumingBsd => Some(true),
            Claim::NonCongruent => Some(false),
            Claim::Silent => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub source: Source,
    pub claim: Claim,
    pub detail: String,
    pub data: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Tuple for the squarefree part.
    pub tuple: ParamTuple,
    /// Triangle and point for `n` itself.
    pub triangle: Triangle,
    pub point: CurvePoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: Source,
    pub micros: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub n: u64,
    /// `n = scale² · reduced` with `reduced` squarefree.
    pub reduced: u64,
    pub scale: u64,
    pub status: Status,
    pub decided_by: Option<Source>,
    pub evidence: Vec<Evidence>,
    pub witness: Option<Witness>,
    pub timing: Vec<StageTiming>,
}

fn timed<T>(timing: &mut Vec<StageTiming>, stage: Source, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f();
    timing.push(StageTiming {
        stage,
        micros: start.elapsed().as_micros() as u64,
    });
    out
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn witness_for(n: u64, scale: u64, tuple: ParamTuple) -> Result<Witness> {
    let points = points_from_tuple(&tuple)?;
    let base = triangle_from_point(&points.first)?;
    let triangle = base.scaled(scale)?;
    ensure!(triangle.area == n, Inconsistency, "scaled witness has area {}", triangle.area);
    let point = point_from_triangle(&triangle)?;
    Ok(Witness { tuple, triangle, point })
}

pub fn report(n: u64, cfg: &ReportConfig) -> Result<Verdict> {
    ensure!(n > 0, InvalidArgument, "n must be a positive integer");
    let mut timing = Vec::new();
    let mut evidence = Vec::new();

    let (scale, q) = squarefree_decomposition(n)?;
    if scale > 1 {
        evidence.push(Evidence {
            source: Source::Scaling,
            claim: Claim::Silent,
            detail: format!("{n} = {scale}^2 * {q}; {n} is congruent iff {q} is"),
            data: json!({ "scale": scale, "reduced": q }),
        });
    }

    let table = timed(&mut timing, Source::Criteria, || {
        let v = classify_by_tables(q)?;
        v.recheck()?;
        Ok(v)
    })?;
    let claim = match table.verdict {
        TableVerdict::Congruent => Claim::Congruent,
        TableVerdict::NonCongruent => Claim::NonCongruent,
        TableVerdict::NoRule => Claim::Silent,
    };
    if let Some(fired) = &table.fired {
        log::info!("{q}: rule {} fired, symbols {:?}", fired.rule, fired.legendre);
    }
    evidence.push(Evidence {
        source: Source::Criteria,
        claim,
        detail: match table.rule_id {
            Some(rule) => format!("rule {rule} ({}) gives {:?}", rule.citation(), table.verdict),
            None => "no table rule matches".to_string(),
        },
        data: to_value(&table),
    });

    if q <= cfg.tunnell_max_n {
        let t = timed(&mut timing, Source::Tunnell, || tunnell_identity(q))?;
        let (lhs, rhs) = t.counts.relevant_pair();
        let claim = match t.identity {
            IdentityStatus::Fails => Claim::NonCongruent,
            IdentityStatus::Holds => Claim::CongruentAssumingBsd,
        };
        evidence.push(Evidence {
            source: Source::Tunnell,
            claim,
            detail: format!("2 * {lhs} vs {rhs}: identity {:?}", t.identity),
            data: to_value(&t),
        });
    } else {
        evidence.push(Evidence {
            source: Source::Tunnell,
            claim: Claim::Silent,
            detail: format!("skipped: {q} exceeds tunnell_max_n = {}", cfg.tunnell_max_n),
            data: serde_json::Value::Null,
        });
    }

    let search = timed(&mut timing, Source::Oracle, || search_tuples_square_classes(q, cfg.tuple_bound))?;
    let witness = match search.hits.first() {
        Some(&tuple) => Some(witness_for(n, scale, tuple)?),
        None => None,
    };
    evidence.push(Evidence {
        source: Source::Oracle,
        claim: if witness.is_some() { Claim::Congruent } else { Claim::Silent },
        detail: format!("{} tuple(s) with m <= {}", search.hits.len(), cfg.tuple_bound),
        data: json!({ "bound": search.bound, "method": search.method, "hits": search.hits.len(), "first": search.hits.first() }),
    });

    if is_prime(q) && q % 8 == 3 {
        let run = timed(&mut timing, Source::Descent, || run_descent(q, DescentSeed::Bound(cfg.descent_bound)))?;
        let claim = if run.applicability.applicable {
            Claim::NonCongruent
        } else {
            Claim::Silent
        };
        ensure!(
            !(run.applicability.applicable && !run.traces.is_empty()),
            Inconsistency,
            "descent found tuples for {q} although the theorem applies"
        );
        evidence.push(Evidence {
            source: Source::Descent,
            claim,
            detail: match run.conclusion {
                RunConclusion::NoSeeds { bound, .. } => format!("no tuples with m <= {bound}; theorem applies"),
                RunConclusion::Traced { seeds, .. } => format!("{seeds} seed(s) traced"),
            },
            data: json!({ "applicability": run.applicability, "conclusion": run.conclusion }),
        });
    }

    let sides: Vec<(Source, bool)> = evidence
        .iter()
        .filter_map(|e| e.claim.congruent_side().map(|c| (e.source, c)))
        .collect();
    if let (Some(yes), Some(no)) = (sides.iter().find(|s| s.1), sides.iter().find(|s| !s.1)) {
        return Err(Error::Inconsistency(format!(
            "{n}: {:?} says congruent but {:?} says not",
            yes.0, no.0
        )));
    }

    let status = if witness.is_some() {
        Status::CongruentWitnessed
    } else {
        match sides.first().map(|s| s.1) {
            Some(false) => Status::NonCongruent,
            Some(true) => Status::CongruentAssumingBsd,
            None => Status::Unknown,
        }
    };
    Ok(Verdict {
        n,
        reduced: q,
        scale,
        status,
        decided_by: sides.first().map(|s| s.0),
        evidence,
        witness,
        timing,
    })
}
