//! The descent behind the non-congruence of primes `d ≡ 3 (mod 8)`.
//!
//! A tuple `(k, j, m₁, e₁)` for `d` is normalized, sorted into one of four
//! cases, and either ruled out modulo `d`, kept (the case is consistent), or,
//! in Case 3, replaced by a strictly smaller tuple for the same `d`.
//! Every state, every branch of the case tree and every reason is recorded.

mod cases;
mod trace;

use serde::{Deserialize, Serialize};

pub use cases::*;

use crate::ecparam::ParamTuple;
use crate::error::{ensure, Error, Result};
use crate::numth::{gauss_lemma_count, is_prime, legendre};
use crate::oracle::{search_tuples_square_classes, SearchMethod};

/// Hard cap on Case 3 steps; each step at least square-roots `max(m, e)`.
pub const MAX_LEVELS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Applicability {
    pub d: u64,
    pub is_prime: bool,
    pub greater_than_three: bool,
    /// `(−1/d)`, when `d` is an odd prime.
    pub minus_one: Option<i8>,
    /// `(2/d)`, when `d` is an odd prime.
    pub two: Option<i8>,
    pub residue_mod8: u8,
    pub applicable: bool,
}

/// Whether the descent proves `d` non-congruent: `d > 3` prime with both
/// `−1` and `2` non-residues.
pub fn theorem1_applicable(d: u64) -> Applicability {
    let prime = is_prime(d);
    let odd_prime = prime && d > 2;
    let symbol = |a: i64| odd_prime.then(|| legendre(a, d).expect("odd prime modulus"));
    let (minus_one, two) = (symbol(-1), symbol(2));
    let applicable = prime && d > 3 && minus_one == Some(-1) && two == Some(-1);
    assert_eq!(
        applicable,
        prime && d > 3 && d % 8 == 3,
        "symbol test disagrees with d mod 8 for d = {d}"
    );
    Applicability {
        d,
        is_prime: prime,
        greater_than_three: d > 3,
        minus_one,
        two,
        residue_mod8: (d % 8) as u8,
        applicable,
    }
}

/// One child of a state in the case tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub case: CaseLabel,
    /// The tuple actually falls in this case.
    pub realized: bool,
    /// The residue condition that kills this case for `d`, if any.
    pub pruned_by: Option<ExclusionKind>,
}

fn branches(d: u64, realized: Option<CaseLabel>) -> Vec<Branch> {
    let app = theorem1_applicable(d);
    CaseLabel::BRANCHES
        .iter()
        .map(|&case| {
            let pruned_by = match case {
                CaseLabel::Case1 | CaseLabel::Case2 if app.minus_one == Some(-1) => {
                    Some(ExclusionKind::MinusOneNonResidue)
                }
                CaseLabel::Case4 if app.two == Some(-1) => Some(ExclusionKind::TwoNonResidue),
                _ => None,
            };
            Branch {
                case,
                realized: realized.map(CaseLabel::branch) == Some(case),
                pruned_by,
            }
        })
        .collect()
}

/// The bottom of the recursion, `j = 1`: then `e·m = d`, so `(m, e)` is
/// `(d, 1)` or `(1, d)`, and the latter has `m² − e² < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCase {
    pub forced: (u64, u64),
    pub rejected: (u64, u64),
    /// `(d, 1)` is Case 1/2 data, impossible iff `(−1/d) = −1`.
    pub minus_one: i8,
    pub contradiction: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TerminalAnalysis {
    /// `d` divides one of `k`, `m₁`, `e₁`; normalization does not apply.
    DivisibilityPremise(DivisibilityPremise),
    BaseCase(BaseCase),
}

pub fn base_case(d: u64) -> Result<BaseCase> {
    ensure!(is_prime(d) && d > 2, InvalidArgument, "d = {d} must be an odd prime");
    let minus_one = legendre(-1, d)?;
    Ok(BaseCase {
        forced: (d, 1),
        rejected: (1, d),
        minus_one,
        contradiction: minus_one == -1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentState {
    pub d: u64,
    pub level: usize,
    pub tuple: ParamTuple,
    pub normalized: Option<Normalized>,
    pub case: Option<CaseLabel>,
    pub witnesses: Option<CaseWitnesses>,
    pub branches: Vec<Branch>,
    pub verdict: Option<CaseVerdict>,
    pub reduction: Option<Case3Step>,
    pub terminal: Option<TerminalAnalysis>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum DescentOutcome {
    Contradiction { level: usize, reason: ExclusionReason },
    Terminated { level: usize, analysis: TerminalAnalysis },
    /// The realized case is consistent modulo `d`; no contradiction exists.
    WitnessFound { level: usize, survival: Survival },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentTrace {
    pub d: u64,
    pub seed: ParamTuple,
    pub states: Vec<DescentState>,
    pub outcome: DescentOutcome,
}

/// Follows one tuple down the recursion.
pub fn trace_seed(d: u64, seed: &ParamTuple) -> Result<DescentTrace> {
    ensure!(is_prime(d), InvalidArgument, "d = {d} must be prime");
    ensure!(seed.d == d, InvalidArgument, "seed is a tuple for {}, not {d}", seed.d);
    let seed = ParamTuple::new(seed.k, seed.j, seed.m, seed.e, d)?;
    let mut states = Vec::new();
    let mut current = seed;
    for level in 0..MAX_LEVELS {
        let mut state = DescentState {
            d,
            level,
            tuple: current,
            normalized: None,
            case: None,
            witnesses: None,
            branches: branches(d, None),
            verdict: None,
            reduction: None,
            terminal: None,
        };
        let premise = DivisibilityPremise::of(&current);
        if !premise.holds() {
            let analysis = TerminalAnalysis::DivisibilityPremise(premise);
            state.terminal = Some(analysis);
            states.push(state);
            return Ok(finish(d, seed, states, DescentOutcome::Terminated { level, analysis }));
        }
        let normalized = normalize_tuple(&current)?;
        state.normalized = Some(normalized);
        if current.j == 1 {
            let analysis = TerminalAnalysis::BaseCase(base_case(d)?);
            state.terminal = Some(analysis);
            states.push(state);
            return Ok(finish(d, seed, states, DescentOutcome::Terminated { level, analysis }));
        }

        let class = classify_case(d, normalized.m, normalized.e)?;
        state.case = Some(class.label);
        state.witnesses = Some(class.witnesses);
        state.branches = branches(d, Some(class.label));
        let verdict = case_exclusion(d, class.label, &class.witnesses)?;
        state.verdict = Some(verdict.clone());
        match verdict {
            CaseVerdict::Excluded(reason) => {
                states.push(state);
                return Ok(finish(d, seed, states, DescentOutcome::Contradiction { level, reason }));
            }
            CaseVerdict::Survives(survival) => {
                states.push(state);
                return Ok(finish(d, seed, states, DescentOutcome::WitnessFound { level, survival }));
            }
            CaseVerdict::Reduces => {
                let step = case3_reduce(d, &class.witnesses)?;
                let (before, after) = (current.m.max(current.e), step.next.m.max(step.next.e));
                if after >= before {
                    return Err(Error::RecursionSafety(format!(
                        "level {level}: max(m, e) went from {before} to {after}"
                    )));
                }
                log::debug!("d = {d}, level {level}: Case 3 step {:?} -> {:?}", current, step.next);
                state.reduction = Some(step);
                states.push(state);
                current = step.next;
            }
        }
    }
    Err(Error::RecursionSafety(format!("descent for d = {d} exceeded {MAX_LEVELS} levels")))
}

fn finish(d: u64, seed: ParamTuple, states: Vec<DescentState>, outcome: DescentOutcome) -> DescentTrace {
    DescentTrace {
        d,
        seed,
        states,
        outcome,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DescentSeed {
    Tuple(ParamTuple),
    /// Seeds are all tuples with `m₁ <= bound`.
    Bound(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "conclusion", rename_all = "snake_case")]
pub enum RunConclusion {
    /// No tuple up to the bound. When the theorem applies this is what it predicts.
    NoSeeds { bound: u64, consistent_with_theorem: bool },
    Traced {
        seeds: usize,
        contradictions: usize,
        witnesses: usize,
        terminated: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentRun {
    pub d: u64,
    pub applicability: Applicability,
    pub bound: Option<u64>,
    pub search_method: Option<SearchMethod>,
    pub traces: Vec<DescentTrace>,
    pub conclusion: RunConclusion,
}

/// Runs the descent on a given tuple, or on every tuple up to a bound.
///
/// Seeds for a bound come from the square-class search, which returns the
/// same tuples as the full box scan.
pub fn run_descent(d: u64, seed: DescentSeed) -> Result<DescentRun> {
    ensure!(is_prime(d), InvalidArgument, "d = {d} must be prime");
    let applicability = theorem1_applicable(d);
    let (seeds, bound, method) = match seed {
        DescentSeed::Tuple(t) => (vec![t], None, None),
        DescentSeed::Bound(b) => {
            let report = search_tuples_square_classes(d, b)?;
            (report.hits, Some(b), Some(report.method))
        }
    };
    let traces = seeds.iter().map(|s| trace_seed(d, s)).collect::<Result<Vec<_>>>()?;
    let conclusion = match (traces.is_empty(), bound) {
        (true, Some(bound)) => RunConclusion::NoSeeds {
            bound,
            consistent_with_theorem: applicability.applicable,
        },
        _ => {
            let count = |f: fn(&DescentOutcome) -> bool| traces.iter().filter(|t| f(&t.outcome)).count();
            RunConclusion::Traced {
                seeds: traces.len(),
                contradictions: count(|o| matches!(o, DescentOutcome::Contradiction { .. })),
                witnesses: count(|o| matches!(o, DescentOutcome::WitnessFound { .. })),
                terminated: count(|o| matches!(o, DescentOutcome::Terminated { .. })),
            }
        }
    };
    Ok(DescentRun {
        d,
        applicability,
        bound,
        search_method: method,
        traces,
        conclusion,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corollary1Report {
    pub p: u64,
    pub residue_mod8: u8,
    /// `(2/p)`; absent for `p = 2`.
    pub legendre_two: Option<i8>,
    /// Residues of `2, 4, …, p − 1` above `p/2`.
    pub gauss_count: Option<u64>,
    /// `2k + 2` for `p = 8k + 7`.
    pub expected_count: Option<u64>,
    pub asserted: bool,
}

/// For `p ≡ 7 (mod 8)` checks `(2/p) = 1` and the count `2k + 2`.
pub fn corollary1_check(p: u64) -> Result<Corollary1Report> {
    ensure!(is_prime(p), InvalidArgument, "{p} is not prime");
    let (legendre_two, gauss_count) = if p == 2 {
        (None, None)
    } else {
        (Some(legendre(2, p)?), Some(gauss_lemma_count(2, p)?))
    };
    let asserted = p % 8 == 7;
    let expected_count = asserted.then(|| 2 * ((p - 7) / 8) + 2);
    if asserted {
        ensure!(legendre_two == Some(1), Inconsistency, "(2/{p}) = {legendre_two:?}, expected 1");
        ensure!(
            gauss_count == expected_count,
            Inconsistency,
            "Gauss count for 2 mod {p} is {gauss_count:?}, expected {expected_count:?}"
        );
    }
    Ok(Corollary1Report {
        p,
        residue_mod8: (p % 8) as u8,
        legendre_two,
        gauss_count,
        expected_count,
        asserted,
    })
}
