//! Classification tables for squarefree `n` by prime signature.
//!
//! A signature is the presence of the factor 2 plus the multiset of residues
//! mod 8 of the odd prime factors; `p_k` below is a prime `≡ k (mod 8)`.
//! Rules are tried in [`RuleId::PRIORITY`] order: every non-congruence rule
//! before any congruence rule.
//!
//! | rule        | pattern                                  | verdict        |
//! |-------------|------------------------------------------|----------------|
//! | Iskra-1     | p3, 2p5, p3q3, 2p5q5                     | non-congruent  |
//! | Iskra-2     | p3·q3·…, (p_m/p_n) = −1 for all m < n    | non-congruent  |
//! | Lagrange-1  | p1p3, (p1/p3) = −1                       | non-congruent  |
//! | Lagrange-2  | 2p1p5, (p1/p5) = −1                      | non-congruent  |
//! | Bastien-2   | p1 = a² + 4b², ((a+2b)/p1) = −1          | non-congruent  |
//! | Monsky-1    | p5, p7, 2p7                              | congruent      |
//! | Monsky-2    | 2p3                                      | congruent      |
//! | Monsky-3    | p3p5, p3p7, 2p3p5, 2p5p7                 | congruent      |
//! | Monsky-4    | p1p5, (p1/p5) = −1                       | congruent      |
//! | Monsky-5    | p1p3, (p1/p3) = −1                       | congruent      |
//! | Monsky-6    | p1p7, 2p1p7, (p1/p7) = −1                | congruent      |
//! | Gross       | n ≡ 5, 6, 7 (mod 8), ≤ 2 odd primes      | congruent      |
//!
//! Monsky-5 has the same hypothesis as Lagrange-1 and therefore never decides
//! a verdict; it shows up in [`CriterionVerdict::also_matched`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::numth::{factorize, is_prime, legendre, square_root_exact_u64, Factorization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    #[serde(rename = "Iskra-1")]
    Iskra1,
    #[serde(rename = "Iskra-2")]
    Iskra2,
    #[serde(rename = "Lagrange-1")]
    Lagrange1,
    #[serde(rename = "Lagrange-2")]
    Lagrange2,
    #[serde(rename = "Bastien-2")]
    Bastien2,
    #[serde(rename = "Monsky-1")]
    Monsky1,
    #[serde(rename = "Monsky-2")]
    Monsky2,
    #[serde(rename = "Monsky-3")]
    Monsky3,
    #[serde(rename = "Monsky-4")]
    Monsky4,
    #[serde(rename = "Monsky-5")]
    Monsky5,
    #[serde(rename = "Monsky-6")]
    Monsky6,
    #[serde(rename = "Gross")]
    Gross,
}

impl RuleId {
    pub const PRIORITY: [RuleId; 12] = [
        RuleId::Iskra1,
        RuleId::Iskra2,
        RuleId::Lagrange1,
        RuleId::Lagrange2,
        RuleId::Bastien2,
        RuleId::Monsky1,
        RuleId::Monsky2,
        RuleId::Monsky3,
        RuleId::Monsky4,
        RuleId::Monsky5,
        RuleId::Monsky6,
        RuleId::Gross,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RuleId::Iskra1 => "Iskra-1",
            RuleId::Iskra2 => "Iskra-2",
            RuleId::Lagrange1 => "Lagrange-1",
            RuleId::Lagrange2 => "Lagrange-2",
            RuleId::Bastien2 => "Bastien-2",
            RuleId::Monsky1 => "Monsky-1",
            RuleId::Monsky2 => "Monsky-2",
            RuleId::Monsky3 => "Monsky-3",
            RuleId::Monsky4 => "Monsky-4",
            RuleId::Monsky5 => "Monsky-5",
            RuleId::Monsky6 => "Monsky-6",
            RuleId::Gross => "Gross",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            RuleId::Iskra1 => "Iskra (also Genocchi): p3, 2p5, p3q3, 2p5q5 are not congruent",
            RuleId::Iskra2 => "Iskra: p3 q3 ... with (p_m/p_n) = -1 for m < n is not congruent",
            RuleId::Lagrange1 => "Lagrange: p1p3 with (p1/p3) = -1 is not congruent",
            RuleId::Lagrange2 => "Lagrange: 2p1p5 with (p1/p5) = -1 is not congruent",
            RuleId::Bastien2 => "Bastien: p1 = a^2 + 4b^2 with ((a+2b)/p1) = -1 is not congruent",
            RuleId::Monsky1 => "Monsky (also Stephens): p5, p7, 2p7 are congruent",
            RuleId::Monsky2 => "Monsky (also Heegner, Birch): 2p3 is congruent",
            RuleId::Monsky3 => "Monsky: p3p5, p3p7, 2p3p5, 2p5p7 are congruent",
            RuleId::Monsky4 => "Monsky: p1p5 with (p1/p5) = -1 is congruent",
            RuleId::Monsky5 => "Monsky: p1p3 with (p1/p3) = -1 is congruent",
            RuleId::Monsky6 => "Monsky: p1p7, 2p1p7 with (p1/p7) = -1 are congruent",
            RuleId::Gross => "Gross: n = 5, 6, 7 (mod 8) with at most two odd prime factors is congruent",
        }
    }

    pub fn verdict(self) -> TableVerdict {
        match self {
            RuleId::Iskra1 | RuleId::Iskra2 | RuleId::Lagrange1 | RuleId::Lagrange2 | RuleId::Bastien2 => {
                TableVerdict::NonCongruent
            }
            _ => TableVerdict::Congruent,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableVerdict {
    Congruent,
    NonCongruent,
    NoRule,
}

/// One Legendre evaluation a rule depended on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendreCheck {
    pub a: i64,
    pub p: u64,
    pub value: i8,
}

impl LegendreCheck {
    fn eval(a: i64, p: u64) -> Result<Self> {
        Ok(LegendreCheck {
            a,
            p,
            value: legendre(a, p)?,
        })
    }
}

/// `p = a² + 4b²` with the canonical `a > 0`, plus the symbol under both signs of `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BastienData {
    pub a: u64,
    pub b: u64,
    pub canonical: LegendreCheck,
    pub alternate: LegendreCheck,
}

/// A rule whose hypothesis matched, with the values it was decided on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleMatch {
    pub rule: RuleId,
    pub verdict: TableVerdict,
    pub pattern: String,
    pub legendre: Vec<LegendreCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bastien: Option<BastienData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub n: u64,
    pub verdict: TableVerdict,
    pub rule_id: Option<RuleId>,
    pub citation: Option<String>,
    pub factorization: Factorization,
    /// The deciding match.
    pub fired: Option<RuleMatch>,
    /// Lower-priority rules whose hypotheses also matched.
    pub also_matched: Vec<RuleMatch>,
}

impl CriterionVerdict {
    /// Re-evaluates the deciding rule from scratch and compares.
    pub fn recheck(&self) -> Result<()> {
        let factorization = factorize(self.n)?;
        ensure!(factorization == self.factorization, Inconsistency, "factorization of {} changed", self.n);
        match (&self.rule_id, &self.fired) {
            (None, None) => {
                ensure!(self.verdict == TableVerdict::NoRule, Inconsistency, "verdict without a rule");
                Ok(())
            }
            (Some(rule), Some(fired)) => {
                let again = match_rule(*rule, &factorization)?;
                ensure!(
                    again.as_ref() == Some(fired) && fired.verdict == self.verdict,
                    Inconsistency,
                    "rule {rule} does not re-verify for {}",
                    self.n
                );
                for check in &fired.legendre {
                    ensure!(
                        legendre(check.a, check.p)? == check.value,
                        Inconsistency,
                        "recorded ({}/{}) = {} is wrong",
                        check.a,
                        check.p,
                        check.value
                    );
                }
                Ok(())
            }
            _ => Err(Error::Inconsistency("rule id and fired rule disagree".into())),
        }
    }
}

/// Finds `(a, b)` with `p = a² + 4b²`, `a > 0`, smallest `b`.
pub fn a_4b_decomposition(p: u64) -> Result<(u64, u64)> {
    ensure!(is_prime(p), InvalidArgument, "{p} is not prime");
    if p % 4 != 1 {
        return Err(Error::NoDecomposition(p));
    }
    (1u64..)
        .take_while(|b| 4 * b * b < p)
        .find_map(|b| square_root_exact_u64(p - 4 * b * b).map(|a| (a, b)))
        .ok_or(Error::NoDecomposition(p))
}

struct Signature {
    two: bool,
    /// odd primes, ascending
    odd: Vec<u64>,
    /// residues mod 8 of `odd`, sorted
    classes: Vec<u64>,
}

impl Signature {
    fn of(f: &Factorization) -> Self {
        let odd: Vec<u64> = f.odd_primes().collect();
        let mut classes: Vec<u64> = odd.iter().map(|p| p % 8).collect();
        classes.sort_unstable();
        Signature {
            two: f.has_two(),
            odd,
            classes,
        }
    }

    fn is(&self, two: bool, classes: &[u64]) -> bool {
        self.two == two && self.classes == classes
    }

    fn prime_in_class(&self, class: u64) -> u64 {
        *self.odd.iter().find(|p| *p % 8 == class).expect("class checked by caller")
    }

    fn describe(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.two {
            parts.push("2".into());
        }
        parts.extend(self.odd.iter().map(|p| format!("p{}({p})", p % 8)));
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("·")
        }
    }
}

fn build(rule: RuleId, sig: &Signature, legendre: Vec<LegendreCheck>, bastien: Option<BastienData>) -> RuleMatch {
    RuleMatch {
        rule,
        verdict: rule.verdict(),
        pattern: sig.describe(),
        legendre,
        bastien,
    }
}

/// Two-prime rule of the form `(p_lo / p_hi) = -1` on a fixed signature.
fn pair_symbol_rule(rule: RuleId, sig: &Signature, variants: &[(bool, [u64; 2])]) -> Result<Option<RuleMatch>> {
    let Some((_, [first, second])) = variants.iter().find(|(two, c)| sig.is(*two, c)) else {
        return Ok(None);
    };
    let check = LegendreCheck::eval(sig.prime_in_class(*first) as i64, sig.prime_in_class(*second))?;
    Ok((check.value == -1).then(|| build(rule, sig, vec![check], None)))
}

/// Checks one rule's hypothesis against a factorization.
pub fn match_rule(rule: RuleId, f: &Factorization) -> Result<Option<RuleMatch>> {
    ensure!(f.squarefree, InvalidArgument, "{} is not squarefree", f.n);
    let sig = Signature::of(f);
    let plain = |hit: bool| Ok(hit.then(|| build(rule, &sig, vec![], None)));
    match rule {
        RuleId::Iskra1 => plain(
            sig.is(false, &[3]) || sig.is(true, &[5]) || sig.is(false, &[3, 3]) || sig.is(true, &[5, 5]),
        ),
        RuleId::Iskra2 => {
            if sig.two || sig.odd.len() < 2 || sig.classes.iter().any(|&c| c != 3) {
                return Ok(None);
            }
            let mut checks = Vec::new();
            for (i, &lo) in sig.odd.iter().enumerate() {
                for &hi in &sig.odd[i + 1..] {
                    let check = LegendreCheck::eval(lo as i64, hi)?;
                    if check.value != -1 {
                        return Ok(None);
                    }
                    checks.push(check);
                }
            }
            Ok(Some(build(rule, &sig, checks, None)))
        }
        RuleId::Lagrange1 | RuleId::Monsky5 => pair_symbol_rule(rule, &sig, &[(false, [1, 3])]),
        RuleId::Lagrange2 => pair_symbol_rule(rule, &sig, &[(true, [1, 5])]),
        RuleId::Monsky4 => pair_symbol_rule(rule, &sig, &[(false, [1, 5])]),
        RuleId::Monsky6 => pair_symbol_rule(rule, &sig, &[(false, [1, 7]), (true, [1, 7])]),
        RuleId::Bastien2 => {
            if !sig.is(false, &[1]) {
                return Ok(None);
            }
            let p = sig.odd[0];
            let (a, b) = a_4b_decomposition(p)?;
            let canonical = LegendreCheck::eval(a as i64 + 2 * b as i64, p)?;
            let alternate = LegendreCheck::eval(2 * b as i64 - a as i64, p)?;
            if canonical.value != alternate.value {
                log::warn!("Bastien-2 sign ambiguity at p = {p}: {canonical:?} vs {alternate:?}");
            }
            let data = BastienData {
                a,
                b,
                canonical,
                alternate,
            };
            Ok((canonical.value == -1).then(|| build(rule, &sig, vec![canonical], Some(data))))
        }
        RuleId::Monsky1 => plain(sig.is(false, &[5]) || sig.is(false, &[7]) || sig.is(true, &[7])),
        RuleId::Monsky2 => plain(sig.is(true, &[3])),
        RuleId::Monsky3 => plain(
            sig.is(false, &[3, 5]) || sig.is(false, &[3, 7]) || sig.is(true, &[3, 5]) || sig.is(true, &[5, 7]),
        ),
        RuleId::Gross => plain(matches!(f.n % 8, 5..=7) && sig.odd.len() <= 2),
    }
}

/// Scans the rules in priority order and returns the first match.
pub fn classify_by_tables(n: u64) -> Result<CriterionVerdict> {
    let factorization = factorize(n)?;
    ensure!(
        factorization.squarefree,
        InvalidArgument,
        "{n} is not squarefree; reduce it to its squarefree part first"
    );
    let mut matches = Vec::new();
    for rule in RuleId::PRIORITY {
        if let Some(m) = match_rule(rule, &factorization)? {
            matches.push(m);
        }
    }
    let mut matches = matches.into_iter();
    let fired = matches.next();
    let also_matched: Vec<RuleMatch> = matches.collect();
    if let Some(f) = &fired {
        log::debug!("n = {n}: {} fired on {} with {:?}", f.rule, f.pattern, f.legendre);
        for other in also_matched.iter().filter(|o| o.verdict != f.verdict) {
            log::warn!("n = {n}: {} also matches but claims {:?}", other.rule, other.verdict);
        }
    }
    Ok(CriterionVerdict {
        n,
        verdict: fired.as_ref().map_or(TableVerdict::NoRule, |f| f.verdict),
        rule_id: fired.as_ref().map(|f| f.rule),
        citation: fired.as_ref().map(|f| f.rule.citation().to_string()),
        factorization,
        fired,
        also_matched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule_of(n: u64) -> (TableVerdict, Option<RuleId>) {
        let v = classify_by_tables(n).unwrap();
        v.recheck().unwrap();
        (v.verdict, v.rule_id)
    }

    #[test]
    fn table_examples() {
        assert_eq!(rule_of(5), (TableVerdict::Congruent, Some(RuleId::Monsky1)));
        assert_eq!(rule_of(3), (TableVerdict::NonCongruent, Some(RuleId::Iskra1)));
        assert_eq!(rule_of(17), (TableVerdict::NonCongruent, Some(RuleId::Bastien2)));
        assert_eq!(rule_of(41), (TableVerdict::NoRule, None));
        assert_eq!(rule_of(6), (TableVerdict::Congruent, Some(RuleId::Monsky2)));
        assert_eq!(rule_of(7), (TableVerdict::Congruent, Some(RuleId::Monsky1)));
        assert_eq!(rule_of(1), (TableVerdict::NoRule, None));
    }

    #[test]
    fn bastien_records_both_signs() {
        let v = classify_by_tables(17).unwrap();
        let data = v.fired.unwrap().bastien.unwrap();
        assert_eq!((data.a, data.b), (1, 2));
        assert_eq!(data.canonical, LegendreCheck { a: 5, p: 17, value: -1 });
        assert_eq!(data.alternate, LegendreCheck { a: 3, p: 17, value: -1 });
    }

    #[test]
    fn two_prime_rules() {
        // 85 = 5·17, (17/5) = -1
        assert_eq!(rule_of(85), (TableVerdict::Congruent, Some(RuleId::Monsky4)));
        // 119 = 7·17, (17/7) = -1
        assert_eq!(rule_of(119), (TableVerdict::Congruent, Some(RuleId::Monsky6)));
        // 15 = 3·5
        assert_eq!(rule_of(15), (TableVerdict::Congruent, Some(RuleId::Monsky3)));
        // 130 = 2·5·13
        assert_eq!(rule_of(130), (TableVerdict::NonCongruent, Some(RuleId::Iskra1)));
        // 170 = 2·5·17, (17/5) = -1
        assert_eq!(rule_of(170), (TableVerdict::NonCongruent, Some(RuleId::Lagrange2)));
    }

    #[test]
    fn monsky5_is_shadowed_by_lagrange1() {
        // 51 = 3·17 with (17/3) = -1
        let v = classify_by_tables(51).unwrap();
        assert_eq!(v.rule_id, Some(RuleId::Lagrange1));
        assert_eq!(v.verdict, TableVerdict::NonCongruent);
        assert!(v.also_matched.iter().any(|m| m.rule == RuleId::Monsky5));
    }

    #[test]
    fn iskra2_three_primes() {
        // 3·11·43: (3/11) = 1, so the literal ascending condition fails
        let v = classify_by_tables(3 * 11 * 43).unwrap();
        assert_ne!(v.rule_id, Some(RuleId::Iskra2));
        // 3·19·43: (3/19) = -1, (3/43) = -1, (19/43) = -1
        let f = factorize(3 * 19 * 43).unwrap();
        let m = match_rule(RuleId::Iskra2, &f).unwrap().unwrap();
        assert_eq!(m.legendre.len(), 3);
        assert!(m.legendre.iter().all(|c| c.value == -1));
    }

    #[test]
    fn decompositions() {
        assert_eq!(a_4b_decomposition(17).unwrap(), (1, 2));
        assert_eq!(a_4b_decomposition(41).unwrap(), (5, 2));
        assert_eq!(a_4b_decomposition(5).unwrap(), (1, 1));
        assert!(matches!(a_4b_decomposition(7), Err(Error::NoDecomposition(7))));
        assert!(a_4b_decomposition(21).is_err());
    }

    #[test]
    fn rejects_non_squarefree() {
        assert!(matches!(classify_by_tables(12), Err(Error::InvalidArgument(_))));
    }
}
