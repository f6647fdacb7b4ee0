//! One step of the descent: normalizing a tuple, sorting it into one of the
//! four cases, deciding whether the case is excluded modulo `d`, and the
//! Case 3 reduction to a smaller tuple.

use serde::{Deserialize, Serialize};

use crate::ecparam::ParamTuple;
use crate::error::{ensure, Error, Result};
use crate::numth::{gcd, is_prime, legendre, mod_inverse, mul_mod, reduce_signed, sqrt_mod, square_root_exact_u64};
use crate::pythag::{parametrize_triple, TripleParam};

/// Which change of variables turned `(m₁, e₁)` into `(m, e)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Substitution {
    /// `k` odd: `m = (m₁ + e₁)/2`, `e = (m₁ − e₁)/2`.
    HalfSumDifference,
    /// `k` even: `m = m₁ + e₁`, `e = m₁ − e₁`.
    SumDifference,
}

/// The pair after normalization, for which `k² = m² − e²` and `d·j² = e·m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalized {
    pub m: u64,
    pub e: u64,
    pub substitution: Substitution,
}

/// Which of `k`, `m₁`, `e₁` are divisible by `d`. Normalization assumes none are.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityPremise {
    pub d_divides_k: bool,
    pub d_divides_m: bool,
    pub d_divides_e: bool,
}

impl DivisibilityPremise {
    pub fn of(t: &ParamTuple) -> Self {
        DivisibilityPremise {
            d_divides_k: t.k % t.d == 0,
            d_divides_m: t.m % t.d == 0,
            d_divides_e: t.e % t.d == 0,
        }
    }

    pub fn holds(&self) -> bool {
        !(self.d_divides_k || self.d_divides_m || self.d_divides_e)
    }
}

/// Maps `(m₁, e₁)` to the pair with `d = (k/j)²·m·e/(m² − e²)`.
pub fn normalize_tuple(t: &ParamTuple) -> Result<Normalized> {
    let ParamTuple { k, j, m: m1, e: e1, d } = *t;
    ensure!(is_prime(d), InvalidArgument, "d = {d} must be prime");
    ensure!(m1 > e1 && e1 > 0, Inconsistency, "need m1 > e1 > 0, got ({m1}, {e1})");
    ensure!(gcd(m1, e1) == 1, Inconsistency, "gcd(m1, e1) = gcd({m1}, {e1}) != 1");
    ensure!(gcd(k, j) == 1, Inconsistency, "gcd(k, j) = gcd({k}, {j}) != 1");
    let premise = DivisibilityPremise::of(t);
    ensure!(premise.holds(), InvalidArgument, "divisibility premise fails for {t:?}: {premise:?}");

    let (m, e, substitution) = if k % 2 == 1 {
        ensure!(
            (m1 + e1) % 2 == 0,
            Inconsistency,
            "k = {k} is odd but m1 + e1 = {} is odd",
            m1 + e1
        );
        ((m1 + e1) / 2, (m1 - e1) / 2, Substitution::HalfSumDifference)
    } else {
        (m1 + e1, m1 - e1, Substitution::SumDifference)
    };
    ensure!(gcd(m, e) == 1, Inconsistency, "normalized pair ({m}, {e}) is not coprime");

    let (k2, j2) = (k as u128 * k as u128, j as u128 * j as u128);
    let (m, e) = (m as u128, e as u128);
    ensure!(
        j2 * (m * m - e * e) * d as u128 == k2 * m * e,
        Inconsistency,
        "normalized pair ({m}, {e}) does not satisfy j^2 (m^2 - e^2) d = k^2 m e"
    );
    ensure!(
        k2 == m * m - e * e && d as u128 * j2 == e * m,
        Inconsistency,
        "split k^2 = m^2 - e^2, d j^2 = e m fails for ({m}, {e})"
    );
    Ok(Normalized {
        m: m as u64,
        e: e as u64,
        substitution,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    /// `m = ds²`, `e = t²`, `m ± e` squares.
    Case1,
    /// `m = ds²`, `e = t²`, `m ± e` twice squares.
    Case2,
    /// `m = s²`, `e = dt²`, `m ± e` squares.
    Case3,
    /// `m = s²`, `e = dt²`, `m ± e` twice squares.
    Case4,
    /// Case 4 with `t = 1`.
    #[serde(rename = "Case4_t1")]
    Case4T1,
}

impl CaseLabel {
    /// The four branches of the tree (`Case4T1` is a leaf under `Case4`).
    pub const BRANCHES: [CaseLabel; 4] = [CaseLabel::Case1, CaseLabel::Case2, CaseLabel::Case3, CaseLabel::Case4];

    pub fn branch(self) -> CaseLabel {
        match self {
            CaseLabel::Case4T1 => CaseLabel::Case4,
            other => other,
        }
    }
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseLabel::Case1 => "Case1",
            CaseLabel::Case2 => "Case2",
            CaseLabel::Case3 => "Case3",
            CaseLabel::Case4 => "Case4",
            CaseLabel::Case4T1 => "Case4_t1",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseWitnesses {
    pub s: u64,
    pub t: u64,
    pub c1: u64,
    pub c2: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseClassification {
    pub label: CaseLabel,
    pub witnesses: CaseWitnesses,
}

/// Sorts a normalized pair into its case.
///
/// Requires `d | e·m` with `e·m/d` a square and `m² − e²` a square.
pub fn classify_case(d: u64, m: u64, e: u64) -> Result<CaseClassification> {
    ensure!(d > 1 && m > e && e > 0, InvalidArgument, "need d > 1 and m > e > 0");
    ensure!(gcd(m, e) == 1, Inconsistency, "gcd({m}, {e}) != 1");
    let prod = m as u128 * e as u128;
    ensure!(
        prod % d as u128 == 0 && crate::numth::square_root_exact(prod / d as u128).is_some(),
        Inconsistency,
        "e·m = {prod} is not d times a square"
    );
    ensure!(
        crate::numth::square_root_exact(m as u128 * m as u128 - e as u128 * e as u128).is_some(),
        Inconsistency,
        "m^2 - e^2 is not a square for ({m}, {e})"
    );

    let root = |v: u64, what: &str| {
        square_root_exact_u64(v).ok_or_else(|| Error::Inconsistency(format!("{what} = {v} is not a square")))
    };
    let d_in_m = m % d == 0;
    ensure!(d_in_m != (e % d == 0), Inconsistency, "d = {d} must divide exactly one of ({m}, {e})");
    let (s, t) = if d_in_m {
        (root(m / d, "m/d")?, root(e, "e")?)
    } else {
        (root(m, "m")?, root(e / d, "e/d")?)
    };

    let (sum, diff) = (m + e, m - e);
    let (c1, c2, twice) = match (square_root_exact_u64(sum), square_root_exact_u64(diff)) {
        (Some(c1), Some(c2)) => (c1, c2, false),
        _ if sum % 2 == 0 && diff % 2 == 0 => (root(sum / 2, "(m+e)/2")?, root(diff / 2, "(m-e)/2")?, true),
        _ => {
            return Err(Error::Inconsistency(format!(
                "m ± e = ({sum}, {diff}) are neither both squares nor both twice squares"
            )))
        }
    };
    let label = match (d_in_m, twice) {
        (true, false) => CaseLabel::Case1,
        (true, true) => CaseLabel::Case2,
        (false, false) => CaseLabel::Case3,
        (false, true) if t == 1 => CaseLabel::Case4T1,
        (false, true) => CaseLabel::Case4,
    };
    Ok(CaseClassification {
        label,
        witnesses: CaseWitnesses { s, t, c1, c2 },
    })
}

/// The statement `base² ≡ target (mod modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueEquation {
    pub base: u64,
    pub target: i64,
    pub modulus: u64,
}

impl ResidueEquation {
    pub fn holds(&self) -> bool {
        mul_mod(self.base, self.base, self.modulus) == reduce_signed(self.target, self.modulus)
    }
}

impl std::fmt::Display for ResidueEquation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}^2 ≡ {} (mod {})", self.base, self.target, self.modulus)
    }
}

/// How Case 4 distributes `d·t² = (c₁ − c₂)(c₁ + c₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case4Split {
    /// `t = 1`: `c₁ + c₂ = d`, `c₁ − c₂ = 1`.
    TOne,
    /// `c₁ + c₂ = t²`, `c₁ − c₂ = d`.
    SquareIsSum,
    /// `c₁ − c₂ = t²`, `c₁ + c₂ = d`.
    SquareIsDifference,
    /// `t = uv` with `u, v > 1` spread over both factors.
    Mixed { d_divides_sum: bool },
}

/// The `(h', m', e')` of `(2s)² = (2c₁)² + (2c₂)²` and the identity it gives:
/// `4(c₁ + c₂) = h'((m' + e')² − 2e'²)` or `4(c₁ − c₂) = h'(2e'² − (m' − e')²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case4Analysis {
    pub split: Case4Split,
    pub triple: (u64, u64, u64),
    pub param: TripleParam,
    pub d_divides_sum: bool,
    /// `4(c₁ ± c₂)`, the side divisible by `4d`.
    pub lhs: u64,
    /// `(m' + e')² − 2e'²` or `2e'² − (m' − e')²`.
    pub bracket: i64,
}

impl Case4Analysis {
    pub fn identity_holds(&self) -> bool {
        self.param.h as i128 * self.bracket as i128 == self.lhs as i128
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionKind {
    /// Case 1/2 needs `−1` to be a square mod `d`.
    MinusOneNonResidue,
    /// Case 4 needs `2` to be a square mod `d`.
    TwoNonResidue,
    /// Case 4 with `t > 1` dividing both `c₁ ± c₂`; impossible as `gcd(c₁, t) = 1`.
    Case4Guard,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionReason {
    pub kind: ExclusionKind,
    pub case: CaseLabel,
    /// The residue equation the case forces; false for every base.
    pub equation: Option<ResidueEquation>,
    /// Legendre symbol of the equation's target.
    pub symbol: Option<i8>,
    pub case4: Option<Case4Analysis>,
    pub detail: String,
}

/// The case is consistent modulo `d`; `solution` is an explicit root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survival {
    pub case: CaseLabel,
    pub equation: ResidueEquation,
    pub solution: u64,
    pub case4: Option<Case4Analysis>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CaseVerdict {
    Excluded(ExclusionReason),
    Survives(Survival),
    /// Case 3: no residue obstruction, the descent continues.
    Reduces,
}

impl CaseVerdict {
    pub fn exclusion(&self) -> Option<&ExclusionReason> {
        match self {
            CaseVerdict::Excluded(r) => Some(r),
            _ => None,
        }
    }
}

fn inverse_mod(v: u64, d: u64, what: &str) -> Result<u64> {
    mod_inverse(v % d, d).ok_or_else(|| Error::Inconsistency(format!("{what} = {v} is not invertible mod {d}")))
}

fn residue_verdict(
    d: u64,
    case: CaseLabel,
    kind: ExclusionKind,
    equation: ResidueEquation,
    case4: Option<Case4Analysis>,
) -> Result<CaseVerdict> {
    let symbol = legendre(equation.target, d)?;
    if symbol == -1 {
        debug_assert!(!equation.holds());
        let detail = format!("{case} forces {equation}, but ({}/{d}) = -1", equation.target);
        return Ok(CaseVerdict::Excluded(ExclusionReason {
            kind,
            case,
            equation: Some(equation),
            symbol: Some(symbol),
            case4,
            detail,
        }));
    }
    let solution = if equation.holds() {
        equation.base
    } else {
        sqrt_mod(equation.target, d)?.expect("target is a residue")
    };
    Ok(CaseVerdict::Survives(Survival {
        case,
        equation,
        solution,
        case4,
    }))
}

/// Decides whether a case is ruled out modulo the prime `d`.
pub fn case_exclusion(d: u64, label: CaseLabel, w: &CaseWitnesses) -> Result<CaseVerdict> {
    ensure!(is_prime(d) && d > 2, InvalidArgument, "d = {d} must be an odd prime");
    match label {
        CaseLabel::Case1 => {
            // d s² − t² = c₂²  ⇒  −1 ≡ (c₂ t⁻¹)²
            let base = mul_mod(w.c2 % d, inverse_mod(w.t, d, "t")?, d);
            let eq = ResidueEquation { base, target: -1, modulus: d };
            residue_verdict(d, label, ExclusionKind::MinusOneNonResidue, eq, None)
        }
        CaseLabel::Case2 => {
            // t² ≡ 2c₁², −t² ≡ 2c₂²  ⇒  −1 ≡ (2c₁c₂ t⁻²)²
            let t_inv = inverse_mod(w.t, d, "t")?;
            let num = mul_mod(2 * (w.c1 % d) % d, w.c2 % d, d);
            let base = mul_mod(num, mul_mod(t_inv, t_inv, d), d);
            let eq = ResidueEquation { base, target: -1, modulus: d };
            residue_verdict(d, label, ExclusionKind::MinusOneNonResidue, eq, None)
        }
        CaseLabel::Case3 => Ok(CaseVerdict::Reduces),
        CaseLabel::Case4 | CaseLabel::Case4T1 => case4_exclusion(d, label, w),
    }
}

fn case4_exclusion(d: u64, label: CaseLabel, w: &CaseWitnesses) -> Result<CaseVerdict> {
    let CaseWitnesses { s, t, c1, c2 } = *w;
    ensure!(c1 > c2, Inconsistency, "Case 4 needs c1 > c2, got ({c1}, {c2})");
    let (sum, diff) = (c1 + c2, c1 - c2);

    if t > 1 && sum % t == 0 && diff % t == 0 {
        return Ok(CaseVerdict::Excluded(ExclusionReason {
            kind: ExclusionKind::Case4Guard,
            case: label,
            equation: None,
            symbol: None,
            case4: None,
            detail: format!("t = {t} divides both c1 + c2 = {sum} and c1 - c2 = {diff}, so t | 2c1"),
        }));
    }

    let d_divides_sum = sum % d == 0;
    ensure!(
        d_divides_sum || diff % d == 0,
        Inconsistency,
        "d = {d} divides neither c1 + c2 = {sum} nor c1 - c2 = {diff}"
    );
    let t2 = t * t;
    let split = if t == 1 {
        Case4Split::TOne
    } else if sum == t2 && diff == d {
        Case4Split::SquareIsSum
    } else if diff == t2 && sum == d {
        Case4Split::SquareIsDifference
    } else {
        Case4Split::Mixed { d_divides_sum }
    };

    let triple = (2 * c1, 2 * c2, 2 * s);
    let param = parametrize_triple(triple.0, triple.1, triple.2)?;
    let (h, m, e) = (param.h as i128, param.m as i128, param.e as i128);
    let (lhs, bracket, root) = if d_divides_sum {
        (4 * sum, (m + e) * (m + e) - 2 * e * e, m + e)
    } else {
        (4 * diff, 2 * e * e - (m - e) * (m - e), (m - e).abs())
    };
    let bracket = i64::try_from(bracket).map_err(|_| Error::Overflow("Case 4 bracket".into()))?;
    let analysis = Case4Analysis {
        split,
        triple,
        param,
        d_divides_sum,
        lhs,
        bracket,
    };
    ensure!(
        analysis.identity_holds(),
        Inconsistency,
        "4(c1 ± c2) = {lhs} but h' * bracket = {}",
        h * bracket as i128
    );
    ensure!(param.h % d != 0, Inconsistency, "d = {d} divides h' = {}", param.h);

    // (m' ± e')² ≡ 2e'²  ⇒  2 ≡ ((m' ± e') e'⁻¹)²
    let base = mul_mod((root as u64) % d, inverse_mod(param.e, d, "e'")?, d);
    let eq = ResidueEquation { base, target: 2, modulus: d };
    residue_verdict(d, label, ExclusionKind::TwoNonResidue, eq, Some(analysis))
}

/// One Case 3 reduction: parametrize `(c₁ + c₂, c₁ − c₂, 2s)`, then the new
/// tuple `(h'e'm'/g, t/g, m', e')` with `g = gcd(h'e'm', t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case3Step {
    pub triple: (u64, u64, u64),
    pub param: TripleParam,
    pub removed_gcd: u64,
    pub next: ParamTuple,
}

pub fn case3_reduce(d: u64, w: &CaseWitnesses) -> Result<Case3Step> {
    let CaseWitnesses { s, t, c1, c2 } = *w;
    let (s2, dt2) = (s as u128 * s as u128, d as u128 * t as u128 * t as u128);
    ensure!(
        s2 + dt2 == c1 as u128 * c1 as u128 && s2 > dt2 && s2 - dt2 == c2 as u128 * c2 as u128,
        Inconsistency,
        "({s}, {t}, {c1}, {c2}) is not Case 3 data for d = {d}"
    );
    let triple = (c1 + c2, c1 - c2, 2 * s);
    let param = parametrize_triple(triple.0, triple.1, triple.2)?;
    let lifted = param.h as u128 * param.e as u128 * param.m as u128;
    let g = crate::numth::gcd_u128(lifted, t as u128);
    let k = u64::try_from(lifted / g).map_err(|_| Error::Overflow("reduced k".into()))?;
    let j = (t as u128 / g) as u64;
    let next = ParamTuple::new(k, j, param.m, param.e, d)
        .map_err(|e| Error::Inconsistency(format!("reduced tuple fails the tuple equation: {e}")))?;
    let before = s2.max(dt2);
    let after = next.m.max(next.e) as u128;
    if after >= before {
        return Err(Error::RecursionSafety(format!(
            "Case 3 step did not shrink: max(m, e) {before} -> {after}"
        )));
    }
    Ok(Case3Step {
        triple,
        param,
        removed_gcd: g as u64,
        next,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: u64, t: u64, c1: u64, c2: u64) -> CaseWitnesses {
        CaseWitnesses { s, t, c1, c2 }
    }

    #[test]
    fn normalize_examples() {
        let n = normalize_tuple(&ParamTuple::new(3, 2, 9, 1, 5).unwrap()).unwrap();
        assert_eq!((n.m, n.e, n.substitution), (5, 4, Substitution::HalfSumDifference));
        let n = normalize_tuple(&ParamTuple::new(24, 5, 16, 9, 7).unwrap()).unwrap();
        assert_eq!((n.m, n.e, n.substitution), (25, 7, Substitution::SumDifference));
    }

    #[test]
    fn normalize_rejects_bad_input() {
        let raw = ParamTuple { k: 3, j: 2, m: 9, e: 3, d: 5 };
        assert!(matches!(normalize_tuple(&raw), Err(Error::Inconsistency(_))));
        // d | k and d | m1: a real tuple outside the normalization premise
        let t = ParamTuple::new(20, 3, 5, 4, 5).unwrap();
        assert!(!DivisibilityPremise::of(&t).holds());
        assert!(matches!(normalize_tuple(&t), Err(Error::InvalidArgument(_))));
        let raw = ParamTuple { k: 3, j: 2, m: 9, e: 1, d: 6 };
        assert!(normalize_tuple(&raw).is_err());
    }

    #[test]
    fn classify_examples() {
        let c = classify_case(5, 5, 4).unwrap();
        assert_eq!((c.label, c.witnesses), (CaseLabel::Case1, w(1, 2, 3, 1)));
        let c = classify_case(7, 25, 7).unwrap();
        assert_eq!((c.label, c.witnesses), (CaseLabel::Case4T1, w(5, 1, 4, 3)));
        let c = classify_case(23, 42025, 6647).unwrap();
        assert_eq!((c.label, c.witnesses), (CaseLabel::Case4, w(205, 17, 156, 133)));
        let c = classify_case(41, 41, 9).unwrap();
        assert_eq!((c.label, c.witnesses), (CaseLabel::Case2, w(1, 3, 5, 4)));
        assert!(classify_case(5, 9, 4).is_err());
    }

    #[test]
    fn exclusion_examples() {
        // d = 7, Case 4 with t = 1 survives because 3² ≡ 2 (mod 7)
        let v = case_exclusion(7, CaseLabel::Case4T1, &w(5, 1, 4, 3)).unwrap();
        let CaseVerdict::Survives(s) = v else { panic!("expected survival, got {v:?}") };
        let a = s.case4.unwrap();
        assert_eq!((a.param.h, a.param.e, a.param.m), (4, 1, 2));
        assert_eq!(a.split, Case4Split::TOne);
        assert_eq!((a.lhs, a.bracket), (28, 7));
        assert_eq!(s.equation, ResidueEquation { base: 3, target: 2, modulus: 7 });
        assert!(s.equation.holds());

        // d = 5, Case 1 survives: 3² ≡ −1 (mod 5)
        let v = case_exclusion(5, CaseLabel::Case1, &w(1, 2, 3, 1)).unwrap();
        let CaseVerdict::Survives(s) = v else { panic!() };
        assert_eq!(s.equation.base, 3);
        assert!(s.equation.holds());

        // d = 19 with hypothetical Case 1 witnesses is excluded
        let v = case_exclusion(19, CaseLabel::Case1, &w(1, 2, 3, 1)).unwrap();
        let r = v.exclusion().unwrap();
        assert_eq!(r.kind, ExclusionKind::MinusOneNonResidue);
        assert_eq!(r.symbol, Some(-1));
        assert!(!r.equation.unwrap().holds());

        assert_eq!(case_exclusion(5, CaseLabel::Case3, &w(1, 1, 1, 1)).unwrap(), CaseVerdict::Reduces);
    }

    #[test]
    fn case4_guard() {
        // t = 3 divides both c1 + c2 = 9 and c1 - c2 = 3
        let v = case_exclusion(11, CaseLabel::Case4, &w(1, 3, 6, 3)).unwrap();
        assert_eq!(v.exclusion().unwrap().kind, ExclusionKind::Case4Guard);
    }

    #[test]
    fn case4_with_square_sum() {
        let v = case_exclusion(23, CaseLabel::Case4, &w(205, 17, 156, 133)).unwrap();
        let CaseVerdict::Survives(s) = v else { panic!() };
        let a = s.case4.unwrap();
        assert_eq!(a.split, Case4Split::SquareIsSum);
        assert_eq!((a.param.h, a.param.m, a.param.e), (4, 13, 6));
        assert_eq!((a.lhs, a.bracket), (92, 23));
        assert!(s.equation.holds());
    }

    #[test]
    fn case3_step_on_five() {
        let step = case3_reduce(5, &w(41, 12, 49, 31)).unwrap();
        assert_eq!(step.triple, (80, 18, 82));
        assert_eq!((step.param.h, step.param.m, step.param.e), (4, 5, 4));
        assert_eq!(step.removed_gcd, 4);
        assert_eq!(step.next, ParamTuple::new(20, 3, 5, 4, 5).unwrap());
        assert!(case3_reduce(5, &w(41, 12, 49, 30)).is_err());
    }
}
