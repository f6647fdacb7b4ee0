//! Brute-force searchers used as ground truth for the analytic modules.
//!
//! An empty result only means "nothing up to the bound"; every hit is
//! re-verified against its defining equation before it is returned.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ecparam::{ParamTuple, Triangle};
use crate::error::Result;
use crate::numth::{gcd, gcd_u128, square_root_exact, squarefree_divisors};
use crate::pythag::{generate_triple, TripleParam};
use crate::rational::Rational;
use crate::tunnell::Form;

pub const DEFAULT_TUPLE_BOUND: u64 = 1500;
pub const DEFAULT_TRIANGLE_BOUND: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    /// Every coprime pair `m > e > 0` with `m <= bound`.
    FullBox,
    /// Only pairs whose squarefree parts divide `2d`; finds the same hits.
    SquareClasses,
    /// Parameters `(m, e)` of primitive triples with `m <= bound`.
    PrimitiveTriples,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport<T> {
    pub target: u64,
    pub bound: u64,
    pub method: SearchMethod,
    pub hits: Vec<T>,
    /// The whole box up to `bound` was scanned.
    pub exhaustive: bool,
}

impl<T> SearchReport<T> {
    pub fn is_empty(&self) -> bool {
        self.hits.is_empty()
    }
}

/// Tests whether `(m, e)` carries a tuple for `d`: `d·e·m/(m² − e²)` must be
/// the square of a rational `K/J`, and then `k/(2j) = K/J`.
fn tuple_at(d: u64, m: u64, e: u64) -> Option<ParamTuple> {
    let (m128, e128) = (m as u128, e as u128);
    let num = d as u128 * e128 * m128;
    let den = m128 * m128 - e128 * e128;
    let g = gcd_u128(num, den);
    let big_k = square_root_exact(num / g)?;
    let big_j = square_root_exact(den / g)?;
    let (k, j) = if big_j % 2 == 0 {
        (big_k, big_j / 2)
    } else {
        (2 * big_k, big_j)
    };
    let tuple = ParamTuple::new(u64::try_from(k).ok()?, u64::try_from(j).ok()?, m, e, d)
        .expect("square test implies the tuple equation");
    Some(tuple)
}

fn finish_tuples(d: u64, bound: u64, method: SearchMethod, mut hits: Vec<ParamTuple>) -> SearchReport<ParamTuple> {
    hits.sort_by_key(|t| (t.m, t.e));
    hits.dedup();
    SearchReport {
        target: d,
        bound,
        method,
        hits,
        exhaustive: true,
    }
}

/// Scans every coprime pair `m > e > 0`, `m <= bound`.
pub fn search_tuples(d: u64, bound: u64) -> SearchReport<ParamTuple> {
    let hits: Vec<ParamTuple> = (2..=bound.max(1))
        .into_par_iter()
        .flat_map_iter(|m| {
            (1..m)
                .filter(move |&e| gcd(m, e) == 1)
                .filter_map(move |e| tuple_at(d, m, e))
        })
        .collect();
    finish_tuples(d, bound, SearchMethod::FullBox, hits)
}

/// Same hit set as [`search_tuples`], enumerated by square classes.
///
/// `m`, `e`, `m + e`, `m − e` are pairwise coprime up to a factor 2 and
/// `d·e·m·(m² − e²)` must be a square, so the squarefree parts of `m` and `e`
/// divide `2d`. Writing `m = a·u²`, `e = b·v²` over those divisors visits each
/// candidate pair once and skips the rest of the box.
pub fn search_tuples_square_classes(d: u64, bound: u64) -> Result<SearchReport<ParamTuple>> {
    let classes = squarefree_divisors(2 * d)?;
    let mut m_values: Vec<u64> = Vec::new();
    for &a in &classes {
        m_values.extend((1u64..).map(|u| a * u * u).take_while(|&m| m <= bound));
    }
    let hits: Vec<ParamTuple> = m_values
        .into_par_iter()
        .flat_map_iter(|m| {
            let classes = &classes;
            classes.iter().flat_map(move |&b| {
                (1u64..)
                    .map(move |v| b * v * v)
                    .take_while(move |&e| e < m)
                    .filter(move |&e| gcd(m, e) == 1)
                    .filter_map(move |e| tuple_at(d, m, e))
            })
        })
        .collect();
    Ok(finish_tuples(d, bound, SearchMethod::SquareClasses, hits))
}

/// Doubles the bound from `start` until a hit appears or `cap` is reached.
pub fn search_tuples_adaptive(d: u64, start: u64, cap: u64) -> Result<SearchReport<ParamTuple>> {
    let mut bound = start.max(2);
    loop {
        let report = search_tuples_square_classes(d, bound)?;
        if !report.is_empty() || bound >= cap {
            return Ok(report);
        }
        bound = bound.saturating_mul(2).min(cap);
    }
}

/// Primitive triples from coprime `(m, e)`, `m <= bound`, scaled by a rational
/// `σ` with `σ² = 2d/(ab)` whenever that is a rational square.
pub fn search_triangles(d: u64, height_bound: u64) -> SearchReport<Triangle> {
    let mut hits: Vec<Triangle> = (2..=height_bound.max(1))
        .into_par_iter()
        .flat_map_iter(|m| {
            (1..m)
                .filter(move |&e| gcd(m, e) == 1)
                .filter_map(move |e| triangle_at(d, m, e))
        })
        .collect();
    hits.sort_by(|x, y| (&x.c, &x.a).cmp(&(&y.c, &y.a)));
    hits.dedup();
    SearchReport {
        target: d,
        bound: height_bound,
        method: SearchMethod::PrimitiveTriples,
        hits,
        exhaustive: true,
    }
}

fn triangle_at(d: u64, m: u64, e: u64) -> Option<Triangle> {
    let h = if (m - e) % 2 == 0 { 1 } else { 2 };
    let (a, b, c) = generate_triple(TripleParam { h, m, e }).ok()?;
    let scale_sq = Rational::new(2 * d, a as u128 * b as u128).ok()?;
    let scale = scale_sq.sqrt_exact()?;
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    let side = |v: u64| &scale * &Rational::from(v);
    let t = Triangle::new(side(a), side(b), side(c), d).expect("scaled triangle has area d");
    Some(t)
}

/// Reference count: a plain triple loop over the whole box.
pub fn count_form_naive(n: u64, form: Form) -> u64 {
    let (cx, cy, cz) = form.coefficients();
    let bound = |c: u64| ((n / c) as u128).isqrt() as i64 + 1;
    let (bx, by, bz) = (bound(cx), bound(cy), bound(cz));
    let mut count = 0;
    for x in -bx..=bx {
        for y in -by..=by {
            for z in -bz..=bz {
                if form.evaluate(x, y, z) == n as u128 {
                    count += 1;
                }
            }
        }
    }
    count
}
