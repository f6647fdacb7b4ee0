//! Exhaustive checks shared by the property tests and the acceptance runner.
//! Each returns the number of cases checked, or a description of the first failure.

#![allow(dead_code)]

use congruent_core::ecparam::{
    on_curve, point_from_triangle, points_from_tuple, triangle_from_point, tuple_from_point, ParamTuple,
};
use congruent_core::numth::{gauss_lemma_count, gcd, is_prime, isqrt, legendre_euler, legendre_reciprocity};
use congruent_core::oracle::search_tuples;
use congruent_core::pythag::{generate_triple, parametrize_triple};
use congruent_core::tunnell::{count_form, count_form_partitioned, Form};

pub type Check = Result<usize, String>;

pub fn primes_below(n: u64) -> impl Iterator<Item = u64> {
    (2..n).filter(|&p| is_prime(p))
}

/// Every triple with hypotenuse `<= c_max`, in both leg orders.
pub fn triple_roundtrip(c_max: u64) -> Check {
    let mut checked = 0;
    for c in 1..=c_max {
        for a in 1..c {
            let b2 = c * c - a * a;
            let b = isqrt(b2 as u128) as u64;
            if b == 0 || b * b != b2 {
                continue;
            }
            let p = parametrize_triple(a, b, c).map_err(|e| format!("({a}, {b}, {c}): {e}"))?;
            let back = generate_triple(p).map_err(|e| format!("({a}, {b}, {c}) -> {p:?}: {e}"))?;
            if back != (a, b, c) {
                return Err(format!("({a}, {b}, {c}) -> {p:?} -> {back:?}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Euler, reciprocity and the parity of the Gauss count agree for every
/// prime `3 <= p < p_max` and a spread of `a`.
pub fn legendre_three_way(p_max: u64) -> Check {
    let mut checked = 0;
    for p in primes_below(p_max).filter(|&p| p > 2) {
        let pi = p as i64;
        let sample = [-1, 2, -2, 3, 5, 6, 7, 10, 11, pi - 1, (pi + 1) / 2, 12345 % pi, -(31337 % pi)];
        for a in sample {
            if a.rem_euclid(pi) == 0 {
                continue;
            }
            let euler = legendre_euler(a, p).map_err(|e| e.to_string())?;
            let recip = legendre_reciprocity(a, p).map_err(|e| e.to_string())?;
            let count = gauss_lemma_count(a, p).map_err(|e| e.to_string())?;
            let gauss = if count % 2 == 0 { 1 } else { -1 };
            if euler != recip || euler != gauss {
                return Err(format!("({a}/{p}): euler {euler}, reciprocity {recip}, gauss {gauss}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Partitioned counts equal the serial count for every worker count given.
pub fn partitioned_counting(ns: impl Iterator<Item = u64>, workers: &[usize]) -> Check {
    let mut checked = 0;
    for n in ns {
        for form in Form::ALL {
            let serial = count_form(n, form);
            for &w in workers {
                let split = count_form_partitioned(n, form, w);
                if split != serial {
                    return Err(format!("n = {n}, form {form}, {w} workers: {split} vs {serial}"));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Every point built from every tuple found for `d <= d_max` lies on the curve,
/// maps back to its tuple, and survives the triangle round trip.
pub fn tuple_point_triangle(d_max: u64, bound: u64) -> Check {
    let mut checked = 0;
    for d in 1..=d_max {
        for t in search_tuples(d, bound).hits {
            checked += check_tuple(&t)?;
        }
    }
    Ok(checked)
}

/// Tuples `(2em, 1, m, e)` for `d = em(m² − e²)`, all coprime `m > e`, `m <= m_max`.
pub fn synthetic_tuples(m_max: u64) -> Check {
    let mut checked = 0;
    for m in 2..=m_max {
        for e in (1..m).filter(|&e| gcd(m, e) == 1) {
            let d = e * m * (m * m - e * e);
            let t = ParamTuple::new(2 * e * m, 1, m, e, d).map_err(|err| format!("({m}, {e}): {err}"))?;
            checked += check_tuple(&t)?;
        }
    }
    Ok(checked)
}

pub fn check_tuple(t: &ParamTuple) -> Check {
    let pts = points_from_tuple(t).map_err(|e| format!("{t:?}: {e}"))?;
    for p in pts.all() {
        if !on_curve(t.d, &p.x, &p.y) {
            return Err(format!("{t:?}: ({}, {}) is off the curve", p.x, p.y));
        }
        let back = tuple_from_point(&p).map_err(|e| format!("{t:?} via ({}, {}): {e}", p.x, p.y))?;
        if back != *t {
            return Err(format!("{t:?} -> ({}, {}) -> {back:?}", p.x, p.y));
        }
        let tri = triangle_from_point(&p).map_err(|e| format!("{t:?}: {e}"))?;
        let again = point_from_triangle(&tri).map_err(|e| format!("{tri:?}: {e}"))?;
        let tri2 = triangle_from_point(&again).map_err(|e| format!("{tri:?}: {e}"))?;
        if tri2 != tri || tri.area != t.d {
            return Err(format!("{tri:?} -> ({}, {}) -> {tri2:?}", again.x, again.y));
        }
    }
    Ok(4)
}
