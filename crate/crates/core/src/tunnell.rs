//! Representation counts of the four ternary forms
//!
//! ```text
//! A: 2x² +  y² + 32z²      B: 2x² +  y² +  8z²
//! C: 8x² + 2y² + 64z²      D: 8x² + 2y² + 16z²
//! ```
//!
//! and the identity `2A = B` (odd n) / `2C = D` (even n). A failing identity
//! proves `n` is not congruent; a holding identity only implies congruence
//! under BSD.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::numth::{factorize, isqrt, square_root_exact};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Form {
    A,
    B,
    C,
    D,
}

impl Form {
    pub const ALL: [Form; 4] = [Form::A, Form::B, Form::C, Form::D];

    /// Coefficients of `x²`, `y²`, `z²`.
    pub fn coefficients(self) -> (u64, u64, u64) {
        match self {
            Form::A => (2, 1, 32),
            Form::B => (2, 1, 8),
            Form::C => (8, 2, 64),
            Form::D => (8, 2, 16),
        }
    }

    pub fn evaluate(self, x: i64, y: i64, z: i64) -> u128 {
        let (cx, cy, cz) = self.coefficients();
        let sq = |v: i64| (v as i128 * v as i128) as u128;
        cx as u128 * sq(x) + cy as u128 * sq(y) + cz as u128 * sq(z)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Form::A => "A",
            Form::B => "B",
            Form::C => "C",
            Form::D => "D",
        };
        f.write_str(s)
    }
}

impl FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Form::A),
            "B" => Ok(Form::B),
            "C" => Ok(Form::C),
            "D" => Ok(Form::D),
            other => Err(Error::InvalidArgument(format!("unknown form {other:?}"))),
        }
    }
}

/// Largest `v >= 0` with `coeff * v² <= n`.
fn axis_bound(n: u64, coeff: u64) -> i64 {
    isqrt((n / coeff) as u128) as i64
}

/// Counts triples with `x` in `x_range`: for each `(x, z)` the `y` values are
/// solved exactly, so the work is proportional to the `(x, z)` box.
fn count_stripe(n: u64, form: Form, x_range: std::ops::RangeInclusive<i64>) -> u64 {
    let (cx, cy, cz) = form.coefficients();
    let z_max = axis_bound(n, cz);
    let mut count = 0u64;
    for x in x_range {
        let rest_x = n - cx * (x.unsigned_abs() * x.unsigned_abs());
        for z in -z_max..=z_max {
            let used = cz * z.unsigned_abs() * z.unsigned_abs();
            if used > rest_x {
                continue;
            }
            let rest = rest_x - used;
            if rest % cy != 0 {
                continue;
            }
            if let Some(y) = square_root_exact((rest / cy) as u128) {
                count += if y == 0 { 1 } else { 2 };
            }
        }
    }
    count
}

/// Exact number of `(x, y, z) ∈ Z³` with `form(x, y, z) = n`, signs and zeros included.
pub fn count_form(n: u64, form: Form) -> u64 {
    let x_max = axis_bound(n, form.coefficients().0);
    count_stripe(n, form, -x_max..=x_max)
}

/// Same count with the `x` range cut into `workers` stripes, each counted on
/// its own thread. The result does not depend on `workers`.
pub fn count_form_partitioned(n: u64, form: Form, workers: usize) -> u64 {
    let workers = workers.max(1) as i64;
    let x_max = axis_bound(n, form.coefficients().0);
    let width = 2 * x_max + 1;
    let step = (width + workers - 1) / workers;
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| -x_max + w * step)
            .filter(|&lo| lo <= x_max)
            .map(|lo| {
                let hi = (lo + step - 1).min(x_max);
                scope.spawn(move || count_stripe(n, form, lo..=hi))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("counting thread panicked"))
            .sum()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TunnellCounts {
    pub n: u64,
    pub a_n: u64,
    pub b_n: u64,
    pub c_n: u64,
    pub d_n: u64,
}

impl TunnellCounts {
    pub fn compute(n: u64) -> Self {
        Self::compute_with_workers(n, 1)
    }

    pub fn compute_with_workers(n: u64, workers: usize) -> Self {
        let count = |form| {
            if workers > 1 {
                count_form_partitioned(n, form, workers)
            } else {
                count_form(n, form)
            }
        };
        TunnellCounts {
            n,
            a_n: count(Form::A),
            b_n: count(Form::B),
            c_n: count(Form::C),
            d_n: count(Form::D),
        }
    }

    /// The pair compared by the identity: `(A, B)` for odd `n`, `(C, D)` for even.
    pub fn relevant_pair(&self) -> (u64, u64) {
        if self.n % 2 == 1 {
            (self.a_n, self.b_n)
        } else {
            (self.c_n, self.d_n)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityStatus {
    Holds,
    Fails,
}

/// What the identity lets us conclude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TunnellConclusion {
    /// Unconditional: the identity fails, so `n` is not congruent.
    NonCongruentUnconditional,
    /// Holds; congruence follows only if BSD is true.
    CongruentAssumingBsd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TunnellReport {
    pub counts: TunnellCounts,
    pub identity: IdentityStatus,
    pub conclusion: TunnellConclusion,
}

/// Evaluates the identity for squarefree `n`.
pub fn tunnell_identity(n: u64) -> Result<TunnellReport> {
    tunnell_identity_with_workers(n, 1)
}

/// As [`tunnell_identity`], counting each form on `workers` threads.
pub fn tunnell_identity_with_workers(n: u64, workers: usize) -> Result<TunnellReport> {
    ensure!(n >= 1, InvalidArgument, "n must be positive");
    ensure!(
        factorize(n)?.squarefree,
        InvalidArgument,
        "{n} is not squarefree; reduce it to its squarefree part first"
    );
    let counts = TunnellCounts::compute_with_workers(n, workers);
    let (lhs, rhs) = counts.relevant_pair();
    let identity = if 2 * lhs == rhs {
        IdentityStatus::Holds
    } else {
        IdentityStatus::Fails
    };
    let conclusion = match identity {
        IdentityStatus::Holds => TunnellConclusion::CongruentAssumingBsd,
        IdentityStatus::Fails => TunnellConclusion::NonCongruentUnconditional,
    };
    Ok(TunnellReport {
        counts,
        identity,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(count_form(1, Form::A), 2);
        assert_eq!(count_form(3, Form::A), 4);
        assert_eq!(count_form(3, Form::B), 4);
        assert_eq!(count_form(2, Form::C), 2);
        assert_eq!(count_form(2, Form::D), 2);
        assert_eq!(count_form(5, Form::A), 0);
    }

    #[test]
    fn identity_examples() {
        let r = tunnell_identity(1).unwrap();
        assert_eq!(r.identity, IdentityStatus::Fails);
        assert_eq!(r.counts.relevant_pair(), (2, 2));
        let r = tunnell_identity(3).unwrap();
        assert_eq!(r.identity, IdentityStatus::Fails);
        assert_eq!(r.counts.relevant_pair(), (4, 4));
        for n in [5, 6, 7] {
            let r = tunnell_identity(n).unwrap();
            assert_eq!(r.identity, IdentityStatus::Holds);
            assert_eq!(r.counts.relevant_pair(), (0, 0));
            assert_eq!(r.conclusion, TunnellConclusion::CongruentAssumingBsd);
        }
    }

    #[test]
    fn rejects_non_squarefree() {
        assert!(matches!(tunnell_identity(20), Err(Error::InvalidArgument(_))));
        assert!(tunnell_identity(0).is_err());
    }

    #[test]
    fn partitioned_matches_serial() {
        for n in [1, 2, 41, 157, 1000, 4099] {
            for form in Form::ALL {
                let serial = count_form(n, form);
                for workers in [1, 2, 3, 7, 64] {
                    assert_eq!(count_form_partitioned(n, form, workers), serial);
                }
            }
        }
    }

    #[test]
    fn workers_do_not_change_report() {
        for n in [1, 34, 219, 1001] {
            assert_eq!(tunnell_identity_with_workers(n, 4).unwrap(), tunnell_identity(n).unwrap());
        }
    }

    #[test]
    fn parse_forms() {
        assert_eq!("c".parse::<Form>().unwrap(), Form::C);
        assert!("E".parse::<Form>().is_err());
    }
}
