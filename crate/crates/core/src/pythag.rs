//! The `(h, m, e)` parametrization of Pythagorean triples:
//! `a = h·e·m`, `b = h(m² − e²)/2`, `c = h(m² + e²)/2`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::numth::{gcd, gcd_u128, square_root_exact};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TripleParam {
    pub h: u64,
    pub m: u64,
    pub e: u64,
}

impl TripleParam {
    /// Validates `h > 0`, `m > e` and `gcd(m, e) = 1`.
    pub fn new(h: u64, m: u64, e: u64) -> Result<Self> {
        ensure!(h > 0, InvalidArgument, "h must be positive");
        ensure!(m > e, InvalidArgument, "need m > e, got m={m}, e={e}");
        ensure!(gcd(m, e) == 1, InvalidArgument, "gcd({m}, {e}) != 1");
        Ok(TripleParam { h, m, e })
    }
}

/// Recovers `(h, m, e)` from a positive triple with `a² + b² = c²`, using
/// `h = gcd(c + b, c − b)`, `m² = (c + b)/h`, `e² = (c − b)/h`.
///
/// The legs are used in the order given.
pub fn parametrize_triple(a: u64, b: u64, c: u64) -> Result<TripleParam> {
    ensure!(a > 0 && b > 0 && c > 0, Domain, "sides must be positive: ({a}, {b}, {c})");
    let (a2, b2, c2) = (a as u128 * a as u128, b as u128 * b as u128, c as u128 * c as u128);
    ensure!(a2 + b2 == c2, Domain, "({a}, {b}, {c}) is not a Pythagorean triple");

    let (sum, diff) = (c as u128 + b as u128, (c - b) as u128);
    let h = gcd_u128(sum, diff);
    let (m, e) = match (square_root_exact(sum / h), square_root_exact(diff / h)) {
        (Some(m), Some(e)) => (m, e),
        _ => return Err(Error::Orientation { a, b, c }),
    };
    let param = TripleParam::new(h as u64, m as u64, e as u64)?;
    debug_assert_eq!(generate_triple(param).ok(), Some((a, b, c)));
    Ok(param)
}

/// Builds the positive triple for `(h, m, e)`. Rejects parameters for which
/// `h(m² − e²)/2` is not an integer.
pub fn generate_triple(param: TripleParam) -> Result<(u64, u64, u64)> {
    let TripleParam { h, m, e } = TripleParam::new(param.h, param.m, param.e)?;
    let (h, m, e) = (h as u128, m as u128, e as u128);
    let diff = h * (m * m - e * e);
    let sum = h * (m * m + e * e);
    if diff % 2 != 0 {
        return Err(Error::NonIntegral(format!(
            "h(m^2 - e^2)/2 = {diff}/2 for (h, m, e) = ({h}, {m}, {e})"
        )));
    }
    let to_u64 = |v: u128| {
        u64::try_from(v).map_err(|_| Error::Overflow(format!("triple side {v} exceeds u64")))
    };
    let (a, b, c) = (to_u64(h * e * m)?, to_u64(diff / 2)?, to_u64(sum / 2)?);
    debug_assert_eq!(
        a as u128 * a as u128 + b as u128 * b as u128,
        c as u128 * c as u128
    );
    Ok((a, b, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parametrize_examples() {
        assert_eq!(parametrize_triple(3, 4, 5).unwrap(), TripleParam { h: 1, m: 3, e: 1 });
        assert_eq!(parametrize_triple(6, 8, 10).unwrap(), TripleParam { h: 2, m: 3, e: 1 });
        assert_eq!(parametrize_triple(4, 3, 5).unwrap(), TripleParam { h: 2, m: 2, e: 1 });
        // the d = 7 descent step
        assert_eq!(parametrize_triple(8, 6, 10).unwrap(), TripleParam { h: 4, m: 2, e: 1 });
    }

    #[test]
    fn parametrize_rejects_non_triples() {
        assert!(matches!(parametrize_triple(3, 4, 6), Err(Error::Domain(_))));
        assert!(matches!(parametrize_triple(0, 5, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn generate_examples() {
        assert_eq!(generate_triple(TripleParam { h: 1, m: 3, e: 1 }).unwrap(), (3, 4, 5));
        assert_eq!(generate_triple(TripleParam { h: 2, m: 3, e: 1 }).unwrap(), (6, 8, 10));
        assert_eq!(generate_triple(TripleParam { h: 2, m: 1, e: 0 }).unwrap(), (0, 1, 1));
        assert!(matches!(
            generate_triple(TripleParam { h: 1, m: 1, e: 0 }),
            Err(Error::NonIntegral(_))
        ));
        assert!(generate_triple(TripleParam { h: 1, m: 2, e: 2 }).is_err());
        assert!(generate_triple(TripleParam { h: 1, m: 4, e: 2 }).is_err());
    }
}
