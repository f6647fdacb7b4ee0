//! Integer and modular arithmetic: gcd, primality, factorization, exact square
//! roots, Legendre symbols and the Gauss-lemma count.
//!
//! Everything here works on machine integers (`u64` with `u128` intermediates),
//! which is plenty for the desk-scale searches the rest of the crate runs.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};

/// Default trial-division bound used by [`factorize`].
pub const DEFAULT_TRIAL_BOUND: u64 = 1 << 12;

/// Witnesses that make Miller–Rabin deterministic for every 64-bit input.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[inline]
pub fn gcd_u128(a: u128, b: u128) -> u128 {
    a.gcd(&b)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `0..m`.
#[inline]
pub fn reduce_signed(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let ext = (a as i128).extended_gcd(&(m as i128));
    if ext.gcd != 1 {
        return None;
    }
    Some(ext.x.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn check_odd_prime(p: u64) -> Result<()> {
    ensure!(
        p > 2 && is_prime(p),
        InvalidArgument,
        "{p} is not an odd prime"
    );
    Ok(())
}

/// Floor of the square root.
#[inline]
pub fn isqrt(n: u128) -> u128 {
    n.isqrt()
}

/// Returns `r` with `r * r == n`, or `None` if `n` is not a perfect square.
pub fn square_root_exact(n: u128) -> Option<u128> {
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

/// `u64` convenience wrapper around [`square_root_exact`].
pub fn square_root_exact_u64(n: u64) -> Option<u64> {
    square_root_exact(n as u128).map(|r| r as u64)
}

/// Legendre symbol via Euler's criterion `a^((p-1)/2) mod p`.
pub fn legendre_euler(a: i64, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    let a = reduce_signed(a, p);
    if a == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(a, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

/// Legendre symbol via quadratic reciprocity and the supplementary law for 2.
pub fn legendre_reciprocity(a: i64, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    let mut a = reduce_signed(a, p);
    let mut n = p;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// The Legendre symbol `(a/p)`. `a` may be negative or larger than `p`; it is
/// reduced first.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    let value = legendre_reciprocity(a, p)?;
    debug_assert_eq!(Some(value), legendre_euler(a, p).ok());
    Ok(value)
}

/// Number of `i * a mod p`, `i = 1..=(p-1)/2`, whose remainder exceeds `p/2`.
///
/// Gauss's lemma says `(a/p) = (-1)^count`; that identity is checked before
/// returning.
pub fn gauss_lemma_count(a: i64, p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    let a_mod = reduce_signed(a, p);
    ensure!(
        gcd(a_mod, p) == 1,
        InvalidArgument,
        "gcd({a}, {p}) != 1"
    );
    let half = (p - 1) / 2;
    let count = (1..=half)
        .filter(|&i| 2 * mul_mod(i, a_mod, p) > p)
        .count() as u64;
    let expected = legendre(a, p)?;
    let parity = if count % 2 == 0 { 1 } else { -1 };
    ensure!(
        parity == expected,
        Inconsistency,
        "Gauss lemma parity {parity} disagrees with ({a}/{p}) = {expected}"
    );
    Ok(count)
}

/// A square root of `a` modulo the odd prime `p` (Tonelli–Shanks), if one exists.
/// Returns the smaller of the two roots.
pub fn sqrt_mod(a: i64, p: u64) -> Result<Option<u64>> {
    let a = reduce_signed(a, p);
    if a == 0 {
        check_odd_prime(p)?;
        return Ok(Some(0));
    }
    if legendre(a as i64, p)? != 1 {
        return Ok(None);
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while legendre(z as i64, p)? != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Ok(Some(r.min(p - r)))
}

/// Prime factorization of a positive integer together with the mod-8 class of
/// each prime, which is how the classification tables address primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
    pub squarefree: bool,
    pub residues_mod8: Vec<(u64, u8)>,
}

impl Factorization {
    fn from_primes(n: u64, mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        let mut factors: Vec<(u64, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        let squarefree = factors.iter().all(|&(_, e)| e == 1);
        let residues_mod8 = factors.iter().map(|&(p, _)| (p, (p % 8) as u8)).collect();
        Factorization {
            n,
            factors,
            squarefree,
            residues_mod8,
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn odd_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes().filter(|&p| p != 2)
    }

    pub fn has_two(&self) -> bool {
        self.factors.first().is_some_and(|&(p, _)| p == 2)
    }

    /// Multiplies the factors back together.
    pub fn recompose(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p as u128).pow(e))
            .product()
    }
}

/// Factorization with the default trial-division bound.
pub fn factorize(n: u64) -> Result<Factorization> {
    factorize_with_bound(n, DEFAULT_TRIAL_BOUND)
}

/// Trial division up to `trial_bound`, then Pollard–Brent rho on the cofactor.
pub fn factorize_with_bound(n: u64, trial_bound: u64) -> Result<Factorization> {
    ensure!(n >= 1, InvalidArgument, "cannot factor 0");
    let mut primes = Vec::new();
    let mut rest = n;
    while rest % 2 == 0 {
        primes.push(2);
        rest /= 2;
    }
    let mut p = 3u64;
    while p <= trial_bound && p.saturating_mul(p) <= rest {
        while rest % p == 0 {
            primes.push(p);
            rest /= p;
        }
        p += 2;
    }
    if rest > 1 {
        split_into(rest, &mut primes);
    }
    let f = Factorization::from_primes(n, primes);
    debug_assert_eq!(f.recompose(), n as u128);
    Ok(f)
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    if let Some(r) = square_root_exact_u64(n) {
        split_into(r, out);
        split_into(r, out);
        return;
    }
    let f = (1..)
        .find_map(|c| pollard_brent(n, c))
        .expect("rho finds a factor of a composite for some constant");
    split_into(f, out);
    split_into(n / f, out);
}

/// One run of Brent's variant of Pollard rho with `x -> x^2 + c`. Returns a
/// proper factor or `None` if this constant failed.
fn pollard_brent(n: u64, c: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
    let mut x = y;
    let mut ys = y;
    const BATCH: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Splits `n = s^2 * q` with `q` squarefree.
pub fn squarefree_decomposition(n: u64) -> Result<(u64, u64)> {
    let f = factorize(n)?;
    let (mut s, mut q) = (1u64, 1u64);
    for &(p, e) in &f.factors {
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            q *= p;
        }
    }
    Ok((s, q))
}

pub fn is_squarefree(n: u64) -> Result<bool> {
    Ok(factorize(n)?.squarefree)
}

/// Squarefree divisors of `n`, ascending.
pub fn squarefree_divisors(n: u64) -> Result<Vec<u64>> {
    let f = factorize(n)?;
    let mut divisors = vec![1u64];
    for p in f.primes() {
        let extended: Vec<u64> = divisors.iter().map(|d| d * p).collect();
        divisors.extend(extended);
    }
    divisors.sort_unstable();
    Ok(divisors)
}
