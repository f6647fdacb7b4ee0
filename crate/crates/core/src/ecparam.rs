//! Correspondence between parameter tuples `(k, j, m, e)`, rational points on
//! `y² = x³ − d²x`, and rational right triangles of area `d`.
//!
//! A tuple witnesses `d` when
//!
//! ```text
//! d = (k / 2j)² · (m² − e²) / (e·m),   m > e > 0, gcd(m, e) = 1, gcd(k, j) = 1
//! ```
//!
//! and then gives the two points `x₁ = d(m+e)/(m−e)`, `x₂ = −d(m−e)/(m+e)`
//! with `y = ±(k/j)·x`. Every constructor re-checks its defining equation with
//! exact arithmetic, so a `CurvePoint` or `Triangle` value is always valid.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::numth::{gcd, square_root_exact};
use crate::pythag::parametrize_triple;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParamTuple {
    pub k: u64,
    pub j: u64,
    pub m: u64,
    pub e: u64,
    pub d: u64,
}

impl ParamTuple {
    /// Validates coprimality, ordering and the defining equation for `d`.
    pub fn new(k: u64, j: u64, m: u64, e: u64, d: u64) -> Result<Self> {
        ensure!(gcd(k, j) == 1, InvalidArgument, "gcd(k, j) = gcd({k}, {j}) != 1");
        ensure!(gcd(m, e) == 1, InvalidArgument, "gcd(m, e) = gcd({m}, {e}) != 1");
        let value = d_from_tuple(k, j, m, e)?;
        ensure!(
            value == Rational::from(d),
            Domain,
            "tuple ({k}, {j}, {m}, {e}) gives {value}, not {d}"
        );
        Ok(ParamTuple { k, j, m, e, d })
    }

    /// Builds a tuple from `(k, j, m, e)` when they produce an integer `d`.
    pub fn from_kjme(k: u64, j: u64, m: u64, e: u64) -> Result<Self> {
        let value = d_from_tuple(k, j, m, e)?;
        let d = value
            .to_u64()
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::NonIntegral(format!("tuple ({k}, {j}, {m}, {e}) gives d = {value}")))?;
        ParamTuple::new(k, j, m, e, d)
    }
}

/// `(k/(2j))² · (m² − e²)/(e·m)` as an exact rational.
pub fn d_from_tuple(k: u64, j: u64, m: u64, e: u64) -> Result<Rational> {
    if e == 0 || m == 0 {
        return Err(Error::DivisionByZero(
            "e·m = 0 corresponds to the excluded y = 0 solutions".into(),
        ));
    }
    ensure!(k > 0 && j > 0, InvalidArgument, "k and j must be positive");
    ensure!(m > e, InvalidArgument, "need m > e, got m={m}, e={e}");
    let (k, j, m, e) = (BigInt::from(k), BigInt::from(j), BigInt::from(m), BigInt::from(e));
    let num = &k * &k * (&m * &m - &e * &e);
    let den = BigInt::from(4) * &j * &j * &e * &m;
    Rational::new(num, den)
}

/// A rational point on `y² = x³ − d²x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct CurvePoint {
    pub d: u64,
    pub x: Rational,
    pub y: Rational,
}

#[derive(Deserialize)]
struct RawPoint {
    d: u64,
    x: Rational,
    y: Rational,
}

impl TryFrom<RawPoint> for CurvePoint {
    type Error = Error;
    fn try_from(raw: RawPoint) -> Result<Self> {
        CurvePoint::new(raw.d, raw.x, raw.y)
    }
}

pub fn on_curve(d: u64, x: &Rational, y: &Rational) -> bool {
    let d2 = Rational::from(d).square();
    y.square() == x.cube() - d2 * x
}

impl CurvePoint {
    pub fn new(d: u64, x: Rational, y: Rational) -> Result<Self> {
        ensure!(d > 0, InvalidArgument, "d must be positive");
        ensure!(on_curve(d, &x, &y), Domain, "({x}, {y}) is not on y^2 = x^3 - {d}^2 x");
        Ok(CurvePoint { d, x, y })
    }

    fn checked(d: u64, x: Rational, y: Rational) -> Result<Self> {
        CurvePoint::new(d, x, y)
            .map_err(|e| Error::Inconsistency(format!("constructed point off the curve: {e}")))
    }

    pub fn negate(&self) -> Self {
        CurvePoint {
            d: self.d,
            x: self.x.clone(),
            y: -&self.y,
        }
    }
}

/// The two `x` branches a tuple produces, with the positive-`k/j` choice of `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuplePoints {
    pub first: CurvePoint,
    pub second: CurvePoint,
}

impl TuplePoints {
    /// All four points `(x₁, ±y₁)`, `(x₂, ±y₂)`.
    pub fn all(&self) -> [CurvePoint; 4] {
        [
            self.first.clone(),
            self.first.negate(),
            self.second.clone(),
            self.second.negate(),
        ]
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        self.all().iter().any(|q| q == p)
    }
}

pub fn points_from_tuple(t: &ParamTuple) -> Result<TuplePoints> {
    let d = Rational::from(t.d);
    let (m, e) = (t.m as i64, t.e as i64);
    let slope = Rational::new(t.k, t.j)?;
    let x1 = &d * &Rational::new(m + e, m - e)?;
    let x2 = -(&d * &Rational::new(m - e, m + e)?);
    let y1 = &slope * &x1;
    let y2 = &slope * &x2;
    Ok(TuplePoints {
        first: CurvePoint::checked(t.d, x1, y1)?,
        second: CurvePoint::checked(t.d, x2, y2)?,
    })
}

/// Recovers the tuple behind a point with `x ≠ 0`, `y ≠ 0`.
///
/// With `β = y/x = k/j`, the integers `k²`, `2dj²` are the legs of a
/// Pythagorean triple whose `(h, m, e)` parametrization gives `m` and `e`.
pub fn tuple_from_point(p: &CurvePoint) -> Result<ParamTuple> {
    if p.x.is_zero() || p.y.is_zero() {
        return Err(Error::ExcludedSolution(format!(
            "({}, {}) is one of the trivial points with y = 0",
            p.x, p.y
        )));
    }
    let beta = p.y.checked_div(&p.x)?.abs();
    let overflow = || Error::Overflow(format!("slope {beta} does not fit the integer range"));
    let k = beta.numer().to_u64().ok_or_else(overflow)?;
    let j = beta.denom().to_u64().ok_or_else(overflow)?;

    let leg_k = (k as u128).checked_mul(k as u128).ok_or_else(overflow)?;
    let leg_d = (j as u128)
        .checked_mul(j as u128)
        .and_then(|v| v.checked_mul(2 * p.d as u128))
        .ok_or_else(overflow)?;
    let hyp_sq = leg_d
        .checked_mul(leg_d)
        .and_then(|v| v.checked_add(leg_k.checked_mul(leg_k)?))
        .ok_or_else(overflow)?;
    let hyp = square_root_exact(hyp_sq).ok_or_else(|| {
        Error::Inconsistency(format!("(2dj^2)^2 + k^4 = {hyp_sq} is not a square"))
    })?;
    let as_u64 = |v: u128| u64::try_from(v).map_err(|_| overflow());
    let param = parametrize_triple(as_u64(leg_k)?, as_u64(leg_d)?, as_u64(hyp)?)?;
    let tuple = ParamTuple::new(k, j, param.m, param.e, p.d)?;
    ensure!(
        points_from_tuple(&tuple)?.contains(p),
        Inconsistency,
        "tuple {tuple:?} does not reproduce the point ({}, {})",
        p.x,
        p.y
    );
    Ok(tuple)
}

/// A rational right triangle with legs `a`, `b`, hypotenuse `c` and integer area.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTriangle")]
pub struct Triangle {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub area: u64,
}

#[derive(Deserialize)]
struct RawTriangle {
    a: Rational,
    b: Rational,
    c: Rational,
    area: u64,
}

impl TryFrom<RawTriangle> for Triangle {
    type Error = Error;
    fn try_from(raw: RawTriangle) -> Result<Self> {
        Triangle::new(raw.a, raw.b, raw.c, raw.area)
    }
}

impl Triangle {
    pub fn new(a: Rational, b: Rational, c: Rational, area: u64) -> Result<Self> {
        ensure!(
            a.is_positive() && b.is_positive() && c.is_positive(),
            Domain,
            "sides must be positive: ({a}, {b}, {c})"
        );
        ensure!(a.square() + b.square() == c.square(), Domain, "({a}, {b}, {c}) is not right-angled");
        let actual = &a * &b / Rational::from(2u64);
        ensure!(
            area > 0 && actual == Rational::from(area),
            Domain,
            "area of ({a}, {b}, {c}) is {actual}, not {area}"
        );
        Ok(Triangle { a, b, c, area })
    }

    /// Builds a triangle from its sides, computing the (integral) area.
    pub fn from_sides(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        let area = (&a * &b / Rational::from(2u64)).abs();
        let area = area
            .to_u64()
            .ok_or_else(|| Error::NonIntegral(format!("area {area} is not a positive integer")))?;
        Triangle::new(a, b, c, area)
    }

    /// Scales every side by `s`, multiplying the area by `s²`.
    pub fn scaled(&self, s: u64) -> Result<Self> {
        let f = Rational::from(s);
        let area = self
            .area
            .checked_mul(s.checked_mul(s).ok_or_else(|| Error::Overflow("scale squared".into()))?)
            .ok_or_else(|| Error::Overflow("scaled area".into()))?;
        Triangle::new(&self.a * &f, &self.b * &f, &self.c * &f, area)
    }

    pub fn swapped(&self) -> Self {
        Triangle {
            a: self.b.clone(),
            b: self.a.clone(),
            c: self.c.clone(),
            area: self.area,
        }
    }

    pub fn same_up_to_legs(&self, other: &Triangle) -> bool {
        self == other || self.swapped() == *other
    }
}

/// `x = d(a + c)/b`, `y = 2d²(a + c)/b²`.
pub fn point_from_triangle(t: &Triangle) -> Result<CurvePoint> {
    if t.b.is_zero() {
        return Err(Error::DivisionByZero("leg b = 0".into()));
    }
    let d = Rational::from(t.area);
    let a_plus_c = &t.a + &t.c;
    let x = (&d * &a_plus_c).checked_div(&t.b)?;
    let y = (Rational::from(2u64) * d.square() * a_plus_c).checked_div(&t.b.square())?;
    CurvePoint::checked(t.area, x, y)
}

/// `a = |x² − d²|/|y|`, `b = |2dx/y|`, `c = (x² + d²)/|y|`.
pub fn triangle_from_point(p: &CurvePoint) -> Result<Triangle> {
    if p.y.is_zero() {
        return Err(Error::ExcludedSolution(format!(
            "({}, 0) is a trivial point with y = 0",
            p.x
        )));
    }
    let d = Rational::from(p.d);
    let x2 = p.x.square();
    let d2 = d.square();
    let y_abs = p.y.abs();
    let a = (&x2 - &d2).abs().checked_div(&y_abs)?;
    let b = (Rational::from(2u64) * &d * &p.x).abs().checked_div(&y_abs)?;
    let c = (&x2 + &d2).checked_div(&y_abs)?;
    Triangle::new(a, b, c, p.d).map_err(|e| Error::Inconsistency(format!("triangle post-check: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn tri(a: &str, b: &str, c: &str, area: u64) -> Triangle {
        Triangle::new(q(a), q(b), q(c), area).unwrap()
    }

    #[test]
    fn d_values() {
        assert_eq!(d_from_tuple(3, 2, 9, 1).unwrap(), q("5"));
        assert_eq!(d_from_tuple(24, 5, 16, 9).unwrap(), q("7"));
        assert_eq!(d_from_tuple(1, 1, 2, 1).unwrap(), q("3/8"));
        assert!(matches!(d_from_tuple(1, 1, 2, 0), Err(Error::DivisionByZero(_))));
        assert!(d_from_tuple(1, 1, 2, 3).is_err());
    }

    #[test]
    fn tuple_validation() {
        assert!(ParamTuple::new(3, 2, 9, 1, 5).is_ok());
        assert!(ParamTuple::new(3, 2, 9, 1, 6).is_err());
        assert!(ParamTuple::new(6, 4, 9, 1, 5).is_err());
        assert!(matches!(ParamTuple::from_kjme(1, 1, 2, 1), Err(Error::NonIntegral(_))));
        assert_eq!(ParamTuple::from_kjme(24, 5, 16, 9).unwrap().d, 7);
    }

    #[test]
    fn points_for_five_and_seven() {
        let pts = points_from_tuple(&ParamTuple::new(3, 2, 9, 1, 5).unwrap()).unwrap();
        assert_eq!((pts.first.x.clone(), pts.first.y.clone()), (q("25/4"), q("75/8")));
        assert_eq!(pts.second.x, q("-4"));
        assert_eq!(pts.second.y.abs(), q("6"));
        let pts = points_from_tuple(&ParamTuple::new(24, 5, 16, 9, 7).unwrap()).unwrap();
        assert_eq!((pts.first.x.clone(), pts.first.y.clone()), (q("25"), q("120")));
    }

    #[test]
    fn tuple_recovery() {
        let five = ParamTuple::new(3, 2, 9, 1, 5).unwrap();
        let p = CurvePoint::new(5, q("25/4"), q("75/8")).unwrap();
        assert_eq!(tuple_from_point(&p).unwrap(), five);
        let p = CurvePoint::new(5, q("-4"), q("6")).unwrap();
        assert_eq!(tuple_from_point(&p).unwrap(), five);
        let p = CurvePoint::new(5, q("5"), q("0")).unwrap();
        assert!(matches!(tuple_from_point(&p), Err(Error::ExcludedSolution(_))));
    }

    #[test]
    fn off_curve_points_rejected() {
        assert!(CurvePoint::new(5, q("1"), q("1")).is_err());
        let bad: std::result::Result<CurvePoint, _> =
            serde_json::from_str(r#"{"d":5,"x":"1","y":"1"}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn triangle_to_point() {
        let t = tri("3/2", "20/3", "41/6", 5);
        let p = point_from_triangle(&t).unwrap();
        assert_eq!((p.x, p.y), (q("25/4"), q("75/8")));
        let p = point_from_triangle(&t.swapped()).unwrap();
        assert_eq!((p.x, p.y), (q("45"), q("300")));
    }

    #[test]
    fn point_to_triangle() {
        let p = CurvePoint::new(5, q("25/4"), q("75/8")).unwrap();
        assert_eq!(triangle_from_point(&p).unwrap(), tri("3/2", "20/3", "41/6", 5));
        let p = CurvePoint::new(5, q("-4"), q("6")).unwrap();
        assert!(triangle_from_point(&p).unwrap().same_up_to_legs(&tri("3/2", "20/3", "41/6", 5)));
        let p = CurvePoint::new(7, q("25"), q("120")).unwrap();
        assert_eq!(triangle_from_point(&p).unwrap(), tri("24/5", "35/12", "337/60", 7));
        let p = CurvePoint::new(7, q("7"), q("0")).unwrap();
        assert!(triangle_from_point(&p).is_err());
    }

    #[test]
    fn triangle_validation() {
        assert!(Triangle::new(q("3"), q("4"), q("5"), 6).is_ok());
        assert!(Triangle::new(q("3"), q("4"), q("5"), 5).is_err());
        assert!(Triangle::new(q("3"), q("4"), q("6"), 6).is_err());
        assert!(Triangle::new(q("0"), q("4"), q("4"), 6).is_err());
        assert_eq!(Triangle::from_sides(q("3"), q("4"), q("5")).unwrap().area, 6);
    }
}
