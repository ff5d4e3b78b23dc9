//! Exact scalars and points.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

/// A point or vector in ℚⁿ.
pub type Point = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn point(coords: &[i64]) -> Point {
    coords.iter().map(|&c| rat(c)).collect()
}

pub fn int_point(coords: &[Int]) -> Point {
    coords.iter().cloned().map(Rat::from_integer).collect()
}

/// Parses `"7"`, `"-3"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Format(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.trim().parse().map_err(|_| bad())?;
            let q: Int = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Format(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn int_dot(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Int::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rat], b: &[Rat]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rat], s: &Rat) -> Point {
    a.iter().map(|x| x * s).collect()
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn is_integral(p: &[Rat]) -> bool {
    p.iter().all(|c| c.is_integer())
}

/// Least common multiple of every denominator appearing in `points`.
pub fn common_denominator<'a>(points: impl IntoIterator<Item = &'a Point>) -> Int {
    let mut l = Int::one();
    for p in points {
        for c in p {
            if !c.denom().is_one() {
                l = l.lcm(c.denom());
            }
        }
    }
    l
}

/// `p · l` as an integer vector; `l` must clear every denominator of `p`.
pub fn to_int_scaled(p: &[Rat], l: &Int) -> Vec<Int> {
    p.iter()
        .map(|c| {
            let v = c * Rat::from_integer(l.clone());
            debug_assert!(v.is_integer());
            v.to_integer()
        })
        .collect()
}

pub fn gcd_all(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divides by the gcd of the entries; the zero vector is returned unchanged.
pub fn make_primitive(v: Vec<Int>) -> Vec<Int> {
    let g = gcd_all(&v);
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

/// Smallest positive integer multiple of a rational vector that is integral and primitive.
pub fn primitive_direction(v: &[Rat]) -> Vec<Int> {
    let l = common_denominator(std::iter::once(&v.to_vec()));
    make_primitive(to_int_scaled(v, &l))
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

pub fn factorial(n: usize) -> Int {
    (1..=n).fold(Int::one(), |acc, k| acc * Int::from(k))
}

/// Total order on points used wherever deterministic output is needed.
pub fn cmp_points(a: &[Rat], b: &[Rat]) -> std::cmp::Ordering {
    a.iter().cmp(b.iter())
}
