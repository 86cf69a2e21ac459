//! Exact numbers `a + b·√m` with rational `a`, `b` and square-free `m`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Splits `n > 0` as `s² · r` with `r` square-free.
pub fn square_free_part(n: u64) -> (u64, u64) {
    let (mut s, mut r) = (1u64, 1u64);
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            r *= p;
        }
        p += 1;
    }
    (s, r * rest)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticValue {
    a: Rational,
    b: Rational,
    m: u64,
}

impl QuadraticValue {
    /// `a + b·√radicand`; the radicand is reduced to its square-free part.
    pub fn new(a: Rational, b: Rational, radicand: u64) -> Result<Self> {
        if radicand == 0 {
            return Err(Error::Invalid("radicand must be positive".into()));
        }
        let (s, m) = square_free_part(radicand);
        let b = b * Rational::from_integer(BigInt::from(s));
        Ok(if m == 1 || b.is_zero() { Self { a: a + b, b: Rational::zero(), m: 1 } } else { Self { a, b, m } })
    }

    pub fn from_rational(a: Rational) -> Self {
        Self { a, b: Rational::zero(), m: 1 }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// `coefficient · √radicand`.
    pub fn sqrt_of(radicand: u64, coefficient: Rational) -> Result<Self> {
        Self::new(Rational::zero(), coefficient, radicand)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn common_radicand(&self, other: &Self) -> Result<u64> {
        match (self.m, other.m) {
            (1, m) | (m, 1) => Ok(m),
            (p, q) if p == q => Ok(p),
            (p, q) => Err(Error::Invalid(format!("values live in different fields Q(sqrt {p}) and Q(sqrt {q})"))),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let m = self.common_radicand(other)?;
        Self::new(&self.a + &other.a, &self.b + &other.b, m)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let m = self.common_radicand(other)?;
        let mr = Rational::from_integer(BigInt::from(m));
        let a = &self.a * &other.a + &self.b * &other.b * mr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Self::new(a, b, m)
    }

    pub fn neg(&self) -> Self {
        Self { a: -&self.a, b: -&self.b, m: self.m }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { a: &self.a * c, b: &self.b * c, m: self.m }
    }

    /// Exact sign of `a + b√m`.
    pub fn signum(&self) -> Ordering {
        sign_in_field(&self.a, &self.b, self.m)
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * (self.m as f64).sqrt()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "a": self.a.to_string(), "b": self.b.to_string(), "m": self.m })
    }
}

fn sign_of(r: &Rational) -> Ordering {
    r.cmp(&Rational::zero())
}

/// Sign of `a + b√m` by one squaring.
fn sign_in_field(a: &Rational, b: &Rational, m: u64) -> Ordering {
    let (sa, sb) = (sign_of(a), sign_of(b));
    if sb == Ordering::Equal || m == 1 {
        return sign_of(&(a + b * Rational::from_integer(BigInt::from(m.max(1)).sqrt())));
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // Opposite signs: the larger magnitude wins.
    let lhs = a * a;
    let rhs = b * b * Rational::from_integer(BigInt::from(m));
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Exact comparison of `u` and `v`, possibly over different radicands.
///
/// With `u − v = A + B√p + C√q`, the sign of `X = A + B√p` and of `C√q` are
/// decided in `ℚ(√p)`; when they disagree the magnitudes are compared through
/// `X² − C²q = (A² + B²p − C²q) + 2AB√p`, again a sign in `ℚ(√p)`.
pub fn quad_compare(u: &QuadraticValue, v: &QuadraticValue) -> Ordering {
    if let Ok(diff) = u.try_sub(v) {
        return diff.signum();
    }
    let (p, q) = (u.m, v.m);
    let big_a = &u.a - &v.a;
    let big_b = u.b.clone();
    let big_c = -&v.b;
    let sx = sign_in_field(&big_a, &big_b, p);
    let sy = sign_of(&big_c);
    if sy == Ordering::Equal {
        return sx;
    }
    if sx == Ordering::Equal || sx == sy {
        return sy;
    }
    let pr = Rational::from_integer(BigInt::from(p));
    let qr = Rational::from_integer(BigInt::from(q));
    let rational_part = &big_a * &big_a + &big_b * &big_b * &pr - &big_c * &big_c * &qr;
    let surd_part = Rational::from_integer(BigInt::from(2)) * &big_a * &big_b;
    match sign_in_field(&rational_part, &surd_part, p) {
        Ordering::Greater => sx,
        Ordering::Less => sy,
        Ordering::Equal => Ordering::Equal,
    }
}

impl PartialOrd for QuadraticValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticValue {
    fn cmp(&self, other: &Self) -> Ordering {
        quad_compare(self, other)
    }
}

impl fmt::Display for QuadraticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let op = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "{} {} {}*sqrt({})", self.a, op, self.b.abs(), self.m)
    }
}

impl FromStr for QuadraticValue {
    type Err = Error;

    /// Accepts `a`, `a + b*sqrt(m)`, `a - b*sqrt(m)`, `b*sqrt(m)` and `sqrt(m)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("quadratic value {s:?}: expected a + b*sqrt(m)"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let parse_rat = |t: &str| Rational::from_str(t).map_err(|_| bad());
        let Some(pos) = compact.find("sqrt(") else {
            return Ok(Self::from_rational(parse_rat(&compact)?));
        };
        let radicand: u64 = compact[pos + 5..].strip_suffix(')').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let head = &compact[..pos];
        let head = head.strip_suffix('*').unwrap_or(head);
        // Split the head into the rational part and the signed coefficient.
        let split = head.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
        let (a, coef) = match split {
            Some(i) if !head[..i].ends_with('/') => (parse_rat(&head[..i])?, &head[i..]),
            _ => (Rational::zero(), head),
        };
        let b = match coef {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            c => parse_rat(c.strip_prefix('+').unwrap_or(c))?,
        };
        Self::new(a, b, radicand)
    }
}
