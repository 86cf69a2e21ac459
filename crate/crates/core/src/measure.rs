//! The Bernoulli measure `μ_{d,k}`, Radon–Nikodym cocycles of table
//! elements, and the almost-invariance deficit of clopen sets.
//!
//! On the block `μi → νi` of a table the cocycle is the constant `d^j` with
//! `j = |μi| − |νi|`: a cylinder `C` inside `μi·X_d` is carried to a cylinder
//! `d^j` times heavier. Every value therefore lies in `d^ℤ`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cantor::{Clopen, Point, Word};
use crate::error::{Error, Result};
use crate::quadratic::{square_free_part, QuadraticValue, Rational};
use crate::table::TableElement;

/// `μ(w·X_d) = 1 / (k · d^{|w|−1})`.
pub fn cylinder_mass(d: u8, k: u8, w: &Word) -> Rational {
    let denom = BigInt::from(k) * BigInt::from(d).pow(w.depth() as u32);
    Rational::new(BigInt::one(), denom)
}

pub fn mu(a: &Clopen) -> Rational {
    let (d, k) = (a.alphabet().d(), a.alphabet().k());
    a.prefixes().iter().map(|w| cylinder_mass(d, k, w)).fold(Rational::zero(), |acc, x| acc + x)
}

/// The cocycle value `ω = d^j`, kept as its exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CocycleExponent(pub i64);

impl CocycleExponent {
    /// `d^j` as an exact rational.
    pub fn value(self, d: u8) -> Rational {
        let p = BigInt::from(d).pow(self.0.unsigned_abs() as u32);
        if self.0 >= 0 {
            Rational::from_integer(p)
        } else {
            Rational::new(BigInt::one(), p)
        }
    }
}

fn block_exponent(mu: &Word, nu: &Word) -> CocycleExponent {
    CocycleExponent(mu.len() as i64 - nu.len() as i64)
}

pub fn rn_exponent(g: &TableElement, x: &Point) -> Result<CocycleExponent> {
    g.alphabet().ensure_same(x.alphabet())?;
    let (mu, nu) = g.block_of(x);
    Ok(block_exponent(mu, nu))
}

/// Checks `ω(g∘h, x) = ω(g, h·x) · ω(h, x)` on exponents.
pub fn cocycle_chain_check(g: &TableElement, h: &TableElement, x: &Point) -> Result<bool> {
    let gh = g.compose(h)?;
    let hx = h.act_point(x)?;
    Ok(rn_exponent(&gh, x)?.0 == rn_exponent(g, &hx)?.0 + rn_exponent(h, x)?.0)
}

/// One `(μi, j_i)` entry per block.
pub fn rn_profile(g: &TableElement) -> Vec<(Word, CocycleExponent)> {
    g.pairs().iter().map(|(mu, nu)| (mu.clone(), block_exponent(mu, nu))).collect()
}

/// `Σ μ(μi·X) · d^{j_i}`, which is the total mass of the transported measure (always 1).
pub fn transported_mass(g: &TableElement) -> Rational {
    let a = g.alphabet();
    rn_profile(g)
        .iter()
        .map(|(w, j)| cylinder_mass(a.d(), a.k(), w) * j.value(a.d()))
        .fold(Rational::zero(), |acc, x| acc + x)
}

pub fn cocycle_range(g: &TableElement) -> BTreeSet<i64> {
    rn_profile(g).into_iter().map(|(_, j)| j.0).collect()
}

/// `√(d^j)` in `ℚ(√d)`.
pub fn sqrt_power(d: u8, j: i64) -> QuadraticValue {
    let half = CocycleExponent(j.div_euclid(2)).value(d);
    if j.rem_euclid(2) == 0 {
        QuadraticValue::from_rational(half)
    } else {
        let (s, m) = square_free_part(d as u64);
        let coef = half * Rational::from_integer(BigInt::from(s));
        QuadraticValue::new(Rational::zero(), coef, m).expect("positive radicand")
    }
}

/// `∫ √ω(g, x) dμ(x) = Σ μ(μi·X) · d^{j_i/2}`, exactly.
pub fn integral_sqrt_rn(g: &TableElement) -> QuadraticValue {
    let a = g.alphabet();
    let (_, m) = square_free_part(a.d() as u64);
    let (mut rat, mut surd) = (Rational::zero(), Rational::zero());
    for (w, j) in rn_profile(g) {
        let term = sqrt_power(a.d(), j.0).scale(&cylinder_mass(a.d(), a.k(), &w));
        rat += term.a();
        surd += term.b();
    }
    QuadraticValue::new(rat, surd, m).expect("positive radicand")
}

/// `max_{s ∈ F} μ(A △ s·A)`.
pub fn deficit(a: &Clopen, family: &[TableElement]) -> Result<Rational> {
    if family.is_empty() {
        return Err(Error::Invalid("deficit needs a nonempty family".into()));
    }
    let mut worst = Rational::zero();
    for s in family {
        let moved = s.act_clopen(a)?;
        let diff = mu(&a.symmetric_difference(&moved)?);
        if diff > worst {
            worst = diff;
        }
    }
    Ok(worst)
}
