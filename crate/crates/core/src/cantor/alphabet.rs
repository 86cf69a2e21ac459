use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the Cantor space `X_{d,k} = [k] × [d]^ℕ`.
///
/// `m` is the number of product factors and is only meaningful for the
/// Brin–Thompson boxes; everything else uses `m = 1`.
///
/// Letters are written as single decimal digits, so `d` and `k` are capped
/// at 9.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Alphabet {
    d: u8,
    k: u8,
    m: u8,
}

pub const MAX_LETTER: u8 = 9;

impl Alphabet {
    pub fn new(d: u32, k: u32) -> Result<Self> {
        Self::with_factors(d, k, 1)
    }

    pub fn with_factors(d: u32, k: u32, m: u32) -> Result<Self> {
        if !(2..=MAX_LETTER as u32).contains(&d) {
            return Err(Error::InvalidAlphabet(format!("d = {d} must lie in 2..=9")));
        }
        if !(1..=MAX_LETTER as u32).contains(&k) {
            return Err(Error::InvalidAlphabet(format!("k = {k} must lie in 1..=9")));
        }
        if !(1..=64).contains(&m) {
            return Err(Error::InvalidAlphabet(format!("m = {m} must lie in 1..=64")));
        }
        Ok(Self { d: d as u8, k: k as u8, m: m as u8 })
    }

    /// Thompson's `V = V_{2,1}`.
    pub fn thompson() -> Self {
        Self { d: 2, k: 1, m: 1 }
    }

    pub fn d(self) -> u8 {
        self.d
    }

    pub fn k(self) -> u8 {
        self.k
    }

    pub fn m(self) -> u8 {
        self.m
    }

    /// The alphabet `(d, d)` of the group `V_{d,d}`.
    pub fn square(self) -> Self {
        Self { d: self.d, k: self.d, m: 1 }
    }

    /// Same letters, ignoring the product factor count.
    pub fn same_letters(self, other: Self) -> bool {
        self.d == other.d && self.k == other.k
    }

    pub fn ensure_same(self, other: Self) -> Result<()> {
        if self.same_letters(other) {
            Ok(())
        } else {
            Err(Error::MismatchedAlphabet(self.to_string(), other.to_string()))
        }
    }

    pub fn check_root(self, r: u8) -> Result<()> {
        if (1..=self.k).contains(&r) {
            Ok(())
        } else {
            Err(Error::InvalidLetter { letter: r, max: self.k, what: "root" })
        }
    }

    pub fn check_tail_letter(self, a: u8) -> Result<()> {
        if (1..=self.d).contains(&a) {
            Ok(())
        } else {
            Err(Error::InvalidLetter { letter: a, max: self.d, what: "tail" })
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "(d={}, k={})", self.d, self.k)
        } else {
            write!(f, "(d={}, k={}, m={})", self.d, self.k, self.m)
        }
    }
}
