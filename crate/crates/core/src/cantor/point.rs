use std::fmt;

use serde::{Serialize, Serializer};

use super::word::{parse_digits, write_digits};
use super::{Alphabet, Word};
use crate::error::{Error, Result};

/// An eventually periodic point `u · v^∞` of `X_{d,k}`.
///
/// Stored canonically: `v` is primitive and `u` is as short as possible, so
/// two points are equal exactly when their fields are.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    alphabet: Alphabet,
    preperiod: Word,
    period: Vec<u8>,
}

/// Smallest `p` such that `v` is a power of `v[..p]`.
fn primitive_root_len(v: &[u8]) -> usize {
    let n = v.len();
    (1..=n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| v[i] == v[i - p])).unwrap_or(n)
}

impl Point {
    pub fn new(alphabet: Alphabet, preperiod: Word, period: Vec<u8>) -> Result<Self> {
        if !preperiod.is_valid(alphabet) {
            return Err(Error::Invalid(format!("preperiod {preperiod} is not a word over {alphabet}")));
        }
        if period.is_empty() {
            return Err(Error::Invalid("period must be nonempty".into()));
        }
        for &a in &period {
            alphabet.check_tail_letter(a)?;
        }
        Ok(Self::normalize(alphabet, preperiod, period))
    }

    /// Canonical form of `preperiod · period^∞`. Inputs must be valid.
    pub(crate) fn normalize(alphabet: Alphabet, preperiod: Word, mut period: Vec<u8>) -> Self {
        debug_assert!(!period.is_empty());
        let p = primitive_root_len(&period);
        period.truncate(p);
        let mut tail = preperiod.tail().to_vec();
        while let Some(&last) = tail.last() {
            if last != *period.last().unwrap() {
                break;
            }
            tail.pop();
            period.rotate_right(1);
        }
        Self { alphabet, preperiod: Word::from_parts(preperiod.root(), tail), period }
    }

    /// The point `prefix · pre · period^∞` where `pre`, `period` are tail letters.
    pub(crate) fn assemble(alphabet: Alphabet, prefix: &Word, pre: &[u8], period: Vec<u8>) -> Self {
        Self::normalize(alphabet, prefix.extend(pre), period)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn preperiod(&self) -> &Word {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn root(&self) -> u8 {
        self.preperiod.root()
    }

    /// Tail letter at 0-based position `j` (the root is not counted).
    pub fn tail_at(&self, j: usize) -> u8 {
        let u = self.preperiod.tail();
        if j < u.len() {
            u[j]
        } else {
            self.period[(j - u.len()) % self.period.len()]
        }
    }

    /// The first `len` letters as a word (`len ≥ 1`; the root counts as one).
    pub fn prefix(&self, len: usize) -> Word {
        assert!(len >= 1, "prefix length counts the root");
        Word::from_parts(self.root(), (0..len - 1).map(|j| self.tail_at(j)).collect())
    }

    pub fn has_prefix(&self, w: &Word) -> bool {
        w.root() == self.root() && w.tail().iter().enumerate().all(|(j, &a)| self.tail_at(j) == a)
    }

    /// The tail sequence from position `j` on, as `(preperiod, period)` letters.
    pub fn tail_from(&self, j: usize) -> (Vec<u8>, Vec<u8>) {
        let u = self.preperiod.tail();
        if j <= u.len() {
            (u[j..].to_vec(), self.period.clone())
        } else {
            let mut v = self.period.clone();
            let shift = (j - u.len()) % v.len();
            v.rotate_left(shift);
            (Vec::new(), v)
        }
    }

    /// Replaces the prefix `old` (which must be a prefix of `self`) by `new`.
    pub fn substitute_prefix(&self, old: &Word, new: &Word) -> Point {
        debug_assert!(self.has_prefix(old));
        let (pre, period) = self.tail_from(old.depth());
        Point::assemble(self.alphabet, new, &pre, period)
    }

    /// Parses `u(v)^inf`, with `u` in word syntax (for `k = 1` it may be empty).
    pub fn parse(alphabet: Alphabet, s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = s.split_once('(').ok_or_else(|| Error::Parse(format!("point {s:?}: expected u(v)^inf")))?;
        let body =
            rest.strip_suffix(")^inf").ok_or_else(|| Error::Parse(format!("point {s:?}: expected trailing )^inf")))?;
        let preperiod = Word::parse(alphabet, head)?;
        let period = parse_digits(body)?;
        Point::new(alphabet, preperiod, period)
    }

    /// Letters of the point (root then tail) as a finite sequence.
    pub fn unroll(&self, len: usize) -> Vec<u8> {
        std::iter::once(self.root()).chain((0..len.saturating_sub(1)).map(|j| self.tail_at(j))).collect()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet.k() == 1 {
            write_digits(f, self.preperiod.tail())?;
        } else {
            write!(f, "{}", self.preperiod)?;
        }
        f.write_str("(")?;
        write_digits(f, &self.period)?;
        f.write_str(")^inf")
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
