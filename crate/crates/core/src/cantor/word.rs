use std::fmt;

use serde::{Deserialize, Serialize};

use super::Alphabet;
use crate::error::{Error, Result};

/// A finite word `r·t1…tn` in `[k] × [d]^*`, naming the cylinder of all
/// infinite words that extend it.
///
/// The derived ordering is lexicographic with a prefix sorting before its
/// extensions, which keeps the members of any cylinder contiguous in a
/// sorted list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    root: u8,
    tail: Vec<u8>,
}

impl Word {
    pub fn new(alphabet: Alphabet, root: u8, tail: Vec<u8>) -> Result<Self> {
        alphabet.check_root(root)?;
        for &a in &tail {
            alphabet.check_tail_letter(a)?;
        }
        Ok(Self { root, tail })
    }

    /// Builds a word without validating letters. Callers guarantee validity.
    pub(crate) fn from_parts(root: u8, tail: Vec<u8>) -> Self {
        Self { root, tail }
    }

    pub fn root_word(root: u8) -> Self {
        Self { root, tail: Vec::new() }
    }

    pub fn root(&self) -> u8 {
        self.root
    }

    pub fn tail(&self) -> &[u8] {
        &self.tail
    }

    /// `1 + |tail|`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        1 + self.tail.len()
    }

    pub fn depth(&self) -> usize {
        self.tail.len()
    }

    pub fn is_root(&self) -> bool {
        self.tail.is_empty()
    }

    pub fn is_valid(&self, alphabet: Alphabet) -> bool {
        (1..=alphabet.k()).contains(&self.root) && self.tail.iter().all(|a| (1..=alphabet.d()).contains(a))
    }

    pub fn child(&self, a: u8) -> Self {
        let mut tail = Vec::with_capacity(self.tail.len() + 1);
        tail.extend_from_slice(&self.tail);
        tail.push(a);
        Self { root: self.root, tail }
    }

    /// `w·1, …, w·d`, in order.
    pub fn split(&self, alphabet: Alphabet) -> Vec<Word> {
        (1..=alphabet.d()).map(|a| self.child(a)).collect()
    }

    pub fn parent(&self) -> Option<Self> {
        let (_, init) = self.tail.split_last()?;
        Some(Self { root: self.root, tail: init.to_vec() })
    }

    pub fn last_letter(&self) -> Option<u8> {
        self.tail.last().copied()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.root == other.root && other.tail.starts_with(&self.tail)
    }

    pub fn comparable(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// `self · suffix`.
    pub fn extend(&self, suffix: &[u8]) -> Self {
        let mut tail = Vec::with_capacity(self.tail.len() + suffix.len());
        tail.extend_from_slice(&self.tail);
        tail.extend_from_slice(suffix);
        Self { root: self.root, tail }
    }

    /// The letters of `other` after `self`, if `self` is a prefix of it.
    pub fn strip_from<'a>(&self, other: &'a Word) -> Option<&'a [u8]> {
        if self.is_prefix_of(other) {
            Some(&other.tail[self.tail.len()..])
        } else {
            None
        }
    }

    /// Parses `r:t1t2…`. Without a colon the first digit is the root, except
    /// for `k = 1` where the whole string is the tail.
    pub fn parse(alphabet: Alphabet, s: &str) -> Result<Self> {
        let s = s.trim();
        let (root, tail) = match s.split_once(':') {
            Some((r, t)) => {
                let r = parse_digits(r)?;
                if r.len() != 1 {
                    return Err(Error::Parse(format!("word {s:?}: root must be one digit")));
                }
                (r[0], parse_digits(t)?)
            }
            None if alphabet.k() == 1 => (1, parse_digits(s)?),
            None => {
                let digits = parse_digits(s)?;
                let Some((&r, t)) = digits.split_first() else {
                    return Err(Error::Parse("empty word".into()));
                };
                (r, t.to_vec())
            }
        };
        Word::new(alphabet, root, tail)
    }

    /// Text form under `alphabet`: `r:tail`, or only the tail when `k = 1`
    /// and the tail is nonempty.
    pub fn display(&self, alphabet: Alphabet) -> WordDisplay<'_> {
        WordDisplay { word: self, omit_root: alphabet.k() == 1 }
    }
}

pub(crate) fn parse_digits(s: &str) -> Result<Vec<u8>> {
    s.trim()
        .chars()
        .map(|c| {
            c.to_digit(10).map(|v| v as u8).ok_or_else(|| Error::Parse(format!("unexpected character {c:?} in {s:?}")))
        })
        .collect()
}

pub(crate) fn write_digits(f: &mut fmt::Formatter<'_>, digits: &[u8]) -> fmt::Result {
    for &a in digits {
        write!(f, "{a}")?;
    }
    Ok(())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.root)?;
        write_digits(f, &self.tail)
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    omit_root: bool,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.omit_root && !self.word.tail.is_empty() {
            write_digits(f, &self.word.tail)
        } else {
            write!(f, "{}", self.word)
        }
    }
}

/// Every word of tail length `0..=max_depth`, in lexicographic order.
pub fn all_words(alphabet: Alphabet, max_depth: usize) -> Vec<Word> {
    let mut out = Vec::new();
    fn walk(w: Word, left: usize, d: u8, out: &mut Vec<Word>) {
        out.push(w.clone());
        if left > 0 {
            for a in 1..=d {
                walk(w.child(a), left - 1, d, out);
            }
        }
    }
    for r in 1..=alphabet.k() {
        walk(Word::root_word(r), max_depth, alphabet.d(), &mut out);
    }
    out
}
