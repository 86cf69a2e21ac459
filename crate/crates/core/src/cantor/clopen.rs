use std::fmt;

use serde::{Serialize, Serializer};

use super::{Alphabet, Point, Word};
use crate::error::{Error, Result};

/// A clopen subset of `X_{d,k}`, stored as the canonical antichain of
/// cylinder prefixes: sorted, no member a prefix of another, and no complete
/// sibling family `{w·1, …, w·d}`. The whole space is the level-zero family
/// `{1:, …, k:}`; the empty set is the empty list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clopen {
    alphabet: Alphabet,
    prefixes: Vec<Word>,
}

/// Index of the element of the sorted antichain `code` that is a prefix of
/// `w`, if any.
pub(crate) fn find_prefix_in(code: &[Word], w: &Word) -> Option<usize> {
    let idx = code.partition_point(|c| c <= w);
    // The only candidate is the last element not greater than `w`.
    let i = idx.checked_sub(1)?;
    code[i].is_prefix_of(w).then_some(i)
}

/// The contiguous range of `code` whose members extend `w` (including `w`).
pub(crate) fn extensions_in(code: &[Word], w: &Word) -> std::ops::Range<usize> {
    let start = code.partition_point(|c| c < w);
    let len = code[start..].iter().take_while(|c| w.is_prefix_of(c)).count();
    start..start + len
}

/// Sorts, absorbs extensions into their prefixes and merges complete sibling
/// families until none remain.
pub(crate) fn canonical_antichain(d: u8, mut words: Vec<Word>) -> Vec<Word> {
    words.sort_unstable();
    words.dedup();
    let mut out: Vec<Word> = Vec::with_capacity(words.len());
    for w in words {
        if out.last().is_some_and(|last: &Word| last.is_prefix_of(&w)) {
            continue;
        }
        out.push(w);
        merge_tail_family(d, &mut out);
    }
    out
}

fn merge_tail_family(d: u8, out: &mut Vec<Word>) {
    let d = d as usize;
    loop {
        let n = out.len();
        if n < d {
            return;
        }
        let family = &out[n - d..];
        let Some(parent) = family[0].parent() else { return };
        let complete = family.iter().enumerate().all(|(i, w)| {
            w.last_letter() == Some(i as u8 + 1) && w.depth() == parent.depth() + 1 && parent.is_prefix_of(w)
        });
        if !complete {
            return;
        }
        out.truncate(n - d);
        out.push(parent);
    }
}

impl Clopen {
    pub fn empty(alphabet: Alphabet) -> Self {
        Self { alphabet, prefixes: Vec::new() }
    }

    pub fn whole(alphabet: Alphabet) -> Self {
        Self { alphabet, prefixes: (1..=alphabet.k()).map(Word::root_word).collect() }
    }

    pub fn cylinder(alphabet: Alphabet, w: Word) -> Self {
        debug_assert!(w.is_valid(alphabet));
        Self { alphabet, prefixes: vec![w] }
    }

    /// Canonical clopen denoting the union of the given cylinders.
    pub fn normalize(alphabet: Alphabet, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let words: Vec<Word> = words.into_iter().collect();
        if let Some(bad) = words.iter().find(|w| !w.is_valid(alphabet)) {
            return Err(Error::Invalid(format!("{bad} is not a word over {alphabet}")));
        }
        Ok(Self::from_valid(alphabet, words))
    }

    pub(crate) fn from_valid(alphabet: Alphabet, words: Vec<Word>) -> Self {
        Self { alphabet, prefixes: canonical_antichain(alphabet.d(), words) }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn prefixes(&self) -> &[Word] {
        &self.prefixes
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.prefixes.len() == self.alphabet.k() as usize
            && self.prefixes.iter().enumerate().all(|(i, w)| w.is_root() && w.root() == i as u8 + 1)
    }

    pub fn contains_point(&self, x: &Point) -> bool {
        self.prefixes.iter().any(|w| x.has_prefix(w))
    }

    /// Whether the whole cylinder `w` lies inside the set.
    pub fn contains_cylinder(&self, w: &Word) -> bool {
        find_prefix_in(&self.prefixes, w).is_some()
    }

    /// Whether the cylinder `w` meets the set.
    pub fn meets_cylinder(&self, w: &Word) -> bool {
        self.contains_cylinder(w) || !extensions_in(&self.prefixes, w).is_empty()
    }

    pub fn union(&self, other: &Clopen) -> Result<Clopen> {
        self.alphabet.ensure_same(other.alphabet)?;
        let words = self.prefixes.iter().chain(&other.prefixes).cloned().collect();
        Ok(Self::from_valid(self.alphabet, words))
    }

    pub fn intersect(&self, other: &Clopen) -> Result<Clopen> {
        self.alphabet.ensure_same(other.alphabet)?;
        let mut words = Vec::new();
        for a in &self.prefixes {
            if other.contains_cylinder(a) {
                words.push(a.clone());
            } else {
                words.extend(other.prefixes[extensions_in(&other.prefixes, a)].iter().cloned());
            }
        }
        Ok(Self::from_valid(self.alphabet, words))
    }

    pub fn complement(&self) -> Clopen {
        fn below(w: Word, code: &[Word], d: u8, out: &mut Vec<Word>) {
            match code {
                [] => out.push(w),
                [only] if *only == w => {}
                _ => {
                    for a in 1..=d {
                        let c = w.child(a);
                        let r = extensions_in(code, &c);
                        below(c, &code[r], d, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        for r in 1..=self.alphabet.k() {
            let w = Word::root_word(r);
            let range = extensions_in(&self.prefixes, &w);
            below(w, &self.prefixes[range], self.alphabet.d(), &mut out);
        }
        Self::from_valid(self.alphabet, out)
    }

    pub fn difference(&self, other: &Clopen) -> Result<Clopen> {
        self.intersect(&other.complement())
    }

    pub fn symmetric_difference(&self, other: &Clopen) -> Result<Clopen> {
        self.difference(other)?.union(&other.difference(self)?)
    }

    pub fn is_subset(&self, other: &Clopen) -> Result<bool> {
        self.alphabet.ensure_same(other.alphabet)?;
        Ok(self.prefixes.iter().all(|w| other.contains_cylinder(w)))
    }

    pub fn is_disjoint(&self, other: &Clopen) -> Result<bool> {
        Ok(self.intersect(other)?.is_empty())
    }

    pub fn parse(alphabet: Alphabet, s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("clopen {s:?}: expected {{w1, w2, ...}}")))?;
        let words = body
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| Word::parse(alphabet, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_valid(alphabet, words))
    }
}

/// Boolean operations selectable by name (CLI and reports).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClopenOp {
    Union,
    Intersect,
    Complement,
    Equals,
    Subset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClopenResult {
    Set(Clopen),
    Bool(bool),
}

/// Applies `op` to `a` (and `b` where binary; `complement` ignores `b`).
pub fn clopen_algebra(a: &Clopen, b: &Clopen, op: ClopenOp) -> Result<ClopenResult> {
    a.alphabet.ensure_same(b.alphabet)?;
    Ok(match op {
        ClopenOp::Union => ClopenResult::Set(a.union(b)?),
        ClopenOp::Intersect => ClopenResult::Set(a.intersect(b)?),
        ClopenOp::Complement => ClopenResult::Set(a.complement()),
        ClopenOp::Equals => ClopenResult::Bool(a == b),
        ClopenOp::Subset => ClopenResult::Bool(a.is_subset(b)?),
    })
}

impl fmt::Display for Clopen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, w) in self.prefixes.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", w.display(self.alphabet))?;
        }
        f.write_str("}")
    }
}

impl Serialize for Clopen {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v() -> Alphabet {
        Alphabet::thompson()
    }

    fn c(s: &str) -> Clopen {
        Clopen::parse(v(), s).unwrap()
    }

    #[test]
    fn sibling_merge_and_absorption() {
        assert_eq!(c("{11, 12}"), c("{1}"));
        assert_eq!(c("{1, 11}"), c("{1}"));
        assert_eq!(c("{12, 111, 112}").to_string(), "{1}");
        assert!(c("{1, 2}").is_whole());
        assert_eq!(c("{1, 2}").to_string(), "{1:}");
        assert!(c("{}").is_empty());
    }

    #[test]
    fn level_zero_family_is_kept() {
        let a = Alphabet::new(2, 3).unwrap();
        let w = Clopen::parse(a, "{1:, 2:, 3:1, 3:2}").unwrap();
        assert!(w.is_whole());
        assert_eq!(w.to_string(), "{1:, 2:, 3:}");
    }

    #[test]
    fn boolean_basics() {
        assert_eq!(c("{1}").complement(), c("{2}"));
        assert_eq!(c("{1}").intersect(&c("{12}")).unwrap(), c("{12}"));
        assert_eq!(c("{121}").complement().to_string(), "{11, 122, 2}");
        assert_eq!(Clopen::whole(v()).complement(), Clopen::empty(v()));
        assert_eq!(Clopen::empty(v()).complement(), Clopen::whole(v()));
        assert!(c("{12}").is_subset(&c("{1}")).unwrap());
        assert!(!c("{1}").is_subset(&c("{12}")).unwrap());
        assert_eq!(
            clopen_algebra(&c("{1}"), &c("{2}"), ClopenOp::Union).unwrap(),
            ClopenResult::Set(Clopen::whole(v()))
        );
    }

    #[test]
    fn membership() {
        let ones = Point::parse(v(), "(1)^inf").unwrap();
        assert!(c("{1}").contains_point(&ones));
        let alt = Point::parse(v(), "(12)^inf").unwrap();
        assert!(!c("{2}").contains_point(&alt));
        assert!(c("{2}").complement().contains_point(&alt));
    }

    #[test]
    fn mismatched_alphabets() {
        let other = Clopen::whole(Alphabet::new(3, 1).unwrap());
        assert!(matches!(c("{1}").union(&other), Err(Error::MismatchedAlphabet(..))));
    }
}
