//! Elements of `V_{d,k}` as bijections between complete prefix codes.
//!
//! A [`TableElement`] `(μ1 … μn ; ν1 … νn)` acts by `μi·ω ↦ νi·ω`. Tables are
//! kept fully reduced with pairs sorted by domain word, which makes equality
//! of group elements a syntactic comparison.
//!
//! For `k = 1` the root word `1:` is never used as a block: its only table is
//! the identity, which is stored at depth one as `{1->1, …, d->d}`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::cantor::{extensions_in, find_prefix_in, Alphabet, Clopen, Point, Word};
use crate::error::{Error, Result, Side};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableElement {
    alphabet: Alphabet,
    pairs: Vec<(Word, Word)>,
}

/// Checks that `words` (sorted) form a complete prefix code.
fn check_code(alphabet: Alphabet, words: &[Word], side: Side) -> Result<()> {
    for w in words.windows(2) {
        if w[0].is_prefix_of(&w[1]) {
            return Err(Error::Overlapping {
                side,
                first: w[0].display(alphabet).to_string(),
                second: w[1].display(alphabet).to_string(),
            });
        }
    }
    let covered = Clopen::from_valid(alphabet, words.to_vec());
    if !covered.is_whole() {
        return Err(Error::Incomplete { side, missing: covered.complement().to_string() });
    }
    Ok(())
}

/// Merges complete domain sibling families whose images are the matching
/// children of one word. Input must be sorted by domain; output stays sorted.
///
/// For `k = 1` pairs touching the root word are split first and merges into
/// the root word are refused, so `1:` never appears in a reduced list.
pub(crate) fn reduce_pairs(alphabet: Alphabet, pairs: Vec<(Word, Word)>) -> Vec<(Word, Word)> {
    let mut out: Vec<(Word, Word)> = Vec::with_capacity(pairs.len());
    let split_roots = alphabet.k() == 1;
    let expanded = pairs.into_iter().flat_map(|(a, b)| {
        if split_roots && (a.is_root() || b.is_root()) {
            a.split(alphabet).into_iter().zip(b.split(alphabet)).collect::<Vec<_>>()
        } else {
            vec![(a, b)]
        }
    });
    for p in expanded {
        out.push(p);
        while let Some(merged) = mergeable_tail(alphabet, &out) {
            let n = out.len() - alphabet.d() as usize;
            out.truncate(n);
            out.push(merged);
        }
    }
    out
}

fn mergeable_tail(alphabet: Alphabet, out: &[(Word, Word)]) -> Option<(Word, Word)> {
    let d = alphabet.d() as usize;
    let family = out.get(out.len().checked_sub(d)?..)?;
    let dom_parent = family[0].0.parent()?;
    let rng_parent = family[0].1.parent()?;
    if alphabet.k() == 1 && (dom_parent.is_root() || rng_parent.is_root()) {
        return None;
    }
    let fits = |w: &Word, parent: &Word, i: usize| {
        w.depth() == parent.depth() + 1 && w.last_letter() == Some(i as u8 + 1) && parent.is_prefix_of(w)
    };
    family
        .iter()
        .enumerate()
        .all(|(i, (dw, rw))| fits(dw, &dom_parent, i) && fits(rw, &rng_parent, i))
        .then_some((dom_parent, rng_parent))
}

/// Image of the cylinder `w` under the prefix code map `pairs` (sorted by
/// domain), as a list of `(preimage piece, image piece)` pairs.
pub(crate) fn pieces_of(pairs: &[(Word, Word)], domain: &[Word], w: &Word) -> Vec<(Word, Word)> {
    if let Some(i) = find_prefix_in(domain, w) {
        let (mu, nu) = &pairs[i];
        let rest = mu.strip_from(w).expect("prefix");
        vec![(w.clone(), nu.extend(rest))]
    } else {
        pairs[extensions_in(domain, w)].to_vec()
    }
}

impl TableElement {
    /// Validates both sides as complete prefix codes and reduces.
    pub fn new(alphabet: Alphabet, pairs: Vec<(Word, Word)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyTable);
        }
        for (a, b) in &pairs {
            for w in [a, b] {
                if !w.is_valid(alphabet) {
                    return Err(Error::MismatchedAlphabet(format!("word {w}"), alphabet.to_string()));
                }
            }
        }
        let mut pairs = pairs;
        pairs.sort();
        let domain: Vec<Word> = pairs.iter().map(|p| p.0.clone()).collect();
        check_code(alphabet, &domain, Side::Domain)?;
        let mut range: Vec<Word> = pairs.iter().map(|p| p.1.clone()).collect();
        range.sort();
        check_code(alphabet, &range, Side::Range)?;
        Ok(Self::from_sorted(alphabet, pairs))
    }

    /// Pairs must already be a valid table sorted by domain.
    pub(crate) fn from_sorted(alphabet: Alphabet, pairs: Vec<(Word, Word)>) -> Self {
        Self { alphabet, pairs: reduce_pairs(alphabet, pairs) }
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let words = if alphabet.k() == 1 {
            Word::root_word(1).split(alphabet)
        } else {
            (1..=alphabet.k()).map(Word::root_word).collect()
        };
        Self { alphabet, pairs: words.into_iter().map(|w| (w.clone(), w)).collect() }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn pairs(&self) -> &[(Word, Word)] {
        &self.pairs
    }

    /// Number of blocks `n`; always `n ≡ k (mod d − 1)`.
    pub fn block_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.iter().all(|(a, b)| a == b)
    }

    pub fn domain(&self) -> Vec<Word> {
        self.pairs.iter().map(|p| p.0.clone()).collect()
    }

    /// Re-runs reduction on an already canonical table (a no-op by construction).
    pub fn reduce(&self) -> Self {
        Self::from_sorted(self.alphabet, self.pairs.clone())
    }

    /// Splits the pair at `index` into its `d` children on both sides.
    pub fn split_pair(&self, index: usize) -> Vec<(Word, Word)> {
        let mut out = self.pairs.clone();
        let (mu, nu) = out.remove(index);
        let kids = mu.split(self.alphabet).into_iter().zip(nu.split(self.alphabet));
        for (i, kid) in kids.enumerate() {
            out.insert(index + i, kid);
        }
        out
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &TableElement) -> Result<TableElement> {
        self.alphabet.ensure_same(other.alphabet)?;
        let domain = self.domain();
        let mut out = Vec::with_capacity(self.pairs.len().max(other.pairs.len()));
        for (mu, nu) in &other.pairs {
            for (piece, image) in pieces_of(&self.pairs, &domain, nu) {
                // `piece` extends `nu` (or equals it); pull the extra letters back.
                let extra = nu.strip_from(&piece).expect("piece refines nu");
                out.push((mu.extend(extra), image));
            }
        }
        Ok(Self::from_sorted(self.alphabet, out))
    }

    pub fn inverse(&self) -> TableElement {
        let mut pairs: Vec<(Word, Word)> = self.pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        pairs.sort();
        Self::from_sorted(self.alphabet, pairs)
    }

    /// The block `(μi, νi)` whose domain cylinder contains `x`.
    pub fn block_of(&self, x: &Point) -> &(Word, Word) {
        self.pairs.iter().find(|(mu, _)| x.has_prefix(mu)).expect("domain words form a complete prefix code")
    }

    pub fn act_point(&self, x: &Point) -> Result<Point> {
        self.alphabet.ensure_same(x.alphabet())?;
        let (mu, nu) = self.block_of(x);
        Ok(x.substitute_prefix(mu, nu))
    }

    pub fn act_clopen(&self, a: &Clopen) -> Result<Clopen> {
        self.alphabet.ensure_same(a.alphabet())?;
        let domain = self.domain();
        let mut words = Vec::new();
        for w in a.prefixes() {
            words.extend(pieces_of(&self.pairs, &domain, w).into_iter().map(|(_, img)| img));
        }
        Ok(Clopen::from_valid(self.alphabet, words))
    }

    /// Union of the domain blocks on which the table is not the identity word map.
    pub fn support(&self) -> Clopen {
        let words = self.pairs.iter().filter(|(a, b)| a != b).map(|(a, _)| a.clone()).collect();
        Clopen::from_valid(self.alphabet, words)
    }

    pub fn parse(alphabet: Alphabet, s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("table {s:?}: expected {{mu->nu, ...}}")))?;
        let pairs = body
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                let (a, b) = t.split_once("->").ok_or_else(|| Error::Parse(format!("pair {t:?}: expected mu->nu")))?;
                Ok((Word::parse(alphabet, a)?, Word::parse(alphabet, b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, pairs)
    }

    /// `[[domain, range], …]` with words in text form.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.pairs
                .iter()
                .map(|(a, b)| {
                    serde_json::json!([a.display(self.alphabet).to_string(), b.display(self.alphabet).to_string()])
                })
                .collect(),
        )
    }

    pub fn from_json(alphabet: Alphabet, v: &serde_json::Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("table JSON must be an array".into()))?;
        let pairs = arr
            .iter()
            .map(|p| match p.as_array().map(Vec::as_slice) {
                Some([a, b]) => {
                    let (Some(a), Some(b)) = (a.as_str(), b.as_str()) else {
                        return Err(Error::Parse("table JSON pairs hold strings".into()));
                    };
                    Ok((Word::parse(alphabet, a)?, Word::parse(alphabet, b)?))
                }
                _ => Err(Error::Parse("table JSON entries are [domain, range]".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, pairs)
    }
}

impl fmt::Display for TableElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}->{}", a.display(self.alphabet), b.display(self.alphabet))?;
        }
        f.write_str("}")
    }
}

impl Serialize for TableElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A deterministic element mapping the cylinder `from` onto the cylinder `to`.
///
/// Both complements are listed as canonical cylinder lists; the shorter list
/// has its last cylinder split until the lengths agree (each split adds
/// `d − 1`), then the lists are paired in order.
pub fn transporter(alphabet: Alphabet, from: &Word, to: &Word) -> Result<TableElement> {
    for w in [from, to] {
        if !w.is_valid(alphabet) {
            return Err(Error::MismatchedAlphabet(format!("word {w}"), alphabet.to_string()));
        }
    }
    let mut left = Clopen::cylinder(alphabet, from.clone()).complement().prefixes().to_vec();
    let mut right = Clopen::cylinder(alphabet, to.clone()).complement().prefixes().to_vec();
    if left.is_empty() != right.is_empty() {
        return Err(Error::Untransportable {
            from: from.display(alphabet).to_string(),
            to: to.display(alphabet).to_string(),
        });
    }
    while left.len() != right.len() {
        let shorter = if left.len() < right.len() { &mut left } else { &mut right };
        let last = shorter.pop().expect("nonempty complement");
        shorter.extend(last.split(alphabet));
    }
    let mut pairs: Vec<(Word, Word)> = left.into_iter().zip(right).collect();
    pairs.push((from.clone(), to.clone()));
    TableElement::new(alphabet, pairs)
}

/// Embeds `g ∈ V_{d,d}` into `V_{d,k}` acting on `ν·X_d` (root letter `r` of
/// `g`'s words becomes the tail letter after `ν`) and trivially elsewhere.
pub fn embed_supported(target: Alphabet, g: &TableElement, nu: &Word) -> Result<TableElement> {
    let src = g.alphabet();
    if src.k() != src.d() || src.d() != target.d() {
        return Err(Error::ArityMismatch { d: target.d(), got: src.to_string() });
    }
    if !nu.is_valid(target) {
        return Err(Error::MismatchedAlphabet(format!("word {nu}"), target.to_string()));
    }
    let lift = |w: &Word| {
        let mut tail = nu.tail().to_vec();
        tail.push(w.root());
        tail.extend_from_slice(w.tail());
        Word::from_parts(nu.root(), tail)
    };
    let mut pairs: Vec<(Word, Word)> = g.pairs().iter().map(|(a, b)| (lift(a), lift(b))).collect();
    for w in Clopen::cylinder(target, nu.clone()).complement().prefixes() {
        pairs.push((w.clone(), w.clone()));
    }
    pairs.sort();
    Ok(TableElement::from_sorted(target, pairs))
}
