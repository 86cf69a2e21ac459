//! The ample groupoid `G_{d,k}` through its compact open bisections.
//!
//! A [`DoubleCylinder`] `(ν, μ)` is the basic open set
//! `{(ν·ω, |ν| − |μ|, μ·ω) : ω ∈ X_d}`; a [`Bisection`] is a finite disjoint
//! union of them with disjoint sources and disjoint ranges. Full bisections
//! are exactly the table elements, through `(μi ; νi) ↦ ⊔ (νi, μi)`.

use std::fmt;

use serde_json::json;

use crate::cantor::{Alphabet, Clopen, Point, Word};
use crate::error::{Error, Result, Side};
use crate::table::{pieces_of, reduce_pairs, TableElement};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubleCylinder {
    pub range: Word,
    pub domain: Word,
}

impl DoubleCylinder {
    pub fn new(range: Word, domain: Word) -> Self {
        Self { range, domain }
    }

    /// `|ν| − |μ|`.
    pub fn degree(&self) -> i64 {
        self.range.len() as i64 - self.domain.len() as i64
    }

    pub fn inverse(&self) -> Self {
        Self { range: self.domain.clone(), domain: self.range.clone() }
    }

    /// `(source, range, degree)` of the cell.
    pub fn germ_maps(&self, alphabet: Alphabet) -> (Clopen, Clopen, i64) {
        (Clopen::cylinder(alphabet, self.domain.clone()), Clopen::cylinder(alphabet, self.range.clone()), self.degree())
    }

    /// The germ over `x`, if `x` lies in the source: `(ν·ω, degree, x)`.
    pub fn apply(&self, x: &Point) -> Option<Point> {
        x.has_prefix(&self.domain).then(|| x.substitute_prefix(&self.domain, &self.range))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bisection {
    alphabet: Alphabet,
    cells: Vec<DoubleCylinder>,
}

fn first_overlap(alphabet: Alphabet, sorted: &[Word], side: Side) -> Result<()> {
    match sorted.windows(2).find(|w| w[0].is_prefix_of(&w[1])) {
        Some(w) => Err(Error::Overlapping {
            side,
            first: w[0].display(alphabet).to_string(),
            second: w[1].display(alphabet).to_string(),
        }),
        None => Ok(()),
    }
}

impl Bisection {
    /// Validates the bisection property and canonicalizes.
    pub fn new(alphabet: Alphabet, cells: Vec<DoubleCylinder>) -> Result<Self> {
        for c in &cells {
            for w in [&c.range, &c.domain] {
                if !w.is_valid(alphabet) {
                    return Err(Error::MismatchedAlphabet(format!("word {w}"), alphabet.to_string()));
                }
            }
        }
        let mut dom: Vec<Word> = cells.iter().map(|c| c.domain.clone()).collect();
        dom.sort();
        first_overlap(alphabet, &dom, Side::Domain)?;
        let mut rng: Vec<Word> = cells.iter().map(|c| c.range.clone()).collect();
        rng.sort();
        first_overlap(alphabet, &rng, Side::Range)?;
        Ok(Self::from_pairs(alphabet, cells.into_iter().map(|c| (c.domain, c.range)).collect()))
    }

    /// `(domain, range)` pairs of a valid bisection, in any order.
    fn from_pairs(alphabet: Alphabet, mut pairs: Vec<(Word, Word)>) -> Self {
        pairs.sort();
        let cells = reduce_pairs(alphabet, pairs).into_iter().map(|(d, r)| DoubleCylinder::new(r, d)).collect();
        Self { alphabet, cells }
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Self { alphabet, cells: Vec::new() }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn cells(&self) -> &[DoubleCylinder] {
        &self.cells
    }

    fn pairs(&self) -> Vec<(Word, Word)> {
        self.cells.iter().map(|c| (c.domain.clone(), c.range.clone())).collect()
    }

    pub fn source(&self) -> Clopen {
        Clopen::from_valid(self.alphabet, self.cells.iter().map(|c| c.domain.clone()).collect())
    }

    pub fn range(&self) -> Clopen {
        Clopen::from_valid(self.alphabet, self.cells.iter().map(|c| c.range.clone()).collect())
    }

    /// Identity bisection over a clopen set (its unit-space piece).
    pub fn unit(a: &Clopen) -> Self {
        Self::from_pairs(a.alphabet(), a.prefixes().iter().map(|w| (w.clone(), w.clone())).collect())
    }

    /// `UV = {uv : u ∈ U, v ∈ V, s(u) = r(v)}`.
    pub fn compose(&self, other: &Bisection) -> Result<Bisection> {
        self.alphabet.ensure_same(other.alphabet)?;
        let mine = self.pairs();
        let domain: Vec<Word> = mine.iter().map(|p| p.0.clone()).collect();
        let mut out = Vec::new();
        for c in &other.cells {
            for (piece, image) in pieces_of(&mine, &domain, &c.range) {
                let extra = c.range.strip_from(&piece).expect("piece refines range word");
                out.push((c.domain.extend(extra), image));
            }
        }
        Ok(Self::from_pairs(self.alphabet, out))
    }

    pub fn inverse(&self) -> Bisection {
        Self::from_pairs(self.alphabet, self.cells.iter().map(|c| (c.range.clone(), c.domain.clone())).collect())
    }

    pub fn is_full(&self) -> bool {
        self.source().is_whole() && self.range().is_whole()
    }

    /// `U.x = r((s|_U)^{-1}(x))`, when `x` lies in the source.
    pub fn act(&self, x: &Point) -> Option<Point> {
        self.cells.iter().find_map(|c| c.apply(x))
    }

    pub fn to_table(&self) -> Result<TableElement> {
        if !self.is_full() {
            let missing = if self.source().is_whole() { self.range() } else { self.source() };
            return Err(Error::NotFull(format!("uncovered: {}", missing.complement())));
        }
        TableElement::new(self.alphabet, self.pairs())
    }

    pub fn from_table(g: &TableElement) -> Bisection {
        Self::from_pairs(g.alphabet(), g.pairs().to_vec())
    }

    pub fn parse(alphabet: Alphabet, s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("bisection {s:?}: expected {{nu<-mu, ...}}")))?;
        let cells = body
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                let (r, d) = t.split_once("<-").ok_or_else(|| Error::Parse(format!("cell {t:?}: expected nu<-mu")))?;
                Ok(DoubleCylinder::new(Word::parse(alphabet, r)?, Word::parse(alphabet, d)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, cells)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let a = self.alphabet;
        serde_json::Value::Array(
            self.cells
                .iter()
                .map(|c| {
                    json!({
                        "range": c.range.display(a).to_string(),
                        "domain": c.domain.display(a).to_string(),
                        "degree": c.degree(),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for Bisection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}<-{}", c.range.display(self.alphabet), c.domain.display(self.alphabet))?;
        }
        f.write_str("}")
    }
}
