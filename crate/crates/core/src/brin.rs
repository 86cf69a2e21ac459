//! Brin–Thompson `mV` as full bisections of the product groupoid `G_2^m`.
//!
//! An element is a list of `(domain box, range box)` pairs, a box being an
//! `m`-tuple of binary words. The element maps `D·(ω_1, …, ω_m)` to
//! `R·(ω_1, …, ω_m)`, substituting prefixes coordinatewise.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::json;

use crate::cantor::{Alphabet, Point, Word};
use crate::error::{Error, Result};
use crate::quadratic::Rational;
use crate::table::TableElement;

/// An `m`-tuple of words over `{1, 2}`; the empty word is the full factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductBox(pub Vec<Vec<u8>>);

impl ProductBox {
    pub fn full(m: usize) -> Self {
        Self(vec![Vec::new(); m])
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    /// `2^{−Σ|w_i|}`.
    pub fn volume(&self) -> Rational {
        let depth: usize = self.0.iter().map(Vec::len).sum();
        Rational::new(BigInt::one(), BigInt::from(2).pow(depth as u32))
    }

    /// Coordinatewise the longer word, or `None` when some coordinate is disjoint.
    pub fn intersect(&self, other: &ProductBox) -> Option<ProductBox> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                if b.starts_with(a) {
                    Some(b.clone())
                } else if a.starts_with(b) {
                    Some(a.clone())
                } else {
                    None
                }
            })
            .collect::<Option<Vec<_>>>()
            .map(ProductBox)
    }

    pub fn contains(&self, xs: &[Point]) -> bool {
        self.0.iter().zip(xs).all(|(w, x)| x.has_prefix(&as_word(w)))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("box {s:?}: expected (w1,...,wm)")))?;
        body.split(',')
            .map(|t| match t.trim() {
                "" | "e" | "ε" => Ok(Vec::new()),
                t => t
                    .chars()
                    .map(|c| match c {
                        '1' => Ok(1),
                        '2' => Ok(2),
                        _ => Err(Error::Parse(format!("box {s:?}: letters must be 1 or 2"))),
                    })
                    .collect(),
            })
            .collect::<Result<Vec<_>>>()
            .map(ProductBox)
    }

    fn coord_string(w: &[u8]) -> String {
        if w.is_empty() {
            "e".into()
        } else {
            w.iter().map(|a| char::from(b'0' + a)).collect()
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self.0.iter().map(|w| w.iter().map(|a| char::from(b'0' + a)).collect::<String>()).collect::<Vec<_>>())
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Parse(format!("box {v}: expected an array of binary words"));
        let items = v.as_array().ok_or_else(bad)?;
        let words = items.iter().map(|w| w.as_str().ok_or_else(bad)).collect::<Result<Vec<_>>>()?;
        Self::parse(&format!("({})", words.join(",")))
    }
}

impl fmt::Display for ProductBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| Self::coord_string(w)).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn as_word(tail: &[u8]) -> Word {
    Word::from_parts(1, tail.to_vec())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoxTable {
    m: usize,
    pairs: Vec<(ProductBox, ProductBox)>,
}

fn check_partition(m: usize, boxes: &[&ProductBox]) -> Result<()> {
    for (i, a) in boxes.iter().enumerate() {
        if a.m() != m {
            return Err(Error::Invalid(format!("box {a} has {} coordinates, expected {m}", a.m())));
        }
        if let Some(b) = boxes[i + 1..].iter().find(|b| a.intersect(b).is_some()) {
            return Err(Error::OverlappingBoxes { first: a.to_string(), second: b.to_string() });
        }
    }
    let covered = boxes.iter().map(|b| b.volume()).fold(Rational::zero(), |acc, v| acc + v);
    if covered != Rational::one() {
        return Err(Error::IncompleteBoxes { covered: covered.to_string() });
    }
    Ok(())
}

/// The letter-`a` child of `b` along coordinate `c`, if `b` is one; returns the parent.
fn split_off(b: &ProductBox, c: usize) -> Option<(ProductBox, u8)> {
    let last = *b.0[c].last()?;
    let mut parent = b.clone();
    parent.0[c].pop();
    Some((parent, last))
}

/// Greedy merging of sibling pairs, one coordinate at a time in fixed order,
/// until nothing merges.
fn reduce_boxes(m: usize, mut pairs: Vec<(ProductBox, ProductBox)>) -> Vec<(ProductBox, ProductBox)> {
    pairs.sort();
    loop {
        let mut changed = false;
        for c in 0..m {
            let mut slots: BTreeMap<(ProductBox, ProductBox), [Option<usize>; 2]> = BTreeMap::new();
            for (i, (dom, rng)) in pairs.iter().enumerate() {
                let (Some((dp, a)), Some((rp, b))) = (split_off(dom, c), split_off(rng, c)) else {
                    continue;
                };
                if a == b {
                    slots.entry((dp, rp)).or_default()[a as usize - 1] = Some(i);
                }
            }
            let mut drop = vec![false; pairs.len()];
            let mut merged = Vec::new();
            for (parents, slot) in slots {
                if let [Some(i), Some(j)] = slot {
                    drop[i] = true;
                    drop[j] = true;
                    merged.push(parents);
                }
            }
            if !merged.is_empty() {
                changed = true;
                let mut next: Vec<_> = pairs.into_iter().zip(drop).filter(|(_, d)| !d).map(|(p, _)| p).collect();
                next.extend(merged);
                next.sort();
                pairs = next;
            }
        }
        if !changed {
            return pairs;
        }
    }
}

impl BoxTable {
    pub fn new(m: usize, pairs: Vec<(ProductBox, ProductBox)>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("m must be at least 1".into()));
        }
        if pairs.is_empty() {
            return Err(Error::EmptyTable);
        }
        check_partition(m, &pairs.iter().map(|p| &p.0).collect::<Vec<_>>())?;
        check_partition(m, &pairs.iter().map(|p| &p.1).collect::<Vec<_>>())?;
        Ok(Self { m, pairs: reduce_boxes(m, pairs) })
    }

    pub fn identity(m: usize) -> Self {
        Self { m, pairs: vec![(ProductBox::full(m), ProductBox::full(m))] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn pairs(&self) -> &[(ProductBox, ProductBox)] {
        &self.pairs
    }

    /// Pointwise identity. The reduced form need not be a single pair, since
    /// some box partitions admit no sibling merge at all.
    pub fn is_identity(&self) -> bool {
        self.pairs.iter().all(|(d, r)| d == r)
    }

    /// Equality as maps: `self ∘ other⁻¹` is the identity.
    pub fn same_map(&self, other: &BoxTable) -> Result<bool> {
        Ok(self.compose(&other.inverse())?.is_identity())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &BoxTable) -> Result<BoxTable> {
        if self.m != other.m {
            return Err(Error::MismatchedAlphabet(format!("m = {}", self.m), format!("m = {}", other.m)));
        }
        let mut out = Vec::new();
        for (hd, hr) in &other.pairs {
            for (gd, gr) in &self.pairs {
                let Some(meet) = hr.intersect(gd) else { continue };
                let pre = (0..self.m).map(|c| [&hd.0[c][..], &meet.0[c][hr.0[c].len()..]].concat()).collect();
                let img = (0..self.m).map(|c| [&gr.0[c][..], &meet.0[c][gd.0[c].len()..]].concat()).collect();
                out.push((ProductBox(pre), ProductBox(img)));
            }
        }
        Ok(Self { m: self.m, pairs: reduce_boxes(self.m, out) })
    }

    pub fn inverse(&self) -> BoxTable {
        Self {
            m: self.m,
            pairs: reduce_boxes(self.m, self.pairs.iter().map(|(d, r)| (r.clone(), d.clone())).collect()),
        }
    }

    pub fn act(&self, xs: &[Point]) -> Result<Vec<Point>> {
        if xs.len() != self.m {
            return Err(Error::Invalid(format!("expected {} coordinates, got {}", self.m, xs.len())));
        }
        for x in xs {
            Alphabet::thompson().ensure_same(x.alphabet())?;
        }
        let (dom, rng) =
            self.pairs.iter().find(|(d, _)| d.contains(xs)).expect("domain boxes partition the product space");
        Ok(xs.iter().enumerate().map(|(c, x)| x.substitute_prefix(&as_word(&dom.0[c]), &as_word(&rng.0[c]))).collect())
    }

    /// `g ∈ V_{2,1}` acting on coordinate `c` of the product, trivially elsewhere.
    pub fn embed(m: usize, c: usize, g: &TableElement) -> Result<BoxTable> {
        Alphabet::thompson().ensure_same(g.alphabet())?;
        if c >= m {
            return Err(Error::Invalid(format!("coordinate {c} out of range for m = {m}")));
        }
        let lift = |w: &Word| {
            let mut b = ProductBox::full(m);
            b.0[c] = w.tail().to_vec();
            b
        };
        Self::new(m, g.pairs().iter().map(|(mu, nu)| (lift(mu), lift(nu))).collect())
    }

    /// Parses `{(w,..)->(w,..), ...}`; `e` or an empty slot is the empty word.
    pub fn parse(m: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("box table {s:?}: expected {{(..)->(..), ...}}")))?;
        let mut pairs = Vec::new();
        let mut rest = body.trim();
        while !rest.is_empty() {
            let (lhs, after) =
                rest.split_once("->").ok_or_else(|| Error::Parse(format!("box table {s:?}: expected ->")))?;
            let close = after.find(')').ok_or_else(|| Error::Parse(format!("box table {s:?}: unclosed box")))?;
            pairs.push((ProductBox::parse(lhs)?, ProductBox::parse(&after[..=close])?));
            rest = after[close + 1..].trim_start().trim_start_matches(',').trim_start();
        }
        Self::new(m, pairs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self.pairs.iter().map(|(d, r)| json!([d.to_json(), r.to_json()])).collect::<Vec<_>>())
    }

    pub fn from_json(m: usize, v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Parse("box table JSON: expected [[domain box, range box], ...]".into());
        let pairs = v
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|p| match p.as_array().map(Vec::as_slice) {
                Some([d, r]) => Ok((ProductBox::from_json(d)?, ProductBox::from_json(r)?)),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, pairs)
    }
}

impl fmt::Display for BoxTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(d, r)| format!("{d}->{r}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
