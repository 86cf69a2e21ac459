//! Tail equivalence with lag on eventually periodic points.
//!
//! Positions are counted on the tail letters only: the root letter of
//! `X_{d,k}` is dropped, so `x = r : x_0 x_1 …`. Two points are related when
//! `x_{p+i} = y_{q+i}` for all `i ≥ 0`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cantor::{Point, Word};
use crate::error::{Error, Result};
use crate::groupoid::DoubleCylinder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TailWitness {
    pub p: usize,
    pub q: usize,
}

/// Canonical tail of `x` from position `j`, comparable across points.
fn tail_key(x: &Point, j: usize) -> (Vec<u8>, Vec<u8>) {
    let (pre, period) = x.tail_from(j);
    let canon = Point::normalize(x.alphabet(), Word::from_parts(1, pre), period);
    (canon.preperiod().tail().to_vec(), canon.period().to_vec())
}

fn is_rotation(a: &[u8], b: &[u8]) -> bool {
    a.len() == b.len() && (0..a.len().max(1)).any(|r| a.iter().cycle().skip(r).take(a.len()).eq(b.iter()))
}

/// The lexicographically least witness, or `None` when unrelated (or the
/// alphabets differ).
pub fn related(x: &Point, y: &Point) -> Option<TailWitness> {
    if x.alphabet() != y.alphabet() || !is_rotation(x.period(), y.period()) {
        return None;
    }
    // Beyond these ranges every tail repeats one already tried.
    let (ux, uy, v) = (x.preperiod().depth(), y.preperiod().depth(), y.period().len());
    (0..=ux + v).find_map(|p| {
        let target = tail_key(x, p);
        (0..uy + v).find(|&q| tail_key(y, q) == target).map(|q| TailWitness { p, q })
    })
}

/// Prefix length (root included) used for a witness offset.
///
/// For `k = 1` one extra letter is taken, since the root word is the whole
/// space and never appears in reduced cells.
fn cell_prefix_len(x: &Point, offset: usize) -> usize {
    offset + 1 + usize::from(x.alphabet().k() == 1)
}

/// A cell `(ν ← μ)` whose germ carries `x` to `y`; its degree is `q − p`.
pub fn witness_cell(x: &Point, y: &Point, w: TailWitness) -> Result<DoubleCylinder> {
    if x.alphabet() != y.alphabet() || tail_key(x, w.p) != tail_key(y, w.q) {
        return Err(Error::NotRelated);
    }
    let mu = x.prefix(cell_prefix_len(x, w.p));
    let nu = y.prefix(cell_prefix_len(y, w.q));
    Ok(DoubleCylinder::new(nu, mu))
}

/// `x_i = y_i` for every tail position `i ≥ n`: the lag-free level `R_n`.
pub fn finite_level_related(x: &Point, y: &Point, n: usize) -> bool {
    x.alphabet() == y.alphabet() && tail_key(x, n) == tail_key(y, n)
}

/// `{ ν · σ^j(x) : j ≤ L, ν any word with at most L tail letters }`, sorted.
pub fn orbit_fragment(x: &Point, l: usize) -> BTreeSet<Point> {
    let a = x.alphabet();
    let mut heads: Vec<Word> = (1..=a.k()).map(Word::root_word).collect();
    let mut frontier = heads.clone();
    for _ in 0..l {
        frontier = frontier.iter().flat_map(|w| w.split(a)).collect();
        heads.extend(frontier.iter().cloned());
    }
    let mut out = BTreeSet::new();
    for j in 0..=l {
        let (pre, period) = x.tail_from(j);
        for nu in &heads {
            out.insert(Point::assemble(a, nu, &pre, period.clone()));
        }
    }
    out
}
