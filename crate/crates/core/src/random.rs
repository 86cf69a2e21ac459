//! Seeded random generators for words, points, clopens and group elements.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cantor::{Alphabet, Clopen, Point, Word};
use crate::table::TableElement;

pub fn random_word<R: Rng>(rng: &mut R, alphabet: Alphabet, max_depth: usize) -> Word {
    let root = rng.gen_range(1..=alphabet.k());
    let depth = rng.gen_range(0..=max_depth);
    let tail = (0..depth).map(|_| rng.gen_range(1..=alphabet.d())).collect();
    Word::from_parts(root, tail)
}

/// `u · v^∞` with `|u| ≤ max_pre` tail letters and `1 ≤ |v| ≤ max_period`.
pub fn random_point<R: Rng>(rng: &mut R, alphabet: Alphabet, max_pre: usize, max_period: usize) -> Point {
    let pre = random_word(rng, alphabet, max_pre);
    let len = rng.gen_range(1..=max_period.max(1));
    let period = (0..len).map(|_| rng.gen_range(1..=alphabet.d())).collect();
    Point::normalize(alphabet, pre, period)
}

/// The leaves of a random complete prefix code: start from the level-zero
/// family and split `splits` random leaves.
pub fn random_code<R: Rng>(rng: &mut R, alphabet: Alphabet, splits: usize) -> Vec<Word> {
    let mut leaves: Vec<Word> = if alphabet.k() == 1 {
        Word::root_word(1).split(alphabet)
    } else {
        (1..=alphabet.k()).map(Word::root_word).collect()
    };
    for _ in 0..splits {
        let i = rng.gen_range(0..leaves.len());
        let w = leaves.swap_remove(i);
        leaves.extend(w.split(alphabet));
    }
    leaves.sort();
    leaves
}

/// A random union of leaves of a random code.
pub fn random_clopen<R: Rng>(rng: &mut R, alphabet: Alphabet, splits: usize) -> Clopen {
    let words = random_code(rng, alphabet, splits).into_iter().filter(|_| rng.gen_bool(0.5));
    Clopen::normalize(alphabet, words).expect("leaves of one code")
}

/// Two random codes of equal size, paired after shuffling the range side.
pub fn random_table<R: Rng>(rng: &mut R, alphabet: Alphabet, max_splits: usize) -> TableElement {
    let dom_splits = rng.gen_range(0..=max_splits);
    let rng_splits = rng.gen_range(0..=max_splits);
    let domain = random_code(rng, alphabet, dom_splits);
    let mut range = random_code(rng, alphabet, rng_splits);
    // Equalize the sizes; each split adds d − 1 leaves.
    let mut domain = domain;
    while domain.len() != range.len() {
        let shorter = if domain.len() < range.len() { &mut domain } else { &mut range };
        let i = rng.gen_range(0..shorter.len());
        let w = shorter.swap_remove(i);
        shorter.extend(w.split(alphabet));
    }
    range.shuffle(rng);
    TableElement::new(alphabet, domain.into_iter().zip(range).collect()).expect("two complete codes")
}
