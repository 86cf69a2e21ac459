//! Independent reference implementations used as test oracles.
//!
//! Everything here works by brute force on explicit letter sequences and
//! linear scans, sharing no code paths with the library beyond constructors
//! and accessors.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use thompson_core::{Alphabet, Clopen, Point, TableElement, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn alphabets() -> Vec<Alphabet> {
    [(2, 1), (2, 2), (3, 1), (3, 2), (2, 3)].into_iter().map(|(d, k)| Alphabet::new(d, k).unwrap()).collect()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Letters `root, t_0, t_1, …` of a word as one flat sequence.
pub fn letters(w: &Word) -> Vec<u8> {
    std::iter::once(w.root()).chain(w.tail().iter().copied()).collect()
}

fn word_from_letters(a: Alphabet, l: &[u8]) -> Word {
    Word::new(a, l[0], l[1..].to_vec()).unwrap()
}

fn starts_with(long: &Word, short: &Word) -> bool {
    letters(long).starts_with(&letters(short))
}

/// Image of the cylinder `w` when it lies inside one domain block.
pub fn image_word(g: &TableElement, w: &Word) -> Option<Word> {
    let a = g.alphabet();
    for (mu, nu) in g.pairs() {
        if starts_with(w, mu) {
            let mut l = letters(nu);
            l.extend_from_slice(&letters(w)[letters(mu).len()..]);
            return Some(word_from_letters(a, &l));
        }
    }
    None
}

/// Tail letter `j` of `x`, straight from the stored preperiod and period.
pub fn tail_letter(x: &Point, j: usize) -> u8 {
    let u = x.preperiod().tail();
    let v = x.period();
    if j < u.len() {
        u[j]
    } else {
        v[(j - u.len()) % v.len()]
    }
}

/// The point `head · (tail of x from position t)`.
pub fn graft(a: Alphabet, head: &Word, x: &Point, t: usize) -> Point {
    let (u, v) = (x.preperiod().depth(), x.period().len());
    let start = t.max(u);
    let mut tail = head.tail().to_vec();
    tail.extend((t..start).map(|j| tail_letter(x, j)));
    let period = (start..start + v).map(|j| tail_letter(x, j)).collect();
    Point::new(a, Word::new(a, head.root(), tail).unwrap(), period).unwrap()
}

fn point_has_prefix(x: &Point, w: &Word) -> bool {
    x.root() == w.root() && w.tail().iter().enumerate().all(|(j, &c)| tail_letter(x, j) == c)
}

/// `g·x` by scanning the blocks.
pub fn act(g: &TableElement, x: &Point) -> Point {
    let (mu, nu) = g.pairs().iter().find(|(mu, _)| point_has_prefix(x, mu)).expect("complete domain code");
    graft(g.alphabet(), nu, x, mu.depth())
}

/// Every word with exactly `depth` tail letters.
pub fn words_at_depth(a: Alphabet, depth: usize) -> Vec<Word> {
    let mut out: Vec<Word> = (1..=a.k()).map(|r| Word::new(a, r, vec![]).unwrap()).collect();
    for _ in 0..depth {
        out = out.iter().flat_map(|w| (1..=a.d()).map(move |c| w.extend(&[c]))).collect();
    }
    out
}

pub fn max_depth(g: &TableElement) -> usize {
    g.pairs().iter().flat_map(|(a, b)| [a.depth(), b.depth()]).max().unwrap_or(0)
}

/// Equality as maps: images of every cylinder one level below the deepest
/// domain word agree.
pub fn same_map(g: &TableElement, h: &TableElement) -> bool {
    let depth = max_depth(g).max(max_depth(h)) + 1;
    words_at_depth(g.alphabet(), depth).iter().all(|w| image_word(g, w) == image_word(h, w))
}

/// `μ(A)` by counting the depth-`D` cylinders inside `A`.
pub fn mu_by_counting(a: &Clopen) -> BigRational {
    let al = a.alphabet();
    let depth = a.prefixes().iter().map(Word::depth).max().unwrap_or(0);
    let words = words_at_depth(al, depth);
    let inside = words.iter().filter(|w| a.prefixes().iter().any(|p| starts_with(w, p))).count();
    BigRational::new(BigInt::from(inside), BigInt::from(words.len()))
}

/// `μ(w·X)` from the definition.
pub fn cylinder_mu(a: Alphabet, w: &Word) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(a.k()) * BigInt::from(a.d()).pow(w.depth() as u32))
}

/// `ω(g, x)` as the mass ratio of a small cylinder around `x` and its image.
pub fn rn_by_ratio(g: &TableElement, x: &Point) -> BigRational {
    let a = g.alphabet();
    let depth = max_depth(g) + 1;
    let w = Word::new(a, x.root(), (0..depth).map(|j| tail_letter(x, j)).collect()).unwrap();
    let img = image_word(g, &w).expect("deep enough");
    cylinder_mu(a, &img) / cylinder_mu(a, &w)
}

/// `∫ √ω dμ = Σ_blocks √(μ(μ_i)·μ(ν_i))`, returned as `(rational part, coefficient of √d)`
/// for square-free `d`.
pub fn integral_by_geometric_means(g: &TableElement) -> (BigRational, BigRational) {
    let a = g.alphabet();
    let (d, k) = (BigInt::from(a.d()), BigInt::from(a.k()));
    let (mut r, mut s) = (BigRational::zero(), BigRational::zero());
    for (mu, nu) in g.pairs() {
        // √(1/(k² d^{|μ|+|ν|})) = d^{-e/2} / k with e = total depth
        let e = (mu.depth() + nu.depth()) as u32;
        let base = BigRational::new(BigInt::one(), &k * d.pow(e / 2));
        if e.is_multiple_of(2) {
            r += base;
        } else {
            s += base / BigRational::from_integer(d.clone());
        }
    }
    (r, s)
}

/// Least `(p, q)` with `x_{p+i} = y_{q+i}` on a long window, searching
/// `p, q ≤ bound`.
pub fn brute_witness(x: &Point, y: &Point, bound: usize) -> Option<(usize, usize)> {
    let window = 4 * bound + 4 * (x.period().len() * y.period().len()) + 8;
    for p in 0..=bound {
        for q in 0..=bound {
            if (0..window).all(|i| tail_letter(x, p + i) == tail_letter(y, q + i)) {
                return Some((p, q));
            }
        }
    }
    None
}

pub fn lcm(a: usize, b: usize) -> usize {
    let gcd = |mut a: usize, mut b: usize| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    a / gcd(a, b) * b
}

/// Closed walks at the root of the `q`-regular tree, by brute-force walk
/// enumeration on explicit reduced words (vertices are reduced words over
/// `q/2` free generators and their inverses).
pub fn free_group_closed_words(q: usize, len: usize) -> u64 {
    fn walk(path: &mut Vec<usize>, left: usize, q: usize) -> u64 {
        if left == 0 {
            return u64::from(path.is_empty());
        }
        if path.len() > left {
            return 0;
        }
        let mut total = 0;
        for s in 0..q {
            // letter s and s^1 are mutually inverse
            if path.last() == Some(&(s ^ 1)) {
                path.pop();
                total += walk(path, left - 1, q);
                path.push(s ^ 1);
            } else {
                path.push(s);
                total += walk(path, left - 1, q);
                path.pop();
            }
        }
        total
    }
    walk(&mut Vec::new(), len, q)
}
