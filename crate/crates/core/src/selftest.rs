//! A quick randomized sweep of the library's invariants, used by the CLI.

use std::collections::BTreeSet;

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cantor::{Alphabet, Clopen, Word};
use crate::certificate::{check_certificate, convolution_count, tree_closed_walks, SymmetricSet};
use crate::fixtures::free2;
use crate::groupoid::Bisection;
use crate::measure::{cocycle_chain_check, cocycle_range, integral_sqrt_rn, mu, transported_mass};
use crate::quadratic::QuadraticValue;
use crate::random::{random_point, random_table, random_word};
use crate::table::transporter;
use crate::tail::related;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
}

fn alphabets() -> Vec<Alphabet> {
    [(2, 1), (2, 2), (3, 1), (3, 2), (4, 3)].into_iter().map(|(d, k)| Alphabet::new(d, k).expect("valid")).collect()
}

/// Runs every check `rounds` times per alphabet; deterministic in `seed`.
pub fn run(seed: u64, rounds: usize) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flags: Vec<(&'static str, bool)> = Vec::new();
    let mut record = |name: &'static str, ok: bool| match flags.iter_mut().find(|(n, _)| *n == name) {
        Some(entry) => entry.1 &= ok,
        None => flags.push((name, ok)),
    };
    for a in alphabets() {
        for _ in 0..rounds {
            let g = random_table(&mut rng, a, 6);
            let h = random_table(&mut rng, a, 6);
            let f = random_table(&mut rng, a, 6);
            let x = random_point(&mut rng, a, 4, 3);
            let gh = g.compose(&h).expect("one alphabet");
            record("associativity", gh.compose(&f).ok() == h.compose(&f).and_then(|hf| g.compose(&hf)).ok());
            record("inverse", g.compose(&g.inverse()).is_ok_and(|e| e.is_identity()));
            let d = a.d() as usize - 1;
            record("block count", g.block_count() % d == a.k() as usize % d);
            record("action homomorphism", gh.act_point(&x).ok() == h.act_point(&x).and_then(|y| g.act_point(&y)).ok());
            let (bg, bh) = (Bisection::from_table(&g), Bisection::from_table(&h));
            record("bisection roundtrip", bg.to_table().ok().as_ref() == Some(&g));
            record("bisection homomorphism", bg.compose(&bh).and_then(|b| b.to_table()).ok().as_ref() == Some(&gh));
            record("bisection action", bg.act(&x) == g.act_point(&x).ok());
            record("cocycle chain rule", cocycle_chain_check(&g, &h, &x).unwrap_or(false));
            record("transported mass", transported_mass(&g).is_one());
            let integral = integral_sqrt_rn(&g);
            let one = QuadraticValue::one();
            let flat = cocycle_range(&g) == BTreeSet::from([0]);
            record("integral bound", integral <= one && ((integral == one) == flat));
            let (w1, w2) = (random_word(&mut rng, a, 4), random_word(&mut rng, a, 4));
            let whole = |w: &Word| a.k() == 1 && w.is_root();
            if whole(&w1) == whole(&w2) {
                let t = transporter(a, &w1, &w2).expect("both proper or both whole");
                let moved = t.act_clopen(&Clopen::cylinder(a, w1.clone())).ok();
                record("transporter", moved == Some(Clopen::cylinder(a, w2.clone())));
            }
            record("measure of whole", mu(&Clopen::whole(a)).is_one());
            record("tail inclusion", g.act_point(&x).is_ok_and(|y| related(&y, &x).is_some()));
        }
    }
    let cert = free2();
    let pingpong = crate::certificate::pingpong_verify(&cert).unwrap_or(false);
    record("ping-pong fixture", pingpong);
    let counts_match = SymmetricSet::from_generators(&cert.a, &cert.b).is_ok_and(|f| {
        (1..=3).all(|h| convolution_count(&f, 2 * h, 0).is_ok_and(|c| c == tree_closed_walks(4, 2 * h)))
    });
    record("convolution counts", counts_match);
    let target = Alphabet::new(2, 2).expect("valid");
    let nu = Word::parse(target, "1:11").expect("valid");
    record("certificate", check_certificate(target, &cert, &nu).is_ok());
    flags.into_iter().map(|(name, passed)| CheckOutcome { name, passed }).collect()
}
