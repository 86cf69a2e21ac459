//! Acceptance run: one PASS/FAIL line per criterion, exact arithmetic only.
//! Exits nonzero when any criterion fails.

mod common;

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{act, alphabets, brute_witness, graft, lcm, mu_by_counting, rat, rn_by_ratio, rng, same_map, tail_letter};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use thompson_core::certificate::tree_closed_walks;
use thompson_core::fixtures::free2;
use thompson_core::measure::{
    cocycle_chain_check, cocycle_range, deficit, integral_sqrt_rn, mu, rn_exponent, transported_mass,
};
use thompson_core::quadratic::{quad_compare, QuadraticValue};
use thompson_core::random::{random_clopen, random_point, random_table, random_word};
use thompson_core::{
    check_certificate, convolution_count, embed_supported, related, transporter, Alphabet, Bisection, Clopen, Error,
    SymmetricSet, TableElement, Verdict, Word,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn run(n: usize, name: &str, body: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    match &outcome {
        Ok(detail) => println!("criterion {n} [{name}]: PASS ({detail})"),
        Err(why) => println!("criterion {n} [{name}]: FAIL ({why})"),
    }
    outcome.is_ok()
}

fn inequality() -> Outcome {
    let target = Alphabet::new(2, 2).unwrap();
    let cert = free2();
    let nu = Word::parse(target, "1:11").unwrap();
    let start = Instant::now();
    let report = check_certificate(target, &cert, &nu).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(report.n == 3 && report.f_size == 4, "n = {}, |F| = {}", report.n, report.f_size);
    ensure!(report.verdict == Verdict::Pass, "verdict {:?}", report.verdict);
    ensure!(report.paper_lower_bound == rat(7, 2), "paper bound {}", report.paper_lower_bound);
    let two_sqrt3 = QuadraticValue::sqrt_of(3, rat(2, 1)).unwrap();
    ensure!(report.norm_bound.value == two_sqrt3, "norm {}", report.norm_bound.value);
    // 7/2 > 2√3 by squaring: 49/4 > 12
    ensure!(rat(7, 2) * rat(7, 2) == rat(49, 4) && rat(49, 4) > rat(12, 1), "squaring");
    ensure!(report.paper_bound_exceeds_norm, "paper bound not above norm");
    let seven_halves = QuadraticValue::from_rational(rat(7, 2));
    ensure!(quad_compare(&report.lhs, &seven_halves) != Ordering::Less, "lhs {} < 7/2", report.lhs);
    ensure!(quad_compare(&report.lhs, &two_sqrt3) == Ordering::Greater, "lhs not above norm");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");

    let shallow = Word::parse(target, "1:").unwrap();
    let report1 = match check_certificate(target, &cert, &shallow) {
        Err(Error::InconclusiveParameters(r)) => r,
        other => return Err(format!("n = 1 gave {other:?}")),
    };
    ensure!(report1.paper_lower_bound == rat(2, 1), "n = 1 bound {}", report1.paper_lower_bound);
    ensure!(!report1.paper_bound_exceeds_norm, "2 should not exceed 2√3");
    Ok(format!("lhs = {}, bound 7/2, norm 2√3, {:.1} ms; n = 1 inconclusive", report.lhs, elapsed.as_secs_f64() * 1e3))
}

fn convolution() -> Outcome {
    let cert = free2();
    let f = SymmetricSet::from_generators(&cert.a, &cert.b).map_err(|e| e.to_string())?;
    let expected = [4u32, 28, 232, 2092];
    for (i, want) in expected.iter().enumerate() {
        let len = 2 * (i + 1);
        let got = convolution_count(&f, len, 0).map_err(|e| e.to_string())?;
        ensure!(got == BigUint::from(*want), "length {len}: {got}");
        ensure!(tree_closed_walks(4, len) == got, "tree walks disagree at {len}");
        ensure!(common::free_group_closed_words(4, len) == u64::from(*want), "walk enumeration at {len}");
    }
    let start = Instant::now();
    let c12 = convolution_count(&f, 12, 0).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "length 12 took {elapsed:?}");
    ensure!(c12 == tree_closed_walks(4, 12), "length 12: {c12}");
    // count^{1/len} ≤ 2√3, i.e. count ≤ 12^{len/2}
    for len in (2..=12).step_by(2) {
        let c = convolution_count(&f, len, 0).map_err(|e| e.to_string())?;
        ensure!(c <= BigUint::from(12u32).pow(len as u32 / 2), "length {len} exceeds 12^(len/2)");
    }
    Ok(format!("4, 28, 232, 2092; length 12 = {c12} in {:.2} s", elapsed.as_secs_f64()))
}

fn cocycles() -> Outcome {
    let mut r = rng(1001);
    let al = alphabets();
    for i in 0..1000 {
        let a = al[i % al.len()];
        let (g, h) = (random_table(&mut r, a, 6), random_table(&mut r, a, 6));
        let x = random_point(&mut r, a, 5, 3);
        ensure!(cocycle_chain_check(&g, &h, &x).unwrap(), "chain rule at {g}, {h}, {x}");
        let y = h.act_point(&x).unwrap();
        let gh = g.compose(&h).unwrap();
        ensure!(rn_by_ratio(&gh, &x) == rn_by_ratio(&g, &y) * rn_by_ratio(&h, &x), "ratio oracle at {x}");
        ensure!(rn_exponent(&gh, &x).unwrap().value(a.d()) == rn_by_ratio(&gh, &x), "exponent vs ratio at {x}");
    }
    let mut flat = 0;
    for i in 0..500 {
        let a = al[i % al.len()];
        let g = random_table(&mut r, a, 8);
        ensure!(transported_mass(&g).is_one(), "mass of {g}");
        let integral = integral_sqrt_rn(&g);
        let is_flat = cocycle_range(&g) == [0].into();
        ensure!(integral <= QuadraticValue::one(), "integral above 1 for {g}");
        ensure!((integral == QuadraticValue::one()) == is_flat, "equality case for {g}");
        flat += usize::from(is_flat);
    }
    for i in 0..200 {
        let (d, k) = [(2, 1), (2, 2), (3, 2), (2, 3)][i % 4];
        let (target, base) = (Alphabet::new(d, k).unwrap(), Alphabet::new(d, d).unwrap());
        let s = random_table(&mut r, base, 5);
        let mut nu = random_word(&mut r, target, 3);
        // the root word of X_{d,1} is the whole space, leaving no outside to probe
        if k == 1 && nu.is_root() {
            nu = nu.child(r.gen_range(1..=d as u8));
        }
        let lifted = embed_supported(target, &s, &nu).unwrap();
        let cyl = Clopen::cylinder(target, nu.clone());
        let mut probes = 0;
        while probes < 5 {
            let x = random_point(&mut r, target, 6, 3);
            if cyl.contains_point(&x) {
                continue;
            }
            probes += 1;
            ensure!(rn_exponent(&lifted, &x).unwrap().0 == 0, "nonzero exponent off support at {x}");
        }
    }
    Ok(format!("1000 chain-rule cases, 500 mass and integral cases ({flat} flat), 200 embeddings"))
}

fn isomorphism() -> Outcome {
    let mut r = rng(1002);
    let al = alphabets();
    for i in 0..500 {
        let a = al[i % al.len()];
        let (g, h) = (random_table(&mut r, a, 6), random_table(&mut r, a, 6));
        let (u, v) = (Bisection::from_table(&g), Bisection::from_table(&h));
        ensure!(u.to_table().unwrap() == g, "roundtrip of {g}");
        let uv = u.compose(&v).unwrap().to_table().unwrap();
        ensure!(uv == g.compose(&h).unwrap(), "homomorphism at {g}, {h}");
    }
    for i in 0..1000 {
        let a = al[i % al.len()];
        let g = random_table(&mut r, a, 6);
        let u = Bisection::from_table(&g);
        let x = random_point(&mut r, a, 5, 4);
        let expected = act(&g, &x);
        ensure!(u.act(&x).as_ref() == Some(&expected), "bisection action at {x}");
        ensure!(u.to_table().unwrap().act_point(&x).unwrap() == expected, "table action at {x}");
    }
    Ok("500 roundtrip and homomorphism cases, 1000 action probes".into())
}

fn group_arithmetic() -> Outcome {
    let mut r = rng(1003);
    let al = alphabets();
    for i in 0..500 {
        let a = al[i % al.len()];
        let (f, g, h) = (random_table(&mut r, a, 5), random_table(&mut r, a, 5), random_table(&mut r, a, 5));
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        ensure!(left == f.compose(&g.compose(&h).unwrap()).unwrap(), "associativity");
        ensure!(g.compose(&g.inverse()).unwrap().is_identity(), "right inverse of {g}");
        ensure!(g.inverse().compose(&g).unwrap().is_identity(), "left inverse of {g}");
        let m = a.d() as usize - 1;
        ensure!(g.block_count() % m == a.k() as usize % m, "block count of {g}");
        let mut pairs = g.pairs().to_vec();
        for _ in 0..r.gen_range(1..6) {
            let j = r.gen_range(0..pairs.len());
            let (mu, nu) = pairs.remove(j);
            pairs.extend(mu.split(a).into_iter().zip(nu.split(a)));
        }
        pairs.shuffle(&mut r);
        ensure!(TableElement::new(a, pairs).unwrap() == g, "confluence for {g}");
    }
    let mut equal = 0;
    for i in 0..300 {
        let a = al[i % al.len()];
        let g = random_table(&mut r, a, 4);
        let h = if r.gen_bool(0.5) {
            let s = random_table(&mut r, a, 4);
            g.compose(&s).unwrap().compose(&s.inverse()).unwrap()
        } else {
            random_table(&mut r, a, 4)
        };
        ensure!((g == h) == same_map(&g, &h), "equality of {g} and {h}");
        equal += usize::from(g == h);
    }
    Ok(format!("500 cases per law, 300 equality cases ({equal} equal)"))
}

fn measure_mechanics() -> Outcome {
    let mut r = rng(1004);
    let al = alphabets();
    for a in &al {
        ensure!(mu(&Clopen::whole(*a)).is_one(), "mass of the whole space");
    }
    for i in 0..300 {
        let a = al[i % al.len()];
        let (b, c) = (random_clopen(&mut r, a, 6), random_clopen(&mut r, a, 6));
        ensure!(mu(&b) == mu_by_counting(&b), "mass of {b}");
        let lhs = mu(&b.union(&c).unwrap()) + mu(&b.intersect(&c).unwrap());
        ensure!(lhs == mu(&b) + mu(&c), "additivity at {b}, {c}");
    }
    let mut moved = 0;
    while moved < 200 {
        let a = al[moved % al.len()];
        let (u, v) = (random_word(&mut r, a, 4), random_word(&mut r, a, 4));
        if a.k() == 1 && u.is_root() != v.is_root() {
            continue;
        }
        let t = transporter(a, &u, &v).map_err(|e| e.to_string())?;
        let img = t.act_clopen(&Clopen::cylinder(a, u.clone())).unwrap();
        ensure!(img == Clopen::cylinder(a, v.clone()), "transporter {u} to {v}");
        moved += 1;
    }
    let v = Alphabet::thompson();
    let half = Clopen::parse(v, "{1}").unwrap();
    let swap = TableElement::parse(v, "{1->2, 2->1}").unwrap();
    ensure!(deficit(&half, &[swap]).unwrap().is_one(), "swap against half");
    let inside = TableElement::parse(v, "{11->12, 12->11, 2->2}").unwrap();
    let outside = TableElement::parse(v, "{1->1, 21->221, 221->222, 222->21}").unwrap();
    ensure!(deficit(&half, &[inside, outside]).unwrap().is_zero(), "invariant fixture");
    Ok("300 additivity cases, 200 transporters, deficits 0 and 1".into())
}

fn tail_equivalence() -> Outcome {
    let mut r = rng(1005);
    let al = alphabets();
    let mut hits = 0;
    for i in 0..300 {
        let a = al[i % al.len()];
        let x = random_point(&mut r, a, 4, 3);
        let y = if r.gen_bool(0.5) {
            graft(a, &random_word(&mut r, a, 3), &x, r.gen_range(0..5))
        } else {
            random_point(&mut r, a, 4, 3)
        };
        let bound = x.preperiod().depth() + y.preperiod().depth() + 2 * lcm(x.period().len(), y.period().len());
        let got = related(&x, &y).map(|w| (w.p, w.q));
        ensure!(got == brute_witness(&x, &y, bound), "{x} vs {y}: {got:?}");
        if let Some((p, q)) = got {
            ensure!((0..64).all(|j| tail_letter(&x, p + j) == tail_letter(&y, q + j)), "witness window");
            hits += 1;
        }
    }
    for i in 0..200 {
        let a = al[i % al.len()];
        let g = random_table(&mut r, a, 6);
        let x = random_point(&mut r, a, 5, 3);
        ensure!(related(&g.act_point(&x).unwrap(), &x).is_some(), "{g} moves {x} out of its class");
    }
    Ok(format!("300 pairs against brute force ({hits} related), 200 orbit inclusions"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("inequality reproduction", inequality),
        ("free-group convolution oracle", convolution),
        ("cocycle suite", cocycles),
        ("isomorphism suite", isomorphism),
        ("group arithmetic", group_arithmetic),
        ("measure mechanics", measure_mechanics),
        ("tail equivalence", tail_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, body)) in criteria.into_iter().enumerate() {
        if !run(i + 1, name, body) {
            failed += 1;
        }
    }
    println!("acceptance: {} of 7 criteria passed", 7 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
