mod common;

use common::{act, alphabets, rng};
use rand::seq::SliceRandom;
use rand::Rng;
use thompson_core::random::{random_code, random_point, random_table};
use thompson_core::{Alphabet, Bisection, BoxTable, DoubleCylinder, Error, Point, ProductBox, TableElement, Word};

/// A random partial bisection: matched sub-lists of two random codes.
fn random_bisection<R: Rng>(r: &mut R, a: Alphabet) -> Bisection {
    let (n1, n2) = (r.gen_range(0..5), r.gen_range(0..5));
    let mut dom = random_code(r, a, n1);
    let mut rng_side = random_code(r, a, n2);
    dom.shuffle(r);
    rng_side.shuffle(r);
    let n = r.gen_range(1..=dom.len().min(rng_side.len()));
    let cells = dom.into_iter().zip(rng_side).take(n).map(|(m, v)| DoubleCylinder::new(v, m)).collect();
    Bisection::new(a, cells).unwrap()
}

#[test]
fn table_roundtrip_and_homomorphism() {
    let mut r = rng(30);
    for a in alphabets() {
        for _ in 0..100 {
            let (g, h) = (random_table(&mut r, a, 6), random_table(&mut r, a, 6));
            let (u, v) = (Bisection::from_table(&g), Bisection::from_table(&h));
            assert!(u.is_full());
            assert_eq!(u.to_table().unwrap(), g);
            assert_eq!(u.compose(&v).unwrap().to_table().unwrap(), g.compose(&h).unwrap());
            assert_eq!(u.inverse().to_table().unwrap(), g.inverse());
            assert_eq!(
                Bisection::from_table(&TableElement::identity(a)),
                Bisection::unit(&thompson_core::Clopen::whole(a))
            );
        }
    }
}

#[test]
fn action_compatibility() {
    let mut r = rng(31);
    for a in alphabets() {
        for _ in 0..200 {
            let g = random_table(&mut r, a, 6);
            let u = Bisection::from_table(&g);
            let x = random_point(&mut r, a, 5, 4);
            assert_eq!(u.act(&x), Some(act(&g, &x)));
        }
    }
}

#[test]
fn fullness_agrees_with_table_construction() {
    let mut r = rng(32);
    for a in alphabets() {
        for _ in 0..100 {
            let b = random_bisection(&mut r, a);
            let pairs: Vec<(Word, Word)> = b.cells().iter().map(|c| (c.domain.clone(), c.range.clone())).collect();
            assert_eq!(b.is_full(), TableElement::new(a, pairs).is_ok());
            assert_eq!(b.is_full(), b.to_table().is_ok());
        }
    }
}

#[test]
fn partial_products() {
    let mut r = rng(33);
    for a in alphabets() {
        for _ in 0..100 {
            let (u, v, w) = (random_bisection(&mut r, a), random_bisection(&mut r, a), random_bisection(&mut r, a));
            let uv = u.compose(&v).unwrap();
            assert_eq!(uv.compose(&w).unwrap(), u.compose(&v.compose(&w).unwrap()).unwrap());
            assert_eq!(u.compose(&u.inverse()).unwrap(), Bisection::unit(&u.range()));
            // germs compose pointwise and degrees add
            for _ in 0..5 {
                let x = random_point(&mut r, a, 4, 3);
                let expected = v.act(&x).and_then(|y| u.act(&y));
                assert_eq!(uv.act(&x), expected);
            }
            // degrees of the germs at x add along the product
            for c in uv.cells() {
                let x = Point::new(a, c.domain.clone(), vec![1]).unwrap();
                let y = v.act(&x).unwrap();
                assert_eq!(germ_degree(&uv, &x), germ_degree(&u, &y) + germ_degree(&v, &x));
            }
        }
    }
}

fn germ_degree(b: &Bisection, x: &Point) -> i64 {
    b.cells().iter().find(|c| x.has_prefix(&c.domain)).unwrap().degree()
}

#[test]
fn degree_negates_under_inverse() {
    let mut r = rng(34);
    let a = Alphabet::new(3, 2).unwrap();
    for _ in 0..100 {
        let u = random_bisection(&mut r, a);
        for c in u.cells() {
            let x = Point::new(a, c.domain.clone(), vec![2]).unwrap();
            let y = u.act(&x).unwrap();
            assert_eq!(germ_degree(&u.inverse(), &y), -germ_degree(&u, &x));
        }
    }
}

#[test]
fn bisection_text_roundtrip() {
    let mut r = rng(35);
    for a in alphabets() {
        for _ in 0..50 {
            let b = random_bisection(&mut r, a);
            assert_eq!(Bisection::parse(a, &b.to_string()).unwrap(), b);
        }
    }
    assert!(matches!(Bisection::parse(Alphabet::thompson(), "{2<-1, 1<-1}"), Err(Error::Overlapping { .. })));
}

// Brin–Thompson products

fn random_box_table<R: Rng>(r: &mut R, m: usize) -> BoxTable {
    // products of V-elements on single coordinates, plus a baker move
    let v = Alphabet::thompson();
    let baker = BoxTable::parse(2, "{(1,e)->(e,1),(2,e)->(e,2)}").unwrap();
    let mut g = BoxTable::identity(m);
    for _ in 0..r.gen_range(1..5) {
        let step = if m >= 2 && r.gen_bool(0.3) {
            // baker map on a random pair of coordinates via coordinate embedding of boxes
            let (i, j) = (r.gen_range(0..m), r.gen_range(0..m));
            if i == j {
                BoxTable::identity(m)
            } else {
                let lift = |b: &ProductBox| {
                    let mut out = ProductBox::full(m);
                    out.0[i] = b.0[0].clone();
                    out.0[j] = b.0[1].clone();
                    out
                };
                BoxTable::new(m, baker.pairs().iter().map(|(d, rr)| (lift(d), lift(rr))).collect()).unwrap()
            }
        } else {
            BoxTable::embed(m, r.gen_range(0..m), &random_table(r, v, 4)).unwrap()
        };
        g = step.compose(&g).unwrap();
    }
    g
}

fn random_points<R: Rng>(r: &mut R, m: usize) -> Vec<Point> {
    (0..m).map(|_| random_point(r, Alphabet::thompson(), 4, 3)).collect()
}

#[test]
fn mv_group_laws() {
    let mut r = rng(36);
    for m in 1..=3 {
        for _ in 0..70 {
            let (f, g, h) = (random_box_table(&mut r, m), random_box_table(&mut r, m), random_box_table(&mut r, m));
            assert!(g.compose(&g.inverse()).unwrap().is_identity());
            let left = f.compose(&g).unwrap().compose(&h).unwrap();
            let right = f.compose(&g.compose(&h).unwrap()).unwrap();
            assert!(left.same_map(&right).unwrap());
            let xs = random_points(&mut r, m);
            assert_eq!(left.act(&xs).unwrap(), f.act(&g.act(&h.act(&xs).unwrap()).unwrap()).unwrap());
        }
    }
}

#[test]
fn mv_single_factor_matches_table_action() {
    let mut r = rng(37);
    let v = Alphabet::thompson();
    for _ in 0..100 {
        let m = r.gen_range(1..=3);
        let c = r.gen_range(0..m);
        let g = random_table(&mut r, v, 5);
        let e = BoxTable::embed(m, c, &g).unwrap();
        let xs = random_points(&mut r, m);
        let ys = e.act(&xs).unwrap();
        for (i, (x, y)) in xs.iter().zip(&ys).enumerate() {
            if i == c {
                assert_eq!(*y, act(&g, x));
            } else {
                assert_eq!(y, x);
            }
        }
    }
}

#[test]
fn mv_reduction_ignores_input_order() {
    let mut r = rng(38);
    for m in 1..=3 {
        for _ in 0..60 {
            let g = random_box_table(&mut r, m);
            let mut pairs = g.pairs().to_vec();
            // split a few pairs along random coordinates, then shuffle
            for _ in 0..r.gen_range(1..4) {
                let i = r.gen_range(0..pairs.len());
                let c = r.gen_range(0..m);
                let (d, rr) = pairs.remove(i);
                for letter in [1u8, 2] {
                    let (mut d2, mut r2) = (d.clone(), rr.clone());
                    d2.0[c].push(letter);
                    r2.0[c].push(letter);
                    pairs.push((d2, r2));
                }
            }
            pairs.shuffle(&mut r);
            let rebuilt = BoxTable::new(m, pairs.clone()).unwrap();
            pairs.shuffle(&mut r);
            assert_eq!(rebuilt, BoxTable::new(m, pairs).unwrap());
            assert!(rebuilt.same_map(&g).unwrap());
        }
    }
}

#[test]
fn mv_json_roundtrip() {
    let mut r = rng(39);
    for _ in 0..30 {
        let g = random_box_table(&mut r, 2);
        assert_eq!(BoxTable::from_json(2, &g.to_json()).unwrap(), g);
        assert_eq!(BoxTable::parse(2, &g.to_string()).unwrap(), g);
    }
}
