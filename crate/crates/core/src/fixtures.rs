//! Frozen test fixtures.

use crate::cantor::{Alphabet, Clopen};
use crate::certificate::PingPongCertificate;
use crate::table::TableElement;

pub const FIXTURE_NAMES: &[&str] = &["free2"];

/// A ping-pong pair in `V_{2,2}`.
///
/// `a` squeezes everything outside `1:12` into `1:11` and blows `1:12` up over
/// the rest; `b` is the same map with the roots swapped. The attractors miss
/// `1:2` and `2:2`. Both maps distort the measure heavily, so
/// `Σ_s ∫ √ω(s) = 1 + √2`, which keeps the depth-one
/// instance of the inequality below `2√3`.
pub fn free2() -> PingPongCertificate {
    let v = Alphabet::new(2, 2).expect("valid alphabet");
    let table = |s: &str| TableElement::parse(v, s).expect("frozen fixture");
    let set = |s: &str| Clopen::parse(v, s).expect("frozen fixture");
    PingPongCertificate {
        a: table("{1:11->1:111, 1:2->1:1121, 2:->1:1122, 1:121->1:12, 1:1221->1:2, 1:1222->2:}"),
        b: table("{2:11->2:111, 2:2->2:1121, 1:->2:1122, 2:121->2:12, 2:1221->2:2, 2:1222->1:}"),
        p_a: set("{1:11}"),
        p_a_inv: set("{1:12}"),
        p_b: set("{2:11}"),
        p_b_inv: set("{2:12}"),
    }
}

pub fn fixture(name: &str) -> Option<PingPongCertificate> {
    match name {
        "free2" => Some(free2()),
        _ => None,
    }
}
