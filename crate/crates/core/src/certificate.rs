//! Exact verification of the inequality
//! `Σ_{s∈F} ∫ √ω(s, x) dμ(x) > ‖Σ_{s∈F} λ_s‖` for a free symmetric set.
//!
//! The set `F` lives in `V_{d,d}` and carries a ping-pong certificate, which
//! makes `⟨a, b⟩` free of rank 2 and pins the norm at `2√(2r − 1)`. Each
//! `s ∈ F` is embedded into `V_{d,k}` on a cylinder `ν·X_d` before integrating.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::cantor::{Alphabet, Clopen, Word};
use crate::error::{Error, Result};
use crate::measure::{integral_sqrt_rn, mu};
use crate::quadratic::{quad_compare, QuadraticValue, Rational};
use crate::table::{embed_supported, TableElement};

/// A finite list of elements; `symmetric` is set once closure under
/// inverses has been checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricSet {
    elements: Vec<TableElement>,
    symmetric: bool,
}

fn inverse_closed(elements: &[TableElement]) -> bool {
    let mut counts: HashMap<&TableElement, i64> = HashMap::new();
    for g in elements {
        *counts.entry(g).or_default() += 1;
    }
    let inverses: Vec<TableElement> = elements.iter().map(TableElement::inverse).collect();
    let mut inv_counts: HashMap<&TableElement, i64> = HashMap::new();
    for g in &inverses {
        *inv_counts.entry(g).or_default() += 1;
    }
    counts == inv_counts
}

impl SymmetricSet {
    /// A proper symmetric set: inverse-closed, no identity, no repeats.
    pub fn new(elements: Vec<TableElement>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::NotSymmetric("the set is empty".into()));
        }
        if let Some(g) = elements.iter().find(|g| g.is_identity()) {
            return Err(Error::NotSymmetric(format!("contains the identity {g}")));
        }
        for (i, g) in elements.iter().enumerate() {
            if elements[i + 1..].contains(g) {
                return Err(Error::NotSymmetric(format!("{g} is listed twice")));
            }
        }
        Self::multiset(elements)
    }

    /// Inverse-closed as a multiset; repeats and involutions are allowed.
    pub fn multiset(elements: Vec<TableElement>) -> Result<Self> {
        if let Some(first) = elements.first() {
            for g in &elements[1..] {
                first.alphabet().ensure_same(g.alphabet())?;
            }
        }
        if !inverse_closed(&elements) {
            return Err(Error::NotSymmetric("some inverse is missing".into()));
        }
        Ok(Self { elements, symmetric: true })
    }

    /// No symmetry check; convolution counts refuse such sets.
    pub fn unchecked(elements: Vec<TableElement>) -> Self {
        let symmetric = !elements.is_empty() && inverse_closed(&elements);
        Self { elements, symmetric }
    }

    /// `{a, a⁻¹, b, b⁻¹}`.
    pub fn from_generators(a: &TableElement, b: &TableElement) -> Result<Self> {
        Self::new(vec![a.clone(), a.inverse(), b.clone(), b.inverse()])
    }

    pub fn elements(&self) -> &[TableElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormKind {
    ExactFreeRank,
    UserSupplied,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormBound {
    pub value: QuadraticValue,
    pub kind: NormKind,
    pub r: Option<u32>,
}

impl NormBound {
    pub fn user_supplied(value: QuadraticValue) -> Result<Self> {
        if value.signum() != Ordering::Greater {
            return Err(Error::Invalid(format!("norm bound {value} must be positive")));
        }
        Ok(Self { value, kind: NormKind::UserSupplied, r: None })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.value.to_json();
        let kind = match self.kind {
            NormKind::ExactFreeRank => format!("exact-free-rank-{}", self.r.unwrap_or(0)),
            NormKind::UserSupplied => "user-supplied".into(),
        };
        v["kind"] = json!(kind);
        v["r"] = json!(self.r);
        v
    }
}

/// `‖Σ λ_s‖ = 2√(2r − 1)` for the symmetric generating set of a free group of rank `r`.
pub fn free_norm(r: u32) -> Result<NormBound> {
    if r < 2 {
        return Err(Error::Invalid(format!("free rank {r} must be at least 2")));
    }
    let value = QuadraticValue::sqrt_of(2 * r as u64 - 1, Rational::from_integer(BigInt::from(2)))?;
    Ok(NormBound { value, kind: NormKind::ExactFreeRank, r: Some(r) })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PingPongCertificate {
    pub a: TableElement,
    pub b: TableElement,
    pub p_a: Clopen,
    pub p_a_inv: Clopen,
    pub p_b: Clopen,
    pub p_b_inv: Clopen,
}

/// `g · (X ∖ from) ⊆ into`.
fn maps_into(g: &TableElement, from: &Clopen, into: &Clopen) -> Result<bool> {
    g.act_clopen(&from.complement())?.is_subset(into)
}

impl PingPongCertificate {
    pub fn alphabet(&self) -> Alphabet {
        self.a.alphabet()
    }

    fn named_sets(&self) -> [(&'static str, &Clopen); 4] {
        [("P_a", &self.p_a), ("P_a^-1", &self.p_a_inv), ("P_b", &self.p_b), ("P_b^-1", &self.p_b_inv)]
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "a": self.a.to_string(),
            "b": self.b.to_string(),
            "P_a": self.p_a.to_string(),
            "P_a^-1": self.p_a_inv.to_string(),
            "P_b": self.p_b.to_string(),
            "P_b^-1": self.p_b_inv.to_string(),
        })
    }
}

/// Checks the ping-pong conditions exactly. `Ok(true)` means `⟨a, b⟩` is free
/// of rank 2; a failed condition is reported as an error naming it.
pub fn pingpong_verify(cert: &PingPongCertificate) -> Result<bool> {
    let alphabet = cert.alphabet();
    cert.b.alphabet().ensure_same(alphabet)?;
    let sets = cert.named_sets();
    for (_, s) in &sets {
        alphabet.ensure_same(s.alphabet())?;
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if !sets[i].1.is_disjoint(sets[j].1)? {
                return Err(Error::DisjointnessViolation { first: sets[i].0, second: sets[j].0 });
            }
        }
    }
    let checks: [(&'static str, &TableElement, &Clopen, &Clopen); 4] = [
        ("a(X - P_a^-1) in P_a", &cert.a, &cert.p_a_inv, &cert.p_a),
        ("a^-1(X - P_a) in P_a^-1", &cert.a.inverse(), &cert.p_a, &cert.p_a_inv),
        ("b(X - P_b^-1) in P_b", &cert.b, &cert.p_b_inv, &cert.p_b),
        ("b^-1(X - P_b) in P_b^-1", &cert.b.inverse(), &cert.p_b, &cert.p_b_inv),
    ];
    for (name, g, from, into) in checks {
        if !maps_into(g, from, into)? {
            return Err(Error::InclusionViolation(name));
        }
    }
    let mut union = Clopen::empty(alphabet);
    for (_, s) in &sets {
        union = union.union(s)?;
    }
    if union.is_whole() {
        return Err(Error::InclusionViolation("some point lies outside all four sets"));
    }
    Ok(true)
}

/// Closed walks of length `len` at the root of the `q`-regular tree.
pub fn tree_closed_walks(q: u64, len: usize) -> BigUint {
    // counts[h] = walks currently at distance h from the root
    let mut counts = vec![BigUint::one()];
    for _ in 0..len {
        let mut next = vec![BigUint::zero(); counts.len() + 1];
        for (h, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let outward = if h == 0 { q } else { q - 1 };
            next[h + 1] += c * outward;
            if h > 0 {
                next[h - 1] += c;
            }
        }
        counts = next;
    }
    counts.swap_remove(0)
}

/// Number of products of `steps` letters from `f`, grouped by value.
fn sphere_counts(f: &SymmetricSet, steps: usize) -> HashMap<TableElement, BigUint> {
    let alphabet = f.elements()[0].alphabet();
    let mut level: HashMap<TableElement, BigUint> = HashMap::from([(TableElement::identity(alphabet), BigUint::one())]);
    for _ in 0..steps {
        let mut current: Vec<(TableElement, BigUint)> = level.into_iter().collect();
        current.sort_by(|x, y| x.0.cmp(&y.0));
        let products: Vec<(TableElement, BigUint)> = current
            .par_iter()
            .flat_map_iter(|(g, c)| f.elements().iter().map(move |s| (s.compose(g).expect("one alphabet"), c.clone())))
            .collect();
        level = HashMap::new();
        for (g, c) in products {
            *level.entry(g).or_default() += c;
        }
    }
    level
}

/// `⟨δ_e, (Σ_{s∈F} λ_s)^{len} δ_e⟩`: words of length `len` over `F` whose
/// product is the identity. Only half the length is enumerated: the count is
/// `Σ_g N(g)·N(g⁻¹)` with `N` the half-length sphere counts, and `N(g⁻¹) = N(g)`
/// by symmetry. `workers = 0` uses rayon's default pool; the result does not
/// depend on the worker count.
pub fn convolution_count(f: &SymmetricSet, len: usize, workers: usize) -> Result<BigUint> {
    if !f.is_symmetric() {
        return Err(Error::NotSymmetric("convolution counts need an inverse-closed set".into()));
    }
    if len < 2 || !len.is_multiple_of(2) {
        return Err(Error::Invalid(format!("length {len} must be even and at least 2")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Invalid(format!("cannot start worker pool: {e}")))?;
    let half = pool.install(|| sphere_counts(f, len / 2));
    Ok(half.values().map(|c| c * c).sum())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub d: u8,
    pub k: u8,
    pub n: usize,
    pub nu: String,
    pub f_size: usize,
    pub lhs: QuadraticValue,
    pub paper_lower_bound: Rational,
    pub norm_bound: NormBound,
    pub lhs_vs_norm: Ordering,
    pub paper_bound_exceeds_norm: bool,
    pub lhs_at_least_paper_bound: bool,
    pub verdict: Verdict,
}

fn ordering_word(o: Ordering) -> &'static str {
    match o {
        Ordering::Greater => "greater",
        Ordering::Equal => "equal",
        Ordering::Less => "less",
    }
}

impl CertificateReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "d": self.d,
            "k": self.k,
            "n": self.n,
            "nu": self.nu,
            "F_size": self.f_size,
            "lhs": self.lhs.to_json(),
            "paper_lower_bound": self.paper_lower_bound.to_string(),
            "norm_bound": self.norm_bound.to_json(),
            "comparisons": [
                { "lhs_vs_norm": ordering_word(self.lhs_vs_norm) },
                { "paper_bound_vs_norm": if self.paper_bound_exceeds_norm { "greater" } else { "not" } },
                { "lhs_vs_paper_bound": if self.lhs_at_least_paper_bound { "at_least" } else { "below" } },
            ],
            "verdict": match self.verdict {
                Verdict::Pass => "PASS",
                Verdict::Inconclusive => "INCONCLUSIVE",
            },
        })
    }
}

impl std::fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "d = {}, k = {}, nu = {} (n = {}), |F| = {}", self.d, self.k, self.nu, self.n, self.f_size)?;
        writeln!(f, "lhs               = {} (~{:.6})", self.lhs, self.lhs.to_f64())?;
        writeln!(f, "lower bound       = {}", self.paper_lower_bound)?;
        writeln!(f, "norm bound        = {} (~{:.6})", self.norm_bound.value, self.norm_bound.value.to_f64())?;
        writeln!(f, "lhs vs norm: {}", ordering_word(self.lhs_vs_norm))?;
        writeln!(f, "lower bound vs norm: {}", if self.paper_bound_exceeds_norm { "greater" } else { "not" })?;
        write!(
            f,
            "verdict: {}",
            match self.verdict {
                Verdict::Pass => "PASS",
                Verdict::Inconclusive => "INCONCLUSIVE",
            }
        )
    }
}

/// Evaluates the inequality for `F` (in `V_{d,d}`) embedded on `ν·X_d ⊂ X_{d,k}`
/// against a given norm bound. Returns the report whatever the verdict.
pub fn evaluate(target: Alphabet, f: &SymmetricSet, norm: NormBound, nu: &Word) -> Result<CertificateReport> {
    if f.is_empty() {
        return Err(Error::NotSymmetric("the set is empty".into()));
    }
    if !nu.is_valid(target) {
        return Err(Error::MismatchedAlphabet(format!("word {nu}"), target.to_string()));
    }
    let (_, m) = crate::quadratic::square_free_part(target.d() as u64);
    let mut lhs = QuadraticValue::new(Rational::zero(), Rational::zero(), m)?;
    for s in f.elements() {
        let lifted = embed_supported(target, s, nu)?;
        lhs = lhs.try_add(&integral_sqrt_rn(&lifted))?;
    }
    let f_size = f.len();
    let support = mu(&Clopen::cylinder(target, nu.clone()));
    let paper_lower_bound = Rational::from_integer(BigInt::from(f_size)) * (Rational::one() - support);
    let paper_q = QuadraticValue::from_rational(paper_lower_bound.clone());
    let lhs_vs_norm = quad_compare(&lhs, &norm.value);
    Ok(CertificateReport {
        d: target.d(),
        k: target.k(),
        n: nu.len(),
        nu: nu.display(target).to_string(),
        f_size,
        paper_bound_exceeds_norm: quad_compare(&paper_q, &norm.value) == Ordering::Greater,
        lhs_at_least_paper_bound: quad_compare(&lhs, &paper_q) != Ordering::Less,
        verdict: if lhs_vs_norm == Ordering::Greater { Verdict::Pass } else { Verdict::Inconclusive },
        lhs,
        paper_lower_bound,
        norm_bound: norm,
        lhs_vs_norm,
    })
}

/// The full check: verifies the ping-pong certificate, takes `F = {a^±1, b^±1}`
/// with the exact rank-2 norm, and evaluates. An inconclusive verdict is
/// returned as [`Error::InconclusiveParameters`] carrying the report.
pub fn check_certificate(target: Alphabet, cert: &PingPongCertificate, nu: &Word) -> Result<CertificateReport> {
    let base = cert.alphabet();
    if base.k() != base.d() || base.d() != target.d() {
        return Err(Error::ArityMismatch { d: target.d(), got: base.to_string() });
    }
    pingpong_verify(cert).map_err(|e| Error::CertificateInvalid(e.to_string()))?;
    let f = SymmetricSet::from_generators(&cert.a, &cert.b).map_err(|e| Error::CertificateInvalid(e.to_string()))?;
    let report = evaluate(target, &f, free_norm(2)?, nu)?;
    match report.verdict {
        Verdict::Pass => Ok(report),
        Verdict::Inconclusive => Err(Error::InconclusiveParameters(Box::new(report))),
    }
}
