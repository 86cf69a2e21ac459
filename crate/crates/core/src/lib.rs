//! Exact computations in the Higman–Thompson groups `V_{d,k}`.
//!
//! Group elements are prefix-substitution tables on the Cantor space
//! `X_{d,k} = [k] × [d]^ℕ`, equivalently full bisections of the ample groupoid
//! `G_{d,k}`. Everything here is exact: points are eventually periodic,
//! measures are rationals and square-root integrals live in `ℚ(√m)`.

pub mod brin;
pub mod cantor;
pub mod certificate;
pub mod error;
pub mod fixtures;
pub mod groupoid;
pub mod measure;
pub mod quadratic;
pub mod random;
pub mod selftest;
pub mod table;
pub mod tail;

pub use brin::{BoxTable, ProductBox};
pub use cantor::{Alphabet, Clopen, Point, Word};
pub use certificate::{
    check_certificate, convolution_count, free_norm, pingpong_verify, CertificateReport, NormBound,
    PingPongCertificate, SymmetricSet, Verdict,
};
pub use error::{Error, Result};
pub use groupoid::{Bisection, DoubleCylinder};
pub use table::{embed_supported, transporter, TableElement};
pub use tail::{finite_level_related, orbit_fragment, related, witness_cell, TailWitness};
