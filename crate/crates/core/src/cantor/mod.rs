//! Finite words, eventually periodic points and clopen sets of `X_{d,k}`.

mod alphabet;
mod clopen;
mod point;
mod word;

pub use alphabet::{Alphabet, MAX_LETTER};
pub use clopen::{clopen_algebra, Clopen, ClopenOp, ClopenResult};
pub use point::Point;
pub use word::{all_words, Word, WordDisplay};

pub(crate) use clopen::{extensions_in, find_prefix_in};
