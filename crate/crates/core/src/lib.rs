//! Maximum a-posteriori decoding of time-homogeneous hidden Markov models
//! through online matrix-vector (max,+) multiplication.
//!
//! The pieces, bottom-up:
//!
//! * [`extended`]: ℝ ∪ {−∞} and the lexicographic triples that make every
//!   row maximum unique.
//! * [`dominance`]: online dominance reporting (divide-and-conquer tree and
//!   rank lookup table).
//! * [`maxplus`]: the trivial product, the per-block dominance engine and
//!   column splicing for wide matrices.
//! * [`hmm`]: models, the Viterbi baseline, the GDFV decoder built on the
//!   spliced multiplier, and an exhaustive oracle.
//! * [`bench`]: seeded instance generators and the benchmark harness used by
//!   the `gdfv` binary.

pub mod bench;
pub mod dominance;
pub mod error;
pub mod extended;
pub mod hmm;
pub mod maxplus;
mod text;

pub use error::{Error, ParseError, Result};
pub use extended::{ExtendedValue, Triple};
