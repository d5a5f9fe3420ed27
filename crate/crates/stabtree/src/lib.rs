//! Simulation and analysis toolkit for stabilizer-encoded tree channels:
//! recursive `[[b, 1]]` encodings of a single logical qubit into the leaves
//! of a depth-`T` tree, with independent Pauli noise on every wire.
//!
//! The crate covers four complementary ways of studying the same object:
//!
//! * **Analytic decay bounds** ([`bounds`]): closed-form upper bounds on how
//!   fast the tree channel forgets its input, driven by logical-operator
//!   weight-transition matrices and their spectral radii.
//! * **Recursive local decoding** ([`alpha`]): exact per-level error
//!   functions `α(p)` for block-by-block recovery, the fixed points of
//!   `q ↦ p + (1-2p)α(q)`, and the thresholds they imply.
//! * **Reliability-bit decoders** ([`reliability`]): exact density evolution
//!   for decoders that carry a one-bit "marked" flag per block, including
//!   the two-qubit alternating decoder and its conservative variant.
//! * **Optimal decoding** ([`bp`]): exact belief propagation on the syndrome
//!   tree — the true posterior over the root logical class — with a
//!   deterministic Monte Carlo harness, plus the dephased classical-tree
//!   reduction ([`classical`]).
//!
//! Start with [`codes::builtin`] for ready-made encoders and the
//! [`guide`] module for a walk-through of the full workflow.

pub mod alpha;
pub mod bits;
pub mod bounds;
pub mod bp;
pub mod channel;
pub mod classical;
pub mod codes;
pub mod guide;
pub mod pauli;
pub mod reliability;
pub mod rng;

pub use pauli::{Axis, CliffordEncoder, PauliString, SingleQubitPauli};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A probability-like argument was outside `[0, 1]` (or otherwise
    /// out of its documented range).
    #[error("invalid probability {name} = {value}")]
    InvalidProbability { name: String, value: f64 },

    /// Malformed input that is not a probability: bad Pauli strings,
    /// mismatched lengths, unknown axis names, and similar.
    #[error("{0}")]
    BadInput(String),

    /// Encoder validation failed; each entry describes one violation.
    #[error("encoder validation failed:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),

    /// The requested computation exceeds a documented size cap.
    #[error("{what} is {actual}, exceeding the cap of {cap}")]
    ResourceCap {
        what: &'static str,
        actual: u128,
        cap: u128,
    },

    /// An operation is not defined for the given encoder or mode (e.g.
    /// a CSS-only reduction applied to a non-CSS encoder).
    #[error("{0}")]
    Unsupported(String),

    /// Fixed-point iteration failed to converge; `last` is the final
    /// iterate, which callers may still use to classify the regime.
    #[error("iteration did not converge after {iterations} steps (last value {last})")]
    NonConvergence { last: f64, iterations: u64 },

    /// A text-format code file failed to parse.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Unknown built-in code name.
    #[error("unknown code `{0}`")]
    UnknownCode(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
