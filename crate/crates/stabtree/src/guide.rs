//! The book, compiled.
//!
//! mdBook renders `book/` for reading, but it cannot run the examples.
//! Including each chapter as the documentation of an empty module makes
//! `cargo test --doc` execute every fenced Rust block, so the prose and
//! the library cannot drift apart. One module per chapter keeps doc-test
//! failures attributable to a file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/pauli-algebra.md")]
pub mod pauli_algebra {}

#[doc = include_str!("../../../book/src/codes.md")]
pub mod codes {}

#[doc = include_str!("../../../book/src/decay-bounds.md")]
pub mod decay_bounds {}

#[doc = include_str!("../../../book/src/recursive-decoding.md")]
pub mod recursive_decoding {}

#[doc = include_str!("../../../book/src/reliability-decoders.md")]
pub mod reliability_decoders {}

#[doc = include_str!("../../../book/src/belief-propagation.md")]
pub mod belief_propagation {}

#[doc = include_str!("../../../book/src/classical-trees.md")]
pub mod classical_trees {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
