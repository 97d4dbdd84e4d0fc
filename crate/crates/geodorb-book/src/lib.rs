//! Compiled companion to the guide in `book/`.
//!
//! Each chapter of the guide is attached below as module documentation, so
//! every fenced Rust sample in the book runs as a doctest of this crate.
//! `cargo test` therefore fails whenever the book drifts out of sync with
//! the `geodorb` API or its numerical behavior.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/structure-constants.md")]
pub mod structure_constants {}

#[doc = include_str!("../../../book/src/homogeneous-models.md")]
pub mod homogeneous_models {}

#[doc = include_str!("../../../book/src/relative-equilibria.md")]
pub mod relative_equilibria {}

#[doc = include_str!("../../../book/src/geodesic-graphs.md")]
pub mod geodesic_graphs {}

#[doc = include_str!("../../../book/src/invariant-functions.md")]
pub mod invariant_functions {}

#[doc = include_str!("../../../book/src/lie-poisson.md")]
pub mod lie_poisson {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
