//! An executable laboratory for the free Banach lattice generated by a finite
//! bounded distributive lattice.
//!
//! The crate is organized bottom-up:
//!
//! - [`lattice`]: finite distributive lattices, join-irreducibles, prime filters.
//! - [`dual`]: lattice homomorphisms into `[-1, 1]` and the compact `K_L`.
//! - [`expr`]: vector-lattice expressions over the generators `δ_x`.
//! - [`norm`]: certified lower/upper bounds for the free lattice norm and the sup-norm on `K_L`.
//! - [`free`]: the free bounded distributive lattice as monotone Boolean functions.
//! - [`retract`]: the concrete retractions onto the L-shape, `K′` and `K₀`.
//! - [`cli`]: command runner and JSON reports behind the `fbl` binary.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dual;
pub mod expr;
pub mod free;
pub mod lattice;
pub mod norm;
pub mod retract;

pub use dual::{DualPoint, LayeredHom};
pub use expr::{Expr, LatticeMap};
pub use lattice::{FiniteLattice, LatticeSpec};
pub use norm::{NormEstimate, SearchConfig};

// the book's code blocks run as doc-tests
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/dual-space.md")]
    mod dual_space {}
    #[doc = include_str!("../../../book/src/expressions.md")]
    mod expressions {}
    #[doc = include_str!("../../../book/src/norms.md")]
    mod norms {}
    #[doc = include_str!("../../../book/src/free-lattices.md")]
    mod free_lattices {}
    #[doc = include_str!("../../../book/src/retractions.md")]
    mod retractions {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
