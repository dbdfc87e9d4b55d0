//! Hilbert functions of general unions of lines and double lines in P³.
//!
//! The crate builds the linear conditions a configuration imposes on forms of
//! degree `d` over GF(p), computes `h⁰` and `h¹` of its ideal sheaf exactly,
//! and samples families of configurations to certify maximal rank or observe
//! a defect. A residual/trace split along the quadric `x0 x3 = x1 x2` bounds
//! the cohomology of special configurations.
//!
//! ```
//! use hpl::engine::{general_hilbert, FamilySpec, TrialPlan};
//!
//! let cert = general_hilbert(&FamilySpec::Z { a: 1, b: 2 }, 3, &TrialPlan::default())?;
//! assert!(cert.verdict.is_certified());
//! # Ok::<(), hpl::Error>(())
//! ```
//!
//! The guide in `book/` walks through each module; its examples run as
//! doctests of this crate.

pub mod cli;
pub mod combinatorics;
pub mod engine;
pub mod error;
pub mod forms;
pub mod geometry;
pub mod horace;
pub mod linalg;
pub mod schemes;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/linalg.md")]
    mod linalg {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/schemes.md")]
    mod schemes {}
    #[doc = include_str!("../../../book/src/combinatorics.md")]
    mod combinatorics {}
    #[doc = include_str!("../../../book/src/engine.md")]
    mod engine {}
    #[doc = include_str!("../../../book/src/horace.md")]
    mod horace {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
