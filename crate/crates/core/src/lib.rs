//! Periodic Schur processes, cylindric partitions, the Nekrasov–Okounkov
//! measure, and their determinantal correlation kernels.
//!
//! The crate is organised around three layers:
//!
//! * combinatorics: [`partition`], [`cylindric`] — exact integer objects and
//!   the brute-force enumeration oracles built on them;
//! * analysis: [`qseries`], [`symfunc`] — theta functions, q-products and
//!   specializations of the algebra of symmetric functions;
//! * processes: [`process`], [`kernel`], [`bulk`], [`nekrasov`] — measures on
//!   partition sequences, their correlation kernels via contour quadrature,
//!   and every bulk scaling limit.
//!
//! Everything is plain values and pure functions; all types are `Send + Sync`.

// Range guards are written as `!(lo < x && x < hi)` on purpose: the negated
// form rejects NaN, which the inverted comparisons would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bulk;
pub mod cylindric;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod nekrasov;
pub mod parse;
pub mod partition;
pub mod process;
pub mod qseries;
pub mod quad;
pub mod symfunc;

pub use error::{Error, Result};
pub use partition::{HalfInt, Partition};
pub use process::{ProcessSpec, Trajectory};
pub use symfunc::Specialization;
