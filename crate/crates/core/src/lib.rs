//! Truncated power-series model of the operators `T_n f = z f + n ∫₀^z f`,
//! the Riemann–Liouville integrals `V_n`, and the multiplication operator
//! `M_z` on the Hardy space, together with the spaces `S_n²`, finite inner
//! functions and the ideal data describing the invariant subspaces of `T_n`.
//!
//! Everything here is allocation-only: no IO, no global state.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub mod inner;
pub mod lattice;
pub mod operators;
pub mod scalar;
pub mod series;
pub mod spaces;
pub mod span;

pub use error::Error;
pub use scalar::{Mode, QComplex, Rational, Scalar, C64};
pub use series::{DynPoly, TaylorPoly};

pub type Result<T, E = Error> = core::result::Result<T, E>;
