//! Exact symbolic engine for shear-invariant complex second-order ODEs.
//!
//! Everything symbolic is computed over the Gaussian rationals with
//! truncated power series in the dependent variable, so that every identity
//! asserted by the higher-level verification commands is checked exactly.
//! The few non-polynomial checks (the dual equation carries a square root)
//! run in floating point and live in [`family`] and [`duality`].
//!
//! The crate is `no_std` (with `alloc`); all IO, parsing and reporting live
//! in the companion CLI crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod classify;
pub mod duality;
pub mod family;
pub mod linalg;
pub mod locus;
pub mod ode;
pub mod phi;
pub mod poly;
mod ratfun;
pub mod rng;
pub mod scalar;
pub mod sl2;
pub mod symmetry;

pub use poly::{TruncPoly, Var};
pub use scalar::GaussRational;

/// Default series truncation order; covers every verification in the crate
/// with margin.
pub const DEFAULT_TRUNCATION: u32 = 24;
