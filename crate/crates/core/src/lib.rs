//! Finite-section models of the multiplication operator `z` on Hilbert spaces
//! of holomorphic functions over the disk, the annulus and the pair of pants.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure function
//! of the domain parameters and the truncation level; file formats, the CLI and
//! any IO live in the companion `pants-cli` crate.
//!
//! Module map:
//!
//! - [`domain`]: parameters, geometric constraints and the canonical basis
//!   enumeration `E_0..E_N, F_{-1}..F_{-N}, G_{-1}..G_{-N}`.
//! - [`operators`]: truncated matrices of `z`, `z*`, `zz*`, `z*z`, `[z*,z]` and
//!   the small matrices `A`, `C`, `D` of the commutator-ideal construction.
//! - [`spectral`]: closed-form spectra, characteristic roots of the two-step
//!   recurrence, explicit eigenvectors and truncated eigensolves.
//! - [`resolvent`]: analytic resolvents of `z` and `zz*`, kernel-norm bounds and
//!   pseudospectrum sweeps.
//! - [`quotient`]: spectral projections, commutator-ideal certificates,
//!   Toeplitz compressions and the symbol map.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod domain;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod operators;
pub mod quotient;
pub mod resolvent;
pub mod spectral;

mod math;

pub use num_complex::Complex64;

pub use domain::{BasisIndex, BasisLabel, DomainKind, DomainParams, Family, Truncation};
pub use error::{Error, Result};
pub use matrix::{Mode, OperatorMatrix};
pub use domain::CoefficientVector;

/// Shorthand for a complex number with zero imaginary part.
#[inline]
pub fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
