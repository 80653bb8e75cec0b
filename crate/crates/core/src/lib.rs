//! Exact symbolic kernel for elementary integrability of planar rational
//! vector fields.
//!
//! The crate builds everything from exact rational arithmetic upward:
//!
//! * [`scalars`]: rationals, the cyclotomic constant field `Q(ζ_N)` and
//!   rational linear-dependence tests.
//! * [`multipoly`]: polynomials in `x`, `y` with cyclotomic coefficients,
//!   multimodular gcd and squarefree decomposition.
//! * [`ratfield`]: the differential field `K` of reduced rational functions.
//! * [`cyclicext`]: cyclic Kummer extensions `L = K(ℓ)`, `ℓⁿ = k`, with the
//!   Galois action, trace, norm and derivations.
//! * [`diffforms`]: one-forms over `K` and `L`, wedge, exterior derivative,
//!   logarithmic differentials and the projection onto the `ℓ`-line.
//! * [`exceptional`]: construction and verification of candidate exceptional
//!   vector fields and bounded-degree first-integral searches.
//! * [`puiseux`]: truncated descending Puiseux series over a differential
//!   coefficient field and the single-step descent candidate extractor.
//!
//! No IO happens here; the crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod cyclicext;
pub mod diffforms;
mod error;
pub mod exceptional;
pub mod linalg;
pub mod multipoly;
pub mod puiseux;
pub mod ratfield;
pub mod scalars;

pub use cyclicext::{ExtDescriptor, ExtElem};
pub use diffforms::{DiffField, KOneForm, LOneForm, LogSum, OneForm, PlaneField};
pub use error::{Error, Result};
pub use multipoly::{MPoly, Var};
pub use puiseux::{PSeries, TowerStep};
pub use ratfield::RatFn;
pub use scalars::{CycloField, CycloNumber, Rat};
