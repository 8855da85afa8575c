//! Exact-arithmetic engine for quadratic 1D quasilattices.
//!
//! The crate is organised bottom-up:
//!
//! * [`numeric`]: exact arithmetic in a real quadratic field Q(√D).
//! * [`geometry`]: positive bases, bi-grids, dualization, cut-and-project
//!   and torus slicing.
//! * [`floorform`]: the closed floor form `x_n = S(n-α) + (L-S)⌊κ(n-β)⌋`,
//!   conversion to and from geometric specs, and singular evaluation.
//! * [`equivalence`]: change of basis, tile words and canonical
//!   substitution rules.
//! * [`selfsim`]: eigenstructure, inflation, self-same parameters, cycle
//!   counting and the built-in catalog of the ten self-similar cases.
//! * [`higher`]: degree-N quasilattices over exact number fields with
//!   certified interval refinement.

pub mod equivalence;
pub mod error;
pub mod floorform;
pub mod geometry;
pub mod higher;
pub mod numeric;
pub mod selfsim;

pub use error::{Error, Result};
pub use numeric::QuadraticNumber;
