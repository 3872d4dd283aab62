//! Exact-arithmetic computation of singularity invariants of polynomial
//! hypersurfaces and parameterized hypersurfaces: Milnor numbers, Lê
//! numbers, polar intersection numbers, multiple-point multiplicities, and
//! mechanical verification of the deformation identities relating the
//! special and generic members of one-parameter families.
//!
//! Everything is computed over the rationals with arbitrary precision;
//! verification verdicts are exact integer equalities, never tolerances.

pub mod ctx;
pub mod deform;
pub mod error;
pub mod groebner;
pub mod job;
pub mod lecycles;
pub mod paramhyp;
pub mod poly;
pub mod rng;
pub mod verify;

pub use ctx::{Caps, Ctx};
pub use error::{Error, Result};
