//! Exact computations in pro-p Iwahori-Hecke algebras of split p-adic groups
//! at small rank.
//!
//! The crate builds the extended affine Weyl group `W` and its pro-p cover
//! `W(1)` from a root datum preset (SL2, PGL2, GL2, SL3), realizes the Hecke
//! algebra either over a generic Laurent ring (a formal square root of the
//! parameter of each wall orbit) or over a finite field with all wall
//! parameters sent to zero, and implements the module constructions
//! (parabolic induction in two variants, extension to a larger Levi,
//! generalized Steinberg and supersingular modules) together with the twist
//! and duality operations relating them.  Every computation is exact; the
//! verification suites re-derive the structural identities by finite linear
//! algebra.

pub mod coeff;
pub mod error;
pub mod hecke;
pub mod linalg;
pub mod prop_weyl;
pub mod repn;
pub mod root;
pub mod suites;
pub mod weyl;

pub use error::{Error, Result};

/// Hecke elements over the generic Laurent ring.
pub type GenHeckeElt = hecke::HeckeElt<coeff::QHalf>;
/// Hecke elements over the finite field, wall parameters specialized to zero.
pub type SpecHeckeElt = hecke::HeckeElt<coeff::Fq>;
