//! Exact combinatorics for `p^n`-filtrations of dual Weyl modules.
//!
//! Given a root system, a prime `p` and a dominant weight `λ`, the crate
//! evaluates the known sufficient criteria for `∇(λ)` to have a
//! `p^n`-filtration and builds a character-level certificate by decomposing
//! `Ẑ₁(λ)` into `G₁B`-simples and inducing to `G`.
//!
//! Everything here works with formal characters. A certificate whose lines
//! all have nonnegative multiplicity is a necessary condition for a
//! filtration, not a proof that one exists.

pub mod certify;
pub mod charring;
pub mod error;
pub mod g1b;
pub mod par;
pub mod rootsys;
pub mod scan;
pub mod simples;
pub mod weights;

pub use certify::{certify, criteria, refine, Certificate, CertLine, CriteriaFlags, CriteriaReport, Flag, Status};
pub use charring::{euler_character, steinberg_character, weyl_character, FormalCharacter};
pub use error::{Error, Result};
pub use g1b::{decompose, G1BFactor, G1BFactorList};
pub use rootsys::{CartanType, RootSystem};
pub use simples::{CharStatus, DecompTable, Provenance, Simples};
pub use weights::{split, Weight};
