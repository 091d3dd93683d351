//! Exact polyhedral toolkit for cardinality-constrained multilinear sets.
//!
//! The central object is the 0/1 set of pairs `(z, delta)` where each
//! `delta_i` is the product of `(1 - z_j)` over a member set `S_i` of a set
//! family, and the number of ones in `z` is bounded below by `l` and above
//! by `u`.  The crate provides:
//!
//! * domain types and exact enumeration ([`instance`]),
//! * structural analysis of the set family: closure checks, the projected
//!   delta patterns, properness, and per-pattern fiber descriptions
//!   ([`family`]),
//! * inequality completion from an objective-side coefficient vector
//!   ([`coeffs`]),
//! * generators for the standard linearization, the reduced nested
//!   formulation, 2-link, mixing, and lifted inequalities
//!   ([`linearization`], [`mixing`], [`lifted`]),
//! * exact polynomial-time separation for the mixing families
//!   ([`separation`]),
//! * a disjunctive extended formulation with LP-format emission
//!   ([`extform`]),
//! * an exact rational simplex kernel and a cutting-plane driver
//!   ([`ratlp`]),
//! * brute-force ground-truth oracles used by the verification suites
//!   ([`oracle`]).
//!
//! All arithmetic in the mathematical core is exact arbitrary-precision
//! rational; there is no floating point anywhere.

pub mod coeffs;
pub mod error;
pub mod extform;
pub mod family;
pub mod indexset;
pub mod instance;
pub mod lifted;
pub mod linearization;
pub mod mixing;
pub mod oracle;
pub mod rat;
pub mod ratlp;
pub mod sampling;
pub mod separation;

pub use error::{Error, Result};
pub use indexset::IndexSet;
pub use instance::{Inequality, Instance, Objective, Point, Sense};
pub use rat::Rat;
