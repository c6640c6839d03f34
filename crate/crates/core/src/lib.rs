//! Symmetrical multilevel diversity coding (SMDC) and its all-access (SMDC-A)
//! and secure (S-SMDC) variants.
//!
//! The crate is organized bottom-up:
//!
//! * [`combinatorics`] enumerates the subset families, sliding windows and
//!   parent/child relations every other module works over.
//! * [`lp`] is an exact rational simplex solver with dual and Farkas
//!   certificates.
//! * [`region`] computes `f_α(λ)`, supporting hyperplanes and exact
//!   membership for the three superposition rate regions.
//! * [`cover`] builds coefficient chains linked by fractional covers and the
//!   conditional assignments derived from them.
//! * [`entropy`] evaluates subset entropies of small joint distributions and
//!   checks the subset entropy inequalities numerically.
//! * [`erasure`] provides GF(2^8)/GF(16) arithmetic, MDS coding and ramp
//!   secret sharing.
//! * [`codec`] turns byte streams into per-encoder share bundles.
//! * [`sweep`] is the data-parallel map used by the randomized sweeps, with a
//!   sequential fallback when the `parallel` feature is off.

pub mod codec;
pub mod combinatorics;
pub mod cover;
pub mod entropy;
pub mod erasure;
pub mod error;
pub mod lp;
pub mod rational;
pub mod region;
pub mod sweep;

pub use error::{Error, Result};
pub use rational::Rational;
