//! Exact toolkit for spherical s-distance sets.
//!
//! A spherical s-distance set is a subset of the unit sphere whose pairwise
//! inner products take at most s distinct values. This crate verifies such
//! configurations from their Gram matrices, computes the classical upper and
//! lower bounds on their size, constructs end-to-end polynomial
//! linear-independence certificates in exact arithmetic (rationals and single
//! quadratic extensions), and searches candidate vector families for large
//! s-distance subsets by exact branch-and-bound clique search.
//!
//! Layout:
//! - [`scalar`]: exact field arithmetic with a tolerance-based float fallback
//! - [`monomials`]: the exponent-vector sets and counting identities
//! - [`polyring`]: sparse multivariate polynomials and sphere reduction
//! - [`matrix`]: fraction-free determinants, ranks, and LDL factorization
//! - [`config`]: Gram matrices, validation, profiles, realization, catalog
//! - [`bounds`]: every size bound, plus the hypothesis-driven selector
//! - [`certificate`]: the two-level certificate runner
//! - [`search`]: family generators, compatibility graphs, max clique
//!
//! The `parallel` feature (default) runs the independent per-point and
//! per-subset stages on rayon; disabling it yields a fully sequential build
//! with identical outputs.

// Index loops over symmetric matrices read better than iterator chains here.
#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod certificate;
pub mod config;
mod exec;
pub mod matrix;
pub mod monomials;
pub mod polyring;
pub mod scalar;
pub mod search;

use num_bigint::BigUint;
use serde::Serializer;

/// Serialize big integers as decimal strings so JSON output stays exact at
/// any magnitude.
pub(crate) fn serialize_biguint<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
