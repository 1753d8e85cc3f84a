//! Synthesis of restricted Boltzmann machine parameters from hierarchical-model
//! energy polynomials.
//!
//! A hierarchical model over binary variables has an energy function that is a
//! multilinear polynomial in the visible variables. The free energy of an RBM is
//! a sum of soft-plus units plus a linear term, so representing one model inside
//! the other reduces to realizing prescribed polynomial coefficients with
//! soft-plus units. This crate provides:
//!
//! - multilinear polynomials on the subset lattice and the fast zeta/Möbius
//!   transforms between coefficients and function values ([`subsetpoly`]),
//! - soft-plus units, their coefficient extraction, covering-pair feasibility
//!   regions, and the single-coefficient root criterion ([`softplus`]),
//! - explicit parameter constructions that hit prescribed coefficients with one
//!   unit ([`constructions`]),
//! - star-tuple covering numbers, covering-design bounds, concrete layer covers,
//!   and an exact branch-and-bound oracle for small instances ([`covering`]),
//! - the end-to-end residual-driven synthesis loop ([`synth`]),
//! - exact distributions, free energies, and divergences for verification by
//!   full enumeration ([`models`]),
//! - JSON/CSV file formats shared by the CLI and the C API ([`files`]).

pub mod constructions;
pub mod covering;
pub mod error;
pub mod files;
pub mod models;
pub mod softplus;
pub mod subsetpoly;
pub mod synth;

pub use error::Error;

/// Hard cap on the number of visible variables: subsets are indexed as `u32`
/// bitmasks, and tables of length `2^v` must stay addressable.
pub const MAX_VARS: usize = 30;

/// Largest `v` for which exact state enumeration (`2^v` states) is permitted.
pub const MAX_ENUM_VARS: usize = 20;

/// Largest number of hidden units accepted for exact computations.
pub const MAX_ENUM_HIDDEN: usize = 30;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
