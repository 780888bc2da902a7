//! Exact enumeration toolkit for the parity-refined descent statistics of
//! the classical reflection-group families: plain, signed, and even-signed
//! permutations, their odd/even major indices and descent counts, flag
//! variants, odd lengths, and the one-dimensional sign twists.
//!
//! The crate has three layers:
//!
//! * combinatorial plumbing — exact multivariate polynomials over `i64`
//!   ([`poly`]), group elements and their descent/negative-set machinery
//!   ([`perm`]), and the statistics themselves ([`stats`]);
//! * sweep infrastructure — guarded exhaustive enumeration with filters,
//!   parabolic quotients, domino bijections and canceling involutions
//!   ([`enumerate`]), and chunk-parallel generating-function assembly
//!   ([`genfun`]);
//! * the registry ([`identities`]) — several dozen product-form and
//!   reduction identities, each verified by sweeping the group and
//!   comparing canonical polynomials byte for byte, plus exhaustive
//!   nonexistence searches for additive descent-weight statistics.
//!
//! Everything is exact integer arithmetic; nothing is sampled or
//! approximated. The `oddmaj` binary exposes the same functionality on the
//! command line.

// Parity arithmetic stays as literal `% 2` and `(i + 1) / 2` so the code
// reads like the formulas it implements.
#![allow(clippy::manual_is_multiple_of, clippy::manual_div_ceil)]

pub mod enumerate;
pub mod genfun;
pub mod identities;
pub mod perm;
pub mod poly;
pub mod stats;
