//! Combinatorics of relator tuples over the modular group.
//!
//! The ambient group is the free product of a cyclic group of order two
//! (generated by `a`) and a cyclic group of order three (generated by `b`).
//! Elements are written as reduced words over the alphabet `{a, b, B}` where
//! `B` denotes the inverse of `b`.  On top of that word calculus the crate
//! provides:
//!
//! * [`words`] — reduced and cyclically reduced words, counting, enumeration
//!   and uniform sampling;
//! * [`tuples`] — relator tuples, their symmetrized closures, canonical forms
//!   and symmetry orbits;
//! * [`smallcancel`] — metric small-cancellation bookkeeping (pieces, the
//!   `C'(λ)` condition) and a Dehn-style word-problem solver;
//! * [`barbell`] — readability of words on barbell graphs, exact counting of
//!   readable words, and the thin-barbell readability scan;
//! * [`genericity`] — the per-relator and per-tuple condition battery for
//!   generic tuples, plus Monte Carlo surveys of how often random tuples pass;
//! * [`isocount`] — a partial isomorphism decider for the resulting quotients,
//!   orbit counting, the asymptotic class-count ratio, and a binary encoding
//!   of finite presentations.
//!
//! All verdict-producing routines are deterministic: given the same inputs
//! (including seeds) they produce identical results, independent of thread
//! scheduling.

pub mod barbell;
pub mod genericity;
pub mod isocount;
pub mod smallcancel;
mod suffix;
pub mod tuples;
pub mod words;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
