//! Exact-arithmetic toolkit for desk-scale invariant theory of restricted
//! Lie algebras over small finite fields.
//!
//! The layers, bottom up:
//!
//! * [`field`] — `F_p` and `F_{p^e}` scalars with exhaustively testable axioms;
//! * [`poly`], [`monomial`], [`truncated`] — sparse polynomials and the
//!   truncated algebras `B_n = k[x_1..x_n]/(x_i^p)`;
//! * [`linalg`], [`charpoly`] — kernels, canonical subspaces, and
//!   division-free characteristic polynomials;
//! * [`derivation`], [`lie`], [`wn`] — derivations, p-th powers, and the
//!   Jacobson-Witt algebras `W_n = Der B_n`;
//! * [`action`], [`invariants`], [`psi`] — Lie algebra actions, stabilizers
//!   and regular loci, bounded-degree invariant rings, and the
//!   characteristic-polynomial invariants of `W_n`;
//! * [`enveloping`], [`constant`] — restricted enveloping algebras with PBW
//!   straightening, subgroup indices, torus detection, and constant finite
//!   group actions;
//! * [`catalog`], [`verify`] — named built-in algebras and the deterministic
//!   verification suites behind the CLI.

// Indexed loops stay: the linear-algebra kernels address several matrices
// by the same row/column indices, which iterator adapters only obscure.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod field;
pub mod monomial;
pub mod poly;
pub mod truncated;
pub mod linalg;
pub mod charpoly;
pub mod sample;
pub mod par;
pub mod derivation;
pub mod lie;
pub mod wn;
pub mod action;
pub mod invariants;
pub mod psi;
pub mod enveloping;
pub mod constant;
pub mod catalog;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Elt, Field};
pub use poly::{Polynomial, VarScheme};
