//! Exact-arithmetic computer algebra for generalized Witt algebras.
//!
//! The algebra of rank `n` has basis elements `(a_1,…,a_n | i_1,…,i_n)_k`
//! with integer upper and lower indices and a direction `1 ≤ k ≤ n`, and
//! is parameterized by nonzero rational slopes `m_1,…,m_n` through the
//! additive injective maps `g_p(a) = m_p·a`. On top of the bracket and
//! its operator-commutator oracle, the crate provides the upper-index
//! gradation and orderings, exact sparse row reduction, desk-scale
//! engines that witness simplicity and refute ad-diagonalizability
//! inside finite index windows, and the decomposition of derivations of
//! the rank-one non-negative subalgebra into inner + scalar parts.
//!
//! All arithmetic is exact over arbitrary-precision rationals; equality
//! everywhere means structural equality of canonical forms.

pub mod algebra;
pub(crate) mod coeff;
pub mod derivations;
pub mod error;
pub mod ideals;
pub mod linalg;
pub mod linear;
pub mod operator;
pub mod rational;
pub mod sample;
pub mod structure;
pub mod suites;
pub mod text;

pub use algebra::{AlgebraConfig, BasisElement, Element};
pub use error::Error;
pub use ideals::{AdDiagOutcome, ClosureReport, IndexBox};
pub use operator::{FunctionElement, FunctionTerm};
pub use rational::Rational;
