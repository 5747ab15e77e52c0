//! Local-unitary invariants of multipartite operators.
//!
//! The central objects are the trace monomials `Tr^P_σ`: an ordered list of
//! operator "boxes" (which matrix of the tuple sits in each box is given by
//! the label vector `P`) wired together, subsystem by subsystem, along the
//! cycles of one permutation per subsystem. Every such monomial is invariant
//! under simultaneous local conjugation `M ↦ (⊗ g_i) M (⊗ g_i)^{-1}`, and for
//! tuples of density operators they separate local-unitary orbits.
//!
//! The crate is organised as follows:
//!
//! - [`tensor_core`]: dense complex matrices over `V = V_1 ⊗ … ⊗ V_n`,
//!   Kronecker products, partial traces, random sampling.
//! - [`permnet`]: permutation tuples, cycle structure, girth, canonical forms
//!   and enumeration of candidate monomials.
//! - [`trace_eval`]: two independent evaluators (tensor-network contraction
//!   and a permutation-operator reference) plus factorization decisions.
//! - [`invariant_suite`]: degree bounds, fingerprints, the equivalence
//!   decision and Rényi entropies.
//! - [`slocc`]: SLOCC invariants of n-qubit pure states through the
//!   self-dual embedding `v ↦ v vᵀ (T^{⊗n})ᵀ`.
//! - [`io`]: state files, cycle notation and SVG diagrams.

pub mod error;
pub mod invariant_suite;
pub mod io;
pub mod permnet;
pub mod slocc;
pub mod tensor_core;
pub mod trace_eval;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
