//! Symbolic and numeric second quantization over finite mode sets.
//!
//! - [`opalg`]: ladder-operator expressions, a small DSL, normal ordering.
//! - [`fock`]: truncated Fock spaces and sparse matrix representations.
//! - [`multiquant`]: iterated quantization of a finite alternative and the
//!   relative-frequency check of probabilities.
//! - [`fields`]: discretized free Dirac and photon fields.
//! - [`urtheory`]: the binary alternative, SU(2) action, Green parabose operators.

pub mod opalg;
pub mod fock;
pub mod multiquant;
pub mod fields;
pub mod urtheory;
