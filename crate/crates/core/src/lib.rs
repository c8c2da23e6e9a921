//! Pseudo-hermitian spin-boson (Dicke-type) models: Hamiltonian assembly,
//! the similarity map onto a hermitian image and its metric, exact spectra
//! of the rotating-wave limit, and finite-size quantum phase transition scans.

// `!(x > 0.0)` is used on purpose so NaN fails the check; numerical kernels
// index several arrays per loop.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod basis;
pub mod cli;
pub mod error;
pub mod exact;
pub mod metric;
pub mod model;
pub mod numerics;
pub mod qpt;
pub mod spectral;

pub use error::{Error, Result};
