//! Simulation of amplitude and phase relaxation acting on quantum gates.
//!
//! * [`state`]: density matrices, partial transpose, negativity, purity.
//! * [`channels`]: Kraus channels and the T1/T2 relaxation model.
//! * [`process`]: χ-matrices via the Choi–Jamiołkowski construction, sliced noisy
//!   gates and negativity dynamics.
//! * [`plate`]: decoherence of a polarization qubit passing through a dispersive
//!   birefringent phase plate, with an analytic χ and a Monte-Carlo oracle.
//! * [`cli`]: the `qrelax` command-line front end.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod cli;
pub mod error;
pub mod matrix;
pub mod plate;
pub mod process;
pub mod quadrature;
pub mod random;
pub mod state;

pub use error::{Error, Result};
pub use matrix::{hermitian_eigenvalues, kron, ComplexMatrix};
