//! Branch-and-bound bias-field digitized counterdiabatic optimization for
//! cubic spin glasses (HUBO), with classical baselines and oracles.
//!
//! The crate is organised bottom-up:
//!
//! - [`hubo`]: problem representation, energies, instance generation and IO.
//! - [`pauli`]: exact Pauli-string algebra used to build gauge potentials.
//! - [`cd`]: annealing schedule, first-order gauge potential and the
//!   one-step counterdiabatic circuit.
//! - [`sim`]: dense statevector backend.
//! - [`bfdcqo`]: the bias-field feedback loop.
//! - [`bbb`]: approximate and exact branch-and-bound drivers.
//! - [`classical`]: simulated annealing, greedy search, brute force.
//! - [`ledger`]: function-evaluation accounting.
//! - [`quadratize`]: HUBO to QUBO reduction and its verifier.

pub mod bbb;
pub mod bfdcqo;
pub mod cd;
pub mod classical;
pub mod error;
pub mod hubo;
pub mod ledger;
pub mod pauli;
pub mod quadratize;
pub mod seed;
pub mod sim;

pub use error::{Error, Result};
pub use ledger::FunctionEvalCounter;
