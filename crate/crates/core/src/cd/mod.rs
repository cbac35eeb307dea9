//! Counterdiabatic circuit construction.

pub mod agp;
mod circuit;
mod schedule;

pub use agp::{
    alpha1, build_h_ad, driver_hamiltonian, problem_hamiltonian, DriverConfig, GaugeExpansion,
};
pub use circuit::{
    alpha_integral, build_cd_circuit, prep_angle, AlphaMode, CdCircuit, CircuitOptions,
};
pub use schedule::Schedule;
