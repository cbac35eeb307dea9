//! Cubic spin-glass (HUBO) problems: representation, full and incremental
//! energy evaluation, seeded instance generation and the JSON file format.

pub mod generate;
pub mod io;
mod problem;
mod samples;

pub use generate::{generate, CoefficientDistribution, InstanceSpec, Topology};
pub use io::{parse, serialize, InstanceDocument, InstanceMetadata};
pub use problem::{HuboProblem, OrderEnergies, SpinAssignment, Substitution};
pub use samples::{SampleRecord, SampleSet};
