pub mod bench;
pub mod generate;
pub mod reduce;
pub mod solve;
