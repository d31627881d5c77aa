pub mod collocation;
pub mod eig;
pub mod error;
pub mod exec;
pub mod sinc;
pub mod coulomb;
pub mod cli;
