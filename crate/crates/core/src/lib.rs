pub mod algebra;
pub mod cca2;
pub mod cli;
pub mod correlated;
pub mod error;
pub mod goppa;
pub mod harness;
pub mod mceliece;
pub mod ots;
pub mod repetition;
pub mod wire;

pub use error::{Error, Result};
