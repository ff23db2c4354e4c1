//! Library surface of the experiment runner, exposed so integration tests
//! can drive the exact code paths behind the binary.

pub mod output;
pub mod runner;
pub mod spec;
