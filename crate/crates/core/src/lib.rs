pub mod arith;
pub mod centroid;
pub mod cli;
pub mod descent;
pub mod error;
pub mod forms;
pub mod ibf;
pub mod module;
pub mod multiloop;
pub mod wire;

pub use error::{Error, Result};
