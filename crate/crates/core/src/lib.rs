pub mod error;
pub mod exactmath;
pub mod volumes;
pub mod asymptotics;
pub mod experiments;
pub mod cli;

pub use error::{Error, Result};
