pub mod basis;
pub mod dg;
pub mod error;
pub mod harness;
pub mod law;
pub mod mesh;
pub mod problems;
pub mod sensor;
pub mod stabilization;
pub mod suite;
pub mod time;

pub use error::{Error, Result};
