pub mod dcoeff;
pub mod ext;
pub mod modules;
pub mod rings;
pub mod subfun;
pub mod ulrich;
mod error;

pub use error::{Error, Result};
