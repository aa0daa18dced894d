pub mod analysis;
pub mod basis;
pub mod config;
pub mod error;
pub mod io;
pub mod kloosterman;
pub mod modular;
pub mod special;

pub use error::{Error, Result};
