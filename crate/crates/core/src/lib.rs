//! Exact certification of nilpotency for algebra-valued forms and of the
//! vanishing of Hilbert-Palatini forms built from them.

pub mod algebra;
pub mod budget;
pub mod cli;
pub mod ehp;
pub mod error;
pub mod forms;
pub mod nil;
pub mod ring;
pub mod zoo;

pub use error::{Error, Result};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
