//! Finite-blocklength error bounds for joint eMBB/URLLC transmission with
//! dirty-paper coding, a time-sharing baseline, a parameter optimizer and a
//! Monte Carlo simulator of the underlying coding scheme.

pub mod baseline;
pub mod bounds;
mod error;
pub mod model;
pub mod opt;
pub mod sim;
pub mod specfn;

pub use error::{Error, Result};
