//! Entanglement fidelity of port-based teleportation.
//!
//! * [`young`]: partitions, hook-length dimensions, characters.
//! * [`fidelity`]: closed-form fidelities of the standard protocol and of the
//!   protocol with an optimized port state, plus the block coefficients of
//!   the average state and of the dual certificates.
//! * [`oracle`]: dense constructions of the port states, the pretty good
//!   measurement and the certificate operators at small sizes.
//! * [`cli`]: the `pbt` command line.

pub mod cli;
pub mod error;
pub mod fidelity;
pub mod oracle;
pub mod young;

pub use error::{PbtError, Result};
