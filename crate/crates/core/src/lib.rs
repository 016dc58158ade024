//! Capacities, rate regions and zero-error timing codes for noiseless relay
//! cascades whose relays cannot transmit and receive in the same slot.

pub mod apps;
pub mod capacity;
pub mod cli;
pub mod codec;
pub mod combinatorics;
pub mod entropy;
pub mod error;
pub mod model;
pub mod region;
pub mod roots;

pub use error::{Error, Result};
