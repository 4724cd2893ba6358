//! Gravitational decoherence models: the pairwise classical-channel
//! (measurement-and-feedback) description of Newtonian gravity, its
//! extension to composite bodies, the Diosi-Penrose self-energy rate, and
//! the laboratory constraints they are confronted with.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the CLI and
//! report emission live in the `gravdec` crate.

#![no_std]

extern crate alloc;

pub mod composite;
pub mod constants;
pub mod dp;
pub mod error;
pub mod gaussian;
pub mod interferometry;
pub mod ktm;
pub mod lab;
pub(crate) mod math;
pub mod scenario;

pub use error::{Error, Result};
