//! File formats, pipeline stages and the `mesonet` command line around
//! [`mesonet_core`].

pub mod config;
pub mod dot;
pub mod emit;
mod error;
pub mod fsutil;
pub mod pajek;
pub mod pipeline;
pub mod report;
pub mod synth;
mod table;
pub mod tabular;
pub mod wos;

pub use error::{Error, Result};
