//! Mesoscopic analysis of co-authorship networks.
//!
//! The crate turns publication records into a weighted co-author network,
//! partitions it into co-author clusters, profiles every author's role inside
//! its cluster, and classifies every inter-cluster connection as either a
//! *transfer* (severable by removing at most two authors) or a
//! *collaboration*. Field-level statistics over the resulting cluster
//! population live in [`cohort`] and [`stats`].
//!
//! Everything here is pure computation over in-memory data and builds without
//! `std`. Readers and writers for the on-disk formats, the pipeline and the
//! command line live in the companion `mesonet` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod cluster;
pub mod cohort;
mod error;
pub mod geo;
pub mod graph;
pub mod ingest;
pub mod meso;
pub mod metrics;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
