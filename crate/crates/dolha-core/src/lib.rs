//! Exact, memory-resident storage for streaming graphs.
//!
//! A streaming graph is an unbounded, timestamp-ordered sequence of weighted
//! directed edge events. This crate keeps the graph in four flat tables
//! (vertex hash, vertex, edge hash, edge) threaded by *Dolls* — double
//! orthogonal linked lists that place every edge cell on its source's
//! outgoing list and its destination's incoming list — so that a single
//! event is absorbed in O(1) and neighborhood scans cost O(degree).
//!
//! Two store variants are provided:
//!
//! * [`SnapshotStore`] keeps only the latest state per edge key: weights
//!   accumulate, keys whose total drops to zero or below are deleted, and
//!   Dolls stay in chronological order.
//! * [`PersistentStore`] keeps every unexpired occurrence of a key as its
//!   own cell, chained by a time-travel list, in a chronological circular
//!   buffer that supports sliding-window expiry with space recycling.
//!
//! [`analytics`] builds graph algorithms on top of the two stores
//! (triangle finding, time-constrained pattern matching, structure-
//! constrained time queries), and [`oracle`] holds deliberately naive
//! reference implementations used by the test suites.
//!
//! The crate is `no_std` (alloc required); IO, CLI, and benchmarking live
//! in the companion `dolha-cli` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analytics;
pub mod error;
pub mod hash;
pub mod model;
pub mod oracle;
pub mod persistent;
pub mod snapshot;

mod vertex_arena;

pub use error::Error;
pub use hash::{FixtureHasher, GraphHasher, MurmurHasher, StreamHasher};
pub use model::{
    parse_stream, parse_stream_record, EdgeKey, StreamEdge, Timestamp, VertexId, Weight,
};
pub use persistent::{ExpiryReport, PersistentOutcome, PersistentStore, WindowConfig};
pub use snapshot::{SnapshotOutcome, SnapshotStore};
