use alloc::string::String;
use core::fmt;

use crate::model::Timestamp;

/// Errors raised by the stores and the analytics layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A table was requested with capacity zero.
    ZeroCapacity,
    /// Window configuration violates `0 < slide_len < window_len`.
    InvalidWindow { window_len: u64, slide_len: u64 },
    /// An event arrived with a timestamp below the stream's high-water mark.
    OutOfOrder { t: Timestamp, min: Timestamp },
    /// A table filled up and growth is disabled.
    CapacityExhausted {
        table: &'static str,
        capacity: usize,
    },
    /// `slide_window` was called on a store with no window configured.
    WindowNotConfigured,
    /// A query requires at least one edge key.
    EmptyQuery,
    /// Structure-constrained time queries require distinct keys.
    DuplicateQueryKey(String),
    /// A time range with `start >= end` was passed where `start < end` is required.
    InvalidRange { start: Timestamp, end: Timestamp },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroCapacity => write!(f, "table capacity must be at least 1"),
            Error::InvalidWindow {
                window_len,
                slide_len,
            } => write!(
                f,
                "window config requires 0 < slide < window, got slide={slide_len} window={window_len}"
            ),
            Error::OutOfOrder { t, min } => write!(
                f,
                "out-of-order timestamp {t}: stream position requires t >= {min}"
            ),
            Error::CapacityExhausted { table, capacity } => {
                write!(f, "{table} table full at capacity {capacity} with growth disabled")
            }
            Error::WindowNotConfigured => write!(f, "store has no sliding window configured"),
            Error::EmptyQuery => write!(f, "query edge set must not be empty"),
            Error::DuplicateQueryKey(k) => write!(f, "duplicate query key {k}"),
            Error::InvalidRange { start, end } => {
                write!(f, "invalid time range ({start}, {end}): start must be < end")
            }
        }
    }
}

impl core::error::Error for Error {}
