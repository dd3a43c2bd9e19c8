//! Shared identifiers and the stream-event type.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Logical event time. Unitless; callers map wall-clock or sequence
/// numbers onto it. Streams must be non-decreasing in `t`.
pub type Timestamp = u64;

/// Signed weight delta / accumulated weight.
pub type Weight = i64;

/// An opaque, non-empty byte-string vertex identifier ("v1", an IP
/// address, an account number). Equality is byte-exact.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(Vec<u8>);

impl VertexId {
    /// Builds an id, panicking on empty input. Use [`VertexId::try_new`]
    /// for unvalidated data.
    pub fn new<T: Into<Vec<u8>>>(bytes: T) -> Self {
        Self::try_new(bytes).expect("vertex id must be non-empty")
    }

    pub fn try_new<T: Into<Vec<u8>>>(bytes: T) -> Option<Self> {
        let bytes = bytes.into();
        if bytes.is_empty() {
            None
        } else {
            Some(VertexId(bytes))
        }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId::new(s.as_bytes().to_vec())
    }
}

impl From<&VertexId> for VertexId {
    fn from(v: &VertexId) -> Self {
        v.clone()
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match core::str::from_utf8(&self.0) {
            Ok(s) => f.write_str(s),
            Err(_) => write!(f, "{:02x?}", self.0),
        }
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A directed edge key. `(u, v)` and `(v, u)` are distinct; self-loops
/// are permitted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    pub src: VertexId,
    pub dst: VertexId,
}

impl EdgeKey {
    pub fn new(src: impl Into<VertexId>, dst: impl Into<VertexId>) -> Self {
        EdgeKey {
            src: src.into(),
            dst: dst.into(),
        }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.src, self.dst)
    }
}

impl fmt::Debug for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One stream event: a weighted directed edge at a point in time.
/// Negative `w` signals deletion weight; `w = 0` on an existing key is a
/// timestamp-refreshing no-op for snapshot semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamEdge {
    pub key: EdgeKey,
    pub t: Timestamp,
    pub w: Weight,
}

impl StreamEdge {
    pub fn new(
        src: impl Into<VertexId>,
        dst: impl Into<VertexId>,
        t: Timestamp,
        w: Weight,
    ) -> Self {
        StreamEdge {
            key: EdgeKey::new(src, dst),
            t,
            w,
        }
    }
}

/// Why a single stream record failed to parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecordError {
    FieldCount { got: usize },
    EmptyVertex,
    BadTimestamp(String),
    BadWeight(String),
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordError::FieldCount { got } => {
                write!(f, "expected 4 fields (src dst t w), got {got}")
            }
            RecordError::EmptyVertex => write!(f, "empty vertex id"),
            RecordError::BadTimestamp(s) => write!(f, "invalid timestamp {s:?}"),
            RecordError::BadWeight(s) => write!(f, "invalid weight {s:?}"),
        }
    }
}

impl core::error::Error for RecordError {}

/// A parse failure with the 1-based line number it occurred on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamParseError {
    pub line: usize,
    pub error: RecordError,
}

impl fmt::Display for StreamParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

impl core::error::Error for StreamParseError {}

/// Parses one record of the edge-stream format: `src dst t w`, fields
/// separated by one-or-more spaces or tabs.
pub fn parse_stream_record(line: &str) -> Result<StreamEdge, RecordError> {
    let mut fields = line.split_whitespace();
    let src = fields.next();
    let dst = fields.next();
    let t = fields.next();
    let w = fields.next();
    let extra = fields.count();
    let (src, dst, t, w) = match (src, dst, t, w, extra) {
        (Some(a), Some(b), Some(c), Some(d), 0) => (a, b, c, d),
        _ => {
            let got = [src, dst, t, w].iter().filter(|f| f.is_some()).count() + extra;
            return Err(RecordError::FieldCount { got });
        }
    };
    let src = VertexId::try_new(src.as_bytes().to_vec()).ok_or(RecordError::EmptyVertex)?;
    let dst = VertexId::try_new(dst.as_bytes().to_vec()).ok_or(RecordError::EmptyVertex)?;
    let t: Timestamp = t.parse().map_err(|_| RecordError::BadTimestamp(t.into()))?;
    let w: Weight = w.parse().map_err(|_| RecordError::BadWeight(w.into()))?;
    Ok(StreamEdge {
        key: EdgeKey { src, dst },
        t,
        w,
    })
}

/// Parses a whole edge-stream text: one record per line, `#`-prefixed
/// lines are comments, blank lines ignored. Timestamp monotonicity is
/// the stores' concern, not the parser's.
pub fn parse_stream(text: &str) -> Result<Vec<StreamEdge>, StreamParseError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match parse_stream_record(trimmed) {
            Ok(e) => out.push(e),
            Err(error) => {
                return Err(StreamParseError {
                    line: idx + 1,
                    error,
                })
            }
        }
    }
    Ok(out)
}
