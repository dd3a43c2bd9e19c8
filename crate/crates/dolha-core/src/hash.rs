//! Pluggable hashing for the vertex and edge hash tables.
//!
//! Both stores index their hash tables through a [`GraphHasher`]. The
//! production implementation is MurmurHash3 over the raw id bytes; tests
//! and fixture replays can inject a lookup-table hasher instead so that
//! table layouts are fully pinned.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::VertexId;

/// Maps ids to hash-table indices. Implementations must be deterministic
/// for a fixed capacity and must return values strictly below `capacity`.
///
/// Edge hashing depends on the ordered pair: `hash(u->v)` need not equal
/// `hash(v->u)`.
pub trait GraphHasher {
    fn vertex_index(&self, id: &VertexId, capacity: usize) -> usize;
    fn edge_index(&self, src: &VertexId, dst: &VertexId, capacity: usize) -> usize;
}

impl<T: GraphHasher + ?Sized> GraphHasher for &T {
    fn vertex_index(&self, id: &VertexId, capacity: usize) -> usize {
        (**self).vertex_index(id, capacity)
    }
    fn edge_index(&self, src: &VertexId, dst: &VertexId, capacity: usize) -> usize {
        (**self).edge_index(src, dst, capacity)
    }
}

/// MurmurHash3 (x64, 128-bit finalizer, low word) over the id bytes.
///
/// Edge keys hash the concatenation `src 0x00 dst`; the separator keeps
/// `("ab","c")` distinct from `("a","bc")`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MurmurHasher {
    seed: u64,
}

impl MurmurHasher {
    pub fn new() -> Self {
        MurmurHasher { seed: 0 }
    }

    pub fn with_seed(seed: u64) -> Self {
        MurmurHasher { seed }
    }

    pub fn hash_bytes(&self, data: &[u8]) -> u64 {
        murmur3_x64_128(data, self.seed)
    }
}

impl Default for MurmurHasher {
    fn default() -> Self {
        Self::new()
    }
}

impl GraphHasher for MurmurHasher {
    fn vertex_index(&self, id: &VertexId, capacity: usize) -> usize {
        debug_assert!(capacity >= 1);
        (self.hash_bytes(id.as_bytes()) % capacity as u64) as usize
    }

    fn edge_index(&self, src: &VertexId, dst: &VertexId, capacity: usize) -> usize {
        debug_assert!(capacity >= 1);
        let mut buf = Vec::with_capacity(src.as_bytes().len() + dst.as_bytes().len() + 1);
        buf.extend_from_slice(src.as_bytes());
        buf.push(0x00);
        buf.extend_from_slice(dst.as_bytes());
        (self.hash_bytes(&buf) % capacity as u64) as usize
    }
}

fn murmur3_x64_128(data: &[u8], seed: u64) -> u64 {
    const C1: u64 = 0x87c3_7b91_1142_53d5;
    const C2: u64 = 0x4cf5_ad43_2745_937f;

    #[inline]
    fn mix_k1(mut k1: u64) -> u64 {
        k1 = k1.wrapping_mul(C1);
        k1 = k1.rotate_left(31);
        k1.wrapping_mul(C2)
    }

    #[inline]
    fn mix_k2(mut k2: u64) -> u64 {
        k2 = k2.wrapping_mul(C2);
        k2 = k2.rotate_left(33);
        k2.wrapping_mul(C1)
    }

    #[inline]
    fn fmix64(mut k: u64) -> u64 {
        k ^= k >> 33;
        k = k.wrapping_mul(0xff51_afd7_ed55_8ccd);
        k ^= k >> 33;
        k = k.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
        k ^= k >> 33;
        k
    }

    let mut h1 = seed;
    let mut h2 = seed;

    let mut chunks = data.chunks_exact(16);
    for block in &mut chunks {
        let k1 = u64::from_le_bytes(block[0..8].try_into().unwrap());
        let k2 = u64::from_le_bytes(block[8..16].try_into().unwrap());
        h1 ^= mix_k1(k1);
        h1 = h1
            .rotate_left(27)
            .wrapping_add(h2)
            .wrapping_mul(5)
            .wrapping_add(0x52dc_e729);
        h2 ^= mix_k2(k2);
        h2 = h2
            .rotate_left(31)
            .wrapping_add(h1)
            .wrapping_mul(5)
            .wrapping_add(0x3849_5ab5);
    }

    let tail = chunks.remainder();
    if !tail.is_empty() {
        let mut k1: u64 = 0;
        let mut k2: u64 = 0;
        for (i, &b) in tail.iter().enumerate() {
            if i < 8 {
                k1 |= (b as u64) << (8 * i);
            } else {
                k2 |= (b as u64) << (8 * (i - 8));
            }
        }
        if tail.len() > 8 {
            h2 ^= mix_k2(k2);
        }
        h1 ^= mix_k1(k1);
    }

    h1 ^= data.len() as u64;
    h2 ^= data.len() as u64;
    h1 = h1.wrapping_add(h2);
    h2 = h2.wrapping_add(h1);
    h1 = fmix64(h1);
    h2 = fmix64(h2);
    h1.wrapping_add(h2)
}

/// A lookup-table hasher for fixture replays: explicit index assignments
/// per vertex and per edge key, falling back to [`MurmurHasher`] for ids
/// the table does not cover. Assigned indices are reduced modulo the
/// queried capacity.
#[derive(Debug, Clone, Default)]
pub struct FixtureHasher {
    vertices: BTreeMap<Vec<u8>, u64>,
    edges: BTreeMap<(Vec<u8>, Vec<u8>), u64>,
    fallback: MurmurHasher,
}

impl FixtureHasher {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn assign_vertex(&mut self, id: impl Into<VertexId>, index: u64) -> &mut Self {
        self.vertices.insert(id.into().as_bytes().to_vec(), index);
        self
    }

    pub fn assign_edge(
        &mut self,
        src: impl Into<VertexId>,
        dst: impl Into<VertexId>,
        index: u64,
    ) -> &mut Self {
        self.edges.insert(
            (
                src.into().as_bytes().to_vec(),
                dst.into().as_bytes().to_vec(),
            ),
            index,
        );
        self
    }

    /// Parses the fixture text format: `vertex ID INDEX` and
    /// `edge SRC DST INDEX` lines, `#` comments, blank lines ignored.
    pub fn parse(text: &str) -> Result<Self, FixtureParseError> {
        let mut fx = FixtureHasher::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let fail = |msg: &str| FixtureParseError {
                line: idx + 1,
                message: msg.into(),
            };
            match fields.as_slice() {
                ["vertex", id, index] => {
                    let index: u64 = index.parse().map_err(|_| fail("invalid index"))?;
                    let id = VertexId::try_new(id.as_bytes().to_vec())
                        .ok_or_else(|| fail("empty vertex id"))?;
                    fx.assign_vertex(id, index);
                }
                ["edge", src, dst, index] => {
                    let index: u64 = index.parse().map_err(|_| fail("invalid index"))?;
                    let src = VertexId::try_new(src.as_bytes().to_vec())
                        .ok_or_else(|| fail("empty vertex id"))?;
                    let dst = VertexId::try_new(dst.as_bytes().to_vec())
                        .ok_or_else(|| fail("empty vertex id"))?;
                    fx.assign_edge(src, dst, index);
                }
                _ => return Err(fail("expected `vertex ID INDEX` or `edge SRC DST INDEX`")),
            }
        }
        Ok(fx)
    }
}

impl GraphHasher for FixtureHasher {
    fn vertex_index(&self, id: &VertexId, capacity: usize) -> usize {
        match self.vertices.get(id.as_bytes()) {
            Some(&i) => (i % capacity as u64) as usize,
            None => self.fallback.vertex_index(id, capacity),
        }
    }

    fn edge_index(&self, src: &VertexId, dst: &VertexId, capacity: usize) -> usize {
        let key = (src.as_bytes().to_vec(), dst.as_bytes().to_vec());
        match self.edges.get(&key) {
            Some(&i) => (i % capacity as u64) as usize,
            None => self.fallback.edge_index(src, dst, capacity),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for FixtureParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "hash fixture line {}: {}", self.line, self.message)
    }
}

impl core::error::Error for FixtureParseError {}

/// Runtime-selected hasher, so stores replaying files can switch between
/// the production hash and an injected fixture without generics at the
/// call site.
#[derive(Debug, Clone)]
pub enum StreamHasher {
    Murmur(MurmurHasher),
    Fixture(FixtureHasher),
}

impl GraphHasher for StreamHasher {
    fn vertex_index(&self, id: &VertexId, capacity: usize) -> usize {
        match self {
            StreamHasher::Murmur(h) => h.vertex_index(id, capacity),
            StreamHasher::Fixture(h) => h.vertex_index(id, capacity),
        }
    }

    fn edge_index(&self, src: &VertexId, dst: &VertexId, capacity: usize) -> usize {
        match self {
            StreamHasher::Murmur(h) => h.edge_index(src, dst, capacity),
            StreamHasher::Fixture(h) => h.edge_index(src, dst, capacity),
        }
    }
}

#[cfg(test)]
pub(crate) mod test_fixtures {
    use super::FixtureHasher;

    /// The worked-example hash assignments: five vertices into a 5-cell
    /// table, six edges into a 6-cell table.
    pub fn example_hash_snapshot() -> FixtureHasher {
        let mut fx = FixtureHasher::new();
        fx.assign_vertex("v1", 1)
            .assign_vertex("v2", 2)
            .assign_vertex("v3", 0)
            .assign_vertex("v4", 1)
            .assign_vertex("v5", 3);
        fx.assign_edge("v1", "v2", 1)
            .assign_edge("v2", "v3", 0)
            .assign_edge("v1", "v4", 4)
            .assign_edge("v3", "v4", 2)
            .assign_edge("v2", "v5", 4)
            .assign_edge("v3", "v5", 3);
        fx
    }

    /// The worked-example assignments for the 10-cell persistent edge
    /// table (vertex side unchanged).
    pub fn example_hash_persistent() -> FixtureHasher {
        let mut fx = FixtureHasher::new();
        fx.assign_vertex("v1", 1)
            .assign_vertex("v2", 2)
            .assign_vertex("v3", 0)
            .assign_vertex("v4", 1)
            .assign_vertex("v5", 3);
        fx.assign_edge("v1", "v2", 8)
            .assign_edge("v2", "v3", 0)
            .assign_edge("v1", "v4", 7)
            .assign_edge("v3", "v4", 2)
            .assign_edge("v2", "v5", 5)
            .assign_edge("v3", "v5", 4);
        fx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    fn vid(s: &str) -> VertexId {
        VertexId::from(s)
    }

    #[test]
    fn fixture_reproduces_all_example_assignments() {
        let fx = test_fixtures::example_hash_snapshot();
        let vertex_expect = [("v1", 1), ("v2", 2), ("v3", 0), ("v4", 1), ("v5", 3)];
        for (id, idx) in vertex_expect {
            assert_eq!(fx.vertex_index(&vid(id), 5), idx, "vertex {id}");
        }
        let edge_expect = [
            ("v1", "v2", 1),
            ("v2", "v3", 0),
            ("v1", "v4", 4),
            ("v3", "v4", 2),
            ("v2", "v5", 4),
            ("v3", "v5", 3),
        ];
        for (s, d, idx) in edge_expect {
            assert_eq!(fx.edge_index(&vid(s), &vid(d), 6), idx, "edge {s}->{d}");
        }
    }

    #[test]
    fn edge_hash_collision_in_example() {
        let fx = test_fixtures::example_hash_snapshot();
        assert_eq!(
            fx.edge_index(&vid("v1"), &vid("v4"), 6),
            fx.edge_index(&vid("v2"), &vid("v5"), 6)
        );
    }

    #[test]
    fn capacity_one_always_maps_to_zero() {
        let m = MurmurHasher::new();
        let fx = test_fixtures::example_hash_snapshot();
        for id in ["v1", "anything", "0.0.0.0"] {
            assert_eq!(m.vertex_index(&vid(id), 1), 0);
            assert_eq!(fx.vertex_index(&vid(id), 1), 0);
            assert_eq!(m.edge_index(&vid(id), &vid("x"), 1), 0);
            assert_eq!(fx.edge_index(&vid(id), &vid("x"), 1), 0);
        }
    }

    #[test]
    fn deterministic_and_in_range() {
        let m = MurmurHasher::with_seed(7);
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for cap in [1usize, 2, 7, 1024] {
            for _ in 0..25_000 {
                let a = vid(&format!("n{}", next()));
                let b = vid(&format!("n{}", next()));
                let vi = m.vertex_index(&a, cap);
                assert!(vi < cap);
                assert_eq!(vi, m.vertex_index(&a, cap));
                let ei = m.edge_index(&a, &b, cap);
                assert!(ei < cap);
                assert_eq!(ei, m.edge_index(&a, &b, cap));
            }
        }
    }

    #[test]
    fn edge_hash_is_order_sensitive_and_separator_guarded() {
        let m = MurmurHasher::new();
        let cap = 1 << 20;
        // Ordered pair matters (overwhelmingly likely to differ).
        assert_ne!(
            m.edge_index(&vid("alpha"), &vid("beta"), cap),
            m.edge_index(&vid("beta"), &vid("alpha"), cap)
        );
        // ("ab","c") and ("a","bc") must not collapse to one key.
        assert_ne!(
            m.edge_index(&vid("ab"), &vid("c"), cap),
            m.edge_index(&vid("a"), &vid("bc"), cap)
        );
    }

    #[test]
    fn fixture_parse_roundtrip() {
        let text = "# example\nvertex v1 1\nvertex v3 0\nedge v1 v4 4\n\nedge v2 v5 4\n";
        let fx = FixtureHasher::parse(text).unwrap();
        assert_eq!(fx.vertex_index(&vid("v1"), 5), 1);
        assert_eq!(fx.vertex_index(&vid("v3"), 5), 0);
        assert_eq!(fx.edge_index(&vid("v1"), &vid("v4"), 6), 4);
        assert_eq!(fx.edge_index(&vid("v2"), &vid("v5"), 6), 4);
        let err = FixtureHasher::parse("vertex v1\n").unwrap_err();
        assert_eq!(err.line, 1);
    }
}
