//! Naive, obviously-correct reference implementations for the property
//! and acceptance suites, plus the adjacency-list-in-hash-table baseline
//! used as the benchmark comparison structure.
//!
//! Nothing in this module shares table or Doll code with the stores: the
//! oracle answers every query by replaying its event log against the
//! documented semantics, one key at a time, with plain maps and vectors.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::Error;
use crate::model::{EdgeKey, StreamEdge, Timestamp, VertexId, Weight};
use crate::persistent::WindowConfig;
use crate::snapshot::{SnapshotOutcome, VertexSummary};

/// Full-log reference for snapshot semantics: every query replays the
/// event prefix. O(n) per query by design; use it on small streams only.
#[derive(Debug, Clone, Default)]
pub struct OracleGraph {
    events: Vec<StreamEdge>,
    window: Option<WindowConfig>,
}

impl OracleGraph {
    pub fn new(window: Option<WindowConfig>) -> Self {
        OracleGraph {
            events: Vec::new(),
            window,
        }
    }

    pub fn push(&mut self, e: StreamEdge) {
        self.events.push(e);
    }

    pub fn events(&self) -> &[StreamEdge] {
        &self.events
    }

    /// Materializes the snapshot at time `t` by folding every event with
    /// timestamp at or below `t` through the per-key weight machine: a
    /// non-positive delta on an absent key is dropped, accumulation runs
    /// while the key is live, and a non-positive total deletes the key.
    pub fn snapshot_at(&self, t: Timestamp) -> OracleSnapshot {
        #[derive(Default)]
        struct KeyFold {
            live: bool,
            w: Weight,
            t_last: Timestamp,
            idx_last: usize,
        }
        let mut keys: BTreeMap<&EdgeKey, KeyFold> = BTreeMap::new();
        for (idx, e) in self.events.iter().enumerate() {
            if e.t > t {
                break;
            }
            let fold = keys.entry(&e.key).or_default();
            if !fold.live && e.w <= 0 {
                continue;
            }
            fold.w = if fold.live { fold.w + e.w } else { e.w };
            fold.t_last = e.t;
            fold.idx_last = idx;
            fold.live = fold.w > 0;
        }
        let mut edges = BTreeMap::new();
        for (key, fold) in keys {
            if fold.live {
                edges.insert(key.clone(), (fold.w, fold.t_last, fold.idx_last));
            }
        }
        OracleSnapshot { edges }
    }

    pub fn edge_query(&self, key: &EdgeKey, t: Timestamp) -> Option<(Weight, Timestamp)> {
        self.snapshot_at(t).edge_query(key)
    }

    pub fn vertex_query(&self, id: &VertexId, t: Timestamp) -> Option<VertexSummary> {
        self.snapshot_at(t).vertex_query(id)
    }

    pub fn successors(&self, id: &VertexId, t: Timestamp) -> Vec<(VertexId, Weight, Timestamp)> {
        self.snapshot_at(t).successors(id)
    }

    pub fn precursors(&self, id: &VertexId, t: Timestamp) -> Vec<(VertexId, Weight, Timestamp)> {
        self.snapshot_at(t).precursors(id)
    }

    /// Literal sliding-window filter: the events of window `i`, i.e.
    /// those with `t0 + i*slide < t <= t0 + i*slide + window`.
    pub fn window_filter(&self, ordinal: u64) -> Result<Vec<StreamEdge>, Error> {
        let w = self.window.ok_or(Error::WindowNotConfigured)?;
        let lo = w.start(ordinal);
        let hi = w.end(ordinal);
        Ok(self
            .events
            .iter()
            .filter(|e| e.t > lo && e.t <= hi)
            .cloned()
            .collect())
    }
}

/// A materialized oracle snapshot: live keys with their totals, last
/// update times, and last-touch event indexes (the Doll order).
#[derive(Debug, Clone)]
pub struct OracleSnapshot {
    edges: BTreeMap<EdgeKey, (Weight, Timestamp, usize)>,
}

impl OracleSnapshot {
    pub fn edge_query(&self, key: &EdgeKey) -> Option<(Weight, Timestamp)> {
        self.edges.get(key).map(|&(w, t, _)| (w, t))
    }

    pub fn live_keys(&self) -> impl Iterator<Item = &EdgeKey> {
        self.edges.keys()
    }

    pub fn live_edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn live_vertex_count(&self) -> usize {
        let mut verts: BTreeMap<&VertexId, ()> = BTreeMap::new();
        for key in self.edges.keys() {
            verts.insert(&key.src, ());
            verts.insert(&key.dst, ());
        }
        verts.len()
    }

    pub fn vertex_query(&self, id: &VertexId) -> Option<VertexSummary> {
        let mut s = VertexSummary {
            w_out: 0,
            w_in: 0,
            d_out: 0,
            d_in: 0,
        };
        let mut present = false;
        for (key, &(w, _, _)) in &self.edges {
            if key.src == *id {
                s.w_out += w;
                s.d_out += 1;
                present = true;
            }
            if key.dst == *id {
                s.w_in += w;
                s.d_in += 1;
                present = true;
            }
        }
        present.then_some(s)
    }

    /// Live out-edges ordered by last-touch event index, which is the
    /// chronological Doll order (ties in t resolve by stream order).
    pub fn successors(&self, id: &VertexId) -> Vec<(VertexId, Weight, Timestamp)> {
        let mut rows: Vec<(usize, VertexId, Weight, Timestamp)> = self
            .edges
            .iter()
            .filter(|(key, _)| key.src == *id)
            .map(|(key, &(w, t, idx))| (idx, key.dst.clone(), w, t))
            .collect();
        rows.sort_by_key(|r| r.0);
        rows.into_iter().map(|(_, v, w, t)| (v, w, t)).collect()
    }

    pub fn precursors(&self, id: &VertexId) -> Vec<(VertexId, Weight, Timestamp)> {
        let mut rows: Vec<(usize, VertexId, Weight, Timestamp)> = self
            .edges
            .iter()
            .filter(|(key, _)| key.dst == *id)
            .map(|(key, &(w, t, idx))| (idx, key.src.clone(), w, t))
            .collect();
        rows.sort_by_key(|r| r.0);
        rows.into_iter().map(|(_, v, w, t)| (v, w, t)).collect()
    }
}

/// One stored occurrence in the persistent reference: arrival time, the
/// event's delta, and a global sequence number standing in for buffer
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOccurrence {
    pub t: Timestamp,
    pub delta: Weight,
    pub seq: u64,
}

/// Reference simulator for the persistent store's documented semantics,
/// kept deliberately simple: per-key vectors of stored occurrences, with
/// the discard rule at ingest and the expire/subtract/sweep rules at
/// each slide.
#[derive(Debug, Clone)]
pub struct PersistentOracle {
    window: Option<WindowConfig>,
    ordinal: u64,
    keys: BTreeMap<EdgeKey, Vec<OracleOccurrence>>,
    seq: u64,
}

impl PersistentOracle {
    pub fn new(window: Option<WindowConfig>) -> Self {
        PersistentOracle {
            window,
            ordinal: 0,
            keys: BTreeMap::new(),
            seq: 0,
        }
    }

    pub fn ordinal(&self) -> u64 {
        self.ordinal
    }

    pub fn push(&mut self, e: &StreamEdge) {
        let occs = self.keys.entry(e.key.clone()).or_default();
        if occs.is_empty() && e.w <= 0 {
            return; // discarded
        }
        occs.push(OracleOccurrence {
            t: e.t,
            delta: e.w,
            seq: self.seq,
        });
        self.seq += 1;
    }

    /// One window step: occurrences at or below the new window start
    /// leave; a key that lost occurrences and retains no positive
    /// cumulative anywhere drops its remaining occurrences too.
    pub fn slide(&mut self) -> Result<(), Error> {
        let window = self.window.ok_or(Error::WindowNotConfigured)?;
        self.ordinal += 1;
        let cutoff = window.start(self.ordinal);
        let mut dead_keys = Vec::new();
        for (key, occs) in self.keys.iter_mut() {
            let expired = occs.iter().take_while(|o| o.t <= cutoff).count();
            if expired == 0 {
                continue;
            }
            occs.drain(..expired);
            if occs.is_empty() {
                dead_keys.push(key.clone());
                continue;
            }
            let mut cum: Weight = 0;
            let mut any_positive = false;
            for o in occs.iter() {
                cum += o.delta;
                if cum > 0 {
                    any_positive = true;
                }
            }
            if !any_positive {
                dead_keys.push(key.clone());
            }
        }
        for key in dead_keys {
            self.keys.remove(&key);
        }
        Ok(())
    }

    /// `(t, cumulative w)` per stored occurrence, oldest first.
    pub fn edge_history(&self, key: &EdgeKey) -> Vec<(Timestamp, Weight)> {
        let mut out = Vec::new();
        if let Some(occs) = self.keys.get(key) {
            let mut cum = 0;
            for o in occs {
                cum += o.delta;
                out.push((o.t, cum));
            }
        }
        out
    }

    pub fn edge_latest(&self, key: &EdgeKey) -> Option<(Timestamp, Weight)> {
        self.edge_history(key).last().copied()
    }

    pub fn vertex_query(&self, id: &VertexId) -> Option<VertexSummary> {
        let mut s = VertexSummary {
            w_out: 0,
            w_in: 0,
            d_out: 0,
            d_in: 0,
        };
        let mut present = false;
        for (key, occs) in &self.keys {
            if occs.is_empty() {
                continue;
            }
            let total: Weight = occs.iter().map(|o| o.delta).sum();
            if key.src == *id {
                s.w_out += total;
                s.d_out += occs.len() as u32;
                present = true;
            }
            if key.dst == *id {
                s.w_in += total;
                s.d_in += occs.len() as u32;
                present = true;
            }
        }
        present.then_some(s)
    }

    /// Every stored outgoing occurrence of `id` in arrival order, with
    /// cumulative weights — the persistent 1-hop history answer.
    pub fn successors_history(&self, id: &VertexId) -> Vec<(VertexId, Timestamp, Weight)> {
        self.history_walk(id, true)
    }

    pub fn precursors_history(&self, id: &VertexId) -> Vec<(VertexId, Timestamp, Weight)> {
        self.history_walk(id, false)
    }

    fn history_walk(&self, id: &VertexId, outgoing: bool) -> Vec<(VertexId, Timestamp, Weight)> {
        let mut rows: Vec<(u64, VertexId, Timestamp, Weight)> = Vec::new();
        for (key, occs) in &self.keys {
            let (own, other) = if outgoing {
                (&key.src, &key.dst)
            } else {
                (&key.dst, &key.src)
            };
            if own != id {
                continue;
            }
            let mut cum = 0;
            for o in occs {
                cum += o.delta;
                rows.push((o.seq, other.clone(), o.t, cum));
            }
        }
        rows.sort_by_key(|r| r.0);
        rows.into_iter().map(|(_, v, t, w)| (v, t, w)).collect()
    }

    /// Unique neighbors by latest stored occurrence, ordered by that
    /// occurrence's arrival.
    pub fn successors_latest(&self, id: &VertexId) -> Vec<(VertexId, Timestamp, Weight)> {
        self.latest_walk(id, true)
    }

    pub fn precursors_latest(&self, id: &VertexId) -> Vec<(VertexId, Timestamp, Weight)> {
        self.latest_walk(id, false)
    }

    fn latest_walk(&self, id: &VertexId, outgoing: bool) -> Vec<(VertexId, Timestamp, Weight)> {
        let mut rows: Vec<(u64, VertexId, Timestamp, Weight)> = Vec::new();
        for (key, occs) in &self.keys {
            let (own, other) = if outgoing {
                (&key.src, &key.dst)
            } else {
                (&key.dst, &key.src)
            };
            if own != id || occs.is_empty() {
                continue;
            }
            let total: Weight = occs.iter().map(|o| o.delta).sum();
            let last = occs.last().unwrap();
            rows.push((last.seq, other.clone(), last.t, total));
        }
        rows.sort_by_key(|r| r.0);
        rows.into_iter().map(|(_, v, t, w)| (v, t, w)).collect()
    }

    /// Every stored occurrence `(src, dst, t, cumulative w)` in arrival
    /// order — directly comparable to the store's buffer scan.
    pub fn live_occurrences(&self) -> Vec<(VertexId, VertexId, Timestamp, Weight)> {
        let mut rows: Vec<(u64, VertexId, VertexId, Timestamp, Weight)> = Vec::new();
        for (key, occs) in &self.keys {
            let mut cum = 0;
            for o in occs {
                cum += o.delta;
                rows.push((o.seq, key.src.clone(), key.dst.clone(), o.t, cum));
            }
        }
        rows.sort_by_key(|r| r.0);
        rows.into_iter()
            .map(|(_, s, d, t, w)| (s, d, t, w))
            .collect()
    }

    pub fn keys(&self) -> impl Iterator<Item = &EdgeKey> {
        self.keys.keys()
    }
}

/// The comparison baseline: per-vertex sorted neighbor lists in a map,
/// with per-key occurrence timelines on the side. Edge lookup is a
/// binary search; insertion shifts the sorted vector. Used for speed
/// comparison — correctness checks go through [`OracleGraph`].
#[derive(Debug, Clone, Default)]
pub struct BaselineAdjList {
    verts: BTreeMap<VertexId, BaselineVertex>,
    timelines: BTreeMap<EdgeKey, Vec<(Timestamp, Weight)>>,
    last_t: Option<Timestamp>,
}

#[derive(Debug, Clone, Default)]
struct BaselineVertex {
    out: Vec<(VertexId, Weight, Timestamp)>,
    inn: Vec<(VertexId, Weight, Timestamp)>,
}

impl BaselineAdjList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ingest(&mut self, e: &StreamEdge) -> Result<SnapshotOutcome, Error> {
        if let Some(min) = self.last_t {
            if e.t < min {
                return Err(Error::OutOfOrder { t: e.t, min });
            }
        }
        self.last_t = Some(e.t);
        // The extra time line mirrors unwindowed persistent history: any
        // event on a key with prior stored occurrences appends, as does a
        // positive first occurrence. It is independent of whether the
        // adjacency-list side currently holds the edge.
        let tl = self.timelines.entry(e.key.clone()).or_default();
        if !tl.is_empty() || e.w > 0 {
            let cum = tl.last().map_or(0, |&(_, w)| w) + e.w;
            tl.push((e.t, cum));
        }
        let existing = self.verts.get(&e.key.src).and_then(|v| {
            v.out
                .binary_search_by(|probe| probe.0.cmp(&e.key.dst))
                .ok()
                .map(|i| v.out[i].1)
        });
        let outcome = match existing {
            Some(w_old) => {
                let w_new = w_old + e.w;
                if w_new > 0 {
                    self.set_edge(&e.key, w_new, e.t);
                    SnapshotOutcome::Updated
                } else {
                    self.remove_edge(&e.key);
                    SnapshotOutcome::Deleted
                }
            }
            None => {
                if e.w <= 0 {
                    SnapshotOutcome::Discarded
                } else {
                    self.insert_edge(&e.key, e.w, e.t);
                    SnapshotOutcome::Inserted
                }
            }
        };
        Ok(outcome)
    }

    fn insert_edge(&mut self, key: &EdgeKey, w: Weight, t: Timestamp) {
        let src = self.verts.entry(key.src.clone()).or_default();
        match src.out.binary_search_by(|p| p.0.cmp(&key.dst)) {
            Ok(_) => unreachable!("insert over existing edge"),
            Err(i) => src.out.insert(i, (key.dst.clone(), w, t)),
        }
        let dst = self.verts.entry(key.dst.clone()).or_default();
        match dst.inn.binary_search_by(|p| p.0.cmp(&key.src)) {
            Ok(_) => unreachable!("insert over existing edge"),
            Err(i) => dst.inn.insert(i, (key.src.clone(), w, t)),
        }
    }

    fn set_edge(&mut self, key: &EdgeKey, w: Weight, t: Timestamp) {
        let src = self.verts.get_mut(&key.src).unwrap();
        let i = src.out.binary_search_by(|p| p.0.cmp(&key.dst)).unwrap();
        src.out[i].1 = w;
        src.out[i].2 = t;
        let dst = self.verts.get_mut(&key.dst).unwrap();
        let i = dst.inn.binary_search_by(|p| p.0.cmp(&key.src)).unwrap();
        dst.inn[i].1 = w;
        dst.inn[i].2 = t;
    }

    fn remove_edge(&mut self, key: &EdgeKey) {
        let src = self.verts.get_mut(&key.src).unwrap();
        let i = src.out.binary_search_by(|p| p.0.cmp(&key.dst)).unwrap();
        src.out.remove(i);
        let dst = self.verts.get_mut(&key.dst).unwrap();
        let i = dst.inn.binary_search_by(|p| p.0.cmp(&key.src)).unwrap();
        dst.inn.remove(i);
        for id in [&key.src, &key.dst] {
            if let Some(v) = self.verts.get(id) {
                if v.out.is_empty() && v.inn.is_empty() {
                    self.verts.remove(id);
                }
            }
        }
    }

    pub fn edge_query(&self, src: &VertexId, dst: &VertexId) -> Option<(Weight, Timestamp)> {
        let v = self.verts.get(src)?;
        let i = v.out.binary_search_by(|p| p.0.cmp(dst)).ok()?;
        Some((v.out[i].1, v.out[i].2))
    }

    pub fn vertex_query(&self, id: &VertexId) -> Option<VertexSummary> {
        let v = self.verts.get(id)?;
        Some(VertexSummary {
            w_out: v.out.iter().map(|e| e.1).sum(),
            w_in: v.inn.iter().map(|e| e.1).sum(),
            d_out: v.out.len() as u32,
            d_in: v.inn.len() as u32,
        })
    }

    /// Successor list in neighbor-id order (the baseline keeps sorted
    /// lists, not chronological ones).
    pub fn successors(&self, id: &VertexId) -> Vec<(VertexId, Weight, Timestamp)> {
        self.verts.get(id).map_or_else(Vec::new, |v| v.out.clone())
    }

    pub fn precursors(&self, id: &VertexId) -> Vec<(VertexId, Weight, Timestamp)> {
        self.verts.get(id).map_or_else(Vec::new, |v| v.inn.clone())
    }

    /// Full-history occurrence list for a key, `(t, cumulative w)`.
    pub fn edge_history(&self, key: &EdgeKey) -> Vec<(Timestamp, Weight)> {
        self.timelines.get(key).cloned().unwrap_or_default()
    }

    pub fn live_edge_count(&self) -> usize {
        self.verts.values().map(|v| v.out.len()).sum()
    }

    pub fn live_vertex_count(&self) -> usize {
        self.verts.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::StreamEdge;
    use crate::snapshot::tests::example_stream;
    use alloc::vec;

    fn key(s: &str, d: &str) -> EdgeKey {
        EdgeKey::new(s, d)
    }

    fn full_oracle() -> OracleGraph {
        let mut o = OracleGraph::new(Some(WindowConfig::new(7, 3, 0).unwrap()));
        for e in example_stream() {
            o.push(e);
        }
        o
    }

    #[test]
    fn totals_track_the_example_narrative() {
        let o = full_oracle();
        assert_eq!(o.edge_query(&key("v1", "v2"), 7), Some((2, 7)));
        assert_eq!(o.edge_query(&key("v1", "v4"), 8), None);
        assert_eq!(o.edge_query(&key("v1", "v4"), 7), Some((1, 3)));
        assert_eq!(o.edge_query(&key("v1", "v2"), 9), None);
        assert_eq!(o.edge_query(&key("v1", "v2"), 10), Some((1, 10)));
        assert_eq!(o.vertex_query(&VertexId::from("v1"), 9), None);
        let empty = OracleGraph::new(None);
        assert_eq!(empty.edge_query(&key("a", "b"), 100), None);
    }

    #[test]
    fn snapshot10_has_five_live_edges() {
        let o = full_oracle();
        let snap = o.snapshot_at(10);
        assert_eq!(snap.live_edge_count(), 5);
        assert_eq!(snap.live_vertex_count(), 5);
        assert!(snap.edge_query(&key("v2", "v3")).is_some());
    }

    #[test]
    fn window_filter_splits_the_example_stream() {
        let o = full_oracle();
        let w0 = o.window_filter(0).unwrap();
        assert_eq!(w0.len(), 7);
        assert_eq!(w0.last().unwrap().t, 7);
        let w1 = o.window_filter(1).unwrap();
        assert_eq!(w1.first().unwrap().t, 4);
        assert_eq!(w1.len(), 7);
        let none = OracleGraph::new(None);
        assert!(none.window_filter(0).is_err());
    }

    #[test]
    fn persistent_oracle_matches_the_window1_table() {
        let mut po = PersistentOracle::new(Some(WindowConfig::new(7, 3, 0).unwrap()));
        let stream = example_stream();
        for e in &stream[..7] {
            po.push(e);
        }
        assert_eq!(po.edge_history(&key("v1", "v2")), vec![(1, 1), (7, 2)]);
        po.slide().unwrap();
        for e in &stream[7..] {
            po.push(e);
        }
        assert_eq!(
            po.edge_history(&key("v1", "v2")),
            vec![(7, 1), (9, -1), (10, 0)]
        );
        assert_eq!(po.edge_history(&key("v1", "v4")), vec![]);
        assert_eq!(po.edge_history(&key("v3", "v4")), vec![(4, 1)]);
        assert_eq!(po.edge_latest(&key("v1", "v2")), Some((10, 0)));
    }

    #[test]
    fn persistent_oracle_sweeps_dead_keys() {
        let mut po = PersistentOracle::new(Some(WindowConfig::new(5, 2, 0).unwrap()));
        po.push(&StreamEdge::new("a", "b", 1, 2));
        po.push(&StreamEdge::new("a", "b", 4, -3));
        po.slide().unwrap();
        assert_eq!(po.edge_history(&key("a", "b")), vec![]);
        assert_eq!(po.vertex_query(&VertexId::from("a")), None);
    }

    #[test]
    fn baseline_matches_snapshot_example_queries() {
        let mut b = BaselineAdjList::new();
        for e in example_stream() {
            b.ingest(&e).unwrap();
        }
        assert_eq!(
            b.edge_query(&VertexId::from("v1"), &VertexId::from("v2")),
            Some((1, 10))
        );
        assert_eq!(b.live_edge_count(), 5);
        assert_eq!(b.live_vertex_count(), 5);
        assert_eq!(
            b.edge_history(&key("v1", "v2")),
            vec![(1, 1), (7, 2), (9, 0), (10, 1)]
        );
        let succ = b.successors(&VertexId::from("v2"));
        assert_eq!(succ.len(), 2);
        // Sorted by neighbor id, not time.
        assert!(succ[0].0 < succ[1].0);
    }

    #[test]
    fn baseline_single_edge() {
        let mut b = BaselineAdjList::new();
        b.ingest(&StreamEdge::new("x", "y", 1, 3)).unwrap();
        assert_eq!(
            b.successors(&VertexId::from("x")),
            vec![(VertexId::from("y"), 3, 1)]
        );
        assert_eq!(
            b.precursors(&VertexId::from("y")),
            vec![(VertexId::from("x"), 3, 1)]
        );
    }
}
