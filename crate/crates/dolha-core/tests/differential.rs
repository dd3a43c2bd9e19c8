//! Differential tests: both stores and the baseline against the naive
//! oracles, over seeded random streams with repeats, negative deltas,
//! and timestamp ties.

mod common;

use std::collections::BTreeSet;

use common::{gen_stream, universe_ids, StreamProfile};
use dolha_core::oracle::{BaselineAdjList, OracleGraph, PersistentOracle};
use dolha_core::{
    EdgeKey, MurmurHasher, PersistentStore, SnapshotStore, StreamEdge, VertexId, WindowConfig,
};
use proptest::prelude::*;

fn check_snapshot_against_oracle(
    store: &SnapshotStore<MurmurHasher>,
    oracle: &OracleGraph,
    t: u64,
    seen: &BTreeSet<EdgeKey>,
    ids: &[VertexId],
) {
    store.audit().unwrap_or_else(|v| panic!("audit: {v:?}"));
    let snap = oracle.snapshot_at(t);
    assert_eq!(store.live_edge_count(), snap.live_edge_count());
    assert_eq!(store.live_vertex_count(), snap.live_vertex_count());
    for key in seen {
        assert_eq!(
            store.edge_query(&key.src, &key.dst),
            snap.edge_query(key),
            "edge {key}"
        );
    }
    for id in ids {
        assert_eq!(store.vertex_query(id), snap.vertex_query(id), "vertex {id}");
        assert_eq!(store.successors(id), snap.successors(id), "succ {id}");
        assert_eq!(store.precursors(id), snap.precursors(id), "prec {id}");
    }
}

#[test]
fn snapshot_store_agrees_with_oracle_at_checkpoints() {
    for seed in 0..40u64 {
        let profile = StreamProfile::standard(400 + (seed as usize % 5) * 120, 24);
        let stream = gen_stream(seed, &profile);
        let ids = universe_ids(profile.universe);
        let mut store = SnapshotStore::new(8, 8, MurmurHasher::new()).unwrap();
        let mut oracle = OracleGraph::new(None);
        let mut seen = BTreeSet::new();
        for (i, e) in stream.iter().enumerate() {
            store.process_edge(e).unwrap();
            oracle.push(e.clone());
            seen.insert(e.key.clone());
            if (i + 1) % 100 == 0 {
                check_snapshot_against_oracle(&store, &oracle, e.t, &seen, &ids);
            }
        }
        if let Some(last) = stream.last() {
            check_snapshot_against_oracle(&store, &oracle, last.t, &seen, &ids);
        }
    }
}

fn check_persistent_against_oracle(
    store: &PersistentStore<MurmurHasher>,
    oracle: &PersistentOracle,
    seen: &BTreeSet<EdgeKey>,
    ids: &[VertexId],
) {
    store.audit().unwrap_or_else(|v| panic!("audit: {v:?}"));
    assert_eq!(store.live_occurrences(), oracle.live_occurrences());
    for key in seen {
        assert_eq!(
            store.edge_history(&key.src, &key.dst),
            oracle.edge_history(key),
            "history {key}"
        );
        assert_eq!(
            store.edge_latest(&key.src, &key.dst),
            oracle.edge_latest(key),
            "latest {key}"
        );
    }
    for id in ids {
        assert_eq!(
            store.vertex_query(id),
            oracle.vertex_query(id),
            "vertex {id}"
        );
        assert_eq!(
            store.successors_history(id),
            oracle.successors_history(id),
            "succ history {id}"
        );
        assert_eq!(
            store.successors_latest(id),
            oracle.successors_latest(id),
            "succ latest {id}"
        );
        assert_eq!(
            store.precursors_history(id),
            oracle.precursors_history(id),
            "prec history {id}"
        );
        assert_eq!(
            store.precursors_latest(id),
            oracle.precursors_latest(id),
            "prec latest {id}"
        );
    }
}

#[test]
fn unwindowed_persistent_store_agrees_with_oracle() {
    for seed in 100..130u64 {
        let profile = StreamProfile::standard(500, 16);
        let stream = gen_stream(seed, &profile);
        let ids = universe_ids(profile.universe);
        let mut store = PersistentStore::new(4, 4, MurmurHasher::new(), None).unwrap();
        let mut oracle = PersistentOracle::new(None);
        let mut seen = BTreeSet::new();
        for (i, e) in stream.iter().enumerate() {
            store.process_edge(e).unwrap();
            oracle.push(e);
            seen.insert(e.key.clone());
            if (i + 1) % 125 == 0 {
                check_persistent_against_oracle(&store, &oracle, &seen, &ids);
            }
        }
        check_persistent_against_oracle(&store, &oracle, &seen, &ids);
    }
}

#[test]
fn windowed_persistent_store_agrees_with_oracle_after_every_slide() {
    for seed in 200..240u64 {
        let profile = StreamProfile::standard(600, 16);
        let stream = gen_stream(seed, &profile);
        let ids = universe_ids(profile.universe);
        let window_len = 40 + (seed % 4) * 17;
        let slide = 7 + (seed % 3) * 6;
        let window = WindowConfig::new(window_len, slide, 0).unwrap();
        let mut store = PersistentStore::new(4, 4, MurmurHasher::new(), Some(window)).unwrap();
        let mut oracle = PersistentOracle::new(Some(window));
        let mut seen = BTreeSet::new();
        for e in &stream {
            while e.t > store.current_window_end().unwrap() {
                store.slide_window().unwrap();
                oracle.slide().unwrap();
                check_persistent_against_oracle(&store, &oracle, &seen, &ids);
            }
            store.process_edge(e).unwrap();
            oracle.push(e);
            seen.insert(e.key.clone());
        }
        // Drain a few more windows past the stream end.
        for _ in 0..3 {
            store.slide_window().unwrap();
            oracle.slide().unwrap();
            check_persistent_against_oracle(&store, &oracle, &seen, &ids);
        }
    }
}

#[test]
fn windowed_store_retains_exactly_the_oracle_window_events() {
    // The set of (key, t) occurrences in the store right after a slide is
    // a subset of the literal window filter, and equal on keys that never
    // hit the discard or sweep paths (every stream here is positive).
    for seed in 300..320u64 {
        let profile = StreamProfile {
            events: 400,
            universe: 12,
            repeat_pct: 30,
            negative_pct: 0,
        };
        let stream = gen_stream(seed, &profile);
        let window = WindowConfig::new(50, 20, 0).unwrap();
        let mut store = PersistentStore::new(4, 4, MurmurHasher::new(), Some(window)).unwrap();
        let mut log = OracleGraph::new(Some(window));
        for e in &stream {
            while e.t > store.current_window_end().unwrap() {
                store.slide_window().unwrap();
                let want: BTreeSet<(EdgeKey, u64)> = log
                    .window_filter(store.window_ordinal())
                    .unwrap()
                    .into_iter()
                    .filter(|e| e.t <= log.events().last().unwrap().t)
                    .map(|e| (e.key, e.t))
                    .collect();
                let got: BTreeSet<(EdgeKey, u64)> = store
                    .live_occurrences()
                    .into_iter()
                    .map(|(s, d, t, _)| (EdgeKey { src: s, dst: d }, t))
                    .collect();
                assert_eq!(got, want, "seed {seed}");
            }
            store.process_edge(e).unwrap();
            log.push(e.clone());
        }
    }
}

#[test]
fn baseline_matches_snapshot_store_and_persistent_history() {
    for seed in 400..420u64 {
        let profile = StreamProfile::standard(350, 14);
        let stream = gen_stream(seed, &profile);
        let ids = universe_ids(profile.universe);
        let mut snap = SnapshotStore::new(8, 8, MurmurHasher::new()).unwrap();
        let mut pers = PersistentStore::new(8, 8, MurmurHasher::new(), None).unwrap();
        let mut base = BaselineAdjList::new();
        let mut seen = BTreeSet::new();
        for e in &stream {
            let a = snap.process_edge(e).unwrap();
            pers.process_edge(e).unwrap();
            let b = base.ingest(e).unwrap();
            assert_eq!(a, b, "outcome divergence at {e:?}");
            seen.insert(e.key.clone());
        }
        assert_eq!(base.live_edge_count(), snap.live_edge_count());
        assert_eq!(base.live_vertex_count(), snap.live_vertex_count());
        for key in &seen {
            assert_eq!(
                base.edge_query(&key.src, &key.dst),
                snap.edge_query(&key.src, &key.dst)
            );
            assert_eq!(
                base.edge_history(key),
                pers.edge_history(&key.src, &key.dst)
            );
        }
        for id in &ids {
            assert_eq!(base.vertex_query(id), snap.vertex_query(id));
            let mut a = base.successors(id);
            let mut b = snap.successors(id);
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Arbitrary short event sequences (absolute-time sorted) keep the
    /// snapshot store in lockstep with the oracle.
    #[test]
    fn snapshot_oracle_equivalence_prop(
        raw in prop::collection::vec((0u8..6, 0u8..6, 0u64..40, -3i64..4), 1..120)
    ) {
        let mut events: Vec<StreamEdge> = raw
            .into_iter()
            .map(|(a, b, t, w)| {
                StreamEdge::new(format!("p{a}").as_str(), format!("p{b}").as_str(), t, w)
            })
            .collect();
        events.sort_by_key(|e| e.t);
        let mut store = SnapshotStore::new(4, 4, MurmurHasher::new()).unwrap();
        let mut oracle = OracleGraph::new(None);
        let mut seen = BTreeSet::new();
        for e in &events {
            store.process_edge(e).unwrap();
            oracle.push(e.clone());
            seen.insert(e.key.clone());
        }
        store.audit().unwrap_or_else(|v| panic!("audit: {v:?}"));
        let t = events.last().map_or(0, |e| e.t);
        let snap = oracle.snapshot_at(t);
        prop_assert_eq!(store.live_edge_count(), snap.live_edge_count());
        for key in &seen {
            prop_assert_eq!(store.edge_query(&key.src, &key.dst), snap.edge_query(key));
        }
        for a in 0u8..6 {
            let id = VertexId::from(format!("p{a}").as_str());
            prop_assert_eq!(store.successors(&id), snap.successors(&id));
            prop_assert_eq!(store.vertex_query(&id), snap.vertex_query(&id));
        }
    }

    /// Windowed replay with arbitrary window shapes never desyncs from
    /// the reference simulator.
    #[test]
    fn windowed_persistent_equivalence_prop(
        raw in prop::collection::vec((0u8..5, 0u8..5, 0u64..3, -2i64..3), 1..100),
        window_len in 8u64..30,
        slide in 1u64..7,
    ) {
        prop_assume!(slide < window_len);
        let mut t = 0u64;
        let events: Vec<StreamEdge> = raw
            .into_iter()
            .map(|(a, b, dt, w)| {
                t += dt;
                StreamEdge::new(format!("p{a}").as_str(), format!("p{b}").as_str(), t, w)
            })
            .collect();
        let window = WindowConfig::new(window_len, slide, 0).unwrap();
        let mut store = PersistentStore::new(2, 2, MurmurHasher::new(), Some(window)).unwrap();
        let mut oracle = PersistentOracle::new(Some(window));
        for e in &events {
            while e.t > store.current_window_end().unwrap() {
                store.slide_window().unwrap();
                oracle.slide().unwrap();
            }
            store.process_edge(e).unwrap();
            oracle.push(e);
        }
        store.audit().unwrap_or_else(|v| panic!("audit: {v:?}"));
        prop_assert_eq!(store.live_occurrences(), oracle.live_occurrences());
        for a in 0u8..5 {
            let id = VertexId::from(format!("p{a}").as_str());
            prop_assert_eq!(store.vertex_query(&id), oracle.vertex_query(&id));
            prop_assert_eq!(store.successors_latest(&id), oracle.successors_latest(&id));
        }
    }
}
