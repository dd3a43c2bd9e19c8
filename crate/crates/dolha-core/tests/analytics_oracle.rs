//! Analytics operations checked against independent brute-force oracles:
//! triangle enumeration, candidate filters, injective-map enumeration
//! for pattern matching, and interval soundness/maximality.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{gen_stream, SplitMix64, StreamProfile};
use dolha_core::analytics::{
    continuous_triangles, extract_candidate, extract_candidate_store, match_on_candidate,
    pattern_match, structure_time_query, CandidateSubgraph, Interval, PatternGraph, Triangle,
};
use dolha_core::oracle::PersistentOracle;
use dolha_core::{
    EdgeKey, MurmurHasher, PersistentStore, SnapshotStore, StreamEdge, Timestamp, VertexId, Weight,
};

fn brute_force_triangles(edges: &BTreeSet<(VertexId, VertexId)>) -> BTreeSet<Triangle> {
    let mut out = BTreeSet::new();
    for (a, b) in edges {
        if a == b {
            continue;
        }
        for (b2, c) in edges {
            if b2 != b || c == a || c == b {
                continue;
            }
            if edges.contains(&(c.clone(), a.clone())) {
                out.insert(Triangle::from_cycle(a.clone(), b.clone(), c.clone()));
            }
        }
    }
    out
}

#[test]
fn continuous_triangle_union_equals_brute_force() {
    // Insertion-only random graphs across a density sweep.
    for seed in 0..60u64 {
        let mut rng = SplitMix64(seed * 77 + 3);
        let n = 5 + rng.below(30);
        let events = 10 + rng.below(3 * n);
        let mut stream = Vec::new();
        let mut keys = BTreeSet::new();
        for i in 0..events {
            let a = rng.below(n);
            let b = rng.below(n);
            let key = EdgeKey::new(format!("g{a}").as_str(), format!("g{b}").as_str());
            keys.insert((key.src.clone(), key.dst.clone()));
            stream.push(StreamEdge {
                key,
                t: i + 1,
                w: 1,
            });
        }
        let mut store = SnapshotStore::new(4, 4, MurmurHasher::new()).unwrap();
        let reports = continuous_triangles(&mut store, &stream).unwrap();
        let union: BTreeSet<Triangle> = reports.into_iter().flatten().collect();
        assert_eq!(union, brute_force_triangles(&keys), "seed {seed}");
        store.audit().unwrap_or_else(|v| panic!("audit: {v:?}"));
    }
}

fn full_history_pair(
    seed: u64,
    events: usize,
    universe: u64,
) -> (PersistentStore<MurmurHasher>, PersistentOracle) {
    let stream = gen_stream(seed, &StreamProfile::standard(events, universe));
    let mut store = PersistentStore::new(4, 4, MurmurHasher::new(), None).unwrap();
    let mut oracle = PersistentOracle::new(None);
    for e in &stream {
        store.process_edge(e).unwrap();
        oracle.push(e);
    }
    (store, oracle)
}

/// The documented candidate filter, from the oracle's occurrence lists:
/// per key, the latest stored occurrence within range, kept if its
/// cumulative weight is positive.
fn oracle_candidate(
    oracle: &PersistentOracle,
    t_lo: Timestamp,
    t_hi: Timestamp,
) -> BTreeMap<EdgeKey, (Weight, Timestamp)> {
    let mut out = BTreeMap::new();
    for key in oracle.keys() {
        let in_range: Vec<(Timestamp, Weight)> = oracle
            .edge_history(key)
            .into_iter()
            .filter(|&(t, _)| t_lo <= t && t <= t_hi)
            .collect();
        if let Some(&(t, w)) = in_range.last() {
            if w > 0 {
                out.insert(key.clone(), (w, t));
            }
        }
    }
    out
}

#[test]
fn candidate_extraction_matches_oracle_filter() {
    for seed in 0..30u64 {
        let (store, oracle) = full_history_pair(seed, 300, 14);
        let t_max = store.last_timestamp().unwrap_or(0);
        let mut rng = SplitMix64(seed + 999);
        for _ in 0..8 {
            let a = rng.below(t_max + 2);
            let b = rng.below(t_max + 2);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let got: BTreeMap<EdgeKey, (Weight, Timestamp)> = extract_candidate(&store, lo, hi)
                .unwrap()
                .edges()
                .into_iter()
                .map(|(k, w, t)| (k, (w, t)))
                .collect();
            assert_eq!(
                got,
                oracle_candidate(&oracle, lo, hi),
                "seed {seed} range ({lo},{hi})"
            );
        }
    }
}

#[test]
fn candidate_store_equals_candidate_adjacency_on_random_ranges() {
    let mut rng = SplitMix64(4242);
    let mut checked = 0;
    for seed in 0..20u64 {
        let (store, _) = full_history_pair(seed, 250, 12);
        let t_max = store.last_timestamp().unwrap_or(0);
        for _ in 0..5 {
            let a = rng.below(t_max + 2);
            let b = rng.below(t_max + 2);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let adj = extract_candidate(&store, lo, hi).unwrap();
            let snap = extract_candidate_store(&store, lo, hi).unwrap();
            snap.audit().unwrap_or_else(|v| panic!("audit: {v:?}"));
            let a_set: BTreeSet<EdgeKey> = adj.edges().into_iter().map(|(k, _, _)| k).collect();
            let s_set: BTreeSet<EdgeKey> = snap
                .live_edges()
                .into_iter()
                .map(|(s, d, _, _)| EdgeKey { src: s, dst: d })
                .collect();
            assert_eq!(a_set, s_set);
            for (k, w, t) in adj.edges() {
                assert_eq!(snap.edge_query(&k.src, &k.dst), Some((w, t)));
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 100);
}

/// Exhaustive injective-map enumeration: the ground truth for the
/// backtracking matcher.
fn brute_force_embeddings(g: &CandidateSubgraph, pattern: &PatternGraph) -> BTreeSet<Vec<usize>> {
    let pn = pattern.vertex_count();
    let dn = g.vertex_count();
    let mut results = BTreeSet::new();
    let mut assignment = vec![usize::MAX; pn];
    fn rec(
        g: &CandidateSubgraph,
        pattern: &PatternGraph,
        pv: usize,
        assignment: &mut Vec<usize>,
        results: &mut BTreeSet<Vec<usize>>,
        dn: usize,
    ) {
        let pn = pattern.vertex_count();
        if pv == pn {
            for &(a, b) in pattern.pattern_edges() {
                if !g.contains_edge(assignment[a], assignment[b]) {
                    return;
                }
            }
            results.insert(assignment.clone());
            return;
        }
        // Wildcard labels only: the generated patterns below never pin a
        // data vertex, so no label check is needed here.
        for dv in 0..dn {
            if assignment[..pv].contains(&dv) {
                continue;
            }
            assignment[pv] = dv;
            rec(g, pattern, pv + 1, assignment, results, dn);
            assignment[pv] = usize::MAX;
        }
    }
    rec(g, pattern, 0, &mut assignment, &mut results, dn);
    results
}

#[test]
fn pattern_matcher_agrees_with_exhaustive_enumeration() {
    let mut rng = SplitMix64(77);
    for seed in 0..40u64 {
        // A small candidate graph: build a full-history store from a
        // short positive stream and take a wide window.
        let stream = gen_stream(
            seed,
            &StreamProfile {
                events: 14,
                universe: 6,
                repeat_pct: 10,
                negative_pct: 0,
            },
        );
        let mut store = PersistentStore::new(4, 4, MurmurHasher::new(), None).unwrap();
        for e in &stream {
            store.process_edge(e).unwrap();
        }
        let candidate = extract_candidate(&store, 0, u64::MAX).unwrap();
        if candidate.edge_count() == 0 || candidate.edge_count() > 12 {
            continue;
        }
        // Random connected pattern with 2..4 vertices.
        let pn = 2 + rng.below(3) as usize;
        let mut text = String::new();
        for i in 0..pn {
            text.push_str(&format!("vertex q{i} *\n"));
        }
        let mut edges = Vec::new();
        for i in 1..pn {
            // connect to an earlier vertex (keeps it connected)
            let j = rng.below(i as u64) as usize;
            if rng.below(2) == 0 {
                edges.push((i, j));
            } else {
                edges.push((j, i));
            }
        }
        if pn >= 3 && rng.below(2) == 0 {
            edges.push((0, pn - 1));
        }
        for (a, b) in &edges {
            text.push_str(&format!("edge q{a} q{b}\n"));
        }
        text.push_str("window 0 99999\n");
        let pattern = PatternGraph::parse(&text).unwrap();

        let got = match_on_candidate(&candidate, &pattern);
        let want = brute_force_embeddings(&candidate, &pattern);
        let got_as_indices: BTreeSet<Vec<usize>> = got
            .iter()
            .map(|emb| {
                (0..pn)
                    .map(|i| candidate.vertex_index(&emb[&format!("q{i}")]).unwrap())
                    .collect()
            })
            .collect();
        assert_eq!(got_as_indices, want, "seed {seed} pattern:\n{text}");
    }
}

#[test]
fn embeddings_recheck_edge_by_edge_against_the_store() {
    for seed in 0..12u64 {
        let stream = gen_stream(seed + 500, &StreamProfile::standard(150, 10));
        let mut store = PersistentStore::new(4, 4, MurmurHasher::new(), None).unwrap();
        for e in &stream {
            store.process_edge(e).unwrap();
        }
        let t_hi = store.last_timestamp().unwrap_or(1);
        let t_lo = t_hi / 3;
        if t_lo >= t_hi {
            continue;
        }
        let pattern = PatternGraph::parse(&format!(
            "vertex a *\nvertex b *\nvertex c *\nedge a b\nedge b c\nwindow {t_lo} {t_hi}\n"
        ))
        .unwrap();
        let found = pattern_match(&store, &pattern).unwrap();
        for emb in &found {
            // Injectivity.
            let distinct: BTreeSet<&VertexId> = emb.values().collect();
            assert_eq!(distinct.len(), 3);
            // Every pattern edge maps to a live in-range latest edge.
            for (s, d) in [(&emb["a"], &emb["b"]), (&emb["b"], &emb["c"])] {
                let in_range: Vec<(Timestamp, Weight)> = store
                    .edge_history(s, d)
                    .into_iter()
                    .filter(|&(t, _)| t_lo <= t && t <= t_hi)
                    .collect();
                let &(t, w) = in_range.last().expect("no in-range occurrence");
                assert!(w > 0, "edge {s}->{d} not positive in range");
                assert!(t_lo <= t && t <= t_hi);
            }
        }
    }
}

/// Interval soundness and maximality against oracle-replayed cumulative
/// weights.
#[test]
fn time_query_intervals_are_sound_and_maximal() {
    for seed in 0..30u64 {
        let (store, oracle) = full_history_pair(seed + 40, 260, 10);
        let keys: Vec<EdgeKey> = oracle.keys().take(3).cloned().collect();
        if keys.is_empty() {
            continue;
        }
        let got = structure_time_query(&store, &keys).unwrap();

        // Per-key cumulative series from the oracle.
        let series: Vec<Vec<(Timestamp, Weight)>> =
            keys.iter().map(|k| oracle.edge_history(k)).collect();
        let alive_at = |tau: Timestamp| -> bool {
            series.iter().all(|s| {
                s.iter()
                    .rev()
                    .find(|&&(t, _)| t <= tau)
                    .is_some_and(|&(_, w)| w > 0)
            })
        };
        let mut q_times: Vec<Timestamp> = series.iter().flatten().map(|&(t, _)| t).collect();
        q_times.sort();
        q_times.dedup();

        // Soundness: every q-occurrence timestamp inside an interval is
        // all-alive, and interval endpoints are q-occurrence timestamps.
        for iv in &got {
            assert!(q_times.binary_search(&iv.start).is_ok());
            assert!(q_times.binary_search(&iv.end).is_ok());
            for &tau in q_times.iter().filter(|&&t| iv.start <= t && t <= iv.end) {
                assert!(alive_at(tau), "seed {seed}: dead at {tau} inside {iv}");
            }
        }
        // Maximality: the adjacent q-occurrence before the start and
        // after the end (when they exist) are not all-alive.
        for iv in &got {
            if let Some(&prev) = q_times.iter().rev().find(|&&t| t < iv.start) {
                assert!(!alive_at(prev), "seed {seed}: {iv} extends left");
            }
            if let Some(&next) = q_times.iter().find(|&&t| t > iv.end) {
                assert!(!alive_at(next), "seed {seed}: {iv} extends right");
            }
        }
        // Completeness: every all-alive q-occurrence timestamp falls in
        // some returned interval.
        for &tau in &q_times {
            if alive_at(tau) {
                assert!(
                    got.iter().any(|iv| iv.start <= tau && tau <= iv.end),
                    "seed {seed}: alive {tau} not covered"
                );
            }
        }
        // Intervals are disjoint and ordered.
        for pair in got.windows(2) {
            assert!(pair[0].end < pair[1].start);
        }
        let _ = Interval { start: 0, end: 0 };
    }
}

#[test]
fn candidate_extraction_works_after_window_slides() {
    use dolha_core::WindowConfig;
    for seed in 0..15u64 {
        let stream = gen_stream(seed + 900, &StreamProfile::standard(300, 12));
        let window = WindowConfig::new(60, 20, 0).unwrap();
        let mut store = PersistentStore::new(4, 4, MurmurHasher::new(), Some(window)).unwrap();
        let mut oracle = PersistentOracle::new(Some(window));
        for e in &stream {
            while store.current_window_end().is_some_and(|end| e.t > end) {
                store.slide_window().unwrap();
                oracle.slide().unwrap();
            }
            store.process_edge(e).unwrap();
            oracle.push(e);
        }
        let t_max = store.last_timestamp().unwrap_or(0);
        let mut rng = SplitMix64(seed + 31);
        for _ in 0..6 {
            let a = rng.below(t_max + 2);
            let b = rng.below(t_max + 2);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let got: BTreeMap<EdgeKey, (Weight, Timestamp)> = extract_candidate(&store, lo, hi)
                .unwrap()
                .edges()
                .into_iter()
                .map(|(k, w, t)| (k, (w, t)))
                .collect();
            assert_eq!(
                got,
                oracle_candidate(&oracle, lo, hi),
                "seed {seed} range ({lo},{hi}) after {} slides",
                store.window_ordinal()
            );
        }
        store.audit().unwrap_or_else(|v| panic!("audit: {v:?}"));
    }
}
