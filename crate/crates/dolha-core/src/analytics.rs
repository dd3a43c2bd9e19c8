//! Graph algorithms over the two stores: continuous directed-triangle
//! finding, candidate-subgraph extraction for time-constrained pattern
//! queries, subgraph isomorphism matching, and structure-constrained
//! time queries.
//!
//! Everything here is read-only with respect to the stores; per-query
//! scratch mark sets replace the in-cell flags a mutating formulation
//! would need, so reads stay safe to run concurrently.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::hash::GraphHasher;
use crate::model::{EdgeKey, StreamEdge, Timestamp, VertexId, Weight};
use crate::persistent::PersistentStore;
use crate::snapshot::SnapshotStore;
use crate::vertex_arena::NIL;

/// A directed 3-cycle `a -> b -> c -> a`, stored in its canonical
/// rotation: `a` is the lexicographically smallest corner. Cycles over
/// fewer than three distinct vertices are not triangles.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triangle {
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
}

impl Triangle {
    /// Canonicalizes the cycle `u -> v -> j -> u`.
    pub fn from_cycle(u: VertexId, v: VertexId, j: VertexId) -> Self {
        if u <= v && u <= j {
            Triangle { a: u, b: v, c: j }
        } else if v <= u && v <= j {
            Triangle { a: v, b: j, c: u }
        } else {
            Triangle { a: j, b: u, c: v }
        }
    }

    /// The three edges of the cycle.
    pub fn edges(&self) -> [EdgeKey; 3] {
        [
            EdgeKey::new(self.a.clone(), self.b.clone()),
            EdgeKey::new(self.b.clone(), self.c.clone()),
            EdgeKey::new(self.c.clone(), self.a.clone()),
        ]
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}>{}", self.a, self.b, self.c)
    }
}

/// All directed triangles through the live edge `src -> dst`, found by
/// iterating the smaller of `src`'s precursor set and `dst`'s successor
/// set and probing the closing edge. Absent edges yield the empty set.
pub fn triangles_for_edge<H: GraphHasher>(
    store: &SnapshotStore<H>,
    src: &VertexId,
    dst: &VertexId,
) -> BTreeSet<Triangle> {
    let mut out = BTreeSet::new();
    // A triangle has three distinct corners, so self-loops close nothing.
    if src == dst || store.edge_query(src, dst).is_none() {
        return out;
    }
    let d_in_src = store.vertex_query(src).map_or(0, |s| s.d_in);
    let d_out_dst = store.vertex_query(dst).map_or(0, |s| s.d_out);
    if d_in_src <= d_out_dst {
        for (j, _, _) in store.precursors(src) {
            if j != *src && j != *dst && store.edge_query(dst, &j).is_some() {
                out.insert(Triangle::from_cycle(src.clone(), dst.clone(), j));
            }
        }
    } else {
        for (j, _, _) in store.successors(dst) {
            if j != *src && j != *dst && store.edge_query(&j, src).is_some() {
                out.insert(Triangle::from_cycle(src.clone(), dst.clone(), j));
            }
        }
    }
    out
}

/// Ingests a stream event by event, reporting after each one the
/// triangles the event participates in. Events that leave no live cell
/// (deletions, discards) report the empty set.
pub fn continuous_triangles<H: GraphHasher>(
    store: &mut SnapshotStore<H>,
    events: &[StreamEdge],
) -> Result<Vec<BTreeSet<Triangle>>, Error> {
    use crate::snapshot::SnapshotOutcome::{Inserted, Updated};
    let mut reports = Vec::with_capacity(events.len());
    for e in events {
        let outcome = store.process_edge(e)?;
        let tris = if matches!(outcome, Inserted | Updated) {
            triangles_for_edge(store, &e.key.src, &e.key.dst)
        } else {
            BTreeSet::new()
        };
        reports.push(tris);
    }
    Ok(reports)
}

/// The candidate subgraph of a time range: for every key whose latest
/// in-range occurrence has positive cumulative weight, that occurrence's
/// edge, organized as per-vertex adjacency lists.
#[derive(Debug, Clone, Default)]
pub struct CandidateSubgraph {
    vertices: Vec<VertexId>,
    index: BTreeMap<VertexId, usize>,
    out: Vec<Vec<(usize, Weight, Timestamp)>>,
    inn: Vec<Vec<(usize, Weight, Timestamp)>>,
}

impl CandidateSubgraph {
    fn intern(&mut self, id: &VertexId) -> usize {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.vertices.len();
        self.vertices.push(id.clone());
        self.index.insert(id.clone(), i);
        self.out.push(Vec::new());
        self.inn.push(Vec::new());
        i
    }

    fn add_edge(&mut self, src: &VertexId, dst: &VertexId, w: Weight, t: Timestamp) {
        let s = self.intern(src);
        let d = self.intern(dst);
        self.out[s].push((d, w, t));
        self.inn[d].push((s, w, t));
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|l| l.len()).sum()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex_index(&self, id: &VertexId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn vertex_id(&self, i: usize) -> &VertexId {
        &self.vertices[i]
    }

    pub fn out_neighbors(&self, i: usize) -> &[(usize, Weight, Timestamp)] {
        &self.out[i]
    }

    pub fn in_neighbors(&self, i: usize) -> &[(usize, Weight, Timestamp)] {
        &self.inn[i]
    }

    pub fn contains_edge(&self, src: usize, dst: usize) -> bool {
        self.out[src].iter().any(|&(d, _, _)| d == dst)
    }

    /// Every candidate edge with its annotation, in insertion
    /// (chronological) order.
    pub fn edges(&self) -> Vec<(EdgeKey, Weight, Timestamp)> {
        let mut rows: Vec<(Timestamp, EdgeKey, Weight)> = Vec::new();
        for (s, list) in self.out.iter().enumerate() {
            for &(d, w, t) in list {
                rows.push((
                    t,
                    EdgeKey::new(self.vertices[s].clone(), self.vertices[d].clone()),
                    w,
                ));
            }
        }
        rows.sort();
        rows.into_iter().map(|(t, k, w)| (k, w, t)).collect()
    }
}

/// Logical buffer bounds of the occurrences with `t_lo <= t <= t_hi`:
/// binary searches over the chronological span.
fn range_bounds<H: GraphHasher>(
    store: &PersistentStore<H>,
    t_lo: Timestamp,
    t_hi: Timestamp,
) -> (u32, u32) {
    let len = store.logical_len();
    let mut lo = 0u32;
    let mut hi = len;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if store.occurrence(store.physical(mid)).t < t_lo {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    let first = lo;
    let mut past = first;
    let mut hi = len;
    while past < hi {
        let mid = past + (hi - past) / 2;
        if store.occurrence(store.physical(mid)).t <= t_hi {
            past = mid + 1;
        } else {
            hi = mid;
        }
    }
    (first, past)
}

/// Walks the in-range slice of the buffer newest-first, suppressing
/// superseded occurrences through their time travel links, and emits the
/// surviving positive edges. Scratch marks live in a per-query set; the
/// store is never touched.
fn candidate_edges<H: GraphHasher>(
    store: &PersistentStore<H>,
    t_lo: Timestamp,
    t_hi: Timestamp,
) -> Result<Vec<(VertexId, VertexId, Weight, Timestamp)>, Error> {
    if t_lo > t_hi {
        return Err(Error::InvalidRange {
            start: t_lo,
            end: t_hi,
        });
    }
    let (first, last) = range_bounds(store, t_lo, t_hi);
    let mut superseded = vec![false; store.edge_capacity()];
    let mut edges = Vec::new();
    for j in (first..last).rev() {
        let p = store.physical(j);
        let cell = store.occurrence(p);
        if !cell.is_live() || superseded[p as usize] {
            continue;
        }
        let mut older = cell.time_prev;
        while older != NIL {
            superseded[older as usize] = true;
            older = store.occurrence(older).time_prev;
        }
        if cell.w > 0 {
            edges.push((
                store.vertex_id_of(cell.src).clone(),
                store.vertex_id_of(cell.dst).clone(),
                cell.w,
                cell.t,
            ));
        }
    }
    edges.reverse();
    Ok(edges)
}

/// Builds the candidate subgraph of `(t_lo, t_hi)` as adjacency lists.
/// Cost is O(log S) for the bounds plus the occurrence count in range.
pub fn extract_candidate<H: GraphHasher>(
    store: &PersistentStore<H>,
    t_lo: Timestamp,
    t_hi: Timestamp,
) -> Result<CandidateSubgraph, Error> {
    let mut g = CandidateSubgraph::default();
    for (src, dst, w, t) in candidate_edges(store, t_lo, t_hi)? {
        g.add_edge(&src, &dst, w, t);
    }
    Ok(g)
}

/// Builds the candidate subgraph of `(t_lo, t_hi)` as a fresh snapshot
/// store sized to the in-range occurrence count. All snapshot invariants
/// hold on the result; the caller owns it.
pub fn extract_candidate_store<H: GraphHasher + Clone>(
    store: &PersistentStore<H>,
    t_lo: Timestamp,
    t_hi: Timestamp,
) -> Result<SnapshotStore<H>, Error> {
    let edges = candidate_edges(store, t_lo, t_hi)?;
    let (first, last) = range_bounds(store, t_lo, t_hi);
    let size = ((last - first) as usize).max(1);
    let mut snap = SnapshotStore::new(size, size, store.hasher().clone())?;
    for (src, dst, w, t) in edges {
        snap.process_edge(&StreamEdge {
            key: EdgeKey { src, dst },
            t,
            w,
        })?;
    }
    Ok(snap)
}

/// Why a pattern text failed to parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for PatternParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pattern line {}: {}", self.line, self.message)
    }
}

impl core::error::Error for PatternParseError {}

/// A labeled directed pattern with a time window. Labels are matched
/// against data-vertex ids (`*` is the wildcard); the window restricts
/// candidate edges to `t_lo <= t <= t_hi`.
#[derive(Debug, Clone)]
pub struct PatternGraph {
    names: Vec<String>,
    labels: Vec<Option<VertexId>>,
    edges: Vec<(usize, usize)>,
    pub window: (Timestamp, Timestamp),
}

impl PatternGraph {
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn pattern_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Parses the pattern text format: `vertex NAME LABEL` (label `*`
    /// for wildcard), `edge NAME NAME`, and one `window T T'` line.
    pub fn parse(text: &str) -> Result<Self, PatternParseError> {
        let mut names: Vec<String> = Vec::new();
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        let mut window = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fail = |message: &str| PatternParseError {
                line: idx + 1,
                message: message.into(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["vertex", name, label] => {
                    if names.iter().any(|n| n == name) {
                        return Err(fail("duplicate vertex name"));
                    }
                    names.push(String::from(*name));
                    labels.push(if *label == "*" {
                        None
                    } else {
                        Some(VertexId::from(*label))
                    });
                }
                ["edge", a, b] => {
                    let pos = |n: &str| names.iter().position(|x| x == n);
                    let (Some(a), Some(b)) = (pos(a), pos(b)) else {
                        return Err(fail("edge references unknown vertex"));
                    };
                    // E(P) is a set; repeated lines are the same edge.
                    if !edges.contains(&(a, b)) {
                        edges.push((a, b));
                    }
                }
                ["window", lo, hi] => {
                    if window.is_some() {
                        return Err(fail("duplicate window line"));
                    }
                    let lo: Timestamp = lo.parse().map_err(|_| fail("invalid window start"))?;
                    let hi: Timestamp = hi.parse().map_err(|_| fail("invalid window end"))?;
                    if lo >= hi {
                        return Err(fail("window start must be below its end"));
                    }
                    window = Some((lo, hi));
                }
                _ => return Err(fail("expected `vertex`, `edge`, or `window` line")),
            }
        }
        let window = window.ok_or(PatternParseError {
            line: 0,
            message: "missing window line".into(),
        })?;
        if names.is_empty() {
            return Err(PatternParseError {
                line: 0,
                message: "pattern needs at least one vertex".into(),
            });
        }
        let p = PatternGraph {
            names,
            labels,
            edges,
            window,
        };
        if !p.is_connected() {
            return Err(PatternParseError {
                line: 0,
                message: "pattern must be connected".into(),
            });
        }
        Ok(p)
    }

    fn is_connected(&self) -> bool {
        let n = self.names.len();
        if n <= 1 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    stack.push(u);
                }
            }
        }
        reached == n
    }
}

/// One embedding: pattern vertex name to data vertex.
pub type Embedding = BTreeMap<String, VertexId>;

/// All label-respecting injective embeddings of the pattern into the
/// candidate subgraph of its window: backtracking search ordered by
/// ascending candidate-set size with adjacency-consistency pruning.
pub fn pattern_match<H: GraphHasher>(
    store: &PersistentStore<H>,
    pattern: &PatternGraph,
) -> Result<BTreeSet<Embedding>, Error> {
    let candidate = extract_candidate(store, pattern.window.0, pattern.window.1)?;
    Ok(match_on_candidate(&candidate, pattern))
}

/// The matcher itself, usable on any pre-built candidate subgraph.
pub fn match_on_candidate(g: &CandidateSubgraph, pattern: &PatternGraph) -> BTreeSet<Embedding> {
    let pn = pattern.vertex_count();
    let dn = g.vertex_count();
    let mut results = BTreeSet::new();
    if pn > dn {
        return results;
    }
    // Per-pattern-vertex degree requirements.
    let mut p_out = vec![0usize; pn];
    let mut p_in = vec![0usize; pn];
    for &(a, b) in &pattern.edges {
        p_out[a] += 1;
        p_in[b] += 1;
    }
    // Candidate sets with label and degree pruning.
    let mut cands: Vec<Vec<usize>> = Vec::with_capacity(pn);
    for pv in 0..pn {
        let mut set = Vec::new();
        for dv in 0..dn {
            let label_ok = match &pattern.labels[pv] {
                None => true,
                Some(want) => g.vertex_id(dv) == want,
            };
            if label_ok
                && g.out_neighbors(dv).len() >= p_out[pv]
                && g.in_neighbors(dv).len() >= p_in[pv]
            {
                set.push(dv);
            }
        }
        if set.is_empty() {
            return results;
        }
        cands.push(set);
    }
    // Search order: smallest candidate set first, then grow along
    // pattern adjacency, preferring small candidate sets.
    let mut adj = vec![BTreeSet::new(); pn];
    for &(a, b) in &pattern.edges {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let mut order: Vec<usize> = Vec::with_capacity(pn);
    let mut placed = vec![false; pn];
    while order.len() < pn {
        let next = (0..pn)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| {
                let connected = order.iter().any(|&o| adj[o].contains(&v));
                (
                    if connected || order.is_empty() { 0 } else { 1 },
                    cands[v].len(),
                    v,
                )
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }

    let mut assignment = vec![usize::MAX; pn];
    let mut used = vec![false; dn];
    backtrack(
        g,
        pattern,
        &cands,
        &order,
        0,
        &mut assignment,
        &mut used,
        &mut results,
    );
    results
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    g: &CandidateSubgraph,
    pattern: &PatternGraph,
    cands: &[Vec<usize>],
    order: &[usize],
    depth: usize,
    assignment: &mut Vec<usize>,
    used: &mut Vec<bool>,
    results: &mut BTreeSet<Embedding>,
) {
    if depth == order.len() {
        let mut emb = Embedding::new();
        for (pv, &dv) in assignment.iter().enumerate() {
            emb.insert(pattern.names()[pv].clone(), g.vertex_id(dv).clone());
        }
        results.insert(emb);
        return;
    }
    let pv = order[depth];
    'cand: for &dv in &cands[pv] {
        if used[dv] {
            continue;
        }
        // Adjacency consistency against already-assigned neighbors.
        for &(a, b) in &pattern.edges {
            if a == pv && assignment[b] != usize::MAX && !g.contains_edge(dv, assignment[b]) {
                continue 'cand;
            }
            if b == pv && assignment[a] != usize::MAX && !g.contains_edge(assignment[a], dv) {
                continue 'cand;
            }
        }
        assignment[pv] = dv;
        used[dv] = true;
        backtrack(
            g,
            pattern,
            cands,
            order,
            depth + 1,
            assignment,
            used,
            results,
        );
        assignment[pv] = usize::MAX;
        used[dv] = false;
    }
}

/// A maximal period during which every query edge stayed positive:
/// endpoints are timestamps of actual query-edge occurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    pub start: Timestamp,
    pub end: Timestamp,
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.start, self.end)
    }
}

/// The maximal intervals during which every key in `q` simultaneously
/// has positive cumulative weight. Each key's alive spans come from its
/// time travel list; the sweep closes an interval at the last
/// all-positive occurrence timestamp and emits a still-open interval at
/// walk end.
pub fn structure_time_query<H: GraphHasher>(
    store: &PersistentStore<H>,
    q: &[EdgeKey],
) -> Result<Vec<Interval>, Error> {
    if q.is_empty() {
        return Err(Error::EmptyQuery);
    }
    for (i, key) in q.iter().enumerate() {
        if q[..i].contains(key) {
            return Err(Error::DuplicateQueryKey(alloc::format!("{key}")));
        }
    }
    let mut events: Vec<(Timestamp, usize, Weight)> = Vec::new();
    for (ki, key) in q.iter().enumerate() {
        let history = store.edge_history(&key.src, &key.dst);
        if history.is_empty() {
            // A key that never appears is never alive; no interval can
            // exist.
            return Ok(Vec::new());
        }
        for (t, w) in history {
            events.push((t, ki, w));
        }
    }
    events.sort_by_key(|&(t, _, _)| t);

    let mut current: Vec<Option<Weight>> = vec![None; q.len()];
    let mut open: Option<Interval> = None;
    let mut out = Vec::new();
    let mut i = 0;
    while i < events.len() {
        let t = events[i].0;
        while i < events.len() && events[i].0 == t {
            current[events[i].1] = Some(events[i].2);
            i += 1;
        }
        let all_alive = current.iter().all(|w| matches!(w, Some(w) if *w > 0));
        if all_alive {
            match &mut open {
                Some(iv) => iv.end = t,
                None => open = Some(Interval { start: t, end: t }),
            }
        } else if let Some(iv) = open.take() {
            out.push(iv);
        }
    }
    if let Some(iv) = open.take() {
        out.push(iv);
    }
    Ok(out)
}
