//! The snapshot store: exact latest-graph state with O(1) per-event
//! ingest.
//!
//! Four flat tables hold the graph: a vertex hash table and vertex table
//! (shared arena), an edge hash table, and an edge table. Every live edge
//! cell sits on two Dolls — the doubly linked list of its source's
//! outgoing edges and of its destination's incoming edges — and both
//! lists are kept in chronological order by moving updated cells to the
//! tail. Keys whose accumulated weight drops to zero or below are deleted
//! outright, along with endpoint vertices whose Dolls both empty.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::error::Error;
use crate::hash::GraphHasher;
use crate::model::{StreamEdge, Timestamp, VertexId, Weight};
use crate::vertex_arena::{fmt_slot, VertexArena, NIL};

/// What a single ingested event did to the store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SnapshotOutcome {
    /// New key stored with positive weight.
    Inserted,
    /// Existing key updated; still positive.
    Updated,
    /// Existing key's total dropped to zero or below; cell removed.
    Deleted,
    /// Absent key with non-positive delta; nothing stored.
    Discarded,
}

/// Aggregates held in a vertex cell, maintained incrementally so vertex
/// queries stay O(1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexSummary {
    pub w_out: Weight,
    pub w_in: Weight,
    pub d_out: u32,
    pub d_in: u32,
}

#[derive(Debug, Clone)]
struct EdgeCell {
    src: u32,
    dst: u32,
    w: Weight,
    t: Timestamp,
    out_prev: u32,
    out_next: u32,
    in_prev: u32,
    in_next: u32,
    chain_next: u32,
}

impl EdgeCell {
    fn vacant() -> Self {
        EdgeCell {
            src: NIL,
            dst: NIL,
            w: 0,
            t: 0,
            out_prev: NIL,
            out_next: NIL,
            in_prev: NIL,
            in_next: NIL,
            chain_next: NIL,
        }
    }

    fn is_live(&self) -> bool {
        self.src != NIL
    }
}

/// Exact latest-snapshot streaming-graph store.
#[derive(Debug, Clone)]
pub struct SnapshotStore<H> {
    hasher: H,
    verts: VertexArena,
    edge_hash: Vec<u32>,
    edges: Vec<EdgeCell>,
    cursor: u32,
    free: Vec<u32>,
    live_edges: usize,
    last_t: Option<Timestamp>,
}

impl<H: GraphHasher> SnapshotStore<H> {
    /// Creates an empty store with `m_v` vertex slots and `m_e` edge
    /// slots. Tables double in capacity when full.
    pub fn new(m_v: usize, m_e: usize, hasher: H) -> Result<Self, Error> {
        Self::build(m_v, m_e, hasher, true)
    }

    /// Like [`SnapshotStore::new`] but running out of slots is an error
    /// instead of a growth trigger.
    pub fn with_fixed_capacity(m_v: usize, m_e: usize, hasher: H) -> Result<Self, Error> {
        Self::build(m_v, m_e, hasher, false)
    }

    fn build(m_v: usize, m_e: usize, hasher: H, growth: bool) -> Result<Self, Error> {
        if m_e == 0 {
            return Err(Error::ZeroCapacity);
        }
        Ok(SnapshotStore {
            hasher,
            verts: VertexArena::new(m_v, growth)?,
            edge_hash: vec![NIL; m_e],
            edges: vec![EdgeCell::vacant(); m_e],
            cursor: 0,
            free: Vec::new(),
            live_edges: 0,
            last_t: None,
        })
    }

    pub fn hasher(&self) -> &H {
        &self.hasher
    }

    pub fn live_edge_count(&self) -> usize {
        self.live_edges
    }

    pub fn live_vertex_count(&self) -> usize {
        self.verts.live
    }

    pub fn vertex_capacity(&self) -> usize {
        self.verts.capacity()
    }

    pub fn edge_capacity(&self) -> usize {
        self.edges.len()
    }

    /// Timestamp high-water mark of the ingested stream.
    pub fn last_timestamp(&self) -> Option<Timestamp> {
        self.last_t
    }

    pub fn is_edge_slot_vacant(&self, slot: usize) -> bool {
        self.edges.get(slot).is_none_or(|c| !c.is_live())
    }

    pub fn is_vertex_slot_vacant(&self, slot: usize) -> bool {
        slot >= self.verts.capacity() || !self.verts.cell(slot as u32).is_live()
    }

    fn edge_key_matches(&self, cell: &EdgeCell, src: &VertexId, dst: &VertexId) -> bool {
        let cs = self.verts.cell(cell.src).id.as_ref();
        let cd = self.verts.cell(cell.dst).id.as_ref();
        cs == Some(src) && cd == Some(dst)
    }

    fn lookup_edge(&self, src: &VertexId, dst: &VertexId) -> Option<u32> {
        let bucket = self.hasher.edge_index(src, dst, self.edge_hash.len());
        let mut slot = self.edge_hash[bucket];
        while slot != NIL {
            let cell = &self.edges[slot as usize];
            if self.edge_key_matches(cell, src, dst) {
                return Some(slot);
            }
            slot = cell.chain_next;
        }
        None
    }

    /// Absorbs one stream event. Timestamps must be non-decreasing over
    /// the life of the store.
    pub fn process_edge(&mut self, e: &StreamEdge) -> Result<SnapshotOutcome, Error> {
        if let Some(min) = self.last_t {
            if e.t < min {
                return Err(Error::OutOfOrder { t: e.t, min });
            }
        }
        let outcome = match self.lookup_edge(&e.key.src, &e.key.dst) {
            Some(slot) => self.update_existing(slot, e),
            None => {
                if e.w <= 0 {
                    SnapshotOutcome::Discarded
                } else {
                    self.insert_new(e)?
                }
            }
        };
        self.last_t = Some(e.t);
        Ok(outcome)
    }

    fn insert_new(&mut self, e: &StreamEdge) -> Result<SnapshotOutcome, Error> {
        let src_slot = self.verts.intern(&self.hasher, &e.key.src)?;
        let dst_slot = self.verts.intern(&self.hasher, &e.key.dst)?;
        let slot = match self.free.pop() {
            Some(s) => s,
            None => {
                if (self.cursor as usize) == self.edges.len() {
                    if !self.verts.growth {
                        return Err(Error::CapacityExhausted {
                            table: "edge",
                            capacity: self.edges.len(),
                        });
                    }
                    self.grow_edges();
                }
                let s = self.cursor;
                self.cursor += 1;
                s
            }
        };
        {
            let cell = &mut self.edges[slot as usize];
            debug_assert!(!cell.is_live());
            *cell = EdgeCell::vacant();
            cell.src = src_slot;
            cell.dst = dst_slot;
            cell.w = e.w;
            cell.t = e.t;
        }
        self.chain_push_edge(slot);
        self.out_append(src_slot, slot);
        self.in_append(dst_slot, slot);
        let sc = self.verts.cell_mut(src_slot);
        sc.w_out += e.w;
        sc.d_out += 1;
        let dc = self.verts.cell_mut(dst_slot);
        dc.w_in += e.w;
        dc.d_in += 1;
        self.live_edges += 1;
        Ok(SnapshotOutcome::Inserted)
    }

    fn update_existing(&mut self, slot: u32, e: &StreamEdge) -> SnapshotOutcome {
        let (src_slot, dst_slot, new_w) = {
            let cell = &mut self.edges[slot as usize];
            cell.w += e.w;
            cell.t = e.t;
            (cell.src, cell.dst, cell.w)
        };
        self.verts.cell_mut(src_slot).w_out += e.w;
        self.verts.cell_mut(dst_slot).w_in += e.w;
        self.out_unlink(src_slot, slot);
        self.in_unlink(dst_slot, slot);
        if new_w > 0 {
            // Re-append at the tails: chronological Dolls.
            self.out_append(src_slot, slot);
            self.in_append(dst_slot, slot);
            SnapshotOutcome::Updated
        } else {
            // Remove the non-positive residue from the aggregates so they
            // keep matching the fold over live cells.
            let sc = self.verts.cell_mut(src_slot);
            sc.w_out -= new_w;
            sc.d_out -= 1;
            let dc = self.verts.cell_mut(dst_slot);
            dc.w_in -= new_w;
            dc.d_in -= 1;
            self.delete_edge_cell(slot);
            self.reap_vertex(src_slot);
            if dst_slot != src_slot {
                self.reap_vertex(dst_slot);
            }
            SnapshotOutcome::Deleted
        }
    }

    /// Unchains and clears an edge cell that is already off both Dolls.
    fn delete_edge_cell(&mut self, slot: u32) {
        let (src_id, dst_id) = {
            let cell = &self.edges[slot as usize];
            (
                self.verts.cell(cell.src).id.as_ref().unwrap().clone(),
                self.verts.cell(cell.dst).id.as_ref().unwrap().clone(),
            )
        };
        let bucket = self
            .hasher
            .edge_index(&src_id, &dst_id, self.edge_hash.len());
        let next = self.edges[slot as usize].chain_next;
        if self.edge_hash[bucket] == slot {
            self.edge_hash[bucket] = next;
        } else {
            let mut cur = self.edge_hash[bucket];
            loop {
                debug_assert_ne!(cur, NIL, "edge missing from its collision chain");
                let cur_next = self.edges[cur as usize].chain_next;
                if cur_next == slot {
                    self.edges[cur as usize].chain_next = next;
                    break;
                }
                cur = cur_next;
            }
        }
        self.edges[slot as usize] = EdgeCell::vacant();
        self.free.push(slot);
        self.live_edges -= 1;
    }

    fn reap_vertex(&mut self, v_slot: u32) {
        if self.verts.cell(v_slot).dolls_empty() {
            self.verts.remove(&self.hasher, v_slot);
        }
    }

    fn chain_push_edge(&mut self, slot: u32) {
        let (src_id, dst_id) = {
            let cell = &self.edges[slot as usize];
            (
                self.verts.cell(cell.src).id.as_ref().unwrap().clone(),
                self.verts.cell(cell.dst).id.as_ref().unwrap().clone(),
            )
        };
        let bucket = self
            .hasher
            .edge_index(&src_id, &dst_id, self.edge_hash.len());
        let mut cur = self.edge_hash[bucket];
        if cur == NIL {
            self.edge_hash[bucket] = slot;
            return;
        }
        loop {
            let next = self.edges[cur as usize].chain_next;
            if next == NIL {
                self.edges[cur as usize].chain_next = slot;
                return;
            }
            cur = next;
        }
    }

    fn grow_edges(&mut self) {
        let new_cap = self.edges.len() * 2;
        self.edges.resize(new_cap, EdgeCell::vacant());
        self.edge_hash = vec![NIL; new_cap];
        for slot in 0..self.cursor {
            self.edges[slot as usize].chain_next = NIL;
        }
        for slot in 0..self.cursor {
            if self.edges[slot as usize].is_live() {
                self.chain_push_edge(slot);
            }
        }
    }

    // Doll link maintenance. `O` threads cells by source vertex, `I` by
    // destination vertex; vertex cells hold head and tail of each.

    fn out_append(&mut self, v_slot: u32, e_slot: u32) {
        let tail = self.verts.cell(v_slot).out_tail;
        {
            let cell = &mut self.edges[e_slot as usize];
            cell.out_prev = tail;
            cell.out_next = NIL;
        }
        if tail == NIL {
            let vc = self.verts.cell_mut(v_slot);
            vc.out_head = e_slot;
            vc.out_tail = e_slot;
        } else {
            self.edges[tail as usize].out_next = e_slot;
            self.verts.cell_mut(v_slot).out_tail = e_slot;
        }
    }

    fn in_append(&mut self, v_slot: u32, e_slot: u32) {
        let tail = self.verts.cell(v_slot).in_tail;
        {
            let cell = &mut self.edges[e_slot as usize];
            cell.in_prev = tail;
            cell.in_next = NIL;
        }
        if tail == NIL {
            let vc = self.verts.cell_mut(v_slot);
            vc.in_head = e_slot;
            vc.in_tail = e_slot;
        } else {
            self.edges[tail as usize].in_next = e_slot;
            self.verts.cell_mut(v_slot).in_tail = e_slot;
        }
    }

    fn out_unlink(&mut self, v_slot: u32, e_slot: u32) {
        let (prev, next) = {
            let cell = &self.edges[e_slot as usize];
            (cell.out_prev, cell.out_next)
        };
        if prev == NIL {
            self.verts.cell_mut(v_slot).out_head = next;
        } else {
            self.edges[prev as usize].out_next = next;
        }
        if next == NIL {
            self.verts.cell_mut(v_slot).out_tail = prev;
        } else {
            self.edges[next as usize].out_prev = prev;
        }
        let cell = &mut self.edges[e_slot as usize];
        cell.out_prev = NIL;
        cell.out_next = NIL;
    }

    fn in_unlink(&mut self, v_slot: u32, e_slot: u32) {
        let (prev, next) = {
            let cell = &self.edges[e_slot as usize];
            (cell.in_prev, cell.in_next)
        };
        if prev == NIL {
            self.verts.cell_mut(v_slot).in_head = next;
        } else {
            self.edges[prev as usize].in_next = next;
        }
        if next == NIL {
            self.verts.cell_mut(v_slot).in_tail = prev;
        } else {
            self.edges[next as usize].in_prev = prev;
        }
        let cell = &mut self.edges[e_slot as usize];
        cell.in_prev = NIL;
        cell.in_next = NIL;
    }

    // Query primitives.

    /// Weight and last-update time of a live edge.
    pub fn edge_query(&self, src: &VertexId, dst: &VertexId) -> Option<(Weight, Timestamp)> {
        self.lookup_edge(src, dst)
            .map(|slot| (self.edges[slot as usize].w, self.edges[slot as usize].t))
    }

    /// O(1) aggregates of a live vertex.
    pub fn vertex_query(&self, id: &VertexId) -> Option<VertexSummary> {
        self.verts.lookup(&self.hasher, id).map(|slot| {
            let c = self.verts.cell(slot);
            VertexSummary {
                w_out: c.w_out,
                w_in: c.w_in,
                d_out: c.d_out,
                d_in: c.d_in,
            }
        })
    }

    /// All live outgoing edges of `id`, oldest update first.
    pub fn successors(&self, id: &VertexId) -> Vec<(VertexId, Weight, Timestamp)> {
        self.successors_before(id, Timestamp::MAX)
    }

    /// The prefix of [`SnapshotStore::successors`] with `t < t_max`. The
    /// walk stops at the first cell at or past `t_max`; that early exit is
    /// what chronological Dolls buy.
    pub fn successors_before(
        &self,
        id: &VertexId,
        t_max: Timestamp,
    ) -> Vec<(VertexId, Weight, Timestamp)> {
        let mut out = Vec::new();
        let Some(v_slot) = self.verts.lookup(&self.hasher, id) else {
            return out;
        };
        let mut e = self.verts.cell(v_slot).out_head;
        while e != NIL {
            let cell = &self.edges[e as usize];
            if cell.t >= t_max {
                break;
            }
            let dst = self.verts.cell(cell.dst).id.as_ref().unwrap().clone();
            out.push((dst, cell.w, cell.t));
            e = cell.out_next;
        }
        out
    }

    /// All live incoming edges of `id`, oldest update first.
    pub fn precursors(&self, id: &VertexId) -> Vec<(VertexId, Weight, Timestamp)> {
        self.precursors_before(id, Timestamp::MAX)
    }

    pub fn precursors_before(
        &self,
        id: &VertexId,
        t_max: Timestamp,
    ) -> Vec<(VertexId, Weight, Timestamp)> {
        let mut out = Vec::new();
        let Some(v_slot) = self.verts.lookup(&self.hasher, id) else {
            return out;
        };
        let mut e = self.verts.cell(v_slot).in_head;
        while e != NIL {
            let cell = &self.edges[e as usize];
            if cell.t >= t_max {
                break;
            }
            let src = self.verts.cell(cell.src).id.as_ref().unwrap().clone();
            out.push((src, cell.w, cell.t));
            e = cell.in_next;
        }
        out
    }

    /// Every live edge as `(src, dst, w, t)`, in slot order. Linear scan;
    /// meant for audits, dumps, and tests rather than hot paths.
    pub fn live_edges(&self) -> Vec<(VertexId, VertexId, Weight, Timestamp)> {
        let mut out = Vec::new();
        for cell in &self.edges {
            if cell.is_live() {
                out.push((
                    self.verts.cell(cell.src).id.as_ref().unwrap().clone(),
                    self.verts.cell(cell.dst).id.as_ref().unwrap().clone(),
                    cell.w,
                    cell.t,
                ));
            }
        }
        out
    }

    /// Ids of all live vertices, in slot order.
    pub fn live_vertices(&self) -> Vec<VertexId> {
        let mut out = Vec::new();
        for slot in 0..self.verts.capacity() {
            if let Some(id) = &self.verts.cell(slot as u32).id {
                out.push(id.clone());
            }
        }
        out
    }

    /// Emits the four tables in the fixture row layout: `/` marks absent
    /// links, `phi` is the append cursor.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        self.verts.dump_into(&mut out);
        let _ = writeln!(out, "edge hash [m={}]", self.edge_hash.len());
        for (i, &slot) in self.edge_hash.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{i}={}", fmt_slot(slot));
        }
        out.push('\n');
        let _ = writeln!(out, "edge table [phi={}]", self.cursor);
        for (i, cell) in self.edges.iter().enumerate() {
            if cell.is_live() {
                let _ = writeln!(
                    out,
                    "[{i}] w={} t={} V={},{} O={},{} I={},{} H={}",
                    cell.w,
                    cell.t,
                    cell.src,
                    cell.dst,
                    fmt_slot(cell.out_prev),
                    fmt_slot(cell.out_next),
                    fmt_slot(cell.in_prev),
                    fmt_slot(cell.in_next),
                    fmt_slot(cell.chain_next),
                );
            } else {
                let _ = writeln!(out, "[{i}] w=/ t=/ V=/,/ O=/,/ I=/,/ H=/");
            }
        }
        out
    }

    /// Full structural audit: collision chains, Doll symmetry and
    /// chronology, aggregate consistency, liveness, free-list sanity.
    /// Returns every violation found.
    pub fn audit(&self) -> Result<(), Vec<String>> {
        let mut bad = Vec::new();
        if let Err(e) = self.verts.audit(&self.hasher) {
            bad.push(e);
        }
        self.audit_edge_chains(&mut bad);
        self.audit_dolls(&mut bad);
        self.audit_free(&mut bad);
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad)
        }
    }

    fn audit_edge_chains(&self, bad: &mut Vec<String>) {
        use alloc::format;
        let cap = self.edges.len();
        let mut seen = vec![false; cap];
        let mut chained = 0usize;
        for (bucket, &head) in self.edge_hash.iter().enumerate() {
            let mut slot = head;
            let mut steps = 0usize;
            while slot != NIL {
                steps += 1;
                if steps > cap {
                    bad.push(format!("edge chain cycle at bucket {bucket}"));
                    return;
                }
                let cell = &self.edges[slot as usize];
                if !cell.is_live() {
                    bad.push(format!("vacant edge {slot} on chain {bucket}"));
                    return;
                }
                let src = self.verts.cell(cell.src).id.as_ref().unwrap();
                let dst = self.verts.cell(cell.dst).id.as_ref().unwrap();
                if self.hasher.edge_index(src, dst, cap) != bucket {
                    bad.push(format!("edge {src}->{dst} chained under wrong bucket"));
                }
                if seen[slot as usize] {
                    bad.push(format!("edge slot {slot} on two chains"));
                    return;
                }
                seen[slot as usize] = true;
                chained += 1;
                slot = cell.chain_next;
            }
        }
        if chained != self.live_edges {
            bad.push(format!(
                "{chained} edges chained but {} live",
                self.live_edges
            ));
        }
        for (slot, cell) in self.edges.iter().enumerate() {
            if cell.is_live() {
                if !seen[slot] {
                    bad.push(format!("live edge slot {slot} unreachable from hash"));
                }
                if cell.w <= 0 {
                    bad.push(format!("live edge slot {slot} has non-positive weight"));
                }
            }
        }
    }

    fn audit_dolls(&self, bad: &mut Vec<String>) {
        use alloc::format;
        let mut out_visits = vec![0u32; self.edges.len()];
        let mut in_visits = vec![0u32; self.edges.len()];
        for v in 0..self.verts.capacity() as u32 {
            let vc = self.verts.cell(v);
            if !vc.is_live() {
                continue;
            }
            if vc.dolls_empty() {
                bad.push(format!("live vertex slot {v} has two empty Dolls"));
            }
            if (vc.out_head == NIL) != (vc.out_tail == NIL) {
                bad.push(format!("vertex {v} outgoing head/tail mismatch"));
            }
            if (vc.in_head == NIL) != (vc.in_tail == NIL) {
                bad.push(format!("vertex {v} incoming head/tail mismatch"));
            }
            // Outgoing walk.
            let mut count = 0u32;
            let mut w_sum: Weight = 0;
            let mut prev = NIL;
            let mut last_t = 0;
            let mut e = vc.out_head;
            while e != NIL {
                let cell = &self.edges[e as usize];
                if !cell.is_live() {
                    bad.push(format!("vacant edge {e} on outgoing Doll of {v}"));
                    break;
                }
                if cell.src != v {
                    bad.push(format!(
                        "edge {e} on outgoing Doll of {v} but src={}",
                        cell.src
                    ));
                }
                if cell.out_prev != prev {
                    bad.push(format!("edge {e} out_prev broken"));
                }
                if count > 0 && cell.t < last_t {
                    bad.push(format!("outgoing Doll of {v} not chronological at {e}"));
                }
                last_t = cell.t;
                w_sum += cell.w;
                count += 1;
                out_visits[e as usize] += 1;
                if count as usize > self.edges.len() {
                    bad.push(format!("outgoing Doll of {v} cycles"));
                    return;
                }
                prev = e;
                e = cell.out_next;
            }
            if prev != vc.out_tail {
                bad.push(format!(
                    "vertex {v} out_tail is {} not {prev}",
                    fmt_slot(vc.out_tail)
                ));
            }
            if count != vc.d_out {
                bad.push(format!(
                    "vertex {v} d_out={} but Doll has {count}",
                    vc.d_out
                ));
            }
            if w_sum != vc.w_out {
                bad.push(format!(
                    "vertex {v} w_out={} but Doll sums {w_sum}",
                    vc.w_out
                ));
            }
            // Incoming walk.
            let mut count = 0u32;
            let mut w_sum: Weight = 0;
            let mut prev = NIL;
            let mut last_t = 0;
            let mut e = vc.in_head;
            while e != NIL {
                let cell = &self.edges[e as usize];
                if !cell.is_live() {
                    bad.push(format!("vacant edge {e} on incoming Doll of {v}"));
                    break;
                }
                if cell.dst != v {
                    bad.push(format!(
                        "edge {e} on incoming Doll of {v} but dst={}",
                        cell.dst
                    ));
                }
                if cell.in_prev != prev {
                    bad.push(format!("edge {e} in_prev broken"));
                }
                if count > 0 && cell.t < last_t {
                    bad.push(format!("incoming Doll of {v} not chronological at {e}"));
                }
                last_t = cell.t;
                w_sum += cell.w;
                count += 1;
                in_visits[e as usize] += 1;
                if count as usize > self.edges.len() {
                    bad.push(format!("incoming Doll of {v} cycles"));
                    return;
                }
                prev = e;
                e = cell.in_next;
            }
            if prev != vc.in_tail {
                bad.push(format!(
                    "vertex {v} in_tail is {} not {prev}",
                    fmt_slot(vc.in_tail)
                ));
            }
            if count != vc.d_in {
                bad.push(format!("vertex {v} d_in={} but Doll has {count}", vc.d_in));
            }
            if w_sum != vc.w_in {
                bad.push(format!("vertex {v} w_in={} but Doll sums {w_sum}", vc.w_in));
            }
        }
        for (slot, cell) in self.edges.iter().enumerate() {
            let expect = u32::from(cell.is_live());
            if out_visits[slot] != expect {
                bad.push(format!(
                    "edge slot {slot} on {} outgoing Dolls (want {expect})",
                    out_visits[slot]
                ));
            }
            if in_visits[slot] != expect {
                bad.push(format!(
                    "edge slot {slot} on {} incoming Dolls (want {expect})",
                    in_visits[slot]
                ));
            }
        }
    }

    fn audit_free(&self, bad: &mut Vec<String>) {
        use alloc::format;
        let mut seen = vec![false; self.edges.len()];
        for &slot in &self.free {
            if slot >= self.cursor {
                bad.push(format!("free edge slot {slot} beyond cursor"));
            } else if self.edges[slot as usize].is_live() {
                bad.push(format!("free edge slot {slot} is live"));
            }
            if seen[slot as usize] {
                bad.push(format!("edge slot {slot} on free list twice"));
            }
            seen[slot as usize] = true;
        }
        if self.live_edges + self.free.len() != self.cursor as usize {
            bad.push(format!(
                "edge slot accounting off: live {} + free {} != cursor {}",
                self.live_edges,
                self.free.len(),
                self.cursor
            ));
        }
    }
}
