//! The persistent store: every unexpired occurrence of a key kept as its
//! own cell, with sliding-window expiry and space recycling.
//!
//! The vertex side is identical to the snapshot store. The edge table is
//! a chronological circular buffer: occurrences append at the tail, the
//! expired prefix is released by advancing the head, and slots freed
//! mid-buffer by key deletion become tombstones reclaimed once the head
//! passes them. Each occurrence stores the key's cumulative in-window
//! weight at its time and a `time_prev` link to the key's previous
//! occurrence (the time travel list); the edge hash table always points
//! at a key's newest occurrence.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::error::Error;
use crate::hash::GraphHasher;
use crate::model::{StreamEdge, Timestamp, VertexId, Weight};
use crate::snapshot::VertexSummary;
use crate::vertex_arena::{fmt_slot, VertexArena, NIL};

/// Sliding-window retention policy. Window `i` covers the half-open
/// interval `(t0 + i*slide_len, t0 + i*slide_len + window_len]`; an
/// occurrence expires once its timestamp is at or below the current
/// window's start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowConfig {
    pub window_len: u64,
    pub slide_len: u64,
    pub t0: u64,
}

impl WindowConfig {
    pub fn new(window_len: u64, slide_len: u64, t0: u64) -> Result<Self, Error> {
        if slide_len == 0 || slide_len >= window_len {
            return Err(Error::InvalidWindow {
                window_len,
                slide_len,
            });
        }
        Ok(WindowConfig {
            window_len,
            slide_len,
            t0,
        })
    }

    /// Inclusive end of window `i`.
    pub fn end(&self, ordinal: u64) -> Timestamp {
        self.t0 + ordinal * self.slide_len + self.window_len
    }

    /// Exclusive start of window `i`: timestamps at or below this are
    /// outside the window.
    pub fn start(&self, ordinal: u64) -> Timestamp {
        self.t0 + ordinal * self.slide_len
    }
}

/// What a single ingested event did to the store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PersistentOutcome {
    /// First live occurrence of the key.
    Inserted,
    /// New occurrence chained onto an existing key.
    Appended,
    /// Non-positive delta for a key with no live occurrence; dropped.
    Discarded,
}

/// Counters returned by [`PersistentStore::slide_window`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExpiryReport {
    /// Occurrences removed because their timestamp left the window.
    pub expired_occurrences: u64,
    /// Keys that lost their last occurrence (by expiry or by the
    /// all-non-positive sweep).
    pub deleted_keys: u64,
    /// Vertices reaped because both Dolls emptied.
    pub deleted_vertices: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CellState {
    Vacant,
    Live,
    /// Deleted mid-buffer; keeps its timestamp so binary search over the
    /// logical span stays valid until the head passes it.
    Tombstone,
}

#[derive(Debug, Clone)]
pub(crate) struct OccurrenceCell {
    pub src: u32,
    pub dst: u32,
    pub w: Weight,
    pub t: Timestamp,
    pub out_prev: u32,
    pub out_next: u32,
    pub in_prev: u32,
    pub in_next: u32,
    pub chain_next: u32,
    pub time_prev: u32,
    state: CellState,
}

impl OccurrenceCell {
    fn vacant() -> Self {
        OccurrenceCell {
            src: NIL,
            dst: NIL,
            w: 0,
            t: 0,
            out_prev: NIL,
            out_next: NIL,
            in_prev: NIL,
            in_next: NIL,
            chain_next: NIL,
            time_prev: NIL,
            state: CellState::Vacant,
        }
    }

    pub fn is_live(&self) -> bool {
        self.state == CellState::Live
    }

    fn is_tombstone(&self) -> bool {
        self.state == CellState::Tombstone
    }
}

/// Window-based persistent streaming-graph store.
#[derive(Debug, Clone)]
pub struct PersistentStore<H> {
    hasher: H,
    verts: VertexArena,
    edge_hash: Vec<u32>,
    cells: Vec<OccurrenceCell>,
    head: u32,
    len: u32,
    live_occurrences: usize,
    live_keys: usize,
    window: Option<WindowConfig>,
    ordinal: u64,
    last_t: Option<Timestamp>,
}

impl<H: GraphHasher> PersistentStore<H> {
    /// Creates an empty store with `m_v` vertex slots and an `m_e`-cell
    /// occurrence buffer (doubling when full). With a window configured,
    /// `m_e` only needs to cover the maximum number of in-window
    /// occurrences plus one slide's worth — expired slots recycle.
    pub fn new(
        m_v: usize,
        m_e: usize,
        hasher: H,
        window: Option<WindowConfig>,
    ) -> Result<Self, Error> {
        Self::build(m_v, m_e, hasher, window, true)
    }

    /// Like [`PersistentStore::new`] but a full buffer is an error
    /// instead of a growth trigger.
    pub fn with_fixed_capacity(
        m_v: usize,
        m_e: usize,
        hasher: H,
        window: Option<WindowConfig>,
    ) -> Result<Self, Error> {
        Self::build(m_v, m_e, hasher, window, false)
    }

    fn build(
        m_v: usize,
        m_e: usize,
        hasher: H,
        window: Option<WindowConfig>,
        growth: bool,
    ) -> Result<Self, Error> {
        if m_e == 0 {
            return Err(Error::ZeroCapacity);
        }
        if let Some(w) = window {
            // Configs built by hand must satisfy the constraint too.
            WindowConfig::new(w.window_len, w.slide_len, w.t0)?;
        }
        Ok(PersistentStore {
            hasher,
            verts: VertexArena::new(m_v, growth)?,
            edge_hash: vec![NIL; m_e],
            cells: vec![OccurrenceCell::vacant(); m_e],
            head: 0,
            len: 0,
            live_occurrences: 0,
            live_keys: 0,
            window,
            ordinal: 0,
            last_t: None,
        })
    }

    pub fn hasher(&self) -> &H {
        &self.hasher
    }

    pub fn window(&self) -> Option<WindowConfig> {
        self.window
    }

    /// Index of the current window (starts at 0, advances per slide).
    pub fn window_ordinal(&self) -> u64 {
        self.ordinal
    }

    /// Inclusive end of the current window, when one is configured. The
    /// replay driver slides once the stream clock passes this.
    pub fn current_window_end(&self) -> Option<Timestamp> {
        self.window.map(|w| w.end(self.ordinal))
    }

    pub fn live_occurrence_count(&self) -> usize {
        self.live_occurrences
    }

    /// Number of keys with at least one live occurrence.
    pub fn live_key_count(&self) -> usize {
        self.live_keys
    }

    pub fn live_vertex_count(&self) -> usize {
        self.verts.live
    }

    pub fn vertex_capacity(&self) -> usize {
        self.verts.capacity()
    }

    pub fn edge_capacity(&self) -> usize {
        self.cells.len()
    }

    /// Buffer span currently occupied (live cells plus tombstones).
    pub fn buffer_occupancy(&self) -> usize {
        self.len as usize
    }

    pub fn last_timestamp(&self) -> Option<Timestamp> {
        self.last_t
    }

    pub(crate) fn logical_len(&self) -> u32 {
        self.len
    }

    pub(crate) fn physical(&self, logical: u32) -> u32 {
        debug_assert!(logical < self.len);
        ((self.head as u64 + logical as u64) % self.cells.len() as u64) as u32
    }

    pub(crate) fn occurrence(&self, physical: u32) -> &OccurrenceCell {
        &self.cells[physical as usize]
    }

    pub(crate) fn vertex_id_of(&self, slot: u32) -> &VertexId {
        self.verts.cell(slot).id.as_ref().unwrap()
    }

    fn edge_key_matches(&self, cell: &OccurrenceCell, src: &VertexId, dst: &VertexId) -> bool {
        let cs = self.verts.cell(cell.src).id.as_ref();
        let cd = self.verts.cell(cell.dst).id.as_ref();
        cs == Some(src) && cd == Some(dst)
    }

    /// Newest live occurrence of a key, via the edge hash table.
    pub(crate) fn lookup_latest(&self, src: &VertexId, dst: &VertexId) -> Option<u32> {
        let bucket = self.hasher.edge_index(src, dst, self.edge_hash.len());
        let mut slot = self.edge_hash[bucket];
        while slot != NIL {
            let cell = &self.cells[slot as usize];
            if self.edge_key_matches(cell, src, dst) {
                return Some(slot);
            }
            slot = cell.chain_next;
        }
        None
    }

    /// Absorbs one stream event. Timestamps must be non-decreasing.
    pub fn process_edge(&mut self, e: &StreamEdge) -> Result<PersistentOutcome, Error> {
        if let Some(min) = self.last_t {
            if e.t < min {
                return Err(Error::OutOfOrder { t: e.t, min });
            }
        }
        let outcome = match self.lookup_latest(&e.key.src, &e.key.dst) {
            Some(_) => self.append_occurrence(e)?,
            None => {
                if e.w <= 0 {
                    PersistentOutcome::Discarded
                } else {
                    self.insert_first(e)?
                }
            }
        };
        self.last_t = Some(e.t);
        Ok(outcome)
    }

    fn insert_first(&mut self, e: &StreamEdge) -> Result<PersistentOutcome, Error> {
        let src_slot = self.verts.intern(&self.hasher, &e.key.src)?;
        let dst_slot = self.verts.intern(&self.hasher, &e.key.dst)?;
        let slot = self.alloc_slot()?;
        {
            let cell = &mut self.cells[slot as usize];
            cell.src = src_slot;
            cell.dst = dst_slot;
            cell.w = e.w;
            cell.t = e.t;
            cell.time_prev = NIL;
            cell.state = CellState::Live;
        }
        self.chain_push(slot);
        self.out_append(src_slot, slot);
        self.in_append(dst_slot, slot);
        let sc = self.verts.cell_mut(src_slot);
        sc.w_out += e.w;
        sc.d_out += 1;
        let dc = self.verts.cell_mut(dst_slot);
        dc.w_in += e.w;
        dc.d_in += 1;
        self.live_occurrences += 1;
        self.live_keys += 1;
        Ok(PersistentOutcome::Inserted)
    }

    /// New occurrence for a key that already has a live one: cumulative
    /// weight carries over, the old occurrence stays on the Dolls, and
    /// the hash chain entry is repointed at the new cell.
    fn append_occurrence(&mut self, e: &StreamEdge) -> Result<PersistentOutcome, Error> {
        let slot = self.alloc_slot()?;
        // alloc_slot can relocate the buffer, so resolve the key's latest
        // occurrence only now.
        let prev_slot = self
            .lookup_latest(&e.key.src, &e.key.dst)
            .expect("key vanished during slot allocation");
        let (src_slot, dst_slot, prev_w, prev_chain_next) = {
            let prev = &self.cells[prev_slot as usize];
            (prev.src, prev.dst, prev.w, prev.chain_next)
        };
        {
            let cell = &mut self.cells[slot as usize];
            cell.src = src_slot;
            cell.dst = dst_slot;
            cell.w = prev_w + e.w;
            cell.t = e.t;
            cell.time_prev = prev_slot;
            cell.chain_next = prev_chain_next;
            cell.state = CellState::Live;
        }
        // Splice the new cell into the chain where the old one sat; the
        // old one keeps only its time travel role.
        let bucket = self
            .hasher
            .edge_index(&e.key.src, &e.key.dst, self.edge_hash.len());
        if self.edge_hash[bucket] == prev_slot {
            self.edge_hash[bucket] = slot;
        } else {
            let mut cur = self.edge_hash[bucket];
            loop {
                debug_assert_ne!(cur, NIL, "occurrence missing from its collision chain");
                let next = self.cells[cur as usize].chain_next;
                if next == prev_slot {
                    self.cells[cur as usize].chain_next = slot;
                    break;
                }
                cur = next;
            }
        }
        self.cells[prev_slot as usize].chain_next = NIL;
        self.out_append(src_slot, slot);
        self.in_append(dst_slot, slot);
        let sc = self.verts.cell_mut(src_slot);
        sc.w_out += e.w;
        sc.d_out += 1;
        let dc = self.verts.cell_mut(dst_slot);
        dc.w_in += e.w;
        dc.d_in += 1;
        self.live_occurrences += 1;
        Ok(PersistentOutcome::Appended)
    }

    /// Grabs the tail slot, reclaiming leading tombstones first and
    /// growing (or failing) when the span fills the buffer.
    fn alloc_slot(&mut self) -> Result<u32, Error> {
        self.reclaim_head_tombstones();
        if self.len as usize == self.cells.len() {
            if !self.verts.growth {
                return Err(Error::CapacityExhausted {
                    table: "edge",
                    capacity: self.cells.len(),
                });
            }
            self.grow();
        }
        let slot = ((self.head as u64 + self.len as u64) % self.cells.len() as u64) as u32;
        debug_assert!(!self.cells[slot as usize].is_live());
        self.cells[slot as usize] = OccurrenceCell::vacant();
        self.len += 1;
        Ok(slot)
    }

    fn reclaim_head_tombstones(&mut self) {
        while self.len > 0 && self.cells[self.head as usize].is_tombstone() {
            self.cells[self.head as usize] = OccurrenceCell::vacant();
            self.head = ((self.head as u64 + 1) % self.cells.len() as u64) as u32;
            self.len -= 1;
        }
    }

    /// Doubles the buffer. Cells are relocated to logical order starting
    /// at physical 0, so every stored index (Dolls, time travel, hash
    /// chains, vertex heads/tails) is rewritten through a remap table.
    fn grow(&mut self) {
        let old_cap = self.cells.len();
        let new_cap = old_cap * 2;

        // Chain entries are each key's newest occurrence; remember them
        // so the new hash table can be rebuilt after relocation.
        let mut latest: Vec<u32> = Vec::with_capacity(self.live_keys);
        for &headslot in &self.edge_hash {
            let mut s = headslot;
            while s != NIL {
                latest.push(s);
                s = self.cells[s as usize].chain_next;
            }
        }

        let mut remap = vec![NIL; old_cap];
        let mut new_cells = vec![OccurrenceCell::vacant(); new_cap];
        for j in 0..self.len {
            let old_p = ((self.head as u64 + j as u64) % old_cap as u64) as usize;
            remap[old_p] = j;
            new_cells[j as usize] = self.cells[old_p].clone();
        }
        self.cells = new_cells;
        self.head = 0;

        let map = |slot: u32| -> u32 {
            if slot == NIL {
                NIL
            } else {
                remap[slot as usize]
            }
        };
        for j in 0..self.len {
            let cell = &mut self.cells[j as usize];
            if cell.is_live() {
                cell.out_prev = map(cell.out_prev);
                cell.out_next = map(cell.out_next);
                cell.in_prev = map(cell.in_prev);
                cell.in_next = map(cell.in_next);
                cell.time_prev = map(cell.time_prev);
                cell.chain_next = NIL;
            }
        }
        for v in 0..self.verts.capacity() as u32 {
            let vc = self.verts.cell_mut(v);
            if vc.is_live() {
                vc.out_head = map(vc.out_head);
                vc.out_tail = map(vc.out_tail);
                vc.in_head = map(vc.in_head);
                vc.in_tail = map(vc.in_tail);
            }
        }
        self.edge_hash = vec![NIL; new_cap];
        for slot in latest {
            self.chain_push(map(slot));
        }
    }

    fn chain_push(&mut self, slot: u32) {
        let (src_id, dst_id) = {
            let cell = &self.cells[slot as usize];
            (
                self.vertex_id_of(cell.src).clone(),
                self.vertex_id_of(cell.dst).clone(),
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
            let next = self.cells[cur as usize].chain_next;
            if next == NIL {
                self.cells[cur as usize].chain_next = slot;
                return;
            }
            cur = next;
        }
    }

    fn remove_chain_entry(&mut self, bucket: usize, slot: u32) {
        let next = self.cells[slot as usize].chain_next;
        if self.edge_hash[bucket] == slot {
            self.edge_hash[bucket] = next;
        } else {
            let mut cur = self.edge_hash[bucket];
            loop {
                debug_assert_ne!(cur, NIL, "occurrence missing from its collision chain");
                let cur_next = self.cells[cur as usize].chain_next;
                if cur_next == slot {
                    self.cells[cur as usize].chain_next = next;
                    break;
                }
                cur = cur_next;
            }
        }
        self.cells[slot as usize].chain_next = NIL;
        self.live_keys -= 1;
    }

    /// Advances to the next window and deletes everything that fell out.
    ///
    /// Expired occurrences are processed oldest-first; each subtracts its
    /// (by then fully telescoped) weight from the key's newer occurrences.
    /// Once a key's last expired occurrence is handled, the key's
    /// remaining occurrences are deleted wholesale if none of them is
    /// positive any more.
    pub fn slide_window(&mut self) -> Result<ExpiryReport, Error> {
        let window = self.window.ok_or(Error::WindowNotConfigured)?;
        self.ordinal += 1;
        let cutoff = window.start(self.ordinal);
        let mut report = ExpiryReport::default();

        // The buffer is chronological (tombstones keep their t), so the
        // expired region is a logical prefix found by binary search.
        let mut lo = 0u32;
        let mut hi = self.len;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.cells[self.physical(mid) as usize].t <= cutoff {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let expired = lo;

        let old_head = self.head;
        let cap = self.cells.len() as u64;
        for j in 0..expired {
            let p = ((old_head as u64 + j as u64) % cap) as u32;
            if self.cells[p as usize].is_tombstone() {
                self.cells[p as usize] = OccurrenceCell::vacant();
                continue;
            }
            self.expire_occurrence(p, cutoff, &mut report);
        }
        self.head = ((old_head as u64 + expired as u64) % cap) as u32;
        self.len -= expired;
        self.reclaim_head_tombstones();
        Ok(report)
    }

    fn expire_occurrence(&mut self, p: u32, cutoff: Timestamp, report: &mut ExpiryReport) {
        let (src_slot, dst_slot) = {
            let cell = &self.cells[p as usize];
            debug_assert!(cell.is_live());
            (cell.src, cell.dst)
        };
        let (src_id, dst_id) = (
            self.vertex_id_of(src_slot).clone(),
            self.vertex_id_of(dst_slot).clone(),
        );
        let bucket = self
            .hasher
            .edge_index(&src_id, &dst_id, self.edge_hash.len());
        let latest = self
            .lookup_latest(&src_id, &dst_id)
            .expect("expired occurrence lost its hash entry");

        // Occurrences newer than p, newest first. All of p's elders were
        // already expired (chronological prefix), so p.w has telescoped
        // down to its own delta contribution by now.
        let mut newer: Vec<u32> = Vec::new();
        let mut cur = latest;
        while cur != p {
            newer.push(cur);
            cur = self.cells[cur as usize].time_prev;
            debug_assert_ne!(cur, NIL, "time travel walk missed the expired cell");
        }
        let delta = self.cells[p as usize].w;
        let mut pending_expired = false;
        for &n in &newer {
            self.cells[n as usize].w -= delta;
            if self.cells[n as usize].t <= cutoff {
                pending_expired = true;
            }
        }
        if let Some(&succ) = newer.last() {
            self.cells[succ as usize].time_prev = NIL;
        }

        self.unlink_and_account(p, delta);
        if newer.is_empty() {
            // p was the key's only occurrence; the hash entry goes too.
            self.remove_chain_entry(bucket, p);
            report.deleted_keys += 1;
        }
        self.cells[p as usize] = OccurrenceCell::vacant();
        report.expired_occurrences += 1;

        // The all-non-positive sweep only makes sense once the key has no
        // expired occurrence left to subtract; earlier the weights are
        // still inflated by pending deltas.
        if !newer.is_empty() && !pending_expired {
            let all_dead = newer.iter().all(|&n| self.cells[n as usize].w <= 0);
            if all_dead {
                self.remove_chain_entry(bucket, latest);
                let mut prev_w: Weight = 0;
                for &n in newer.iter().rev() {
                    let w = self.cells[n as usize].w;
                    self.unlink_and_account(n, w - prev_w);
                    prev_w = w;
                    let cell = &mut self.cells[n as usize];
                    cell.state = CellState::Tombstone;
                    cell.src = NIL;
                    cell.dst = NIL;
                    cell.w = 0;
                    cell.time_prev = NIL;
                }
                report.deleted_keys += 1;
            }
        }

        report.deleted_vertices += self.reap_vertex(src_slot);
        if dst_slot != src_slot {
            report.deleted_vertices += self.reap_vertex(dst_slot);
        }
    }

    /// Unlinks one occurrence from both Dolls and backs its delta out of
    /// the endpoint aggregates.
    fn unlink_and_account(&mut self, p: u32, delta: Weight) {
        let (src_slot, dst_slot) = {
            let cell = &self.cells[p as usize];
            (cell.src, cell.dst)
        };
        self.out_unlink(src_slot, p);
        self.in_unlink(dst_slot, p);
        let sc = self.verts.cell_mut(src_slot);
        sc.w_out -= delta;
        sc.d_out -= 1;
        let dc = self.verts.cell_mut(dst_slot);
        dc.w_in -= delta;
        dc.d_in -= 1;
        self.live_occurrences -= 1;
    }

    fn reap_vertex(&mut self, v_slot: u32) -> u64 {
        if self.verts.cell(v_slot).is_live() && self.verts.cell(v_slot).dolls_empty() {
            self.verts.remove(&self.hasher, v_slot);
            1
        } else {
            0
        }
    }

    // Doll maintenance, same shape as the snapshot store.

    fn out_append(&mut self, v_slot: u32, e_slot: u32) {
        let tail = self.verts.cell(v_slot).out_tail;
        {
            let cell = &mut self.cells[e_slot as usize];
            cell.out_prev = tail;
            cell.out_next = NIL;
        }
        if tail == NIL {
            let vc = self.verts.cell_mut(v_slot);
            vc.out_head = e_slot;
            vc.out_tail = e_slot;
        } else {
            self.cells[tail as usize].out_next = e_slot;
            self.verts.cell_mut(v_slot).out_tail = e_slot;
        }
    }

    fn in_append(&mut self, v_slot: u32, e_slot: u32) {
        let tail = self.verts.cell(v_slot).in_tail;
        {
            let cell = &mut self.cells[e_slot as usize];
            cell.in_prev = tail;
            cell.in_next = NIL;
        }
        if tail == NIL {
            let vc = self.verts.cell_mut(v_slot);
            vc.in_head = e_slot;
            vc.in_tail = e_slot;
        } else {
            self.cells[tail as usize].in_next = e_slot;
            self.verts.cell_mut(v_slot).in_tail = e_slot;
        }
    }

    fn out_unlink(&mut self, v_slot: u32, e_slot: u32) {
        let (prev, next) = {
            let cell = &self.cells[e_slot as usize];
            (cell.out_prev, cell.out_next)
        };
        if prev == NIL {
            self.verts.cell_mut(v_slot).out_head = next;
        } else {
            self.cells[prev as usize].out_next = next;
        }
        if next == NIL {
            self.verts.cell_mut(v_slot).out_tail = prev;
        } else {
            self.cells[next as usize].out_prev = prev;
        }
        let cell = &mut self.cells[e_slot as usize];
        cell.out_prev = NIL;
        cell.out_next = NIL;
    }

    fn in_unlink(&mut self, v_slot: u32, e_slot: u32) {
        let (prev, next) = {
            let cell = &self.cells[e_slot as usize];
            (cell.in_prev, cell.in_next)
        };
        if prev == NIL {
            self.verts.cell_mut(v_slot).in_head = next;
        } else {
            self.cells[prev as usize].in_next = next;
        }
        if next == NIL {
            self.verts.cell_mut(v_slot).in_tail = prev;
        } else {
            self.cells[next as usize].in_prev = prev;
        }
        let cell = &mut self.cells[e_slot as usize];
        cell.in_prev = NIL;
        cell.in_next = NIL;
    }

    // Query primitives.

    /// Latest live occurrence of a key: `(t, cumulative w)` in O(1).
    pub fn edge_latest(&self, src: &VertexId, dst: &VertexId) -> Option<(Timestamp, Weight)> {
        self.lookup_latest(src, dst)
            .map(|s| (self.cells[s as usize].t, self.cells[s as usize].w))
    }

    /// All live occurrences of a key via the time travel walk, oldest
    /// first, as `(t, cumulative w)`.
    pub fn edge_history(&self, src: &VertexId, dst: &VertexId) -> Vec<(Timestamp, Weight)> {
        let mut out = Vec::new();
        let mut cur = self.lookup_latest(src, dst).unwrap_or(NIL);
        while cur != NIL {
            let cell = &self.cells[cur as usize];
            out.push((cell.t, cell.w));
            cur = cell.time_prev;
        }
        out.reverse();
        out
    }

    /// O(1) vertex aggregates. Degrees count live occurrences on the
    /// Dolls, not unique keys.
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

    /// Unique successors of `id`: the outgoing Doll is walked tail to
    /// head, superseded occurrences are suppressed through their time
    /// travel links in a per-query scratch set, and the result comes
    /// back in chronological order of latest occurrence as
    /// `(v, t, cumulative w)`.
    pub fn successors_latest(&self, id: &VertexId) -> Vec<(VertexId, Timestamp, Weight)> {
        self.latest_walk(id, true)
    }

    /// Mirror of [`PersistentStore::successors_latest`] over the
    /// incoming Doll.
    pub fn precursors_latest(&self, id: &VertexId) -> Vec<(VertexId, Timestamp, Weight)> {
        self.latest_walk(id, false)
    }

    fn latest_walk(&self, id: &VertexId, outgoing: bool) -> Vec<(VertexId, Timestamp, Weight)> {
        let mut out = Vec::new();
        let Some(v_slot) = self.verts.lookup(&self.hasher, id) else {
            return out;
        };
        let vc = self.verts.cell(v_slot);
        let mut seen = vec![false; self.cells.len()];
        let mut e = if outgoing { vc.out_tail } else { vc.in_tail };
        while e != NIL {
            let cell = &self.cells[e as usize];
            if !seen[e as usize] {
                let other = if outgoing { cell.dst } else { cell.src };
                out.push((self.vertex_id_of(other).clone(), cell.t, cell.w));
                let mut older = cell.time_prev;
                while older != NIL {
                    seen[older as usize] = true;
                    older = self.cells[older as usize].time_prev;
                }
            }
            e = if outgoing {
                cell.out_prev
            } else {
                cell.in_prev
            };
        }
        out.reverse();
        out
    }

    /// Every live outgoing occurrence of `id`, duplicates included,
    /// chronological, as `(v, t, cumulative w)`.
    pub fn successors_history(&self, id: &VertexId) -> Vec<(VertexId, Timestamp, Weight)> {
        self.history_walk(id, true)
    }

    pub fn precursors_history(&self, id: &VertexId) -> Vec<(VertexId, Timestamp, Weight)> {
        self.history_walk(id, false)
    }

    fn history_walk(&self, id: &VertexId, outgoing: bool) -> Vec<(VertexId, Timestamp, Weight)> {
        let mut out = Vec::new();
        let Some(v_slot) = self.verts.lookup(&self.hasher, id) else {
            return out;
        };
        let vc = self.verts.cell(v_slot);
        let mut e = if outgoing { vc.out_head } else { vc.in_head };
        while e != NIL {
            let cell = &self.cells[e as usize];
            let other = if outgoing { cell.dst } else { cell.src };
            out.push((self.vertex_id_of(other).clone(), cell.t, cell.w));
            e = if outgoing {
                cell.out_next
            } else {
                cell.in_next
            };
        }
        out
    }

    /// Every live occurrence as `(src, dst, t, cumulative w)` in
    /// chronological (logical buffer) order. Linear scan for tests and
    /// dumps.
    pub fn live_occurrences(&self) -> Vec<(VertexId, VertexId, Timestamp, Weight)> {
        let mut out = Vec::new();
        for j in 0..self.len {
            let cell = &self.cells[self.physical(j) as usize];
            if cell.is_live() {
                out.push((
                    self.vertex_id_of(cell.src).clone(),
                    self.vertex_id_of(cell.dst).clone(),
                    cell.t,
                    cell.w,
                ));
            }
        }
        out
    }

    pub fn live_vertices(&self) -> Vec<VertexId> {
        let mut out = Vec::new();
        for slot in 0..self.verts.capacity() {
            if let Some(id) = &self.verts.cell(slot as u32).id {
                out.push(id.clone());
            }
        }
        out
    }

    /// Emits the tables in the fixture row layout; occurrence rows carry
    /// the extra `T` (time travel) column.
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
        let _ = writeln!(
            out,
            "edge table [cap={} head={} len={}]",
            self.cells.len(),
            self.head,
            self.len
        );
        for (i, cell) in self.cells.iter().enumerate() {
            if cell.is_live() {
                let _ = writeln!(
                    out,
                    "[{i}] w={} t={} V={},{} O={},{} I={},{} H={} T={}",
                    cell.w,
                    cell.t,
                    cell.src,
                    cell.dst,
                    fmt_slot(cell.out_prev),
                    fmt_slot(cell.out_next),
                    fmt_slot(cell.in_prev),
                    fmt_slot(cell.in_next),
                    fmt_slot(cell.chain_next),
                    fmt_slot(cell.time_prev),
                );
            } else {
                let _ = writeln!(out, "[{i}] w=/ t=/ V=/,/ O=/,/ I=/,/ H=/ T=/");
            }
        }
        out
    }

    /// Full structural audit: chronological buffer, hash-chain and time
    /// travel soundness, Doll symmetry, aggregate consistency, liveness.
    pub fn audit(&self) -> Result<(), Vec<String>> {
        let mut bad = Vec::new();
        if let Err(e) = self.verts.audit(&self.hasher) {
            bad.push(e);
        }
        self.audit_buffer(&mut bad);
        self.audit_chains_and_time_travel(&mut bad);
        self.audit_dolls(&mut bad);
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad)
        }
    }

    fn in_span(&self, p: u32) -> bool {
        if self.len == 0 {
            return false;
        }
        let cap = self.cells.len() as u64;
        let off = (p as u64 + cap - self.head as u64) % cap;
        off < self.len as u64
    }

    fn audit_buffer(&self, bad: &mut Vec<String>) {
        use alloc::format;
        let mut live = 0usize;
        let mut last_t = 0;
        for j in 0..self.len {
            let p = self.physical(j);
            let cell = &self.cells[p as usize];
            match cell.state {
                CellState::Vacant => bad.push(format!("vacant cell {p} inside buffer span")),
                CellState::Live => live += 1,
                CellState::Tombstone => {}
            }
            if j > 0 && cell.t < last_t {
                bad.push(format!("buffer not chronological at logical {j}"));
            }
            last_t = cell.t;
        }
        for (p, cell) in self.cells.iter().enumerate() {
            if !self.in_span(p as u32) && cell.state != CellState::Vacant {
                bad.push(format!("occupied cell {p} outside buffer span"));
            }
        }
        if live != self.live_occurrences {
            bad.push(format!(
                "{live} live occurrences in buffer but counter says {}",
                self.live_occurrences
            ));
        }
    }

    fn audit_chains_and_time_travel(&self, bad: &mut Vec<String>) {
        use alloc::collections::BTreeMap;
        use alloc::format;
        // Per-key live occurrence lists in logical order, from a scan.
        let mut per_key: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
        for j in 0..self.len {
            let p = self.physical(j);
            let cell = &self.cells[p as usize];
            if cell.is_live() {
                per_key.entry((cell.src, cell.dst)).or_default().push(p);
            }
        }
        let mut chained = 0usize;
        let mut seen_keys: BTreeMap<(u32, u32), ()> = BTreeMap::new();
        for (bucket, &headslot) in self.edge_hash.iter().enumerate() {
            let mut slot = headslot;
            let mut steps = 0;
            while slot != NIL {
                steps += 1;
                if steps > self.cells.len() {
                    bad.push(format!("edge chain cycle at bucket {bucket}"));
                    return;
                }
                let cell = &self.cells[slot as usize];
                if !cell.is_live() {
                    bad.push(format!("dead occurrence {slot} on chain {bucket}"));
                    return;
                }
                let key = (cell.src, cell.dst);
                let src = self.vertex_id_of(cell.src);
                let dst = self.vertex_id_of(cell.dst);
                if self.hasher.edge_index(src, dst, self.edge_hash.len()) != bucket {
                    bad.push(format!("key {src}->{dst} chained under wrong bucket"));
                }
                if seen_keys.insert(key, ()).is_some() {
                    bad.push(format!("key {src}->{dst} appears on two chain entries"));
                }
                match per_key.get(&key) {
                    None => bad.push(format!("chained key {src}->{dst} has no live cells")),
                    Some(occs) => {
                        if *occs.last().unwrap() != slot {
                            bad.push(format!(
                                "chain entry for {src}->{dst} is not the newest occurrence"
                            ));
                        }
                        // The time travel walk must visit exactly the
                        // live occurrences, newest to oldest.
                        let mut walked = Vec::new();
                        let mut cur = slot;
                        let mut tsteps = 0;
                        while cur != NIL {
                            tsteps += 1;
                            if tsteps > self.cells.len() {
                                bad.push(format!("time travel cycle for {src}->{dst}"));
                                return;
                            }
                            walked.push(cur);
                            cur = self.cells[cur as usize].time_prev;
                        }
                        let mut expect: Vec<u32> = occs.clone();
                        expect.reverse();
                        if walked != expect {
                            bad.push(format!(
                                "time travel walk for {src}->{dst} visits {walked:?}, buffer has {expect:?}"
                            ));
                        }
                    }
                }
                chained += 1;
                slot = cell.chain_next;
            }
        }
        if chained != per_key.len() {
            bad.push(format!(
                "{chained} keys chained but {} keys live in buffer",
                per_key.len()
            ));
        }
        if chained != self.live_keys {
            bad.push(format!(
                "{chained} keys chained but counter says {}",
                self.live_keys
            ));
        }
    }

    fn audit_dolls(&self, bad: &mut Vec<String>) {
        use alloc::collections::BTreeMap;
        use alloc::format;
        let mut out_visits = vec![0u32; self.cells.len()];
        let mut in_visits = vec![0u32; self.cells.len()];
        for v in 0..self.verts.capacity() as u32 {
            let vc = self.verts.cell(v);
            if !vc.is_live() {
                continue;
            }
            if vc.dolls_empty() {
                bad.push(format!("live vertex slot {v} has two empty Dolls"));
            }
            for outgoing in [true, false] {
                let (head, tail, label) = if outgoing {
                    (vc.out_head, vc.out_tail, "outgoing")
                } else {
                    (vc.in_head, vc.in_tail, "incoming")
                };
                if (head == NIL) != (tail == NIL) {
                    bad.push(format!("vertex {v} {label} head/tail mismatch"));
                }
                let mut count = 0u32;
                let mut prev = NIL;
                let mut last_t = 0;
                // Cumulative weights telescope per key, so the vertex sum
                // equals the sum over keys of the newest occurrence's w.
                let mut newest_per_key: BTreeMap<u32, Weight> = BTreeMap::new();
                let mut e = head;
                while e != NIL {
                    let cell = &self.cells[e as usize];
                    if !cell.is_live() {
                        bad.push(format!("dead occurrence {e} on {label} Doll of {v}"));
                        return;
                    }
                    let (own, other, link_prev) = if outgoing {
                        (cell.src, cell.dst, cell.out_prev)
                    } else {
                        (cell.dst, cell.src, cell.in_prev)
                    };
                    if own != v {
                        bad.push(format!("occurrence {e} on wrong {label} Doll"));
                    }
                    if link_prev != prev {
                        bad.push(format!("occurrence {e} {label} prev broken"));
                    }
                    if count > 0 && cell.t < last_t {
                        bad.push(format!("{label} Doll of {v} not chronological at {e}"));
                    }
                    last_t = cell.t;
                    newest_per_key.insert(other, cell.w);
                    count += 1;
                    if outgoing {
                        out_visits[e as usize] += 1;
                    } else {
                        in_visits[e as usize] += 1;
                    }
                    if count as usize > self.cells.len() {
                        bad.push(format!("{label} Doll of {v} cycles"));
                        return;
                    }
                    prev = e;
                    e = if outgoing {
                        cell.out_next
                    } else {
                        cell.in_next
                    };
                }
                if prev != tail {
                    bad.push(format!("vertex {v} {label} tail broken"));
                }
                let (d, w) = if outgoing {
                    (vc.d_out, vc.w_out)
                } else {
                    (vc.d_in, vc.w_in)
                };
                if count != d {
                    bad.push(format!(
                        "vertex {v} {label} degree {d} but Doll has {count}"
                    ));
                }
                let sum: Weight = newest_per_key.values().sum();
                if sum != w {
                    bad.push(format!(
                        "vertex {v} {label} weight {w} but key-latest sum is {sum}"
                    ));
                }
            }
        }
        for (slot, cell) in self.cells.iter().enumerate() {
            let expect = u32::from(cell.is_live());
            if out_visits[slot] != expect {
                bad.push(format!(
                    "occurrence {slot} on {} outgoing Dolls (want {expect})",
                    out_visits[slot]
                ));
            }
            if in_visits[slot] != expect {
                bad.push(format!(
                    "occurrence {slot} on {} incoming Dolls (want {expect})",
                    in_visits[slot]
                ));
            }
        }
    }
}
