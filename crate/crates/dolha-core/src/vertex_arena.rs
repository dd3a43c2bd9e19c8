//! Vertex hash table + vertex table, shared by both store variants.
//!
//! Slots are `u32` indices with `NIL` as the absent sentinel. Hash cells
//! point at the first vertex of their collision chain; chains are singly
//! linked through `chain_next` and new vertices append at the chain tail,
//! so earlier arrivals stay closer to the hash cell.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::error::Error;
use crate::hash::GraphHasher;
use crate::model::{VertexId, Weight};

pub(crate) const NIL: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub(crate) struct VertexCell {
    pub id: Option<VertexId>,
    pub w_out: Weight,
    pub w_in: Weight,
    pub d_out: u32,
    pub d_in: u32,
    pub out_head: u32,
    pub out_tail: u32,
    pub in_head: u32,
    pub in_tail: u32,
    pub chain_next: u32,
}

impl VertexCell {
    fn vacant() -> Self {
        VertexCell {
            id: None,
            w_out: 0,
            w_in: 0,
            d_out: 0,
            d_in: 0,
            out_head: NIL,
            out_tail: NIL,
            in_head: NIL,
            in_tail: NIL,
            chain_next: NIL,
        }
    }

    pub fn is_live(&self) -> bool {
        self.id.is_some()
    }

    pub fn dolls_empty(&self) -> bool {
        self.out_head == NIL && self.in_head == NIL
    }
}

#[derive(Debug, Clone)]
pub(crate) struct VertexArena {
    pub hash: Vec<u32>,
    pub cells: Vec<VertexCell>,
    pub cursor: u32,
    pub free: Vec<u32>,
    pub live: usize,
    pub growth: bool,
}

impl VertexArena {
    pub fn new(capacity: usize, growth: bool) -> Result<Self, Error> {
        if capacity == 0 {
            return Err(Error::ZeroCapacity);
        }
        Ok(VertexArena {
            hash: vec![NIL; capacity],
            cells: vec![VertexCell::vacant(); capacity],
            cursor: 0,
            free: Vec::new(),
            live: 0,
            growth,
        })
    }

    pub fn capacity(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, slot: u32) -> &VertexCell {
        &self.cells[slot as usize]
    }

    pub fn cell_mut(&mut self, slot: u32) -> &mut VertexCell {
        &mut self.cells[slot as usize]
    }

    /// Resolves a live vertex id to its slot via the hash chain.
    pub fn lookup<H: GraphHasher>(&self, hasher: &H, id: &VertexId) -> Option<u32> {
        let bucket = hasher.vertex_index(id, self.hash.len());
        let mut slot = self.hash[bucket];
        while slot != NIL {
            let cell = &self.cells[slot as usize];
            match &cell.id {
                Some(cid) if cid == id => return Some(slot),
                _ => slot = cell.chain_next,
            }
        }
        None
    }

    /// Finds the vertex or creates it with empty Dolls and zero weights.
    pub fn intern<H: GraphHasher>(&mut self, hasher: &H, id: &VertexId) -> Result<u32, Error> {
        if let Some(slot) = self.lookup(hasher, id) {
            return Ok(slot);
        }
        let slot = match self.free.pop() {
            Some(s) => s,
            None => {
                if (self.cursor as usize) == self.cells.len() {
                    if !self.growth {
                        return Err(Error::CapacityExhausted {
                            table: "vertex",
                            capacity: self.cells.len(),
                        });
                    }
                    self.grow(hasher);
                }
                let s = self.cursor;
                self.cursor += 1;
                s
            }
        };
        let cell = &mut self.cells[slot as usize];
        debug_assert!(!cell.is_live());
        *cell = VertexCell::vacant();
        cell.id = Some(id.clone());
        self.chain_push(hasher, slot);
        self.live += 1;
        Ok(slot)
    }

    fn chain_push<H: GraphHasher>(&mut self, hasher: &H, slot: u32) {
        let id = self.cells[slot as usize].id.as_ref().unwrap().clone();
        let bucket = hasher.vertex_index(&id, self.hash.len());
        let mut cur = self.hash[bucket];
        if cur == NIL {
            self.hash[bucket] = slot;
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

    /// Unlinks the slot from its collision chain, clears the cell, and
    /// recycles the slot.
    pub fn remove<H: GraphHasher>(&mut self, hasher: &H, slot: u32) {
        let id = self.cells[slot as usize]
            .id
            .as_ref()
            .expect("removing vacant vertex slot")
            .clone();
        let bucket = hasher.vertex_index(&id, self.hash.len());
        let next = self.cells[slot as usize].chain_next;
        if self.hash[bucket] == slot {
            self.hash[bucket] = next;
        } else {
            let mut cur = self.hash[bucket];
            loop {
                debug_assert_ne!(cur, NIL, "vertex missing from its collision chain");
                let cur_next = self.cells[cur as usize].chain_next;
                if cur_next == slot {
                    self.cells[cur as usize].chain_next = next;
                    break;
                }
                cur = cur_next;
            }
        }
        self.cells[slot as usize] = VertexCell::vacant();
        self.free.push(slot);
        self.live -= 1;
    }

    /// Doubles the table, copying cells in index order (slot indices are
    /// preserved) and rebuilding the hash array's collision chains.
    fn grow<H: GraphHasher>(&mut self, hasher: &H) {
        let new_cap = self.cells.len() * 2;
        self.cells.resize(new_cap, VertexCell::vacant());
        self.hash = vec![NIL; new_cap];
        for slot in 0..self.cursor {
            self.cells[slot as usize].chain_next = NIL;
        }
        for slot in 0..self.cursor {
            if self.cells[slot as usize].is_live() {
                self.chain_push(hasher, slot);
            }
        }
    }

    /// Structural audit of the hash/table pair. Doll consistency is the
    /// owning store's job since edge cells live there.
    pub fn audit<H: GraphHasher>(&self, hasher: &H) -> Result<(), String> {
        let cap = self.cells.len();
        if self.hash.len() != cap {
            return Err("vertex hash and table capacities diverged".into());
        }
        if self.cursor as usize > cap {
            return Err("vertex cursor beyond capacity".into());
        }
        let mut seen = vec![false; cap];
        let mut chained = 0usize;
        for (bucket, &head) in self.hash.iter().enumerate() {
            let mut slot = head;
            let mut steps = 0usize;
            while slot != NIL {
                steps += 1;
                if steps > cap {
                    return Err(format!("vertex chain cycle at bucket {bucket}"));
                }
                let cell = &self.cells[slot as usize];
                let id = cell
                    .id
                    .as_ref()
                    .ok_or_else(|| format!("vacant vertex {slot} on chain {bucket}"))?;
                if hasher.vertex_index(id, cap) != bucket {
                    return Err(format!("vertex {id} chained under wrong bucket {bucket}"));
                }
                if seen[slot as usize] {
                    return Err(format!("vertex slot {slot} on two chains"));
                }
                seen[slot as usize] = true;
                chained += 1;
                slot = cell.chain_next;
            }
        }
        if chained != self.live {
            return Err(format!(
                "{} vertices chained but {} live",
                chained, self.live
            ));
        }
        for (slot, cell) in self.cells.iter().enumerate() {
            if cell.is_live() && !seen[slot] {
                return Err(format!("live vertex slot {slot} unreachable from hash"));
            }
        }
        let mut free_seen = vec![false; cap];
        for &slot in &self.free {
            if slot >= self.cursor {
                return Err(format!("free vertex slot {slot} beyond cursor"));
            }
            if self.cells[slot as usize].is_live() {
                return Err(format!("free vertex slot {slot} is live"));
            }
            if free_seen[slot as usize] {
                return Err(format!("vertex slot {slot} on free list twice"));
            }
            free_seen[slot as usize] = true;
        }
        if self.live + self.free.len() != self.cursor as usize {
            return Err(format!(
                "slot accounting off: live {} + free {} != cursor {}",
                self.live,
                self.free.len(),
                self.cursor
            ));
        }
        Ok(())
    }

    /// Appends the vertex hash table and vertex table in the fixture dump
    /// layout.
    pub fn dump_into(&self, out: &mut String) {
        let _ = writeln!(out, "vertex hash [m={}]", self.hash.len());
        for (i, &slot) in self.hash.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            if slot == NIL {
                let _ = write!(out, "{i}=/");
            } else {
                let _ = write!(out, "{i}={slot}");
            }
        }
        out.push('\n');
        let _ = writeln!(out, "vertex table [phi={}]", self.cursor);
        for (i, cell) in self.cells.iter().enumerate() {
            match &cell.id {
                Some(id) => {
                    let _ = writeln!(
                        out,
                        "[{i}] id={id} w={},{} O={},{} I={},{} H={}",
                        cell.w_out,
                        cell.w_in,
                        fmt_slot(cell.out_head),
                        fmt_slot(cell.out_tail),
                        fmt_slot(cell.in_head),
                        fmt_slot(cell.in_tail),
                        fmt_slot(cell.chain_next),
                    );
                }
                None => {
                    let _ = writeln!(out, "[{i}] id=/ w=/,/ O=/,/ I=/,/ H=/");
                }
            }
        }
    }
}

pub(crate) fn fmt_slot(slot: u32) -> String {
    if slot == NIL {
        String::from("/")
    } else {
        format!("{slot}")
    }
}
