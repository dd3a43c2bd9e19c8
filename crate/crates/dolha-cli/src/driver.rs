//! Batch replay driver: builds a store from a config, feeds it a stream
//! (sliding the window at each boundary in persistent mode), and gathers
//! the outcome histogram.

use std::time::{Duration, Instant};

use dolha_core::{
    Error as StoreError, PersistentOutcome, PersistentStore, SnapshotOutcome, SnapshotStore,
    StreamEdge, StreamHasher, WindowConfig,
};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Snapshot,
    Persistent,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Snapshot => "snapshot",
            Mode::Persistent => "persistent",
        }
    }
}

/// Everything needed to build one store for a run.
#[derive(Debug, Clone)]
pub struct StoreConfig {
    pub mode: Mode,
    pub m_v: usize,
    pub m_e: usize,
    pub window: Option<WindowConfig>,
    pub hasher: StreamHasher,
    pub fixed_capacity: bool,
}

impl StoreConfig {
    pub fn build(&self) -> Result<BuiltStore, CliError> {
        match self.mode {
            Mode::Snapshot => {
                if self.window.is_some() {
                    return Err(CliError::BadArgs(
                        "snapshot mode does not take a window".into(),
                    ));
                }
                let store = if self.fixed_capacity {
                    SnapshotStore::with_fixed_capacity(self.m_v, self.m_e, self.hasher.clone())
                } else {
                    SnapshotStore::new(self.m_v, self.m_e, self.hasher.clone())
                }?;
                Ok(BuiltStore::Snapshot(store))
            }
            Mode::Persistent => {
                let store = if self.fixed_capacity {
                    PersistentStore::with_fixed_capacity(
                        self.m_v,
                        self.m_e,
                        self.hasher.clone(),
                        self.window,
                    )
                } else {
                    PersistentStore::new(self.m_v, self.m_e, self.hasher.clone(), self.window)
                }?;
                Ok(BuiltStore::Persistent(store))
            }
        }
    }
}

pub enum BuiltStore {
    Snapshot(SnapshotStore<StreamHasher>),
    Persistent(PersistentStore<StreamHasher>),
}

impl BuiltStore {
    pub fn audit(&self) -> Result<(), Vec<String>> {
        match self {
            BuiltStore::Snapshot(s) => s.audit(),
            BuiltStore::Persistent(s) => s.audit(),
        }
    }

    pub fn dump(&self) -> String {
        match self {
            BuiltStore::Snapshot(s) => s.dump(),
            BuiltStore::Persistent(s) => s.dump(),
        }
    }
}

/// Outcome histogram and liveness figures for one replay.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReplayStats {
    pub events: u64,
    pub inserted: u64,
    pub updated: u64,
    pub deleted: u64,
    pub discarded: u64,
    pub appended: u64,
    pub slides: u64,
    pub expired_occurrences: u64,
    pub live_edges: u64,
    pub live_vertices: u64,
    pub live_occurrences: u64,
    pub peak_live_edges: u64,
    pub peak_live_vertices: u64,
    pub elapsed: Duration,
}

impl ReplayStats {
    pub fn ops_per_sec(&self) -> Option<f64> {
        let secs = self.elapsed.as_secs_f64();
        (self.events > 0 && secs > 0.0).then(|| self.events as f64 / secs)
    }
}

/// Replays a stream into a fresh store. In persistent mode the window
/// slides whenever the next event's timestamp passes the current window
/// end, before that event is ingested.
pub fn replay(
    config: &StoreConfig,
    events: &[StreamEdge],
) -> Result<(BuiltStore, ReplayStats), CliError> {
    let mut store = config.build()?;
    let mut stats = ReplayStats::default();
    let started = Instant::now();
    match &mut store {
        BuiltStore::Snapshot(s) => {
            for e in events {
                match s.process_edge(e).map_err(with_event(e))? {
                    SnapshotOutcome::Inserted => stats.inserted += 1,
                    SnapshotOutcome::Updated => stats.updated += 1,
                    SnapshotOutcome::Deleted => stats.deleted += 1,
                    SnapshotOutcome::Discarded => stats.discarded += 1,
                }
                stats.events += 1;
                stats.peak_live_edges = stats.peak_live_edges.max(s.live_edge_count() as u64);
                stats.peak_live_vertices =
                    stats.peak_live_vertices.max(s.live_vertex_count() as u64);
            }
            stats.live_edges = s.live_edge_count() as u64;
            stats.live_vertices = s.live_vertex_count() as u64;
        }
        BuiltStore::Persistent(s) => {
            for e in events {
                while s.current_window_end().is_some_and(|end| e.t > end) {
                    let report = s.slide_window().map_err(with_event(e))?;
                    stats.slides += 1;
                    stats.expired_occurrences += report.expired_occurrences;
                }
                match s.process_edge(e).map_err(with_event(e))? {
                    PersistentOutcome::Inserted => stats.inserted += 1,
                    PersistentOutcome::Appended => stats.appended += 1,
                    PersistentOutcome::Discarded => stats.discarded += 1,
                }
                stats.events += 1;
                stats.peak_live_edges = stats.peak_live_edges.max(s.live_occurrence_count() as u64);
                stats.peak_live_vertices =
                    stats.peak_live_vertices.max(s.live_vertex_count() as u64);
            }
            stats.live_edges = s.live_key_count() as u64;
            stats.live_vertices = s.live_vertex_count() as u64;
            stats.live_occurrences = s.live_occurrence_count() as u64;
        }
    }
    stats.elapsed = started.elapsed();
    Ok((store, stats))
}

fn with_event(e: &StreamEdge) -> impl FnOnce(StoreError) -> CliError + '_ {
    move |err| CliError::StoreAt {
        event: format!("{} {} {} {}", e.key.src, e.key.dst, e.t, e.w),
        source: err,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dolha_core::{parse_stream, MurmurHasher};

    fn config(mode: Mode, window: Option<WindowConfig>) -> StoreConfig {
        StoreConfig {
            mode,
            m_v: 16,
            m_e: 16,
            window,
            hasher: StreamHasher::Murmur(MurmurHasher::new()),
            fixed_capacity: false,
        }
    }

    #[test]
    fn snapshot_mode_rejects_window() {
        let cfg = config(Mode::Snapshot, Some(WindowConfig::new(7, 3, 0).unwrap()));
        assert!(cfg.build().is_err());
    }

    #[test]
    fn replay_counts_outcomes() {
        let events = parse_stream("a b 1 1\na b 2 1\na b 3 -5\nz z 4 -1\n").unwrap();
        let (store, stats) = replay(&config(Mode::Snapshot, None), &events).unwrap();
        assert_eq!(stats.inserted, 1);
        assert_eq!(stats.updated, 1);
        assert_eq!(stats.deleted, 1);
        assert_eq!(stats.discarded, 1);
        assert_eq!(stats.live_edges, 0);
        store.audit().unwrap();
    }

    #[test]
    fn persistent_replay_slides_at_boundaries() {
        let events = parse_stream("a b 1 1\nc d 5 1\ne f 12 1\n").unwrap();
        let cfg = config(Mode::Persistent, Some(WindowConfig::new(6, 2, 0).unwrap()));
        let (store, stats) = replay(&cfg, &events).unwrap();
        assert!(stats.slides >= 3);
        assert!(stats.expired_occurrences >= 1);
        store.audit().unwrap();
    }
}
