//! Benchmark harness: per-structure ingest throughput, the two-decade
//! amortized-ingest ratio, and the analytic space model.

use std::time::Instant;

use dolha_core::oracle::BaselineAdjList;
use dolha_core::{PersistentStore, SnapshotStore, StreamEdge};

use crate::driver::{Mode, StoreConfig};
use crate::CliError;

/// Bits for one table index over `n` addressable cells.
fn index_bits(n: u64) -> u64 {
    if n <= 1 {
        1
    } else {
        64 - (n - 1).leading_zeros() as u64
    }
}

/// The snapshot structure's space model in bits:
/// `(2 log|V| + 4 log|E|)·|V| + (2 log|V| + 5 log|E|)·|E|`.
pub fn snapshot_space_bits(vertices: u64, edges: u64) -> u64 {
    if vertices == 0 && edges == 0 {
        return 0;
    }
    let lv = index_bits(vertices);
    let le = index_bits(edges);
    (2 * lv + 4 * le) * vertices + (2 * lv + 5 * le) * edges
}

/// The persistent structure's space model: the snapshot model over
/// occurrences plus one occurrence index per cell for the time travel
/// list.
pub fn persistent_space_bits(vertices: u64, occurrences: u64) -> u64 {
    snapshot_space_bits(vertices, occurrences) + index_bits(occurrences) * occurrences
}

pub fn bits_to_bytes(bits: u64) -> u64 {
    bits.div_ceil(8)
}

/// One structure's measurements over a stream.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub structure: &'static str,
    pub events: u64,
    pub elapsed_ns: u128,
    pub ops_per_sec: Option<f64>,
    /// Mean per-event time over the late decade divided by the early
    /// decade; near 1 for amortized-O(1) ingest.
    pub decade_ratio: Option<f64>,
    pub live_vertices: u64,
    /// Live edges (snapshot/baseline) or occurrences (persistent).
    pub live_cells: u64,
    pub space_bits: u64,
}

/// Decade bounds: the early window `[0.09n, 0.10n)` and the late window
/// `[0.9n, n)`, the `10^5` and `10^6` decades when n = 10^6.
fn decades(n: usize) -> Option<(usize, usize, usize, usize)> {
    if n < 100 {
        return None;
    }
    Some((n * 9 / 100, n / 10, n * 9 / 10, n))
}

fn timed_ingest<F: FnMut(&StreamEdge) -> Result<(), CliError>>(
    events: &[StreamEdge],
    mut ingest: F,
) -> Result<(u128, Option<f64>), CliError> {
    let bounds = decades(events.len());
    let mut early_ns = 0u128;
    let mut late_ns = 0u128;
    let started = Instant::now();
    match bounds {
        None => {
            for e in events {
                ingest(e)?;
            }
        }
        Some((e0, e1, l0, l1)) => {
            for e in &events[..e0] {
                ingest(e)?;
            }
            let t = Instant::now();
            for e in &events[e0..e1] {
                ingest(e)?;
            }
            early_ns = t.elapsed().as_nanos();
            for e in &events[e1..l0] {
                ingest(e)?;
            }
            let t = Instant::now();
            for e in &events[l0..l1] {
                ingest(e)?;
            }
            late_ns = t.elapsed().as_nanos();
        }
    }
    let total = started.elapsed().as_nanos();
    let ratio = bounds.and_then(|(e0, e1, l0, l1)| {
        if early_ns == 0 {
            return None;
        }
        let early = early_ns as f64 / (e1 - e0) as f64;
        let late = late_ns as f64 / (l1 - l0) as f64;
        Some(late / early)
    });
    Ok((total, ratio))
}

fn row(
    structure: &'static str,
    events: u64,
    elapsed_ns: u128,
    ratio: Option<f64>,
    live_vertices: u64,
    live_cells: u64,
    space_bits: u64,
) -> BenchRow {
    let ops = (events > 0 && elapsed_ns > 0).then(|| events as f64 / (elapsed_ns as f64 / 1e9));
    BenchRow {
        structure,
        events,
        elapsed_ns,
        ops_per_sec: ops,
        decade_ratio: ratio,
        live_vertices,
        live_cells,
        space_bits,
    }
}

pub fn bench_dolha(config: &StoreConfig, events: &[StreamEdge]) -> Result<BenchRow, CliError> {
    match config.mode {
        Mode::Snapshot => {
            let mut store = SnapshotStore::new(config.m_v, config.m_e, config.hasher.clone())?;
            let (ns, ratio) = timed_ingest(events, |e| {
                store.process_edge(e)?;
                Ok(())
            })?;
            let v = store.live_vertex_count() as u64;
            let c = store.live_edge_count() as u64;
            Ok(row(
                "dolha-snapshot",
                events.len() as u64,
                ns,
                ratio,
                v,
                c,
                snapshot_space_bits(v, c),
            ))
        }
        Mode::Persistent => {
            let mut store =
                PersistentStore::new(config.m_v, config.m_e, config.hasher.clone(), config.window)?;
            let (ns, ratio) = timed_ingest(events, |e| {
                while store.current_window_end().is_some_and(|end| e.t > end) {
                    store.slide_window()?;
                }
                store.process_edge(e)?;
                Ok(())
            })?;
            let v = store.live_vertex_count() as u64;
            let c = store.live_occurrence_count() as u64;
            Ok(row(
                "dolha-persistent",
                events.len() as u64,
                ns,
                ratio,
                v,
                c,
                persistent_space_bits(v, c),
            ))
        }
    }
}

pub fn bench_baseline(events: &[StreamEdge]) -> Result<BenchRow, CliError> {
    let mut base = BaselineAdjList::new();
    let (ns, ratio) = timed_ingest(events, |e| {
        base.ingest(e)?;
        Ok(())
    })?;
    let v = base.live_vertex_count() as u64;
    let c = base.live_edge_count() as u64;
    // Space under the same accounting model, for comparability.
    Ok(row(
        "baseline-adjlist",
        events.len() as u64,
        ns,
        ratio,
        v,
        c,
        snapshot_space_bits(v, c),
    ))
}

/// Hasher-agnostic entry: benches the requested structures over one
/// stream.
pub fn run_bench(
    config: &StoreConfig,
    events: &[StreamEdge],
    dolha: bool,
    baseline: bool,
) -> Result<Vec<BenchRow>, CliError> {
    let mut rows = Vec::new();
    if dolha {
        rows.push(bench_dolha(config, events)?);
    }
    if baseline {
        rows.push(bench_baseline(events)?);
    }
    Ok(rows)
}
