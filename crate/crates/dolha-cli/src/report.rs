//! Replay and bench report rendering, human or machine-readable. Machine
//! reports are line-oriented `key=value` records with stable key order;
//! timing figures live on their own record line so determinism checks
//! can drop them.

use std::fmt::Write as _;

use crate::bench::{bits_to_bytes, BenchRow};
use crate::driver::{Mode, ReplayStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Human,
    Machine,
}

fn fmt_ops(ops: Option<f64>) -> String {
    match ops {
        Some(v) => format!("{v:.0}"),
        None => "NA".into(),
    }
}

fn fmt_ratio(r: Option<f64>) -> String {
    match r {
        Some(v) => format!("{v:.3}"),
        None => "NA".into(),
    }
}

pub fn render_replay(stats: &ReplayStats, mode: Mode, format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Machine => {
            let _ = writeln!(
                out,
                "record=replay mode={} events={} inserted={} updated={} appended={} \
                 deleted={} discarded={} slides={} expired={} live_edges={} \
                 live_vertices={} live_occurrences={} peak_live_cells={} peak_live_vertices={}",
                mode.as_str(),
                stats.events,
                stats.inserted,
                stats.updated,
                stats.appended,
                stats.deleted,
                stats.discarded,
                stats.slides,
                stats.expired_occurrences,
                stats.live_edges,
                stats.live_vertices,
                stats.live_occurrences,
                stats.peak_live_edges,
                stats.peak_live_vertices,
            );
            let _ = writeln!(
                out,
                "record=timing elapsed_ns={} ops_per_sec={}",
                stats.elapsed.as_nanos(),
                fmt_ops(stats.ops_per_sec()),
            );
        }
        ReportFormat::Human => {
            let _ = writeln!(out, "mode: {}", mode.as_str());
            let _ = writeln!(out, "events: {}", stats.events);
            let _ = writeln!(
                out,
                "outcomes: inserted={} updated={} appended={} deleted={} discarded={}",
                stats.inserted, stats.updated, stats.appended, stats.deleted, stats.discarded
            );
            if mode == Mode::Persistent {
                let _ = writeln!(
                    out,
                    "window: slides={} expired={}",
                    stats.slides, stats.expired_occurrences
                );
                let _ = writeln!(
                    out,
                    "live: keys={} vertices={} occurrences={}",
                    stats.live_edges, stats.live_vertices, stats.live_occurrences
                );
            } else {
                let _ = writeln!(
                    out,
                    "live: edges={} vertices={}",
                    stats.live_edges, stats.live_vertices
                );
            }
            let _ = writeln!(
                out,
                "peak: cells={} vertices={}",
                stats.peak_live_edges, stats.peak_live_vertices
            );
            let _ = writeln!(
                out,
                "time: {:?} ({} ops/sec)",
                stats.elapsed,
                fmt_ops(stats.ops_per_sec())
            );
        }
    }
    out
}

pub fn render_bench(rows: &[BenchRow], format: ReportFormat) -> String {
    let mut out = String::new();
    for r in rows {
        match format {
            ReportFormat::Machine => {
                let _ = writeln!(
                    out,
                    "record=bench structure={} events={} elapsed_ns={} ops_per_sec={} \
                     decade_ratio={} live_vertices={} live_cells={} space_bits={} space_bytes={}",
                    r.structure,
                    r.events,
                    r.elapsed_ns,
                    fmt_ops(r.ops_per_sec),
                    fmt_ratio(r.decade_ratio),
                    r.live_vertices,
                    r.live_cells,
                    r.space_bits,
                    bits_to_bytes(r.space_bits),
                );
            }
            ReportFormat::Human => {
                let _ = writeln!(
                    out,
                    "{}: {} events in {:.3} ms, {} ops/sec, decade ratio {}, \
                     {} vertices / {} cells live, model {} bytes",
                    r.structure,
                    r.events,
                    r.elapsed_ns as f64 / 1e6,
                    fmt_ops(r.ops_per_sec),
                    fmt_ratio(r.decade_ratio),
                    r.live_vertices,
                    r.live_cells,
                    bits_to_bytes(r.space_bits),
                );
            }
        }
    }
    out
}

/// Drops timing records from a machine report, leaving the deterministic
/// comparison surface.
pub fn strip_timings(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.starts_with("record=timing"))
        .map(|l| format!("{l}\n"))
        .collect()
}
