//! Query dispatch and result rendering for the replay-then-query batch
//! mode.

use std::fmt::Write as _;

use dolha_core::analytics::{
    pattern_match, structure_time_query, triangles_for_edge, PatternGraph,
};
use dolha_core::{EdgeKey, VertexId};

use crate::driver::BuiltStore;
use crate::report::ReportFormat;
use crate::CliError;

/// A parsed query request.
#[derive(Debug, Clone)]
pub enum QueryKind {
    Edge(VertexId, VertexId),
    Vertex(VertexId),
    Successors(VertexId),
    Precursors(VertexId),
    History(VertexId, VertexId),
    Triangles(VertexId, VertexId),
    Pattern(PatternGraph),
    TimeQuery(Vec<EdgeKey>),
}

/// Parses `src:dst` into an edge key.
pub fn parse_key(arg: &str) -> Result<EdgeKey, CliError> {
    let (src, dst) = arg
        .split_once(':')
        .ok_or_else(|| CliError::BadArgs(format!("expected SRC:DST, got {arg:?}")))?;
    let src = VertexId::try_new(src.as_bytes().to_vec())
        .ok_or_else(|| CliError::BadArgs("empty src vertex".into()))?;
    let dst = VertexId::try_new(dst.as_bytes().to_vec())
        .ok_or_else(|| CliError::BadArgs("empty dst vertex".into()))?;
    Ok(EdgeKey { src, dst })
}

/// Runs one query against a built store and renders the result.
pub fn run_query(
    store: &BuiltStore,
    query: &QueryKind,
    format: ReportFormat,
) -> Result<String, CliError> {
    let mut out = String::new();
    let machine = format == ReportFormat::Machine;
    match (store, query) {
        (BuiltStore::Snapshot(s), QueryKind::Edge(a, b)) => match s.edge_query(a, b) {
            Some((w, t)) if machine => {
                let _ = writeln!(out, "record=edge src={a} dst={b} w={w} t={t}");
            }
            Some((w, t)) => {
                let _ = writeln!(out, "w={w} t={t}");
            }
            None => render_absent(&mut out, machine, "edge"),
        },
        (BuiltStore::Persistent(s), QueryKind::Edge(a, b)) => match s.edge_latest(a, b) {
            Some((t, w)) if machine => {
                let _ = writeln!(out, "record=edge src={a} dst={b} w={w} t={t}");
            }
            Some((t, w)) => {
                let _ = writeln!(out, "w={w} t={t}");
            }
            None => render_absent(&mut out, machine, "edge"),
        },
        (store, QueryKind::Vertex(id)) => {
            let summary = match store {
                BuiltStore::Snapshot(s) => s.vertex_query(id),
                BuiltStore::Persistent(s) => s.vertex_query(id),
            };
            match summary {
                Some(v) if machine => {
                    let _ = writeln!(
                        out,
                        "record=vertex id={id} w_out={} w_in={} d_out={} d_in={}",
                        v.w_out, v.w_in, v.d_out, v.d_in
                    );
                }
                Some(v) => {
                    let _ = writeln!(
                        out,
                        "w_out={} w_in={} d_out={} d_in={}",
                        v.w_out, v.w_in, v.d_out, v.d_in
                    );
                }
                None => render_absent(&mut out, machine, "vertex"),
            }
        }
        (BuiltStore::Snapshot(s), QueryKind::Successors(id)) => {
            for (v, w, t) in s.successors(id) {
                if machine {
                    let _ = writeln!(out, "record=succ v={v} w={w} t={t}");
                } else {
                    let _ = writeln!(out, "{v} w={w} t={t}");
                }
            }
        }
        (BuiltStore::Persistent(s), QueryKind::Successors(id)) => {
            for (v, t, w) in s.successors_latest(id) {
                if machine {
                    let _ = writeln!(out, "record=succ v={v} w={w} t={t}");
                } else {
                    let _ = writeln!(out, "{v} w={w} t={t}");
                }
            }
        }
        (BuiltStore::Snapshot(s), QueryKind::Precursors(id)) => {
            for (v, w, t) in s.precursors(id) {
                if machine {
                    let _ = writeln!(out, "record=prec v={v} w={w} t={t}");
                } else {
                    let _ = writeln!(out, "{v} w={w} t={t}");
                }
            }
        }
        (BuiltStore::Persistent(s), QueryKind::Precursors(id)) => {
            for (v, t, w) in s.precursors_latest(id) {
                if machine {
                    let _ = writeln!(out, "record=prec v={v} w={w} t={t}");
                } else {
                    let _ = writeln!(out, "{v} w={w} t={t}");
                }
            }
        }
        (BuiltStore::Persistent(s), QueryKind::History(a, b)) => {
            let rows = s.edge_history(a, b);
            if machine {
                for (t, w) in rows {
                    let _ = writeln!(out, "record=history src={a} dst={b} t={t} w={w}");
                }
            } else if rows.is_empty() {
                let _ = writeln!(out, "absent");
            } else {
                let rendered: Vec<String> =
                    rows.iter().map(|(t, w)| format!("({t},{w})")).collect();
                let _ = writeln!(out, "{}", rendered.join(" "));
            }
        }
        (BuiltStore::Snapshot(_), QueryKind::History(_, _)) => {
            return Err(CliError::BadArgs(
                "history queries need --mode persistent".into(),
            ));
        }
        (BuiltStore::Snapshot(s), QueryKind::Triangles(a, b)) => {
            for tri in triangles_for_edge(s, a, b) {
                if machine {
                    let _ = writeln!(out, "record=triangle cycle={tri}");
                } else {
                    let _ = writeln!(out, "{tri}");
                }
            }
        }
        (BuiltStore::Persistent(_), QueryKind::Triangles(_, _)) => {
            return Err(CliError::BadArgs(
                "triangle queries need --mode snapshot".into(),
            ));
        }
        (BuiltStore::Persistent(s), QueryKind::Pattern(p)) => {
            for emb in pattern_match(s, p)? {
                let rendered: Vec<String> =
                    emb.iter().map(|(name, v)| format!("{name}={v}")).collect();
                if machine {
                    let _ = writeln!(out, "record=embedding {}", rendered.join(" "));
                } else {
                    let _ = writeln!(out, "{}", rendered.join(" "));
                }
            }
        }
        (BuiltStore::Snapshot(_), QueryKind::Pattern(_)) => {
            return Err(CliError::BadArgs(
                "pattern queries need --mode persistent".into(),
            ));
        }
        (BuiltStore::Persistent(s), QueryKind::TimeQuery(keys)) => {
            let intervals = structure_time_query(s, keys)?;
            if machine {
                for iv in intervals {
                    let _ = writeln!(out, "record=interval start={} end={}", iv.start, iv.end);
                }
            } else if !intervals.is_empty() {
                let rendered: Vec<String> = intervals
                    .iter()
                    .map(|iv| format!("({},{})", iv.start, iv.end))
                    .collect();
                let _ = writeln!(out, "{}", rendered.join(" "));
            }
        }
        (BuiltStore::Snapshot(_), QueryKind::TimeQuery(_)) => {
            return Err(CliError::BadArgs(
                "timequery needs --mode persistent".into(),
            ));
        }
    }
    Ok(out)
}

fn render_absent(out: &mut String, machine: bool, kind: &str) {
    if machine {
        let _ = writeln!(out, "record={kind} absent=1");
    } else {
        let _ = writeln!(out, "absent");
    }
}
