use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dolha_cli::bench::run_bench;
use dolha_cli::driver::{replay, Mode, StoreConfig};
use dolha_cli::gen::{generate, render_stream, GenConfig};
use dolha_cli::queries::{parse_key, run_query, QueryKind};
use dolha_cli::report::{render_bench, render_replay, ReportFormat};
use dolha_cli::{read_to_string, CliError};
use dolha_core::analytics::PatternGraph;
use dolha_core::{parse_stream, FixtureHasher, MurmurHasher, StreamHasher, VertexId, WindowConfig};

/// Exact streaming-graph store: replay, query, dump, and benchmark.
#[derive(Parser)]
#[command(name = "dolha", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Snapshot,
    Persistent,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportArg {
    Human,
    Machine,
}

#[derive(Args)]
struct StoreOpts {
    /// Store variant to build.
    #[arg(long, value_enum, default_value_t = ModeArg::Snapshot)]
    mode: ModeArg,
    /// Vertex table capacity.
    #[arg(long, default_value_t = 1024)]
    mv: usize,
    /// Edge table capacity.
    #[arg(long, default_value_t = 4096)]
    me: usize,
    /// Sliding-window length in timestamp units (persistent mode).
    #[arg(long)]
    window: Option<u64>,
    /// Window slide step in timestamp units; requires --window.
    #[arg(long)]
    slide: Option<u64>,
    /// Stream start time for the window schedule.
    #[arg(long, default_value_t = 0)]
    t0: u64,
    /// Lookup-table hash fixture (vertex/edge index assignments).
    #[arg(long)]
    hash_fixture: Option<PathBuf>,
    /// Seed for the production hash.
    #[arg(long, default_value_t = 0)]
    hash_seed: u64,
    /// Error out instead of growing when a table fills.
    #[arg(long)]
    fixed_capacity: bool,
}

impl StoreOpts {
    fn build_config(&self) -> Result<StoreConfig, CliError> {
        let window = match (self.window, self.slide) {
            (Some(w), Some(s)) => Some(WindowConfig::new(w, s, self.t0)?),
            (None, None) => None,
            _ => {
                return Err(CliError::BadArgs(
                    "--window and --slide must be given together".into(),
                ))
            }
        };
        let hasher = match &self.hash_fixture {
            Some(path) => StreamHasher::Fixture(FixtureHasher::parse(&read_to_string(path)?)?),
            None => StreamHasher::Murmur(MurmurHasher::with_seed(self.hash_seed)),
        };
        Ok(StoreConfig {
            mode: match self.mode {
                ModeArg::Snapshot => Mode::Snapshot,
                ModeArg::Persistent => Mode::Persistent,
            },
            m_v: self.mv,
            m_e: self.me,
            window,
            hasher,
            fixed_capacity: self.fixed_capacity,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Replay an edge-stream file and report outcome counts.
    Replay {
        #[command(flatten)]
        store: StoreOpts,
        /// Edge-stream file (`src dst t w` per line, `#` comments).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportArg::Human)]
        report: ReportArg,
    },
    /// Replay a stream, then run one query against the built store.
    ///
    /// Kinds: edge SRC DST | vertex ID | succ ID | prec ID |
    /// history SRC DST | triangles SRC DST | pattern FILE |
    /// timequery SRC:DST [SRC:DST ...]
    Query {
        #[command(flatten)]
        store: StoreOpts,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportArg::Human)]
        report: ReportArg,
        /// Query kind followed by its arguments.
        #[arg(required = true, num_args = 1..)]
        query: Vec<String>,
    },
    /// Replay a stream and print the four tables in fixture layout.
    Dump {
        #[command(flatten)]
        store: StoreOpts,
        #[arg(long)]
        input: PathBuf,
    },
    /// Ingest-throughput and space-model comparison.
    Bench {
        #[command(flatten)]
        store: StoreOpts,
        /// Replay this file instead of generating a stream.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Comma-separated subset of {dolha, baseline}.
        #[arg(long, default_value = "dolha,baseline")]
        structures: String,
        #[arg(long, default_value_t = 1_000_000)]
        events: u64,
        #[arg(long, default_value_t = 50_000)]
        vertices: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        repeat_pct: u64,
        #[arg(long, default_value_t = 10)]
        negative_pct: u64,
        /// Power-law endpoint distribution instead of uniform.
        #[arg(long)]
        power_law: bool,
        #[arg(long, value_enum, default_value_t = ReportArg::Human)]
        report: ReportArg,
    },
    /// Write a synthetic edge-stream file.
    Generate {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        events: u64,
        #[arg(long, default_value_t = 1000)]
        vertices: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        repeat_pct: u64,
        #[arg(long, default_value_t = 10)]
        negative_pct: u64,
        #[arg(long)]
        power_law: bool,
    },
}

fn parse_query(args: &[String]) -> Result<QueryKind, CliError> {
    let bad = |msg: &str| CliError::BadArgs(msg.into());
    let vid = |s: &String| {
        VertexId::try_new(s.as_bytes().to_vec())
            .ok_or_else(|| CliError::BadArgs("empty vertex id".into()))
    };
    match args {
        [kind, a, b] if kind == "edge" => Ok(QueryKind::Edge(vid(a)?, vid(b)?)),
        [kind, a] if kind == "vertex" => Ok(QueryKind::Vertex(vid(a)?)),
        [kind, a] if kind == "succ" => Ok(QueryKind::Successors(vid(a)?)),
        [kind, a] if kind == "prec" => Ok(QueryKind::Precursors(vid(a)?)),
        [kind, a, b] if kind == "history" => Ok(QueryKind::History(vid(a)?, vid(b)?)),
        [kind, a, b] if kind == "triangles" => Ok(QueryKind::Triangles(vid(a)?, vid(b)?)),
        [kind, path] if kind == "pattern" => {
            let text = read_to_string(std::path::Path::new(path))?;
            Ok(QueryKind::Pattern(PatternGraph::parse(&text)?))
        }
        [kind, keys @ ..] if kind == "timequery" && !keys.is_empty() => {
            let keys = keys
                .iter()
                .map(|k| parse_key(k))
                .collect::<Result<_, _>>()?;
            Ok(QueryKind::TimeQuery(keys))
        }
        _ => Err(bad(
            "expected one of: edge SRC DST | vertex ID | succ ID | prec ID | \
             history SRC DST | triangles SRC DST | pattern FILE | timequery SRC:DST...",
        )),
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Replay {
            store,
            input,
            report,
        } => {
            let config = store.build_config()?;
            let events = parse_stream(&read_to_string(&input)?)?;
            let (_, stats) = replay(&config, &events)?;
            Ok(render_replay(&stats, config.mode, fmt(report)))
        }
        Command::Query {
            store,
            input,
            report,
            query,
        } => {
            let config = store.build_config()?;
            let kind = parse_query(&query)?;
            let events = parse_stream(&read_to_string(&input)?)?;
            let (built, _) = replay(&config, &events)?;
            run_query(&built, &kind, fmt(report))
        }
        Command::Dump { store, input } => {
            let config = store.build_config()?;
            let events = parse_stream(&read_to_string(&input)?)?;
            let (built, _) = replay(&config, &events)?;
            Ok(built.dump())
        }
        Command::Bench {
            store,
            input,
            structures,
            events,
            vertices,
            seed,
            repeat_pct,
            negative_pct,
            power_law,
            report,
        } => {
            let config = store.build_config()?;
            let stream = match input {
                Some(path) => parse_stream(&read_to_string(&path)?)?,
                None => generate(&GenConfig {
                    vertices,
                    events,
                    seed,
                    repeat_pct,
                    negative_pct,
                    power_law,
                }),
            };
            let mut dolha = false;
            let mut baseline = false;
            for name in structures.split(',').filter(|s| !s.is_empty()) {
                match name.trim() {
                    "dolha" => dolha = true,
                    "baseline" => baseline = true,
                    other => {
                        return Err(CliError::BadArgs(format!(
                            "unknown structure {other:?} (want dolha or baseline)"
                        )))
                    }
                }
            }
            let rows = run_bench(&config, &stream, dolha, baseline)?;
            Ok(render_bench(&rows, fmt(report)))
        }
        Command::Generate {
            out,
            events,
            vertices,
            seed,
            repeat_pct,
            negative_pct,
            power_law,
        } => {
            let stream = generate(&GenConfig {
                vertices,
                events,
                seed,
                repeat_pct,
                negative_pct,
                power_law,
            });
            let text = render_stream(&stream);
            std::fs::write(&out, text).map_err(|source| CliError::Io {
                path: out.clone(),
                source,
            })?;
            Ok(format!(
                "wrote {} events to {}\n",
                stream.len(),
                out.display()
            ))
        }
    }
}

fn fmt(arg: ReportArg) -> ReportFormat {
    match arg {
        ReportArg::Human => ReportFormat::Human,
        ReportArg::Machine => ReportFormat::Machine,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = std::error::Error::source(&err);
            while let Some(inner) = source {
                eprintln!("  caused by: {inner}");
                source = inner.source();
            }
            ExitCode::FAILURE
        }
    }
}
