//! `hypercomb` — combinatorics-of-numbers toolkit.
//!
//! JSON results go to stdout, prose summaries to stderr. Exit codes:
//! 0 success, 1 domain error, 2 usage error, 3 resource limit exceeded.

mod ops;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hypercomb_core::{Error, Limits};
use ops::Op;

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let lo = lo.trim().parse::<i64>().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi = hi.trim().parse::<i64>().map_err(|e| format!("bad upper bound: {e}"))?;
    Ok((lo, hi))
}

fn parse_i64_list(s: &str) -> Result<Vec<i64>, Error> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim().parse::<i64>().map_err(|e| Error::InvalidInput(format!(
                "bad integer {t:?}: {e}"
            )))
        })
        .collect()
}

#[derive(Parser)]
#[command(
    name = "hypercomb",
    about = "Exact densities, syndeticity structure, embeddability, partition regularity, and string calculus on integer sets",
    version
)]
struct Cli {
    /// Worker threads for parallelizable scans (env HYPERCOMB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Maximum window size in cells.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    max_window: u64,

    /// Maximum nodes a search may visit per top-level branch.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    max_search_nodes: u64,

    /// Wall-clock budget in milliseconds (unlimited when absent).
    #[arg(long, global = true)]
    time_budget_ms: Option<u64>,

    /// Attach wall-clock timing to the JSON output.
    #[arg(long, global = true)]
    timing: bool,

    /// Also write the manifest JSON to this file.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact densities of a set spec, plus an optional windowed estimate.
    Density {
        /// Set spec, e.g. "periodic p=2 r=0".
        spec: String,
        /// Window lo..hi for the best-subwindow estimate.
        #[arg(long, value_parser = parse_range)]
        window: Option<(i64, i64)>,
        /// Subwindow length for the estimate.
        #[arg(long = "L")]
        len: Option<i64>,
    },
    /// Structure predicates and embeddability.
    #[command(subcommand)]
    Structure(StructureCmd),
    /// Shift-embed a finite set into a set spec (alias of structure embed).
    Embed(EmbedArgs),
    /// Density-embedding certificate search on the window [1, M].
    Jin {
        /// Set spec to sample.
        #[arg(long)]
        spec: String,
        /// Window upper end.
        #[arg(long = "M")]
        m: i64,
        /// Number of prefix lengths the certificate must control.
        #[arg(short)]
        k: i64,
        /// Target density as p/q.
        #[arg(long)]
        beta: String,
    },
    /// Ramsey-type extraction on colorings.
    #[command(subcommand)]
    Ramsey(RamseyCmd),
    /// Partition-regularity laboratory.
    #[command(subcommand)]
    Pr(PrCmd),
    /// Coefficient-string calculus.
    #[command(subcommand)]
    Strings(StringsCmd),
    /// Re-run a previously emitted manifest.
    Replay {
        /// Path to a manifest JSON file.
        path: PathBuf,
    },
}

#[derive(Subcommand)]
enum StructureCmd {
    /// Thick / syndetic / piecewise-syndetic classification.
    Classify { spec: String },
    /// Leftmost gap-bounded stretch in a window sample.
    Ps {
        spec: String,
        #[arg(long, value_parser = parse_range)]
        window: (i64, i64),
        /// Gap bound: every length-k subinterval must meet the set.
        #[arg(short)]
        k: i64,
        /// Minimum stretch length.
        #[arg(short = 'L')]
        len: i64,
    },
    /// Shift-embed a finite set into a set spec.
    Embed(EmbedArgs),
}

#[derive(Args)]
struct EmbedArgs {
    /// Finite set to embed, comma-separated.
    #[arg(long = "F")]
    f: String,
    /// Target set spec.
    #[arg(long = "Y")]
    y: String,
    /// Shifts are searched in [-bound, bound].
    #[arg(long)]
    bound: i64,
}

#[derive(Subcommand)]
enum RamseyCmd {
    /// Greedy monochromatic set extraction from a pair coloring.
    Clique {
        /// File of "i j color" triples covering all pairs of [1, N].
        #[arg(long)]
        coloring: PathBuf,
        /// Number of colors.
        #[arg(short)]
        r: u32,
    },
    /// Least monochromatic 3-term arithmetic progression.
    Ap3 {
        /// File with one color per line (line i colors the integer i).
        #[arg(long)]
        coloring: PathBuf,
    },
}

#[derive(Subcommand)]
enum PrCmd {
    /// Zero-sum subset condition for a linear equation.
    Rado {
        /// Coefficients, comma-separated.
        #[arg(long)]
        c: String,
    },
    /// Exhaustive search for a coloring with no monochromatic solution.
    Search {
        /// Coefficients, comma-separated.
        #[arg(long)]
        c: String,
        /// Number of colors.
        #[arg(short)]
        r: u32,
        /// Color the integers 1..=N.
        #[arg(short = 'N')]
        n: i64,
        /// Demand distinct solution entries.
        #[arg(long)]
        injective: bool,
    },
    /// Verify the x+y=z² obstruction coloring up to N.
    Quintic {
        #[arg(short = 'N')]
        n: i64,
    },
    /// Injective-regularity coefficient pipeline for a zero-sum equation.
    Coeffs {
        /// Coefficients, comma-separated.
        #[arg(long)]
        c: String,
    },
}

#[derive(Subcommand)]
enum StringsCmd {
    /// Canonical form of a coefficient string.
    Canon { s: String },
    /// Decide equivalence of two coefficient strings.
    Eq { s: String, t: String },
}

fn read_to_string(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn parse_point_coloring(text: &str) -> Result<Vec<u32>, Error> {
    let mut colors = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let c = line.parse::<u32>().map_err(|e| Error::Parse {
            pos: i,
            msg: format!("line {}: bad color {line:?}: {e}", i + 1),
        })?;
        colors.push(c);
    }
    if colors.is_empty() {
        return Err(Error::InvalidInput("coloring file is empty".into()));
    }
    Ok(colors)
}

fn parse_pair_coloring(text: &str) -> Result<(u32, Vec<(u32, u32, u32)>), Error> {
    let mut triples = Vec::new();
    let mut n = 0u32;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse {
                pos: idx,
                msg: format!("line {}: expected \"i j color\"", idx + 1),
            });
        }
        let parse = |t: &str| {
            t.parse::<u32>().map_err(|e| Error::Parse {
                pos: idx,
                msg: format!("line {}: bad integer {t:?}: {e}", idx + 1),
            })
        };
        let (i, j, c) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        n = n.max(i).max(j);
        triples.push((i, j, c));
    }
    if triples.is_empty() {
        return Err(Error::InvalidInput("coloring file is empty".into()));
    }
    Ok((n, triples))
}

fn build_op(command: Command) -> Result<Op, Error> {
    Ok(match command {
        Command::Density { spec, window, len } => Op::Density { spec, window, len },
        Command::Structure(StructureCmd::Classify { spec }) => Op::Classify { spec },
        Command::Structure(StructureCmd::Ps { spec, window, k, len }) => Op::Ps {
            spec,
            window,
            k,
            len,
        },
        Command::Structure(StructureCmd::Embed(args)) | Command::Embed(args) => Op::Embed {
            f: parse_i64_list(&args.f)?,
            y: args.y,
            bound: args.bound,
        },
        Command::Jin { spec, m, k, beta } => Op::Jin { spec, m, k, beta },
        Command::Ramsey(RamseyCmd::Clique { coloring, r }) => {
            let (n, triples) = parse_pair_coloring(&read_to_string(&coloring)?)?;
            Op::Clique { n, r, triples }
        }
        Command::Ramsey(RamseyCmd::Ap3 { coloring }) => {
            let colors = parse_point_coloring(&read_to_string(&coloring)?)?;
            Op::Ap3 { colors }
        }
        Command::Pr(PrCmd::Rado { c }) => Op::Rado {
            c: parse_i64_list(&c)?,
        },
        Command::Pr(PrCmd::Search { c, r, n, injective }) => Op::Search {
            c: parse_i64_list(&c)?,
            r,
            n,
            injective,
        },
        Command::Pr(PrCmd::Quintic { n }) => Op::Quintic { n },
        Command::Pr(PrCmd::Coeffs { c }) => Op::Coeffs {
            c: parse_i64_list(&c)?,
        },
        Command::Strings(StringsCmd::Canon { s }) => Op::Canon {
            s: parse_i64_list(&s)?,
        },
        Command::Strings(StringsCmd::Eq { s, t }) => Op::StringEq {
            s: parse_i64_list(&s)?,
            t: parse_i64_list(&t)?,
        },
        Command::Replay { .. } => unreachable!("replay handled by the caller"),
    })
}

fn replay_op(path: &PathBuf) -> Result<(Op, Limits), Error> {
    let text = read_to_string(path)?;
    let manifest: ops::ManifestIn = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("bad manifest: {e}")))?;
    let op = Op::from_manifest(&manifest.command, manifest.inputs)?;
    Ok((op, manifest.limits.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("HYPERCOMB_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1);

    let built = match cli.command {
        Command::Replay { path } => replay_op(&path),
        other => {
            let limits = Limits {
                max_window: cli.max_window,
                max_search_nodes: cli.max_search_nodes,
                time_budget_ms: cli.time_budget_ms,
            };
            build_op(other).map(|op| (op, limits))
        }
    };
    let (op, limits) = match built {
        Ok(pair) => pair,
        Err(e) => return fail(&e),
    };

    match ops::run(&op, &limits, threads, cli.timing) {
        Ok(manifest) => {
            let json = serde_json::to_string(&manifest).expect("manifest serializes");
            println!("{json}");
            eprintln!("{}", op.summarize(&manifest.result));
            if let Some(path) = &cli.manifest {
                if let Err(e) = fs::File::create(path).and_then(|mut f| writeln!(f, "{json}")) {
                    eprintln!("cannot write manifest to {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    if e.is_resource_limit() {
        ExitCode::from(3)
    } else {
        ExitCode::from(1)
    }
}
