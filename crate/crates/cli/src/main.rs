//! `storient`: solve, verify, brute-force, compare, generate, decompose.
//!
//! Exit codes: 0 = YES / pass, 1 = NO / fail / disagreement, 2 = usage,
//! parse or precondition errors. Results go to stdout, diagnostics to
//! stderr.

use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use storient::format::{
    parse_designated_terminals, parse_graph, parse_orientation, parse_td, serialize_graph,
    serialize_orientation, serialize_td,
};
use storient::oracle::{self, DEFAULT_EDGE_CAP};
use storient::random::{connected_gnm, rng};
use storient::reduction::{build_g_phi, build_h_phi, build_j_phi, GadgetLibrary, Nae3SatFormula};
use storient::{
    check_st_orientation, heuristic_decompose, make_nice, nice_decomposition, solve, solve_min,
    Instance, Outcome, SolveError, UndirectedGraph,
};

#[derive(Parser)]
#[command(
    name = "storient",
    version,
    about = "st-orientations with few transitive edges"
)]
struct Cli {
    /// Worker threads for the solver and the oracle (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Terminals {
    /// Prescribed source (1-based); overrides a `c s <id>` line in the graph file.
    #[arg(long)]
    s: Option<usize>,
    /// Prescribed sink (1-based); overrides a `c t <id>` line in the graph file.
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact solver over a tree decomposition.
    Solve {
        graph: PathBuf,
        /// Tree decomposition (.td); default is the min-fill heuristic.
        #[arg(long)]
        td: Option<PathBuf>,
        /// Decide: at most K transitive edges.
        #[arg(long, conflicts_with = "min")]
        k: Option<usize>,
        /// Minimise the number of transitive edges (the default).
        #[arg(long)]
        min: bool,
        #[command(flatten)]
        terminals: Terminals,
        /// Write per-node record statistics here.
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Write the orientation here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an orientation file against a graph.
    Verify {
        graph: PathBuf,
        orientation: PathBuf,
        /// Transitive-edge budget (default: unbounded).
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        terminals: Terminals,
    },
    /// Exhaustive search (small graphs only).
    Oracle {
        graph: PathBuf,
        /// Also print `<transitive> <orientations>` per transitive count.
        #[arg(long)]
        census: bool,
        #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
        cap: usize,
        #[command(flatten)]
        terminals: Terminals,
    },
    /// Solver vs oracle on a graph file or on random connected graphs.
    Compare {
        #[arg(required_unless_present = "random")]
        graph: Option<PathBuf>,
        /// `N M SEED COUNT`: COUNT random connected G(N, M) graphs.
        #[arg(long, num_args = 4, value_names = ["N", "M", "SEED", "COUNT"], conflicts_with = "graph")]
        random: Option<Vec<u64>>,
        #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
        cap: usize,
        #[command(flatten)]
        terminals: Terminals,
    },
    /// Build a reduction instance from a DIMACS-style NAE-3-SAT formula.
    Generate {
        cnf: PathBuf,
        #[arg(long, value_enum)]
        variant: Variant,
        /// Writes `<prefix>.gr` and `<prefix>.labels`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Min-fill tree decomposition.
    Decompose {
        graph: PathBuf,
        /// Write the .td file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    G,
    H,
    J,
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) {
    let _ = io::stdout().write_all(text.as_bytes());
}

macro_rules! outln {
    ($($arg:tt)*) => { emit(&format!("{}\n", format_args!($($arg)*))) };
}

/// Failure that maps to exit code 1 after its message is printed.
struct Reject;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_graph(path: &Path) -> Result<(UndirectedGraph, Option<usize>, Option<usize>)> {
    let text = read(path)?;
    let g = parse_graph(&text).with_context(|| format!("{}", path.display()))?;
    let (s, t) = parse_designated_terminals(&text);
    Ok((g, s, t))
}

/// Merges flag and file terminals and converts to 0-based ids.
fn instance(
    g: UndirectedGraph,
    file: (Option<usize>, Option<usize>),
    flags: &Terminals,
    k: usize,
) -> Result<Instance> {
    let n = g.vertex_count();
    let flag = |id: Option<usize>, name: &str| -> Result<Option<usize>> {
        match id {
            Some(0) => bail!("--{name} ids are 1-based"),
            Some(v) if v > n => bail!("--{name} {v} out of range 1..={n}"),
            v => Ok(v.map(|v| v - 1)),
        }
    };
    let s = flag(flags.s, "s")?.or(file.0);
    let t = flag(flags.t, "t")?.or(file.1);
    Ok(Instance::new(g, s, t, k)?)
}

fn cmd_solve(
    graph: &Path,
    td: Option<&Path>,
    k: Option<usize>,
    terminals: &Terminals,
    stats: Option<&Path>,
    out: Option<&Path>,
) -> Result<Result<(), Reject>> {
    let (g, s, t) = load_graph(graph)?;
    let ntd = match td {
        Some(p) => make_nice(
            &parse_td(&read(p)?, Some(g.vertex_count()))
                .with_context(|| format!("{}", p.display()))?,
        ),
        None => nice_decomposition(&g),
    };
    let inst = instance(g, (s, t), terminals, k.unwrap_or(0))?;
    let report = match k {
        Some(_) => solve(&inst, &ntd),
        None => solve_min(&inst, &ntd),
    };
    let report = match report {
        Err(e @ SolveError::TooFewVertices(_)) => {
            eprintln!("storient: {e}");
            outln!("NO");
            return Ok(Err(Reject));
        }
        r => r?,
    };
    if let Some(p) = stats {
        write(p, &report.stats_report())?;
    }
    match &report.outcome {
        Outcome::No { .. } => {
            outln!("NO");
            Ok(Err(Reject))
        }
        Outcome::Yes {
            orientation,
            transitive_count,
            ..
        } => {
            let verdict = check_st_orientation(&inst.with_budget(*transitive_count), orientation)?;
            if !verdict.pass {
                bail!("internal error: solver output rejected by the checker: {verdict}");
            }
            match k {
                Some(_) => outln!("YES transitive {transitive_count}"),
                None => outln!("min_transitive {transitive_count}"),
            }
            let text = serialize_orientation(&inst.graph, orientation);
            match out {
                Some(p) => write(p, &text)?,
                None => emit(&text),
            }
            Ok(Ok(()))
        }
    }
}

fn cmd_verify(
    graph: &Path,
    orientation: &Path,
    k: Option<usize>,
    terminals: &Terminals,
) -> Result<Result<(), Reject>> {
    let (g, s, t) = load_graph(graph)?;
    let o = parse_orientation(&read(orientation)?, &g)
        .with_context(|| format!("{}", orientation.display()))?;
    let inst = instance(g, (s, t), terminals, k.unwrap_or(usize::MAX))?;
    let verdict = check_st_orientation(&inst, &o)?;
    outln!("{verdict}");
    Ok(if verdict.pass { Ok(()) } else { Err(Reject) })
}

fn cmd_oracle(
    graph: &Path,
    census: bool,
    cap: usize,
    terminals: &Terminals,
) -> Result<Result<(), Reject>> {
    let (g, s, t) = load_graph(graph)?;
    let inst = instance(g, (s, t), terminals, 0)?;
    match oracle::min_transitive(&inst, cap)? {
        None => {
            outln!("NO");
            Ok(Err(Reject))
        }
        Some(ans) => {
            outln!("min_transitive {}", ans.min);
            if census {
                for (count, orientations) in &ans.census {
                    outln!("{count} {orientations}");
                }
            }
            Ok(Ok(()))
        }
    }
}

/// `Ok(Some(min))` on agreement, `Ok(None)` on disagreement (instance
/// printed as a commented graph).
fn compare_one(inst: &Instance, cap: usize) -> Result<Option<Option<usize>>> {
    let dp = if inst.graph.vertex_count() < 2 {
        None
    } else {
        solve_min(inst, &nice_decomposition(&inst.graph))?.min_cost()
    };
    let brute = oracle::min_transitive(inst, cap)?.map(|a| a.min);
    if dp == brute {
        return Ok(Some(dp));
    }
    let show = |m: Option<usize>| m.map_or("NO".to_string(), |m| m.to_string());
    outln!("c disagreement dp={} oracle={}", show(dp), show(brute));
    for (name, v) in [("s", inst.s), ("t", inst.t)] {
        if let Some(v) = v {
            outln!("c {name} {}", v + 1);
        }
    }
    emit(&serialize_graph(&inst.graph));
    Ok(None)
}

fn cmd_compare(
    graph: Option<&Path>,
    random: Option<&[u64]>,
    cap: usize,
    terminals: &Terminals,
) -> Result<Result<(), Reject>> {
    let instances = match (graph, random) {
        (Some(p), _) => {
            let (g, s, t) = load_graph(p)?;
            vec![instance(g, (s, t), terminals, 0)?]
        }
        (None, Some(&[n, m, seed, count])) => {
            let (n, m) = (n as usize, m as usize);
            let mut r = rng(seed);
            (0..count)
                .map(|_| {
                    connected_gnm(n, m, &mut r)
                        .map(|g| Instance::free(g, 0))
                        .with_context(|| {
                            format!("no connected simple graph with {n} vertices and {m} edges")
                        })
                })
                .collect::<Result<_>>()?
        }
        _ => bail!("give a graph file or --random N M SEED COUNT"),
    };
    let total = instances.len();
    let mut agree = 0;
    for inst in &instances {
        if let Some(min) = compare_one(inst, cap)? {
            agree += 1;
            if graph.is_some() {
                outln!(
                    "agree min_transitive {}",
                    min.map_or("NO".to_string(), |m| m.to_string())
                );
            }
        }
    }
    outln!("{agree}/{total} agree");
    Ok(if agree == total { Ok(()) } else { Err(Reject) })
}

fn cmd_generate(cnf: &Path, variant: Variant, out: &Path) -> Result<Result<(), Reject>> {
    let f =
        Nae3SatFormula::parse_dimacs(&read(cnf)?).with_context(|| format!("{}", cnf.display()))?;
    let lib = GadgetLibrary::builtin();
    let r = match variant {
        Variant::G => build_g_phi(&f, &lib),
        Variant::H => build_h_phi(&f, &lib),
        Variant::J => build_j_phi(&f, &lib),
    }?;
    let prefix = out.display();
    let graph_text = format!(
        "c s {}\nc t {}\n{}",
        r.s + 1,
        r.t + 1,
        serialize_graph(&r.graph)
    );
    write(Path::new(&format!("{prefix}.gr")), &graph_text)?;
    write(Path::new(&format!("{prefix}.labels")), &r.label_file())?;
    outln!(
        "vertices {} edges {} s {} t {}",
        r.graph.vertex_count(),
        r.graph.edge_count(),
        r.s + 1,
        r.t + 1
    );
    Ok(Ok(()))
}

fn cmd_decompose(graph: &Path, out: Option<&Path>) -> Result<Result<(), Reject>> {
    let (g, _, _) = load_graph(graph)?;
    let td = heuristic_decompose(&g);
    let text = serialize_td(&td);
    match out {
        Some(p) => {
            write(p, &text)?;
            outln!("width {}", td.width());
        }
        None => emit(&text),
    }
    Ok(Ok(()))
}

fn run(cli: Cli) -> Result<Result<(), Reject>> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot configure the thread pool")?;
    }
    match &cli.command {
        Command::Solve {
            graph,
            td,
            k,
            min: _,
            terminals,
            stats,
            out,
        } => cmd_solve(
            graph,
            td.as_deref(),
            *k,
            terminals,
            stats.as_deref(),
            out.as_deref(),
        ),
        Command::Verify {
            graph,
            orientation,
            k,
            terminals,
        } => cmd_verify(graph, orientation, *k, terminals),
        Command::Oracle {
            graph,
            census,
            cap,
            terminals,
        } => cmd_oracle(graph, *census, *cap, terminals),
        Command::Compare {
            graph,
            random,
            cap,
            terminals,
        } => cmd_compare(graph.as_deref(), random.as_deref(), *cap, terminals),
        Command::Generate { cnf, variant, out } => cmd_generate(cnf, *variant, out),
        Command::Decompose { graph, out } => cmd_decompose(graph, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Reject)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("storient: {e:#}");
            ExitCode::from(2)
        }
    }
}
