use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use famcover::{kr_decompose, EdgeSet, NodeId, OracleCaps};
use famcover_cli::bench::{self, BenchConfig, Suite};
use famcover_cli::gen::{self, Balance, GenKind, GenParams};
use famcover_cli::run::{self, Algo, OracleChoice, SolveOptions};
use famcover_cli::verify::verify;
use famcover_cli::{CliError, CliResult, InstanceDoc};
use serde_json::{Map, Value};

#[derive(Parser)]
#[command(name = "famcover", version, about = "Minimum-cost covers of disjointness-compliable set families")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone, Copy)]
struct CapArgs {
    /// Largest subset enumerated by the exact oracle.
    #[arg(long, default_value_t = OracleCaps::default().max_subset_nodes)]
    max_subset_nodes: usize,
    /// Largest edge count for exhaustive search.
    #[arg(long = "max-bf-edges", default_value_t = OracleCaps::default().max_bruteforce_edges)]
    max_bf_edges: usize,
}

impl CapArgs {
    fn caps(&self) -> OracleCaps {
        OracleCaps { max_subset_nodes: self.max_subset_nodes, max_bruteforce_edges: self.max_bf_edges }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print the solution document.
    Solve {
        /// Instance file; standard input when absent.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "greedy")]
        algo: Algo,
        /// Approximation factor assumed for the restricted-cover oracle.
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value = "exact")]
        oracle: OracleChoice,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Exhaustive optimum; only for small instances.
    Oracle {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        time_limit: Option<f64>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Check a solution document against its instance.
    Verify {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Generate a seeded random instance.
    Gen {
        kind: GenKind,
        #[arg(long)]
        n: usize,
        /// Edge count; `n - 1 + n / 2` (capped at the complete graph) when absent.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// G-P2P: number of negative-charge nodes.
        #[arg(long)]
        tau: Option<usize>,
        /// G-P2P total charge: any, zero, positive or nonneg.
        #[arg(long, default_value = "any")]
        balance: Balance,
        #[arg(long)]
        parts: Option<usize>,
        #[arg(long)]
        part_size: Option<usize>,
        #[arg(long)]
        roots: Option<usize>,
        #[arg(long)]
        groups: Option<usize>,
        #[arg(long)]
        red: Option<usize>,
        #[arg(long)]
        blue: Option<usize>,
        #[arg(long)]
        sets: Option<usize>,
        #[arg(long, default_value_t = 100)]
        max_cost: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded benchmark suite, one JSON line per instance.
    Bench {
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Spider decomposition of a tree instance.
    Decompose {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Comma-separated terminal labels; the family's violating nodes
        /// when absent.
        #[arg(long, value_delimiter = ',')]
        terminals: Option<Vec<String>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn io_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io { path: path.display().to_string(), source }
}

fn read_text(path: Option<&Path>) -> CliResult<String> {
    let mut text = String::new();
    match path {
        Some(p) => text = std::fs::read_to_string(p).map_err(|e| io_err(p, e))?,
        None => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| io_err(Path::new("<stdin>"), e))?;
        }
    }
    Ok(text)
}

fn write_text(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_err(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| io_err(Path::new("<stdout>"), e)),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn solve_cmd(input: Option<&Path>, out: Option<&Path>, opts: SolveOptions, limit: Option<f64>) -> CliResult<()> {
    let doc = InstanceDoc::parse(&read_text(input)?)?;
    let (outcome, text) = match limit {
        None => run::solve_to_text(&doc, &opts)?,
        Some(secs) => {
            if !(secs > 0.0 && secs.is_finite()) {
                return Err(CliError::input("--time-limit must be a positive number of seconds"));
            }
            let (tx, rx) = mpsc::channel();
            let worker = doc.clone();
            std::thread::spawn(move || {
                let _ = tx.send(run::solve_to_text(&worker, &opts));
            });
            match rx.recv_timeout(Duration::from_secs_f64(secs)) {
                Ok(r) => r?,
                Err(_) => return Err(CliError::Timeout(secs)),
            }
        }
    };
    write_text(out, &text)?;
    if outcome.edges.is_none() {
        return Err(CliError::Infeasible("no edge set covers the family".into()));
    }
    Ok(())
}

fn decompose_cmd(input: Option<&Path>, terminals: Option<&[String]>, out: Option<&Path>) -> CliResult<()> {
    let doc = InstanceDoc::parse(&read_text(input)?)?;
    let g = doc.graph();
    let terminals: Vec<NodeId> = match terminals {
        Some(labels) => labels
            .iter()
            .map(|l| doc.node_by_label(l).ok_or_else(|| CliError::input(format!("--terminals: unknown node \"{l}\""))))
            .collect::<CliResult<_>>()?,
        None => doc.family()?.singleton_cores(),
    };
    let all = EdgeSet::new((0..g.edge_count()).collect());
    if !famcover::is_forest(&g, &all)? || famcover::connected_components(&g, &all)?.count() != 1 {
        return Err(CliError::input("$.graph: decompose needs a tree"));
    }
    let spiders = kr_decompose(&g, &all, &terminals)?;
    let list: Vec<Value> = spiders
        .iter()
        .map(|s| {
            let mut o = Map::new();
            o.insert("root".into(), doc.label(s.root).clone());
            o.insert("terminals".into(), doc.labels(&s.terminals));
            o.insert("edges".into(), Value::Array(s.edges.iter().map(Value::from).collect()));
            o.insert("nodes".into(), doc.labels(&s.nodes(&g)));
            Value::Object(o)
        })
        .collect();
    let mut root = Map::new();
    root.insert("terminals".into(), doc.labels(&terminals));
    root.insert("spiders".into(), Value::Array(list));
    write_text(out, &pretty(&Value::Object(root)))
}

fn bench_cmd(suite: Suite, count: Option<usize>, seed: u64, out: Option<&Path>, caps: OracleCaps) -> CliResult<()> {
    let mut cfg = BenchConfig::new(suite, seed);
    cfg.caps = caps;
    if let Some(c) = count {
        cfg.count = c;
    }
    let mut lines = String::new();
    let mut sink = |r: &bench::Record| {
        let line = serde_json::to_string(&r.to_value(suite)).expect("serializable");
        if out.is_some() {
            lines.push_str(&line);
            lines.push('\n');
        } else {
            println!("{line}");
        }
    };
    let summary = bench::run(cfg, &mut sink)?;
    let line = serde_json::to_string(&summary.to_value()).expect("serializable");
    match out {
        Some(p) => {
            lines.push_str(&line);
            lines.push('\n');
            write_text(Some(p), &lines)?;
        }
        None => println!("{line}"),
    }
    if summary.violations > 0 {
        return Err(CliError::Violations(summary.violations, suite.name().into()));
    }
    Ok(())
}

fn execute(cli: Cli) -> CliResult<()> {
    match cli.cmd {
        Command::Solve { input, out, algo, alpha, oracle, time_limit, caps } => {
            if alpha.is_nan() || alpha < 1.0 {
                return Err(CliError::input("--alpha must be at least 1"));
            }
            let opts = SolveOptions { algo, alpha, caps: caps.caps(), oracle };
            solve_cmd(input.as_deref(), out.as_deref(), opts, time_limit)
        }
        Command::Oracle { input, out, time_limit, caps } => {
            let opts = SolveOptions { algo: Algo::BruteForce, caps: caps.caps(), ..SolveOptions::default() };
            solve_cmd(input.as_deref(), out.as_deref(), opts, time_limit)
        }
        Command::Verify { input, solution } => {
            let doc = InstanceDoc::parse(&read_text(input.as_deref())?)?;
            let text = read_text(Some(&solution))?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| CliError::input(format!("{}: {e}", solution.display())))?;
            let report = verify(&doc, &value)?;
            write_text(None, &pretty(&report.to_value(&doc)))
        }
        Command::Gen {
            kind,
            n,
            m,
            seed,
            tau,
            balance,
            parts,
            part_size,
            roots,
            groups,
            red,
            blue,
            sets,
            max_cost,
            out,
        } => {
            let m = m.unwrap_or_else(|| (n.saturating_sub(1) + n / 2).min(n * n.saturating_sub(1) / 2));
            let mut p = GenParams::new(kind, n, m, seed);
            p.tau = tau;
            p.balance = balance;
            p.parts = parts;
            p.part_size = part_size;
            p.roots = roots;
            p.groups = groups;
            p.red = red;
            p.blue = blue;
            p.sets = sets;
            p.max_cost = max_cost;
            write_text(out.as_deref(), &gen::generate(&p)?.to_text())
        }
        Command::Bench { suite, count, seed, out, caps } => bench_cmd(suite, count, seed, out.as_deref(), caps.caps()),
        Command::Decompose { input, terminals, out } => {
            decompose_cmd(input.as_deref(), terminals.as_deref(), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("famcover: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
