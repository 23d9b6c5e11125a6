use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use mcis::bench::{self, BatchOptions, SOLVER_STACK_BYTES};
use mcis::format::{read_graph, Format, InputOptions};
use mcis::report::InstanceReport;
use mcis_core::{brute_force_mcis, compute_symmetry_classes, solve, ClassKind, SolverConfig};
use serde_json::json;

#[derive(Parser)]
#[command(name = "mcis", version, about = "Maximum common induced subgraph solver with symmetry breaking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct InputArgs {
    /// Input format: lad or edgelist.
    #[arg(long, default_value = "lad")]
    format: Format,
    /// Read arcs instead of edges.
    #[arg(long)]
    directed: bool,
    /// Accept self-loops.
    #[arg(long)]
    loops: bool,
}

impl InputArgs {
    fn options(self) -> InputOptions {
        InputOptions { format: self.format, directed: self.directed, allow_loops: self.loops }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print the mapping as JSON.
    Solve {
        g: PathBuf,
        h: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        no_var_sym: bool,
        #[arg(long)]
        no_val_sym: bool,
        /// Time limit in seconds, symmetry detection included.
        #[arg(long)]
        timeout: Option<f64>,
        /// Also write the instance report to this file.
        #[arg(long)]
        stats_json: Option<PathBuf>,
    },
    /// Run every config on every manifest pair and write reports and aggregates.
    Bench {
        manifest: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated configs from dual, none, var, val.
        #[arg(long, default_value = "dual,none", value_delimiter = ',')]
        configs: Vec<String>,
        /// Worker threads (default: one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value = "bench-out")]
        out: PathBuf,
        /// Per-run time limit in seconds.
        #[arg(long, default_value_t = 1800.0)]
        timeout: f64,
        #[arg(long, default_value_t = 10.0)]
        easy_threshold: f64,
        #[arg(long, default_value_t = 1800.0)]
        hard_threshold: f64,
    },
    /// Print the nontrivial symmetry classes of a graph as JSON.
    Symmetry {
        g: PathBuf,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Brute-force optimum for graphs of at most 10 vertices.
    Oracle {
        g: PathBuf,
        h: PathBuf,
        #[command(flatten)]
        input: InputArgs,
    },
}

fn seconds(s: f64) -> anyhow::Result<Duration> {
    Duration::try_from_secs_f64(s).map_err(|_| anyhow!("invalid time limit {s}"))
}

fn run_solve(
    g_path: &Path,
    h_path: &Path,
    input: InputOptions,
    config: SolverConfig,
    stats_json: Option<&Path>,
) -> anyhow::Result<ExitCode> {
    let g = read_graph(g_path, input)?;
    let h = read_graph(h_path, input)?;
    let solution = solve(&g.graph, &h.graph, &config)?;
    let id = format!("{}|{}", g_path.display(), h_path.display());
    let report = InstanceReport::from_stats(&id, config.name(), &solution.stats);
    if let Some(path) = stats_json {
        std::fs::write(path, serde_json::to_string_pretty(&report)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let mapping: Vec<[&str; 2]> = solution.mapping.matched().map(|(v, u)| [g.name(v), h.name(u)]).collect();
    let out = json!({ "size": report.incumbent_size, "completed": report.completed, "mapping": mapping, "stats": report });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(if report.completed { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Solve { g, h, input, no_var_sym, no_val_sym, timeout, stats_json } => {
            let mut config = SolverConfig::dual();
            config.var_sym = !no_var_sym;
            config.val_sym = !no_val_sym;
            config.timeout = timeout.map(seconds).transpose()?;
            // Deep recursion on large graphs needs more than the main stack.
            let worker = std::thread::Builder::new()
                .stack_size(SOLVER_STACK_BYTES)
                .spawn(move || run_solve(&g, &h, input.options(), config, stats_json.as_deref()))?;
            worker.join().map_err(|_| anyhow!("solver thread panicked"))?
        }
        Command::Bench { manifest, input, configs, jobs, out, timeout, easy_threshold, hard_threshold } => {
            let configs = configs
                .iter()
                .map(|name| SolverConfig::from_name(name).ok_or_else(|| anyhow!("unknown config `{name}`")))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let entries = bench::read_manifest(&manifest)?;
            let options = BatchOptions {
                input: input.options(),
                timeout: Some(seconds(timeout)?),
                jobs,
                easy_threshold,
                hard_threshold,
            };
            let reports = bench::run_batch(&entries, &configs, &options);
            for r in reports.iter().filter(|r| r.error.is_some()) {
                eprintln!("{} [{}]: {}", r.instance, r.config, r.error.as_deref().unwrap_or_default());
            }
            let names: Vec<&str> = configs.iter().map(SolverConfig::name).collect();
            bench::write_outputs(&out, &reports, &names, &options)?;
            eprintln!("{} runs written to {}", reports.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Symmetry { g, input } => {
            let g = read_graph(&g, input.options())?;
            let classes = compute_symmetry_classes(&g.graph);
            let list: Vec<_> = classes
                .nontrivial()
                .map(|(kind, members)| {
                    let kind = match kind {
                        ClassKind::Negative => "negative",
                        ClassKind::Positive => "positive",
                        ClassKind::Singleton => "singleton",
                    };
                    let names: Vec<&str> = members.iter().map(|&v| g.name(v)).collect();
                    json!({ "kind": kind, "members": members, "names": names })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&json!({ "classes": list }))?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { g, h, input } => {
            let g = read_graph(&g, input.options())?;
            let h = read_graph(&h, input.options())?;
            let result = brute_force_mcis(&g.graph, &h.graph)?;
            let first: Vec<[&str; 2]> = result.witnesses[0].matched().map(|(v, u)| [g.name(v), h.name(u)]).collect();
            let out = json!({
                "size": result.size,
                "witnesses": result.witnesses.len(),
                "truncated": result.truncated,
                "mapping": first,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
