//! `hfvrp`: solve heterogeneous fleet VRP instances and benchmark suites.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hfvrp::engine::{format_trace, prepare, run_many};
use hfvrp::io::bks::BksRegistry;
use hfvrp::io::report::{format_bench_table, format_solution, summary_line, BenchRow};
use hfvrp::io::{legacy, read_instance, synthetic, write_instance};
use hfvrp::oracle::exact_solve;
use hfvrp::{Params, Variant};

#[derive(Parser)]
#[command(name = "hfvrp", version, about = "Adaptive iterated local search for heterogeneous fleet VRP")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance with several seeded runs.
    Solve(SolveArgs),
    /// Solve every instance file in a directory and print a results table.
    Bench(BenchArgs),
    /// Solve a tiny instance (at most 8 customers) exactly.
    Oracle(OracleArgs),
    /// Rewrite a TSPLIB-style file in the native instance format.
    Convert(ConvertArgs),
    /// Write a random instance.
    Generate(GenerateArgs),
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Independent runs, seeded seed, seed+1, ...
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 40_000)]
    max_no_improve: usize,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    dbeta: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    gamma: Option<usize>,
    #[arg(long)]
    phi: Option<usize>,
    /// Wall-clock limit per run, in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Extra `name variant cost` file (added to the built-in values).
    #[arg(long)]
    bks: Option<PathBuf>,
    /// Print `-` instead of times so reports are reproducible byte for byte.
    #[arg(long)]
    omit_time: bool,
}

impl SolverArgs {
    fn params(&self, trace: bool) -> Result<Params> {
        let d = Params::default();
        let time_limit = match self.time_limit {
            Some(s) if !(s > 0.0 && s.is_finite()) => bail!("--time-limit must be positive"),
            Some(s) => Some(Duration::from_secs_f64(s)),
            None => None,
        };
        let params = Params {
            alpha: self.alpha.unwrap_or(d.alpha),
            d_beta: self.dbeta.unwrap_or(d.d_beta),
            eta: self.eta.unwrap_or(d.eta),
            gamma: self.gamma.unwrap_or(d.gamma),
            phi: self.phi.unwrap_or(d.phi),
            max_no_improve: self.max_no_improve,
            max_iterations: self.max_iterations,
            seed: self.seed,
            time_limit,
            trace,
            ..d
        };
        params.validate()?;
        if self.runs == 0 {
            bail!("--runs must be at least 1");
        }
        Ok(params)
    }

    fn registry(&self) -> Result<BksRegistry> {
        let mut r = BksRegistry::from_env()?;
        if let Some(path) = &self.bks {
            r.load(path)?;
        }
        Ok(r)
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// HVRPFD, HVRPD, FSMFD, FSMF or FSMD. Defaults to the file's variant.
    #[arg(long)]
    variant: Option<String>,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write the best solution here.
    #[arg(long)]
    solution_out: Option<PathBuf>,
    /// Write per-iteration records here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of instance files.
    #[arg(long)]
    suite: PathBuf,
    #[arg(long)]
    variant: String,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    variant: Option<String>,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    variant: String,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    types: usize,
    #[arg(long)]
    variant: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    output: PathBuf,
}

fn parse_variant(v: Option<&str>) -> Result<Option<Variant>> {
    Ok(v.map(str::parse).transpose()?)
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).with_context(|| format!("cannot write {}", path.display()))
}

/// Writes to stdout; a closed pipe (as with `| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        r => r.context("cannot write to stdout"),
    }
}

fn solve(args: SolveArgs) -> Result<()> {
    let variant = parse_variant(args.variant.as_deref())?;
    let instance = read_instance(&args.instance, variant)?;
    let params = args.solver.params(args.trace.is_some())?;
    let problem = prepare(&instance, &params)?;
    let summary = run_many(&problem, &params, args.solver.runs)?;
    let registry = args.solver.registry()?;
    let omit = args.solver.omit_time;

    let mut report = String::new();
    for (i, r) in summary.runs.iter().enumerate() {
        let time = if omit { "-".to_string() } else { format!("{:.2}", r.time) };
        let _ = writeln!(
            report,
            "run {} seed {} best {:.2} iterations {} time {}",
            i + 1,
            params.seed.wrapping_add(i as u64),
            r.best_cost,
            r.iterations,
            time
        );
    }
    let variant_name = instance.variant.as_str();
    let bks = registry.get(&instance.name, instance.variant);
    let _ = writeln!(
        report,
        "{}",
        summary_line(&instance.name, variant_name, summary.best, summary.avg, summary.avg_time, bks, omit)
    );
    emit(&report)?;

    if let Some(path) = &args.solution_out {
        write_file(path, &format_solution(&summary.best_run().best_solution, &problem))?;
    }
    if let Some(path) = &args.trace {
        let mut out = String::new();
        for (i, r) in summary.runs.iter().enumerate() {
            let _ = writeln!(out, "# run {} seed {}", i + 1, params.seed.wrapping_add(i as u64));
            out.push_str(&format_trace(r.trace.as_deref().unwrap_or_default()));
        }
        write_file(path, &out)?;
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let variant: Variant = args.variant.parse()?;
    let mut files: Vec<PathBuf> = fs::read_dir(&args.suite)
        .with_context(|| format!("cannot read suite {}", args.suite.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("suite {} contains no instance files", args.suite.display());
    }
    let params = args.solver.params(false)?;
    let registry = args.solver.registry()?;
    let mut rows = Vec::with_capacity(files.len());
    for path in &files {
        let instance = read_instance(path, Some(variant)).with_context(|| format!("in {}", path.display()))?;
        let problem = prepare(&instance, &params)?;
        let summary = run_many(&problem, &params, args.solver.runs)?;
        rows.push(BenchRow {
            name: instance.name.clone(),
            bks: registry.get(&instance.name, variant),
            avg: summary.avg,
            best: summary.best,
            time: summary.avg_time,
        });
    }
    emit(&format_bench_table(&rows, args.solver.omit_time))
}

fn oracle(args: OracleArgs) -> Result<()> {
    let instance = read_instance(&args.instance, parse_variant(args.variant.as_deref())?)?;
    let problem = hfvrp::Problem::new(instance.normalize_fleet(), Params::default().phi)?;
    let (cost, solution) = exact_solve(&problem)?;
    let header = format!("instance {} variant {} optimum {cost:.6}\n", instance.name, instance.variant);
    emit(&(header + &format_solution(&solution, &problem)))
}

fn convert(args: ConvertArgs) -> Result<()> {
    let variant: Variant = args.variant.parse()?;
    let text = fs::read_to_string(&args.input).with_context(|| format!("cannot read {}", args.input.display()))?;
    let stem = args.input.file_stem().and_then(|s| s.to_str()).unwrap_or("");
    let instance = legacy::convert_legacy(&text, stem, Some(variant), None)?;
    write_file(&args.output, &write_instance(&instance))
}

fn generate(args: GenerateArgs) -> Result<()> {
    let variant: Variant = args.variant.parse()?;
    if args.n == 0 || args.types == 0 {
        bail!("--n and --types must be positive");
    }
    let name = args.name.unwrap_or_else(|| format!("rand-{}-{}", args.n, args.seed));
    let instance = synthetic::random_instance(&name, args.n, args.types, variant, args.seed);
    write_file(&args.output, &write_instance(&instance))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Oracle(a) => oracle(a),
        Command::Convert(a) => convert(a),
        Command::Generate(a) => generate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
