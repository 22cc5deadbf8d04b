//! `pgsolve`: solve, verify, generate and benchmark parity games.
//!
//! Exit codes: 0 success, 1 failed verification or cross-check, 2 usage, parse or
//! parameter errors.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use pgsolve_bench::{build_suite, run_suite, summarize, BenchConfig, CsvSink, Status, SuiteSpec};
use pgsolve_core::generators::{gen_random, gen_single_priority, gen_worstcase};
use pgsolve_core::oracle::verify_solution;
use pgsolve_core::{
    normalize, parse_pg, parse_solution, solve, write_pg, write_solution, Algorithm, Arena, OptFlags,
    Solution, SolveError, SolverConfig,
};

#[derive(Parser)]
#[command(name = "pgsolve", version, about = "Recursive parity game solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a game in PGSolver format and print both winning regions.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "zielonka")]
        algorithm: Algorithm,
        /// `default` (every shortcut the algorithm supports), `none`, or a list like `1,3,5`.
        #[arg(long, default_value = "default")]
        opts: String,
        /// Print solver counters as `key: value` lines.
        #[arg(long)]
        stats: bool,
        /// Write a `paritysol` file instead of printing the regions.
        #[arg(long)]
        solution_out: Option<PathBuf>,
        /// Seconds before giving up.
        #[arg(long)]
        timeout: Option<f64>,
    },
    /// Check a solution file against a game.
    Verify { game: PathBuf, solution: PathBuf },
    /// Write a generated game in PGSolver format.
    Generate {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        /// Priority bound for random games; defaults to `n`.
        #[arg(long)]
        d: Option<u32>,
        #[arg(long, default_value_t = 1)]
        deg_lo: usize,
        /// Defaults to `deg_lo`.
        #[arg(long)]
        deg_hi: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run solvers over game suites and write one CSV row per game and solver.
    Bench {
        /// `empty`, `worstcase[:LO-HI]`, `random-high[:COUNT[:NLO-NHI]]`, `random-low[...]`,
        /// `single-priority[:COUNT]`, or a `.gm` file or directory. Repeatable.
        #[arg(long = "suite", required = true)]
        suites: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "zielonka,liverpool,warsaw")]
        algorithms: Vec<Algorithm>,
        /// `default` or `none`; applied to every algorithm.
        #[arg(long, default_value = "default")]
        opts: String,
        /// Seconds per game and solver.
        #[arg(long, default_value_t = 900.0)]
        timeout: f64,
        /// Worker threads; 0 picks one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the summary report and one CSV per suite into this directory.
        #[arg(long)]
        report_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    Worstcase,
    SinglePriority,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn failed(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn read_game(path: &Path) -> Result<Arena, Failure> {
    let bytes = std::fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_pg(&bytes).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_opts(text: &str, algorithm: Algorithm) -> Result<OptFlags, Failure> {
    if text == "default" {
        return Ok(OptFlags::applicable(algorithm));
    }
    let opts: OptFlags = text.parse().map_err(usage)?;
    SolverConfig::new(algorithm)
        .with_opts(opts)
        .validate()
        .map_err(|e| usage(e.to_string()))?;
    Ok(opts)
}

fn seconds(value: f64) -> Result<Duration, Failure> {
    Duration::try_from_secs_f64(value).map_err(|_| usage(format!("bad timeout `{value}`")))
}

fn vertex_list(set: impl Iterator<Item = usize>) -> String {
    set.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| failed(e.to_string())),
    }
}

fn cmd_solve(
    file: &Path,
    algorithm: Algorithm,
    opts: &str,
    stats: bool,
    solution_out: Option<&Path>,
    timeout: Option<f64>,
) -> Result<(), Failure> {
    let raw = read_game(file)?;
    let opts = parse_opts(opts, algorithm)?;
    let (arena, report) = normalize(&raw).map_err(|e| usage(e.to_string()))?;
    let cfg = SolverConfig::new(algorithm)
        .with_opts(opts)
        .with_timeout(timeout.map(seconds).transpose()?);
    let (solution, counters) = solve(&arena, &cfg).map_err(|e| match e {
        SolveError::Timeout => failed("time limit exceeded"),
        other => usage(other.to_string()),
    })?;
    let check = verify_solution(&arena, &solution);
    if !check.passed() {
        return Err(failed(format!("internal check failed:\n{check}")));
    }
    if algorithm != Algorithm::Zielonka {
        let (reference, _) = solve(&arena, &SolverConfig::optimised(Algorithm::Zielonka)).map_err(|e| failed(e.to_string()))?;
        if !reference.same_regions(&solution) {
            return Err(failed("internal check failed: regions differ from zielonka's"));
        }
    }
    let lifted = solution.lift(&report);
    let mut out = String::new();
    match solution_out {
        Some(path) => {
            std::fs::write(path, write_solution(&lifted)).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => {
            writeln!(out, "even wins: {}", vertex_list(lifted.win_even.iter())).unwrap();
            writeln!(out, "odd wins: {}", vertex_list(lifted.win_odd.iter())).unwrap();
        }
    }
    if stats {
        writeln!(out, "algorithm: {algorithm}").unwrap();
        writeln!(out, "opts: {opts}").unwrap();
        writeln!(out, "iterations: {}", counters.iterations).unwrap();
        writeln!(out, "recursive_calls: {}", counters.recursive_calls).unwrap();
        writeln!(out, "max_recursion_depth: {}", counters.max_recursion_depth).unwrap();
        writeln!(out, "attractor_calls: {}", counters.attractor_calls).unwrap();
        writeln!(out, "dirty_flag_fired: {}", counters.dirty_flag_fired).unwrap();
    }
    write_output(None, &out)
}

fn cmd_verify(game: &Path, solution: &Path) -> Result<(), Failure> {
    let arena = read_game(game)?;
    let bytes = std::fs::read(solution).map_err(|e| usage(format!("{}: {e}", solution.display())))?;
    let solution: Solution =
        parse_solution(&bytes, arena.num_vertices()).map_err(|e| usage(format!("{}: {e}", solution.display())))?;
    let report = verify_solution(&arena, &solution);
    println!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: String::new(),
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    kind: Kind,
    n: Option<usize>,
    d: Option<u32>,
    deg_lo: usize,
    deg_hi: Option<usize>,
    k: Option<usize>,
    p: Option<u32>,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| usage(format!("--{flag} is required")));
    let (arena, what) = match kind {
        Kind::Random => {
            let n = need(n, "n")?;
            let d = d.unwrap_or(n as u32);
            let hi = deg_hi.unwrap_or(deg_lo);
            let arena = gen_random(n, d, deg_lo, hi, seed).map_err(|e| usage(e.to_string()))?;
            (arena, format!("random n={n} d={d} deg={deg_lo}..{hi} seed={seed}"))
        }
        Kind::Worstcase => {
            let k = need(k, "k")?;
            (gen_worstcase(k).map_err(|e| usage(e.to_string()))?, format!("worstcase k={k}"))
        }
        Kind::SinglePriority => {
            let n = need(n, "n")?;
            let p = p.ok_or_else(|| usage("--p is required"))?;
            let arena = gen_single_priority(n, p).map_err(|e| usage(e.to_string()))?;
            (arena, format!("single-priority n={n} p={p}"))
        }
    };
    write_output(out, &write_pg(&arena))?;
    // the game format has no comments, so the parameters go to stderr
    eprintln!("generated {what}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    suites: &[String],
    algorithms: &[Algorithm],
    opts: &str,
    timeout: f64,
    jobs: usize,
    seed: u64,
    out: Option<&Path>,
    report_dir: Option<&Path>,
) -> Result<(), Failure> {
    let mut games = Vec::new();
    for s in suites {
        let spec: SuiteSpec = s.parse().map_err(|e| usage(format!("{e}")))?;
        games.extend(build_suite(&spec, seed).map_err(|e| usage(e.to_string()))?);
    }
    let mut cfg = match opts {
        "default" => BenchConfig::optimised(algorithms),
        "none" => BenchConfig::plain(algorithms),
        other => return Err(usage(format!("--opts must be `default` or `none`, got `{other}`"))),
    };
    cfg.timeout = Some(seconds(timeout)?);
    cfg.jobs = jobs;
    let writer: Box<dyn Write> = match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| usage(format!("{}: {e}", p.display())))?)),
        None => Box::new(io::stdout()),
    };
    let mut sink = CsvSink::new(writer).map_err(|e| failed(e.to_string()))?;
    let records = run_suite(&games, &cfg, |r| sink.write(r)).map_err(|e| failed(e.to_string()))?;
    drop(sink);
    let summary = summarize(&records);
    eprintln!("seed {seed}, {} games, {} records", games.len(), records.len());
    eprint!("{}", summary.text);
    if let Some(dir) = report_dir {
        std::fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
        let text = format!("seed: {seed}\n{}", summary.text);
        std::fs::write(dir.join("summary.txt"), text).map_err(|e| failed(e.to_string()))?;
        for fig in &summary.figures {
            std::fs::write(dir.join(&fig.name), &fig.csv).map_err(|e| failed(e.to_string()))?;
        }
    }
    match records.iter().find(|r| matches!(r.status, Status::Error(_))) {
        Some(r) => Err(failed(format!("{} {}: {:?}", r.game_id, r.algorithm, r.status))),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            file,
            algorithm,
            opts,
            stats,
            solution_out,
            timeout,
        } => cmd_solve(&file, algorithm, &opts, stats, solution_out.as_deref(), timeout),
        Command::Verify { game, solution } => cmd_verify(&game, &solution),
        Command::Generate {
            kind,
            n,
            d,
            deg_lo,
            deg_hi,
            k,
            p,
            seed,
            out,
        } => cmd_generate(kind, n, d, deg_lo, deg_hi, k, p, seed, out.as_deref()),
        Command::Bench {
            suites,
            algorithms,
            opts,
            timeout,
            jobs,
            seed,
            out,
            report_dir,
        } => cmd_bench(&suites, &algorithms, &opts, timeout, jobs, seed, out.as_deref(), report_dir.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
