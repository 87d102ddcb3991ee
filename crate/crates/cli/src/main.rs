//! `dihyper`: count, estimate and sample directed hypergraphs.
//!
//! Data goes to stdout (or `--out`), diagnostics to stderr. Exit codes: 0
//! success, 1 failed verification, 2 invalid input, 3 budget exhausted, 4
//! empty ensemble.

mod report;
mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dihyper_core::model::{parse_instance, DihypergraphDoc};
use dihyper_core::sampler::{sample_rng, DihypergraphSampler, DEFAULT_MAX_REJECTS};
use dihyper_core::verify::{identity_corpus, run_identity_suite, CorpusLimits};
use dihyper_core::{Error, Instance, Oracle};
use num_traits::Zero;

use report::{run_count, Mode};
use sweep::{run_sweep, write_csv, FamilySpec};

#[derive(Parser)]
#[command(name = "dihyper", version, about = "Directed hypergraphs with given degrees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and/or asymptotic counts for one instance, as JSON.
    Count {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        mode: Mode,
        /// Work budget of the exact oracle; 0 means unlimited.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0.1)]
        threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Uniform samples, one JSON dihypergraph per line.
    Sample {
        instance: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_MAX_REJECTS)]
        max_rejects: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact vs asymptotic table over a family of instances, as CSV.
    Sweep {
        family: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the exact identity suite over all small instances.
    Verify {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 3)]
        max_m: usize,
        #[arg(long, default_value_t = 6)]
        max_x_edges: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::EmptyEnsemble(_) => 4,
            e if e.is_budget() => 3,
            Error::PreconditionViolated(_) => 2,
            e if e.is_validation() => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn oracle(budget: Option<u64>) -> Oracle {
    match budget {
        None => Oracle::default(),
        Some(0) => Oracle::unbounded(),
        Some(b) => Oracle::new(Some(b)),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    Ok(parse_instance(&read(path)?)?)
}

fn output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn count(instance: &Path, mode: Mode, budget: Option<u64>, threshold: f64, out: &Option<PathBuf>) -> Result<(), Failure> {
    let inst = load_instance(instance)?;
    let (report, failure) = run_count(&inst, mode, &oracle(budget), threshold);
    let mut w = output(out)?;
    serde_json::to_writer_pretty(&mut w, &report).map_err(|e| Failure { code: 1, message: e.to_string() })?;
    writeln!(w)?;
    w.flush()?;
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn sample(instance: &Path, n: u64, seed: u64, budget: Option<u64>, max_rejects: u64, out: &Option<PathBuf>) -> Result<(), Failure> {
    let inst = load_instance(instance)?;
    let oracle = oracle(budget);
    if oracle.count_dihypergraphs(&inst)?.is_zero() {
        return Err(Error::EmptyEnsemble("no dihypergraph realises the instance".into()).into());
    }
    let sampler = DihypergraphSampler::new(&inst, oracle, max_rejects)?;
    let mut w = output(out)?;
    for i in 0..n {
        let h = sampler.sample(&mut sample_rng(seed, i))?;
        let doc = DihypergraphDoc::from(&h);
        serde_json::to_writer(&mut w, &doc).map_err(|e| Failure { code: 1, message: e.to_string() })?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

fn sweep(family: &Path, budget: Option<u64>, out: &Option<PathBuf>) -> Result<(), Failure> {
    let spec: FamilySpec = serde_json::from_str(&read(family)?).map_err(|e| Failure {
        code: 2,
        message: format!("family spec: {e}"),
    })?;
    let rows = run_sweep(spec, &oracle(budget));
    for r in &rows {
        if let Some(e) = &r.error {
            eprintln!("row {}: {e}", r.param);
        }
    }
    write_csv(&rows, output(out)?).map_err(|e| Failure { code: 1, message: e.to_string() })?;
    match rows.iter().find(|r| r.succeeded()) {
        Some(_) => Ok(()),
        None => match rows.into_iter().find_map(|r| r.error) {
            Some(e) => Err(e.into()),
            None => Err(Failure { code: 2, message: "family spec has no rows".into() }),
        },
    }
}

fn verify(limits: CorpusLimits, budget: Option<u64>) -> Result<(), Failure> {
    let corpus = identity_corpus(limits);
    let report = run_identity_suite(&corpus, &oracle(budget), limits.max_x_edges)?;
    println!("instances: {}", report.instances);
    for c in &report.checks {
        let verdict = if c.passed() { "pass" } else { "FAIL" };
        println!("check {} [{}]: {verdict} ({}/{})", c.name, c.description, c.cases - c.failed, c.cases);
        for ex in &c.examples {
            println!("  counterexample: {ex}");
        }
    }
    println!("identity suite: {} in {:.1}s", if report.passed() { "PASS" } else { "FAIL" }, report.elapsed_secs);
    if report.passed() {
        Ok(())
    } else {
        Err(Failure { code: 1, message: "identity suite failed".into() })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Count { instance, mode, budget, threshold, out } => count(instance, *mode, *budget, *threshold, out),
        Command::Sample { instance, count, seed, budget, max_rejects, out } => {
            sample(instance, *count, *seed, *budget, *max_rejects, out)
        }
        Command::Sweep { family, budget, out } => sweep(family, *budget, out),
        Command::Verify { max_n, max_m, max_x_edges, budget } => verify(
            CorpusLimits {
                max_n: *max_n,
                max_m: *max_m,
                max_x_edges: *max_x_edges,
                ..CorpusLimits::default()
            },
            *budget,
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
