//! The `submax` command line: `solve`, `bench`, `verify`, `hard` and `audit`.
//!
//! Exit codes: 0 success, 1 a verified property or audit check failed,
//! 2 configuration error, 3 oracle violation (negative value, infeasible
//! output, broken invariant).

mod bench;
mod problem;
mod report;
mod spec;
mod trial;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algorithms::{Ell, UnconstrainedMethod};
use crate::error::{Error, Result};

pub use problem::{synthetic_genres_of, Problem, ProblemConfig, Source};
pub use report::{
    audit_dir, parse_jsonl, summarize, summary_csv, RunConfig, SummaryRow, TrialReport, CONFIG_FILE, SUMMARY_FILE,
    SUMMARY_HEADER, TRIALS_FILE,
};
pub use spec::{ConstraintSpec, Sweep, SweepParam, SyntheticSource};
pub use trial::{run_trial, AlgParams};
pub use verify::{verify_problem, Check, Status};

#[derive(Debug, Parser)]
#[command(name = "submax", version, about = "Submodular maximization over k-systems and k-extendible systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one algorithm on one instance.
    Solve(SolveArgs),
    /// Run algorithms over seeds and an optional parameter sweep.
    Bench(BenchArgs),
    /// Exhaustively check objective and constraint properties.
    Verify(SourceArgs),
    /// Describe a hard instance and optionally probe its overlap probability.
    Hard(HardArgs),
    /// Check a benchmark directory for hash mismatches and stale summaries.
    Audit {
        dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Greedy,
    RepeatedGreedy,
    SampleGreedy,
    SampleGreedyLinear,
    DoubleGreedy,
    BruteForce,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Self::Greedy => "greedy",
            Self::RepeatedGreedy => "repeated-greedy",
            Self::SampleGreedy => "sample-greedy",
            Self::SampleGreedyLinear => "sample-greedy-linear",
            Self::DoubleGreedy => "double-greedy",
            Self::BruteForce => "brute-force",
        }
    }

    pub fn is_randomized(self, subroutine: UnconstrainedMethod) -> bool {
        match self {
            Self::SampleGreedy | Self::SampleGreedyLinear => true,
            Self::RepeatedGreedy | Self::DoubleGreedy => subroutine == UnconstrainedMethod::Rand,
            Self::Greedy | Self::BruteForce => false,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Objective file: `element_id,weight`, `u,v,weight` or `subset,value`.
    #[arg(long, conflicts_with_all = ["similarity", "synthetic"])]
    pub instance: Option<PathBuf>,
    /// Similarity matrix for a coverage–dispersion objective.
    #[arg(long, conflicts_with = "synthetic")]
    pub similarity: Option<PathBuf>,
    /// Genre labels per element (`element_id,genres`).
    #[arg(long)]
    pub genres: Option<PathBuf>,
    /// Seeded instance, e.g. `coverage-dispersion:n=60,seed=1,genres=4`.
    #[arg(long)]
    pub synthetic: Option<SyntheticSource>,
    /// Dispersion weight for `--similarity`.
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    /// `uniform:M`, `partition:FILE`, `genre:m=INT,mg=INT,g=LIST`, `hard:k=INT,h=INT,m=INT,mode=M|M'` or `none`.
    #[arg(long, default_value = "none")]
    pub constraint: ConstraintSpec,
    /// Override the constraint's declared k.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct AlgArgs {
    /// Algorithm(s), comma separated.
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub alg: Vec<Algorithm>,
    /// Repeated-greedy rounds: an integer or `auto` for ⌈√k⌉.
    #[arg(long, default_value = "auto")]
    pub ell: Ell,
    /// Sampling probability override for sample-greedy.
    #[arg(long)]
    pub p: Option<f64>,
    /// Master seed; required by randomized algorithms.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Unconstrained subroutine: `det` or `rand`.
    #[arg(long, default_value = "det")]
    pub subroutine: UnconstrainedMethod,
    /// Use the lazy (priority-queue) greedy.
    #[arg(long)]
    pub lazy: bool,
    /// Run randomized algorithms on this many streams and also report the best.
    #[arg(long, default_value_t = 1)]
    pub best_of: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub alg: AlgArgs,
    /// Write the JSONL report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub alg: AlgArgs,
    /// Seeded trials per randomized algorithm and sweep point.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// `PARAM=LO..HI` or `PARAM=a;b;c` over mg, m, n, ell, lambda or p.
    #[arg(long)]
    pub sweep: Option<Sweep>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Record wall-clock times (makes reruns differ).
    #[arg(long)]
    pub timing: bool,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct HardArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub h: usize,
    #[arg(long)]
    pub m: usize,
    /// `M` (k-extendible) or `M'` (uniform twin).
    #[arg(long, default_value = "M")]
    pub mode: crate::hardness::Mode,
    /// Size of the uniform random sets for the overlap probe.
    #[arg(long, requires = "seed")]
    pub probe_size: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl SourceArgs {
    pub fn problem_config(&self) -> ProblemConfig {
        let source = match (&self.instance, &self.similarity, &self.synthetic) {
            (Some(path), _, _) => Source::Instance(path.clone()),
            (_, Some(file), _) => Source::Similarity { file: file.clone(), lambda: self.lambda },
            (_, _, Some(s)) => Source::Synthetic(s.clone()),
            _ => Source::None,
        };
        ProblemConfig {
            source,
            genres: self.genres.clone(),
            constraint: self.constraint.clone(),
            k: self.k,
        }
    }
}

/// Absolute where possible, so a saved config stays usable from other directories.
fn path_string(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref()
        .map(|p| std::fs::canonicalize(p).unwrap_or_else(|_| p.clone()).display().to_string())
}

fn run_config(command: &str, source: &SourceArgs, alg: &AlgArgs) -> RunConfig {
    RunConfig {
        command: command.into(),
        instance: path_string(&source.instance),
        similarity: path_string(&source.similarity),
        genres: path_string(&source.genres),
        synthetic: source.synthetic.as_ref().map(ToString::to_string),
        lambda: source.lambda,
        constraint: source.constraint.to_string(),
        algorithms: alg.alg.iter().map(|a| a.name().to_string()).collect(),
        k: source.k,
        ell: alg.ell.to_string(),
        p: alg.p,
        subroutine: format!("{:?}", alg.subroutine).to_lowercase(),
        lazy: alg.lazy,
        trials: 1,
        best_of: alg.best_of,
        seed: alg.seed,
        sweep: None,
        timing: true,
        jobs: None,
        out: None,
    }
}

fn check_seed(alg: &AlgArgs) -> Result<()> {
    if alg.best_of == 0 {
        return Err(Error::Precondition("--best-of must be at least 1".into()));
    }
    match alg.alg.iter().find(|a| a.is_randomized(alg.subroutine)) {
        Some(a) if alg.seed.is_none() => Err(Error::Precondition(format!(
            "{} is randomized and needs an explicit --seed",
            a.name()
        ))),
        _ => Ok(()),
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_oracle_violation() {
        3
    } else {
        2
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Solve(args) => solve(&args),
        Command::Bench(args) => bench::bench(&args),
        Command::Verify(args) => verify::verify(&args),
        Command::Hard(args) => hard(&args),
        Command::Audit { dir } => audit(&dir),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn solve(args: &SolveArgs) -> Result<i32> {
    check_seed(&args.alg)?;
    let [alg] = args.alg.alg[..] else {
        return Err(Error::Precondition("solve runs exactly one --alg".into()));
    };
    let problem = args.source.problem_config().build()?;
    let config = run_config("solve", &args.source, &args.alg);
    let hash = config.hash()?;
    let params = AlgParams::from_args(&args.alg);
    let reports = trial::run_point(&problem, alg, &params, args.alg.seed, 1, args.alg.best_of, &hash, None, true)?;
    let shown = reports.last().expect("at least one run");
    println!("algorithm: {}", shown.algorithm);
    println!("value: {}", shown.value);
    println!("solution: {}", crate::sets::ElementSet::from(shown.solution.clone()));
    println!("n: {}  r: {}  k: {}", shown.n, shown.r, shown.k);
    println!(
        "f_evals: {}  marginal_evals: {}  independence_checks: {}",
        shown.f_evals, shown.marginal_evals, shown.independence_checks
    );
    let jsonl = report::to_jsonl(&reports)?;
    match &args.out {
        Some(path) => std::fs::write(path, jsonl)?,
        None => print!("{jsonl}"),
    }
    Ok(0)
}

fn hard(args: &HardArgs) -> Result<i32> {
    use crate::hardness::{large_witness, overlap_bound, overlap_probe, witness_size, HardInstance};
    let inst = HardInstance::new(args.k, args.h, args.m, args.mode)?;
    let g = inst.gadget();
    let mut meta = serde_json::json!({
        "k": inst.k,
        "h": inst.h,
        "m": inst.m,
        "mode": inst.mode.to_string(),
        "n": inst.ground().len(),
        "block_size": inst.block_size(),
        "threshold": g.threshold.to_string(),
        "witness_size": witness_size(&inst),
        "witness_independent": crate::hardness::is_independent_hard(&inst, &large_witness(&inst)?)?,
        "overlap_bound": overlap_bound(&inst),
    });
    if let (Some(size), Some(seed)) = (args.probe_size, args.seed) {
        let p = overlap_probe(&inst, size, args.trials, &mut crate::rng::Rng::new(seed, 0))?;
        meta["probe"] = serde_json::json!({ "size": size, "trials": args.trials, "seed": seed, "probability": p });
    }
    println!("{}", serde_json::to_string_pretty(&meta)?);
    Ok(0)
}

fn audit(dir: &std::path::Path) -> Result<i32> {
    let problems = audit_dir(dir)?;
    if problems.is_empty() {
        println!("audit: ok");
        return Ok(0);
    }
    for p in &problems {
        println!("audit: {p}");
    }
    Ok(1)
}
