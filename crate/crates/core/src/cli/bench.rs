//! `bench`: every (sweep point × algorithm × trial) combination.

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::problem::Problem;
use super::report::{self, TrialReport, CONFIG_FILE, SUMMARY_FILE, TRIALS_FILE};
use super::trial::{run_group, AlgParams, LineContext};
use super::{check_seed, run_config, Algorithm, BenchArgs};

struct Point {
    problem: Problem,
    params: AlgParams,
    sweep_value: Option<serde_json::Value>,
}

pub(super) fn bench(args: &BenchArgs) -> Result<i32> {
    check_seed(&args.alg)?;
    if args.trials == 0 {
        return Err(Error::Precondition("--trials must be at least 1".into()));
    }
    let mut config = run_config("bench", &args.source, &args.alg);
    config.trials = args.trials;
    config.sweep = args.sweep.as_ref().map(ToString::to_string);
    config.timing = args.timing;
    config.jobs = args.jobs;
    config.out = Some(args.out.display().to_string());
    let hash = config.hash()?;

    let base = args.source.problem_config();
    let base_params = AlgParams::from_args(&args.alg);
    let points: Vec<Point> = match &args.sweep {
        None => vec![Point { problem: base.build()?, params: base_params, sweep_value: None }],
        Some(sweep) => sweep
            .values
            .iter()
            .map(|&v| {
                Ok(Point {
                    problem: base.with_sweep(sweep.param, v)?.build()?,
                    params: base_params.with_sweep(sweep.param, v),
                    sweep_value: Some(sweep.json(v)),
                })
            })
            .collect::<Result<_>>()?,
    };

    let mut jobs: Vec<(&Point, Algorithm, u64)> = Vec::new();
    for point in &points {
        for &alg in &args.alg.alg {
            let trials = if alg.is_randomized(point.params.subroutine) { args.trials } else { 1 };
            jobs.extend((0..trials as u64).map(|t| (point, alg, t)));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
    let groups: Vec<Result<Vec<TrialReport>>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(point, alg, t)| {
                let ctx = LineContext {
                    config_hash: &hash,
                    sweep_value: point.sweep_value.clone(),
                    timing: args.timing,
                };
                run_group(&point.problem, alg, &point.params, args.alg.seed, t, args.alg.best_of, &ctx)
            })
            .collect()
    });
    let mut reports = Vec::new();
    for group in groups {
        reports.extend(group?);
    }

    std::fs::create_dir_all(&args.out)?;
    std::fs::write(args.out.join(TRIALS_FILE), report::to_jsonl(&reports)?)?;
    let rows = report::summarize(&reports);
    std::fs::write(args.out.join(SUMMARY_FILE), report::summary_csv(&rows, &hash))?;
    for (name, body) in report::plot_data(&rows, &hash) {
        std::fs::write(args.out.join(name), body)?;
    }
    std::fs::write(args.out.join(CONFIG_FILE), serde_json::to_string_pretty(&config)? + "\n")?;
    println!("{} runs, {} summary rows, config {hash}", reports.len(), rows.len());
    Ok(0)
}
