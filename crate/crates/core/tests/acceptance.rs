//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on any failure.

mod common;

use std::time::Instant;

use common::{mean_sem, modular_instance, monotone_instance, non_monotone_instance, partition_intersection, tie_breaker, Plus};
use submax::algorithms::{
    brute_force_opt, brute_force_unconstrained, greedy, instrumented_sample_greedy, repeated_greedy, sample_greedy,
    sample_greedy_linear, unconstrained_max_det, unconstrained_max_rand, CoinPolicy, Ell, Linearity,
    UnconstrainedMethod,
};
use submax::constraints::{verify_k_extendible, IntersectionSystem, PartitionMatroid, UniformMatroid};
use submax::hardness::{
    gadget_increments_ok, is_independent_hard, large_witness, overlap_bound, overlap_probe, valid_triples,
    witness_size, HardInstance, Mode,
};
use submax::objectives::{SyntheticKind, SyntheticSpec};
use submax::{GroundSet, IndependenceOracle, IndependenceSystem, Rng, ValueOracle};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Repeated greedy with the deterministic subroutine meets its guarantee.
fn repeated_greedy_bound() -> Outcome {
    let instances = 60u64;
    let mut worst = f64::INFINITY;
    for seed in 0..instances {
        let n = 10 + (seed % 5) as usize;
        let k = 2 + (seed % 2) as usize;
        let f = non_monotone_instance(n, seed);
        let system = partition_intersection(n, k, &mut Rng::new(seed, 1));
        let ind = IndependenceOracle::new(&system);
        if !verify_k_extendible(&ind, &GroundSet::new(n), k).map_err(|e| e.to_string())? {
            return Err(format!("instance {seed} is not {k}-extendible"));
        }
        let all = GroundSet::new(n).full();
        let opt = brute_force_opt(&ValueOracle::new(&f), &ind, &all).unwrap().value;
        for ell in [2usize, 3] {
            let t = repeated_greedy(&ValueOracle::new(&f), &ind, &all, Ell::Fixed(ell), UnconstrainedMethod::Det, None, false)
                .unwrap()
                .result
                .value;
            // f(T)·(2(k+1)ℓ + 3ℓ(ℓ−1)) >= 2(ℓ−1)·OPT, exact on dyadic values.
            let den = (2 * (k + 1) * ell + 3 * ell * (ell - 1)) as f64;
            if t * den < 2.0 * (ell - 1) as f64 * opt {
                return Err(format!("seed {seed}, k {k}, ell {ell}: f(T) = {t}, OPT = {opt}"));
            }
            if opt > 0.0 {
                worst = worst.min(t / opt);
            }
        }
    }
    ensure(true, format!("{instances} instances at ell 2 and 3, worst f(T)/OPT {worst:.3}"))
}

/// Greedy on monotone objectives gets at least OPT/(k+1).
fn monotone_greedy_bound() -> Outcome {
    let mut worst = f64::INFINITY;
    let instances = 60u64;
    for seed in 0..instances {
        let n = 10 + (seed % 5) as usize;
        let k = 2 + (seed % 2) as usize;
        let f = monotone_instance(n, seed);
        let system = partition_intersection(n, k, &mut Rng::new(seed, 1));
        let ind = IndependenceOracle::new(&system);
        if !verify_k_extendible(&ind, &GroundSet::new(n), k).map_err(|e| e.to_string())? {
            return Err(format!("instance {seed} is not {k}-extendible"));
        }
        let all = GroundSet::new(n).full();
        let g = greedy(&ValueOracle::new(&f), &ind, &all, false).unwrap().result.value;
        let opt = brute_force_opt(&ValueOracle::new(&f), &ind, &all).unwrap().value;
        if g * ((k + 1) as f64) < opt {
            return Err(format!("seed {seed}: greedy {g}, OPT {opt}"));
        }
        if opt > 0.0 {
            worst = worst.min(g / opt);
        }
    }
    ensure(true, format!("{instances} instances, worst greedy/OPT {worst:.3}"))
}

const SEEDS: u64 = 2000;

fn sample_means<F>(mut run: F) -> (f64, f64)
where
    F: FnMut(&mut Rng) -> f64,
{
    let values: Vec<f64> = (0..SEEDS).map(|s| run(&mut Rng::new(7, s))).collect();
    mean_sem(&values)
}

/// Sample greedy's expected value over 2000 seeds in three regimes.
fn sample_greedy_expectation() -> Outcome {
    let mut lines = Vec::new();
    for regime in ["monotone", "non-monotone", "linear"] {
        let mut min_margin = f64::INFINITY;
        for i in 0..5u64 {
            let seed = 100 + i;
            let n = 12;
            let k = 2 + (i % 2) as usize;
            let f = match regime {
                "monotone" => monotone_instance(n, seed),
                "non-monotone" => non_monotone_instance(n, seed),
                _ => modular_instance(n, seed),
            };
            let system = partition_intersection(n, k, &mut Rng::new(seed, 1));
            let ind = IndependenceOracle::new(&system);
            let all = GroundSet::new(n).full();
            let opt = brute_force_opt(&ValueOracle::new(&f), &ind, &all).unwrap().value;
            let kf = k as f64;
            let (target, (mean, sem)) = match regime {
                "monotone" => (
                    opt / (kf + 1.0),
                    sample_means(|rng| sample_greedy(&ValueOracle::new(&f), &ind, &all, k, rng, None, false).unwrap().value),
                ),
                "non-monotone" => (
                    kf / ((kf + 1.0) * (kf + 1.0)) * opt,
                    sample_means(|rng| sample_greedy(&ValueOracle::new(&f), &ind, &all, k, rng, None, false).unwrap().value),
                ),
                _ => (
                    opt / kf,
                    sample_means(|rng| {
                        sample_greedy_linear(&ValueOracle::new(&f), &ind, &all, k, rng, Linearity::Attested, false)
                            .unwrap()
                            .value
                    }),
                ),
            };
            if mean < target - 3.0 * sem {
                return Err(format!("{regime} instance {i}: mean {mean:.4} ± {sem:.4} below {target:.4}"));
            }
            if opt > 0.0 {
                min_margin = min_margin.min(mean / target);
            }
        }
        lines.push(format!("{regime} min mean/bound {min_margin:.2}"));
    }
    ensure(true, lines.join(", "))
}

/// Double greedy: deterministic within 1/3, randomized within 1/2 in expectation.
fn double_greedy_bounds() -> Outcome {
    let mut worst = f64::INFINITY;
    for seed in 0..100u64 {
        let n = 8 + (seed % 7) as usize;
        let f = non_monotone_instance(n, seed);
        let all = GroundSet::new(n).full();
        let opt = brute_force_unconstrained(&ValueOracle::new(&f), &all).unwrap().value;
        let det = unconstrained_max_det(&ValueOracle::new(&f), &all).unwrap().value;
        if det * 3.0 < opt {
            return Err(format!("seed {seed}: deterministic {det}, OPT {opt}"));
        }
        if opt > 0.0 {
            worst = worst.min(det / opt);
        }
    }
    let mut worst_rand = f64::INFINITY;
    for i in 0..5u64 {
        let f = non_monotone_instance(12, 500 + i);
        let all = GroundSet::new(12).full();
        let opt = brute_force_unconstrained(&ValueOracle::new(&f), &all).unwrap().value;
        let (mean, sem) = sample_means(|rng| unconstrained_max_rand(&ValueOracle::new(&f), &all, rng).unwrap().value);
        if mean < opt / 2.0 - 3.0 * sem {
            return Err(format!("randomized instance {i}: mean {mean:.4} ± {sem:.4}, OPT {opt}"));
        }
        worst_rand = worst_rand.min(mean / opt);
    }
    ensure(
        true,
        format!("100 deterministic, worst ratio {worst:.3}; 5 randomized, worst mean ratio {worst_rand:.3}"),
    )
}

/// The analysis form of sample greedy never breaks its invariants.
fn instrumented_audit() -> Outcome {
    let runs = 500u64;
    let mut violations = Vec::new();
    let mut steps = 0;
    for seed in 0..runs {
        let n = 6 + (seed % 7) as usize;
        let k = 1 + (seed % 3) as usize;
        let f = non_monotone_instance(n, seed);
        let system = partition_intersection(n, k, &mut Rng::new(seed, 1));
        let ind = IndependenceOracle::new(&system);
        let all = GroundSet::new(n).full();
        let oracle = ValueOracle::new(&f);
        let opt = brute_force_opt(&oracle, &ind, &all).unwrap().solution;
        let mut rng = Rng::new(seed, 5);
        match instrumented_sample_greedy(&oracle, &ind, &all, k, CoinPolicy::PerConsideration(&mut rng), &opt) {
            Ok(out) => {
                steps += out.trace.steps.len();
                let t = &out.trace;
                let ok = system.is_independent(&t.final_o)
                    && out.result.solution.is_subset(&t.final_o)
                    && t.steps.iter().all(|s| s.removed.len() <= k && s.removed.is_subset(&s.o_before));
                if !ok {
                    violations.push(format!("seed {seed}: trace check"));
                }
            }
            Err(e) => violations.push(format!("seed {seed}: {e}")),
        }
    }
    ensure(
        violations.is_empty(),
        if violations.is_empty() {
            format!("{runs} runs, {steps} steps, 0 violations")
        } else {
            format!("{} violations, first: {}", violations.len(), violations[0])
        },
    )
}

/// The hard-instance construction behaves as claimed.
fn hardness_construction() -> Outcome {
    let triples = valid_triples(4, 16, 8);
    for &(k, h, m) in &triples {
        let inst = HardInstance::new(k, h, m, Mode::Extendible).unwrap();
        if !gadget_increments_ok(&inst) {
            return Err(format!("gadget increments fail at ({k},{h},{m})"));
        }
        let w = large_witness(&inst).unwrap();
        let size = witness_size(&inst);
        let t2 = 2 * k * m; // threshold times h
        if t2 % h == 0 {
            let t = t2 / h;
            if size != k * (m - t) + t {
                return Err(format!("witness size {size} at ({k},{h},{m})"));
            }
        }
        if w.len() != size || !is_independent_hard(&inst, &w).unwrap() {
            return Err(format!("witness not independent at ({k},{h},{m})"));
        }
    }
    for (k, h, m) in [(2, 4, 2), (2, 8, 1)] {
        let inst = HardInstance::new(k, h, m, Mode::Extendible).unwrap();
        if !verify_k_extendible(&IndependenceOracle::new(&inst), &GroundSet::new(12), k).unwrap() {
            return Err(format!("truncated ({k},{h},{m}) is not {k}-extendible"));
        }
    }
    let inst = HardInstance::new(2, 8, 64, Mode::Extendible).unwrap();
    let trials = 100_000;
    let p = overlap_probe(&inst, 80, trials, &mut Rng::new(2024, 0)).unwrap();
    let bound = overlap_bound(&inst);
    let sigma = (bound * (1.0 - bound) / trials as f64).sqrt();
    ensure(
        p <= bound + 3.0 * sigma,
        format!(
            "{} triples, truncated instances 2-extendible, overlap probability {p:.5} vs bound {bound:.5} + 3σ",
            triples.len()
        ),
    )
}

/// Sample greedy needs far fewer marginal queries than greedy.
fn oracle_call_scaling() -> Outcome {
    let (n, r, k) = (500usize, 10usize, 3usize);
    let mut sample_calls = Vec::new();
    let mut greedy_calls = Vec::new();
    for seed in 0..200u64 {
        let f = SyntheticSpec::new(SyntheticKind::WeightedCoverage, n, seed)
            .density(0.02)
            .items(200)
            .build::<f64>()
            .unwrap()
            .0;
        let system = IntersectionSystem::new(vec![
            Box::new(UniformMatroid::new(r)),
            Box::new(PartitionMatroid::round_robin(n, 2, 6)),
            Box::new(PartitionMatroid::round_robin(n, 3, 4)),
        ]);
        assert_eq!(system.k(), k);
        let ind = IndependenceOracle::new(&system);
        let all = GroundSet::new(n).full();
        let s = sample_greedy(&ValueOracle::new(&f), &ind, &all, k, &mut Rng::new(seed, 0), None, false).unwrap();
        let g = greedy(&ValueOracle::new(&f), &ind, &all, false).unwrap().result;
        sample_calls.push(s.marginal_evals as f64);
        greedy_calls.push(g.marginal_evals as f64);
    }
    let (sample_mean, _) = mean_sem(&sample_calls);
    let (greedy_mean, _) = mean_sem(&greedy_calls);
    let cap = 2.0 * (n as f64 + (n * r) as f64 / k as f64);
    ensure(
        sample_mean <= cap && sample_mean < greedy_mean,
        format!("sample-greedy mean {sample_mean:.0} marginals (cap {cap:.0}), greedy mean {greedy_mean:.0}"),
    )
}

/// Benchmarks rerun byte-identically; lazy greedy matches naive greedy.
fn reproducibility() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for (dir, jobs) in dirs.iter().zip(["1", "8"]) {
        let code = submax::cli::run([
            "submax", "bench", "--synthetic", "coverage-dispersion:n=40,seed=8,genres=4", "--constraint",
            "genre:m=6,mg=1,g=g0;g1;g2", "--alg", "greedy,repeated-greedy,sample-greedy", "--subroutine", "rand",
            "--sweep", "mg=1..3", "--trials", "20", "--best-of", "2", "--seed", "3", "--jobs", jobs, "--out",
            dir.path().to_str().unwrap(),
        ]);
        if code != 0 {
            return Err(format!("bench exited {code}"));
        }
    }
    let read = |i: usize| std::fs::read(dirs[i].path().join(submax::cli::TRIALS_FILE)).unwrap();
    if read(0) != read(1) {
        return Err("bench JSONL differs between reruns".into());
    }
    let instances = 200u64;
    for seed in 0..instances {
        let n = 10 + (seed % 20) as usize;
        let base = if seed % 2 == 0 { monotone_instance(n, seed) } else { non_monotone_instance(n, seed) };
        let f = Plus(base, tie_breaker(n));
        let system = partition_intersection(n, 1 + (seed % 3) as usize, &mut Rng::new(seed, 1));
        let ind = IndependenceOracle::new(&system);
        let all = GroundSet::new(n).full();
        let naive = greedy(&ValueOracle::new(&f), &ind, &all, false).unwrap().result.solution;
        let lazy = greedy(&ValueOracle::new(&f), &ind, &all, true).unwrap().result.solution;
        if naive != lazy {
            return Err(format!("lazy and naive differ on instance {seed}"));
        }
    }
    ensure(true, format!("{} JSONL bytes identical, {instances} lazy/naive pairs equal", read(0).len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("repeated greedy bound", repeated_greedy_bound),
        ("monotone greedy bound", monotone_greedy_bound),
        ("sample greedy expectation", sample_greedy_expectation),
        ("double greedy bounds", double_greedy_bounds),
        ("instrumented invariants", instrumented_audit),
        ("hardness construction", hardness_construction),
        ("oracle-call scaling", oracle_call_scaling),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = check();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
