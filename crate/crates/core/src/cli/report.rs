//! Run configuration, per-trial report lines, and derived summaries.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Fully serializable description of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub instance: Option<String>,
    pub similarity: Option<String>,
    pub genres: Option<String>,
    pub synthetic: Option<String>,
    pub lambda: f64,
    pub constraint: String,
    pub algorithms: Vec<String>,
    pub k: Option<usize>,
    pub ell: String,
    pub p: Option<f64>,
    pub subroutine: String,
    pub lazy: bool,
    pub trials: usize,
    pub best_of: usize,
    pub seed: Option<u64>,
    pub sweep: Option<String>,
    pub timing: bool,
    pub jobs: Option<usize>,
    pub out: Option<String>,
}

fn file_digest(path: &str) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl RunConfig {
    /// SHA-256 over the canonical JSON of the config. Input files enter by
    /// content rather than path; `jobs` and `out` do not change results and
    /// are left out.
    pub fn hash(&self) -> Result<String> {
        let mut canonical = self.clone();
        canonical.jobs = None;
        canonical.out = None;
        for path in [
            &mut canonical.instance,
            &mut canonical.similarity,
            &mut canonical.genres,
        ]
        .into_iter()
        .flatten()
        {
            *path = format!("sha256:{}", file_digest(path)?);
        }
        if let Some(file) = canonical.constraint.strip_prefix("partition:") {
            canonical.constraint = format!("partition:sha256:{}", file_digest(file)?);
        }
        let json = serde_json::to_vec(&canonical)?;
        Ok(hex::encode(Sha256::digest(&json)))
    }
}

/// One JSON line per algorithm run. Inapplicable fields are `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub algorithm: String,
    pub seed: Option<u64>,
    pub trial_index: u64,
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub ell: Option<usize>,
    pub value: f64,
    pub f_evals: u64,
    pub marginal_evals: u64,
    pub independence_checks: u64,
    pub wall_ms: Option<f64>,
    pub solution: Vec<usize>,
    pub config_hash: String,
    pub sweep_value: Option<serde_json::Value>,
}

pub fn to_jsonl(reports: &[TrialReport]) -> Result<String> {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_jsonl(text: &str) -> Result<Vec<TrialReport>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Error::from))
        .collect()
}

pub const SUMMARY_HEADER: &str = "sweep_value,algorithm,mean_value,std_value,mean_f_evals,mean_wall_ms";

/// One summary row: the runs of one algorithm at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub sweep_value: String,
    pub algorithm: String,
    pub mean_value: f64,
    pub std_value: f64,
    pub mean_f_evals: f64,
    pub mean_wall_ms: Option<f64>,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation; zero for a single run.
fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mu = mean(xs);
    (xs.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

fn sweep_key(v: &Option<serde_json::Value>) -> String {
    v.as_ref().map_or_else(String::new, |v| v.to_string())
}

/// Group by (sweep value, algorithm) in order of first appearance.
pub fn summarize(reports: &[TrialReport]) -> Vec<SummaryRow> {
    let mut groups: Vec<((String, String), Vec<&TrialReport>)> = Vec::new();
    for r in reports {
        let key = (sweep_key(&r.sweep_value), r.algorithm.clone());
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(r),
            None => groups.push((key, vec![r])),
        }
    }
    groups
        .into_iter()
        .map(|((sweep_value, algorithm), members)| {
            let values: Vec<f64> = members.iter().map(|r| r.value).collect();
            let evals: Vec<f64> = members.iter().map(|r| r.f_evals as f64).collect();
            let walls: Option<Vec<f64>> = members.iter().map(|r| r.wall_ms).collect();
            SummaryRow {
                sweep_value,
                algorithm,
                mean_value: mean(&values),
                std_value: std_dev(&values),
                mean_f_evals: mean(&evals),
                mean_wall_ms: walls.map(|w| mean(&w)),
            }
        })
        .collect()
}

pub fn summary_csv(rows: &[SummaryRow], config_hash: &str) -> String {
    let mut out = format!("# config_hash={config_hash}\n{SUMMARY_HEADER}\n");
    for r in rows {
        let wall = r.mean_wall_ms.map_or_else(String::new, |w| w.to_string());
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.sweep_value, r.algorithm, r.mean_value, r.std_value, r.mean_f_evals, wall
        )
        .expect("writing to a String cannot fail");
    }
    out
}

/// Two-column `x y` data, one file per algorithm and metric.
pub fn plot_data(rows: &[SummaryRow], config_hash: &str) -> BTreeMap<String, String> {
    let mut files = BTreeMap::new();
    for r in rows {
        let x = if r.sweep_value.is_empty() { "0" } else { &r.sweep_value };
        for (metric, y) in [("value", r.mean_value), ("evals", r.mean_f_evals)] {
            let body = files
                .entry(format!("{}.{metric}.dat", r.algorithm))
                .or_insert_with(|| format!("# config_hash={config_hash}\n# {} mean_{metric}\n", "sweep_value"));
            writeln!(body, "{x} {y}").expect("writing to a String cannot fail");
        }
    }
    files
}

/// Names of the files written by a benchmark run.
pub const TRIALS_FILE: &str = "trials.jsonl";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const CONFIG_FILE: &str = "config.json";

fn hash_comment(text: &str) -> Option<&str> {
    text.lines().find_map(|l| l.strip_prefix("# config_hash="))
}

/// Cross-check a benchmark directory: every line and derived file must carry
/// the same config hash, and the summary and plot files must be exactly what
/// the JSONL lines produce. Returns the list of problems found.
pub fn audit_dir(dir: &Path) -> Result<Vec<String>> {
    let read = |name: &str| {
        std::fs::read_to_string(dir.join(name)).map_err(|e| Error::Parse(format!("{}: {e}", dir.join(name).display())))
    };
    let mut problems = Vec::new();
    let reports = parse_jsonl(&read(TRIALS_FILE)?)?;
    let config: RunConfig = serde_json::from_str(&read(CONFIG_FILE)?)?;
    let summary = read(SUMMARY_FILE)?;
    let Some(expected) = reports.first().map(|r| r.config_hash.clone()) else {
        problems.push(format!("{TRIALS_FILE} is empty"));
        return Ok(problems);
    };
    for (i, r) in reports.iter().enumerate() {
        if r.config_hash != expected {
            problems.push(format!("{TRIALS_FILE} line {}: config hash {} differs from {expected}", i + 1, r.config_hash));
        }
    }
    match config.hash() {
        Ok(h) if h != expected => problems.push(format!("{CONFIG_FILE} hashes to {h}, trials carry {expected}")),
        Ok(_) => {}
        Err(e) => problems.push(format!("{CONFIG_FILE}: cannot recompute hash: {e}")),
    }
    match hash_comment(&summary) {
        Some(h) if h == expected => {}
        Some(h) => problems.push(format!("{SUMMARY_FILE} config hash {h} differs from {expected}")),
        None => problems.push(format!("{SUMMARY_FILE} has no config_hash line")),
    }
    let rows = summarize(&reports);
    if summary != summary_csv(&rows, hash_comment(&summary).unwrap_or(&expected)) {
        problems.push(format!("{SUMMARY_FILE} does not match the values recomputed from {TRIALS_FILE}"));
    }
    for (name, body) in plot_data(&rows, &expected) {
        match read(&name) {
            Ok(found) if found == body => {}
            Ok(found) => match hash_comment(&found) {
                Some(h) if h != expected => problems.push(format!("{name} config hash {h} differs from {expected}")),
                _ => problems.push(format!("{name} does not match the values recomputed from {TRIALS_FILE}")),
            },
            Err(e) => problems.push(e.to_string()),
        }
    }
    Ok(problems)
}
