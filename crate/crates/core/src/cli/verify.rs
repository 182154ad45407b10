//! `verify`: exhaustive property checks on small instances.

use std::fmt;

use crate::constraints::{verify_downward_closed, verify_k_extendible, verify_k_system};
use crate::error::{Error, Result};
use crate::hardness::{gadget_increments_ok, Mode, is_independent_hard, large_witness, witness_size, HardInstance};
use crate::objectives::{check_monotone, check_submodular, check_submodular_lattice};
use crate::oracle::{SetFunction, ValueOracle};
use crate::sets::{ElementSet, GroundSet};
use crate::Value;

use super::problem::Problem;
use super::spec::ConstraintSpec;
use super::SourceArgs;

/// Largest universe for the exhaustive non-negativity sweep.
const NONNEGATIVE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    Fail,
    /// Not checked (too large, or not applicable).
    Skip,
    /// Reported but not pass/fail.
    Info(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match &self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
            Status::Info(s) => s,
        };
        write!(f, "{}: {status}", self.name)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

fn check(name: &'static str, outcome: Result<bool>) -> Check {
    match outcome {
        Ok(true) => Check { name, status: Status::Pass, detail: String::new() },
        Ok(false) => Check { name, status: Status::Fail, detail: String::new() },
        Err(e @ Error::Capacity { .. }) => Check { name, status: Status::Skip, detail: e.to_string() },
        Err(e) => Check { name, status: Status::Fail, detail: e.to_string() },
    }
}

/// The objective relabelled onto `0..|U|`, so the checkers see exactly the
/// universe the algorithms search.
struct OnUniverse<'a> {
    f: &'a dyn SetFunction<Value>,
    elements: Vec<usize>,
}

impl SetFunction<Value> for OnUniverse<'_> {
    fn ground_size(&self) -> usize {
        self.elements.len()
    }

    fn evaluate(&self, set: &ElementSet) -> Result<Value> {
        self.f.evaluate(&set.iter().map(|i| self.elements[i]).collect())
    }
}

fn all_nonnegative(f: &ValueOracle<'_, Value>, n: usize) -> Result<bool> {
    if n > NONNEGATIVE_LIMIT {
        return Err(Error::Capacity { what: "nonnegative", limit: NONNEGATIVE_LIMIT, n });
    }
    let ground = GroundSet::new(n);
    for mask in 0..1u64 << n {
        f.evaluate(&ground.subset_from_mask(mask))?;
    }
    Ok(true)
}

fn hard_checks(inst: &HardInstance) -> Vec<Check> {
    let gadget = check("gadget-increments", Ok(gadget_increments_ok(inst)));
    if inst.mode == Mode::Uniform {
        let skip = Check { name: "witness", status: Status::Skip, detail: "mode M' has no large witness".into() };
        return vec![gadget, skip];
    }
    let expected = witness_size(inst);
    let witness = large_witness(inst).and_then(|w| Ok((is_independent_hard(inst, &w)?, w.len())));
    vec![
        gadget,
        match witness {
            Ok((independent, size)) => Check {
                name: "witness",
                status: if independent && size == expected { Status::Pass } else { Status::Fail },
                detail: format!("size {size}, expected {expected}, independent {independent}"),
            },
            Err(e) => check("witness", Err(e)),
        },
    ]
}

/// Run every applicable check on `problem`.
pub fn verify_problem(problem: &Problem, constraint: &ConstraintSpec) -> Vec<Check> {
    let mut checks = Vec::new();
    if let Some(objective) = problem.objective.as_deref() {
        let restricted = OnUniverse { f: objective, elements: problem.universe.as_slice().to_vec() };
        let f = ValueOracle::new(&restricted);
        let ground = GroundSet::new(restricted.ground_size());
        let nonneg = check("nonnegative", all_nonnegative(&f, ground.len()));
        let ok = nonneg.status != Status::Fail;
        checks.push(nonneg);
        if ok {
            checks.push(check("submodular", check_submodular(&f, &ground)));
            checks.push(check("submodular-lattice", check_submodular_lattice(&f, &ground)));
            checks.push(match check_monotone(&f, &ground) {
                Ok(m) => Check {
                    name: "monotone",
                    status: Status::Info(if m { "yes" } else { "no" }.into()),
                    detail: String::new(),
                },
                Err(e) => check("monotone", Err(e)),
            });
        }
    }
    if *constraint != ConstraintSpec::Unconstrained {
        let ind = problem.independence();
        let ground = GroundSet::new(problem.n);
        let k = problem.k;
        checks.push(check("downward-closed", verify_downward_closed(&ind, &ground)));
        checks.push(match verify_k_system(&ind, &ground) {
            Ok(ratio) => Check {
                name: "k-system",
                status: if ratio <= k as f64 { Status::Pass } else { Status::Fail },
                detail: format!("worst base ratio {ratio}, k = {k}"),
            },
            Err(e) => check("k-system", Err(e)),
        });
        let mut ext = check("k-extendible", verify_k_extendible(&ind, &ground, k));
        if ext.detail.is_empty() {
            ext.detail = format!("k = {k}");
        }
        checks.push(ext);
        if let ConstraintSpec::Hard { k, h, m, mode } = constraint {
            match HardInstance::new(*k, *h, *m, *mode) {
                Ok(inst) => checks.extend(hard_checks(&inst)),
                Err(e) => checks.push(check("hard-instance", Err(e))),
            }
        }
    }
    checks
}

pub(super) fn verify(args: &SourceArgs) -> Result<i32> {
    let problem = args.problem_config().build()?;
    let checks = verify_problem(&problem, &args.constraint);
    if checks.is_empty() {
        return Err(Error::Precondition("nothing to verify: give an objective or a constraint".into()));
    }
    for c in &checks {
        println!("{c}");
    }
    Ok(if checks.iter().any(|c| c.status == Status::Fail) { 1 } else { 0 })
}
