//! Assembling an objective and a constraint from command-line sources.

use std::path::PathBuf;

use crate::constraints::{max_feasible_size, GenreConstraint, UniformMatroid};
use crate::error::{Error, Result};
use crate::hardness::HardInstance;
use crate::io::{self, InstanceFile, Labels};
use crate::objectives::{CoverageDispersionObjective, SyntheticKind, SyntheticSpec};
use crate::oracle::{IndependenceOracle, IndependenceSystem, SetFunction, Unconstrained};
use crate::rng::Rng;
use crate::sets::{ElementSet, GroundSet};
use crate::Value;

use super::spec::{ConstraintSpec, SweepParam, SyntheticSource};

/// Where the objective comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    None,
    Instance(PathBuf),
    Similarity { file: PathBuf, lambda: f64 },
    Synthetic(SyntheticSource),
}

/// Everything needed to build one [`Problem`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub source: Source,
    pub genres: Option<PathBuf>,
    pub constraint: ConstraintSpec,
    pub k: Option<usize>,
}

impl ProblemConfig {
    /// Substitute a sweep value. Parameters that belong to the algorithm
    /// (`ell`, `p`) leave the problem untouched.
    pub fn with_sweep(&self, param: SweepParam, value: f64) -> Result<Self> {
        let mut out = self.clone();
        let int = value as usize;
        match (param, &mut out.constraint, &mut out.source) {
            (SweepParam::Mg, ConstraintSpec::Genre { mg, .. }, _) => *mg = int,
            (SweepParam::M, ConstraintSpec::Genre { m, .. } | ConstraintSpec::Uniform { m }, _) => *m = int,
            (SweepParam::N, _, Source::Synthetic(s)) => {
                s.spec.n = int;
                s.spec.items = 2 * int;
            }
            (SweepParam::Lambda, _, Source::Synthetic(s)) => s.spec.lambda = value,
            (SweepParam::Lambda, _, Source::Similarity { lambda, .. }) => *lambda = value,
            (SweepParam::Ell | SweepParam::P, _, _) => {}
            (param, _, _) => {
                return Err(Error::Precondition(format!(
                    "sweep over `{}` does not apply to this instance and constraint",
                    param.name()
                )))
            }
        }
        Ok(out)
    }

    pub fn build(&self) -> Result<Problem> {
        let mut labels = None;
        let mut similarity = None;
        let mut synthetic_genres = None;
        let mut linear = false;
        let objective: Option<Box<dyn SetFunction<Value>>> = match &self.source {
            Source::None => None,
            Source::Instance(path) => Some(match io::read_instance_file(path)? {
                InstanceFile::Modular(f) => {
                    linear = true;
                    Box::new(f)
                }
                InstanceFile::Cut(f) => Box::new(f),
                InstanceFile::Table(f) => Box::new(f),
            }),
            Source::Similarity { file, .. } => {
                let m = io::read_similarity_file(file)?;
                labels = Some(m.labels);
                similarity = Some(m.values);
                None
            }
            Source::Synthetic(s) => {
                if s.genres > 0 {
                    synthetic_genres = Some(synthetic_genres_of(&s.spec, s.genres));
                }
                linear = s.spec.kind == SyntheticKind::Modular;
                Some(Box::new(s.spec.build::<Value>()?.0))
            }
        };
        let n = match (&objective, &labels, &self.constraint) {
            (Some(f), _, _) => f.ground_size(),
            (None, Some(l), _) => l.len(),
            (None, None, ConstraintSpec::Hard { k, h, m, .. }) => h * k * m,
            (None, None, _) => return Err(Error::Precondition("no instance given".into())),
        };
        let genres_of = match (&self.genres, synthetic_genres) {
            (Some(path), _) => Some(io::read_genres_file(path, &labels.clone().unwrap_or_else(|| Labels::dense(n)))?),
            (None, g) => g,
        };

        let (constraint, universe): (Box<dyn IndependenceSystem>, ElementSet) = match &self.constraint {
            ConstraintSpec::Unconstrained => (Box::new(Unconstrained), GroundSet::new(n).full()),
            ConstraintSpec::Uniform { m } => (Box::new(UniformMatroid::new(*m)), GroundSet::new(n).full()),
            ConstraintSpec::Partition { file } => {
                (Box::new(io::read_partition_file(file, n)?), GroundSet::new(n).full())
            }
            ConstraintSpec::Genre { m, mg, favorites } => {
                let genres_of = genres_of.ok_or_else(|| {
                    Error::Precondition("a genre constraint needs --genres or a synthetic instance with genres".into())
                })?;
                let g = GenreConstraint::new(&genres_of, favorites, *m, &[*mg])?;
                let universe = g.universe();
                (Box::new(g), universe)
            }
            ConstraintSpec::Hard { k, h, m, mode } => {
                let inst = HardInstance::new(*k, *h, *m, *mode)?;
                if inst.ground().len() != n {
                    return Err(Error::Precondition(format!(
                        "hard instance has {} elements but the objective has {n}",
                        inst.ground().len()
                    )));
                }
                (Box::new(inst), GroundSet::new(n).full())
            }
        };

        let objective = match (&self.source, similarity) {
            (Source::Similarity { lambda, .. }, Some(values)) => {
                let f = CoverageDispersionObjective::new(n, values, &universe, *lambda)?;
                Some(Box::new(f) as Box<dyn SetFunction<Value>>)
            }
            _ => objective,
        };
        let k = self.k.unwrap_or_else(|| constraint.k()).max(1);
        let rank = max_feasible_size(&IndependenceOracle::new(constraint.as_ref()), &GroundSet::new(n)).size;
        Ok(Problem { objective, constraint, universe, n, r: rank, k, linear })
    }
}

/// Seeded genre labels `g0..g{count-1}`: one uniform primary genre per
/// element, plus a second distinct one with probability 1/4.
pub fn synthetic_genres_of(spec: &SyntheticSpec, count: usize) -> Vec<Vec<String>> {
    use rand::Rng as _;
    let mut rng = Rng::new(spec.seed, 1);
    (0..spec.n)
        .map(|_| {
            let first = rng.gen_range(0..count);
            let mut genres = vec![format!("g{first}")];
            if count > 1 && rng.gen_bool(0.25) {
                let second = (first + rng.gen_range(1..count)) % count;
                genres.push(format!("g{second}"));
            }
            genres
        })
        .collect()
}

/// A ready-to-solve instance.
pub struct Problem {
    pub objective: Option<Box<dyn SetFunction<Value>>>,
    pub constraint: Box<dyn IndependenceSystem>,
    /// Elements the algorithms may pick from.
    pub universe: ElementSet,
    pub n: usize,
    /// Size of a largest independent set (a greedy lower bound above 16 elements).
    pub r: usize,
    /// Declared `k`, after any override.
    pub k: usize,
    /// Objective is known to be linear.
    pub linear: bool,
}

impl Problem {
    pub fn objective(&self) -> Result<&dyn SetFunction<Value>> {
        self.objective
            .as_deref()
            .ok_or_else(|| Error::Precondition("this command needs an objective (--instance, --similarity or --synthetic)".into()))
    }

    pub fn independence(&self) -> IndependenceOracle<'_> {
        IndependenceOracle::with_k(self.constraint.as_ref(), self.k)
    }
}
