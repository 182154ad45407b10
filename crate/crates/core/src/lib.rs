//! Greedy-family maximization of non-negative submodular functions subject to
//! k-system and k-extendible-system constraints.
//!
//! The crate provides counted value/independence oracles, concrete objectives
//! and constraints, the repeated-greedy and sample-greedy algorithms with
//! their supporting subroutines, brute-force reference solvers, an
//! adversarial hard-instance construction, and a benchmark CLI.
//!
//! Objective values are generic over [`Scalar`]; the aliases below pin the
//! common instantiations.

pub mod algorithms;
pub mod cli;
pub mod constraints;
pub mod error;
pub mod hardness;
pub mod io;
pub mod objectives;
pub mod oracle;
pub mod result;
pub mod rng;
pub mod scalar;
pub mod sets;

pub use error::{Error, Result};
pub use oracle::{IndependenceOracle, IndependenceSystem, SetFunction, ValueOracle};
pub use result::SolveResult;
pub use rng::Rng;
pub use scalar::Scalar;
pub use sets::{ElementId, ElementSet, GroundSet};

pub use num_rational::Rational64;

/// Default objective value type.
pub type Value = f64;
/// Exact objective value type.
pub type ExactValue = Rational64;

pub type Modular = objectives::ModularObjective<Value>;
pub type Cut = objectives::CutObjective<Value>;
pub type CoverageDispersion = objectives::CoverageDispersionObjective<Value>;
pub type WeightedCoverage = objectives::WeightedCoverageObjective<Value>;
pub type Modular32 = objectives::ModularObjective<f32>;
pub type Cut32 = objectives::CutObjective<f32>;
pub type CoverageDispersion32 = objectives::CoverageDispersionObjective<f32>;
pub type ExactModular = objectives::ModularObjective<ExactValue>;
pub type ExactCut = objectives::CutObjective<ExactValue>;
pub type ExactCoverageDispersion = objectives::CoverageDispersionObjective<ExactValue>;
pub type Solve = SolveResult<Value>;
pub type ExactSolve = SolveResult<ExactValue>;
