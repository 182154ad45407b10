//! Maximization procedures.

mod brute;
mod greedy;
mod instrumented;
mod repeated;
mod sample;
mod unconstrained;

pub use brute::{brute_force_opt, brute_force_unconstrained, BRUTE_FORCE_LIMIT};
pub use greedy::{greedy, GreedyOutcome, GreedyStep, GreedyTrace};
pub use instrumented::{
    instrumented_sample_greedy, CoinPolicy, InstrumentedOutcome, InstrumentedStep, InstrumentedTrace,
};
pub use repeated::{repeated_greedy, repeated_greedy_bound, Ell, RepeatedOutcome, Round};
pub use sample::{sample_greedy, sample_greedy_linear, Linearity};
pub use unconstrained::{unconstrained_max_det, unconstrained_max_rand, UnconstrainedMethod};
