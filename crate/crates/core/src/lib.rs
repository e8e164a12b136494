//! Robot-assisted restoration of barrier coverage on a line segment.
//!
//! Sensors of range `r` sit on the barrier `[0, L]`; a robot starting at `0`
//! picks sensors up and drops them so that the barrier becomes fully
//! covered. This crate provides the optimal offline trajectory, three
//! online strategies, an exact simulator, adversarial instance generators,
//! a brute-force reference solver and a benchmark harness.

pub mod adversary;
pub mod error;
pub mod harness;
pub mod model;
pub mod offline;
pub mod online;
pub mod oracle;
pub mod sim;

pub use error::{Error, Result};
pub use model::{
    compute_gaps, coverage_balances, trajectory_length, validate_instance, BalanceTable, Gap,
    Instance, RawInstance, Tolerance, Trajectory, TrajectoryBuilder, DEFAULT_EPSILON,
};
pub use offline::{solve_offline, solve_offline_detailed, AnchorInfo, DelimiterList};
pub use oracle::brute_force_optimal;
pub use sim::{execute_trajectory, verify_shape, verify_three_visits, SimulationReport};
pub use online::{adaptive_online, fixed_switch, triple_always, OnlineAlgorithm, OnlineRun};
pub use adversary::{
    adversary_fixed_switch, adversary_known_length, adversary_unknown_length, gen_random_instance,
    AdversaryOutcome, KnownLengthConfig, UnknownLengthConfig,
};
pub use harness::{bench_competitive, measure_scaling, render_svg, BenchResult, CorpusConfig};
