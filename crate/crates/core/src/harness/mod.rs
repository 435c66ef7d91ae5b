//! Seeded experiment orchestration: set generators, coverage sweeps,
//! simplex experiments, the cross-module identity suite, and the CSV/JSON
//! record layer behind the `zngeom` CLI.
//!
//! Determinism contract: identical configuration (including the seed)
//! yields byte-identical serialized output for any thread count. Trials
//! derive independent generator streams from the master seed; records are
//! ordered by their (size, trial) index, never by completion time.
//! Wall-clock data (timings) is deliberately kept out of the records and
//! only ever printed to stderr.

mod config;
mod generate;
mod io;
mod records;
mod suites;

pub use config::{ExperimentConfig, Generator};
pub use generate::{generate_set, stream_rng, uniform_random_set};
pub use io::{fmt_real, to_csv, to_json, Record};
pub use records::{
    FactorRecord, IdentityRecord, MomentRecord, MuRecord, SetRecord, SimplexRecord, StarsRecord,
    SweepRecord, ThresholdRecord,
};
pub use suites::{
    run_coverage_sweep, run_identity_suite, run_simplex_experiment, sweep_violation,
    IdentitySuiteReport, IDENTITY_GAP_TOL,
};

/// Version string echoed into records so fixtures are auditable.
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
