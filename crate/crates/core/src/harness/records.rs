//! Flat result records. CSV column order is fixed by `CSV_HEADER` and
//! documented in the README; the JSON field order matches it.

use serde::Serialize;

use crate::harness::io::{fmt_real, u128_as_string, Record};

fn fmt_bool(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}

fn fmt_opt_u128(v: &Option<u128>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn fmt_opt_real(v: &Option<f64>) -> String {
    v.map(fmt_real).unwrap_or_default()
}

fn fmt_opt_bool(v: &Option<bool>) -> String {
    v.map(fmt_bool).unwrap_or_default()
}

fn opt_u128_as_string<S: serde::Serializer>(
    value: &Option<u128>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => u128_as_string(v, serializer),
        None => serializer.serialize_none(),
    }
}

/// One row of a coverage sweep: one (size, trial) cell.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub n: u64,
    pub d: usize,
    pub size: u64,
    pub trial: u32,
    pub seed: u64,
    pub generator: String,
    pub set_size: u64,
    pub pi_size: u64,
    pub pi_fraction: f64,
    pub covers_ring: bool,
    pub mu_max_dev: f64,
    pub mu_bound: f64,
    pub mu_holds: bool,
    pub unit_coverage_bound: f64,
    pub unit_coverage_applies: bool,
    pub unit_coverage_vacuous: bool,
    pub ring_coverage_weak_bound: f64,
    pub ring_coverage_weak_applies: bool,
    pub ring_coverage_weak_vacuous: bool,
    pub ring_coverage_bound: f64,
    pub ring_coverage_applies: bool,
    pub ring_coverage_vacuous: bool,
    /// Coverage is theorem-guaranteed for this row: d > 2 and the set is
    /// larger than the ring-coverage bound.
    pub coverage_guaranteed: bool,
    pub version: String,
}

impl Record for SweepRecord {
    const CSV_HEADER: &'static [&'static str] = &[
        "n",
        "d",
        "size",
        "trial",
        "seed",
        "generator",
        "set_size",
        "pi_size",
        "pi_fraction",
        "covers_ring",
        "mu_max_dev",
        "mu_bound",
        "mu_holds",
        "unit_coverage_bound",
        "unit_coverage_applies",
        "unit_coverage_vacuous",
        "ring_coverage_weak_bound",
        "ring_coverage_weak_applies",
        "ring_coverage_weak_vacuous",
        "ring_coverage_bound",
        "ring_coverage_applies",
        "ring_coverage_vacuous",
        "coverage_guaranteed",
        "version",
    ];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.d.to_string(),
            self.size.to_string(),
            self.trial.to_string(),
            self.seed.to_string(),
            self.generator.clone(),
            self.set_size.to_string(),
            self.pi_size.to_string(),
            fmt_real(self.pi_fraction),
            fmt_bool(self.covers_ring),
            fmt_real(self.mu_max_dev),
            fmt_real(self.mu_bound),
            fmt_bool(self.mu_holds),
            fmt_real(self.unit_coverage_bound),
            fmt_bool(self.unit_coverage_applies),
            fmt_bool(self.unit_coverage_vacuous),
            fmt_real(self.ring_coverage_weak_bound),
            fmt_bool(self.ring_coverage_weak_applies),
            fmt_bool(self.ring_coverage_weak_vacuous),
            fmt_real(self.ring_coverage_bound),
            fmt_bool(self.ring_coverage_applies),
            fmt_bool(self.ring_coverage_vacuous),
            fmt_bool(self.coverage_guaranteed),
            self.version.clone(),
        ]
    }
}

/// Result of one simplex-census experiment.
#[derive(Debug, Clone, Serialize)]
pub struct SimplexRecord {
    pub n: u64,
    pub d: usize,
    pub k: usize,
    pub metric: &'static str,
    pub generator: String,
    pub set_size: u64,
    pub mode: &'static str,
    pub budget: u64,
    pub seed: u64,
    pub distinct: u64,
    pub tuples_examined: u64,
    pub exact: bool,
    pub density: f64,
    pub size_bound: f64,
    pub applies: bool,
    pub vacuous: bool,
    pub plateaued: bool,
    pub last_gain: f64,
    pub version: String,
}

impl Record for SimplexRecord {
    const CSV_HEADER: &'static [&'static str] = &[
        "n",
        "d",
        "k",
        "metric",
        "generator",
        "set_size",
        "mode",
        "budget",
        "seed",
        "distinct",
        "tuples_examined",
        "exact",
        "density",
        "size_bound",
        "applies",
        "vacuous",
        "plateaued",
        "last_gain",
        "version",
    ];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.d.to_string(),
            self.k.to_string(),
            self.metric.to_string(),
            self.generator.clone(),
            self.set_size.to_string(),
            self.mode.to_string(),
            self.budget.to_string(),
            self.seed.to_string(),
            self.distinct.to_string(),
            self.tuples_examined.to_string(),
            fmt_bool(self.exact),
            fmt_real(self.density),
            fmt_real(self.size_bound),
            fmt_bool(self.applies),
            fmt_bool(self.vacuous),
            fmt_bool(self.plateaued),
            fmt_real(self.last_gain),
            self.version.clone(),
        ]
    }
}

/// Identity-suite results for one (n, d) cell.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityRecord {
    pub n: u64,
    pub d: usize,
    pub instances: u32,
    pub seed: u64,
    /// Orthogonality scan is quadratic, so it only runs for n^d <= 4096.
    pub orthogonality_checked: bool,
    pub orthogonality_gap: f64,
    pub inversion_gap: f64,
    pub plancherel_gap: f64,
    pub star_identity_gap: f64,
    pub kernel_exact: bool,
    /// Pair-histogram reconstruction from character sums; runs for
    /// n^d <= 729.
    pub mu_reconstruction_checked: bool,
    pub mu_reconstruction_gap: f64,
    pub mu_reconstruction_exact: bool,
    pub mu_deviation_holds: bool,
    pub dist_moment_holds: bool,
    pub dot_moment_holds: bool,
    pub dot_moment_tau_free_holds: bool,
    /// Every theorem-guaranteed check in this row passed.
    pub guaranteed_pass: bool,
    pub version: String,
}

impl Record for IdentityRecord {
    const CSV_HEADER: &'static [&'static str] = &[
        "n",
        "d",
        "instances",
        "seed",
        "orthogonality_checked",
        "orthogonality_gap",
        "inversion_gap",
        "plancherel_gap",
        "star_identity_gap",
        "kernel_exact",
        "mu_reconstruction_checked",
        "mu_reconstruction_gap",
        "mu_reconstruction_exact",
        "mu_deviation_holds",
        "dist_moment_holds",
        "dot_moment_holds",
        "dot_moment_tau_free_holds",
        "guaranteed_pass",
        "version",
    ];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.d.to_string(),
            self.instances.to_string(),
            self.seed.to_string(),
            fmt_bool(self.orthogonality_checked),
            fmt_real(self.orthogonality_gap),
            fmt_real(self.inversion_gap),
            fmt_real(self.plancherel_gap),
            fmt_real(self.star_identity_gap),
            fmt_bool(self.kernel_exact),
            fmt_bool(self.mu_reconstruction_checked),
            fmt_real(self.mu_reconstruction_gap),
            fmt_bool(self.mu_reconstruction_exact),
            fmt_bool(self.mu_deviation_holds),
            fmt_bool(self.dist_moment_holds),
            fmt_bool(self.dot_moment_holds),
            fmt_bool(self.dot_moment_tau_free_holds),
            fmt_bool(self.guaranteed_pass),
            self.version.clone(),
        ]
    }
}

/// Summary of one pair-histogram computation.
#[derive(Debug, Clone, Serialize)]
pub struct MuRecord {
    pub n: u64,
    pub d: usize,
    pub generator: String,
    pub set_size: u64,
    pub seed: u64,
    pub total: u64,
    pub support_size: u64,
    pub min_count: u64,
    pub max_count: u64,
    pub max_dev: f64,
    pub bound: f64,
    pub holds: bool,
    pub version: String,
}

impl Record for MuRecord {
    const CSV_HEADER: &'static [&'static str] = &[
        "n",
        "d",
        "generator",
        "set_size",
        "seed",
        "total",
        "support_size",
        "min_count",
        "max_count",
        "max_dev",
        "bound",
        "holds",
        "version",
    ];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.d.to_string(),
            self.generator.clone(),
            self.set_size.to_string(),
            self.seed.to_string(),
            self.total.to_string(),
            self.support_size.to_string(),
            self.min_count.to_string(),
            self.max_count.to_string(),
            fmt_real(self.max_dev),
            fmt_real(self.bound),
            fmt_bool(self.holds),
            self.version.clone(),
        ]
    }
}

/// A computed value set (dot-product set or distance set).
#[derive(Debug, Clone, Serialize)]
pub struct SetRecord {
    pub kind: &'static str,
    pub n: u64,
    pub d: usize,
    pub generator: String,
    pub set_size: u64,
    pub seed: u64,
    pub value_count: u64,
    pub covers_ring: bool,
    /// Space-separated residues, ascending.
    pub values: String,
    pub version: String,
}

impl Record for SetRecord {
    const CSV_HEADER: &'static [&'static str] = &[
        "kind",
        "n",
        "d",
        "generator",
        "set_size",
        "seed",
        "value_count",
        "covers_ring",
        "values",
        "version",
    ];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.kind.to_string(),
            self.n.to_string(),
            self.d.to_string(),
            self.generator.clone(),
            self.set_size.to_string(),
            self.seed.to_string(),
            self.value_count.to_string(),
            fmt_bool(self.covers_ring),
            self.values.clone(),
            self.version.clone(),
        ]
    }
}

/// One star-average measurement.
#[derive(Debug, Clone, Serialize)]
pub struct StarsRecord {
    pub n: u64,
    pub d: usize,
    pub k: usize,
    pub metric: &'static str,
    pub generator: String,
    pub set_size: u64,
    pub seed: u64,
    pub samples: u64,
    pub exact: bool,
    pub estimate: f64,
    pub stderr: f64,
    /// estimate / n^k, the measured ratio against the star-average scale.
    pub ratio_to_nk: f64,
    pub size_bound: f64,
    pub applies: bool,
    pub version: String,
}

impl Record for StarsRecord {
    const CSV_HEADER: &'static [&'static str] = &[
        "n",
        "d",
        "k",
        "metric",
        "generator",
        "set_size",
        "seed",
        "samples",
        "exact",
        "estimate",
        "stderr",
        "ratio_to_nk",
        "size_bound",
        "applies",
        "version",
    ];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.d.to_string(),
            self.k.to_string(),
            self.metric.to_string(),
            self.generator.clone(),
            self.set_size.to_string(),
            self.seed.to_string(),
            self.samples.to_string(),
            fmt_bool(self.exact),
            fmt_real(self.estimate),
            fmt_real(self.stderr),
            fmt_real(self.ratio_to_nk),
            fmt_real(self.size_bound),
            fmt_bool(self.applies),
            self.version.clone(),
        ]
    }
}

/// One second-moment measurement (distance M_k or dot-product K_k).
#[derive(Debug, Clone, Serialize)]
pub struct MomentRecord {
    pub n: u64,
    pub d: usize,
    pub k: usize,
    pub metric: &'static str,
    pub generator: String,
    pub set_size: u64,
    pub seed: u64,
    pub mode: &'static str,
    #[serde(serialize_with = "opt_u128_as_string")]
    pub value: Option<u128>,
    pub estimate: Option<f64>,
    pub stderr: Option<f64>,
    pub bound: f64,
    pub holds: Option<bool>,
    pub tau_free_bound: f64,
    pub tau_free_holds: Option<bool>,
    pub guaranteed: bool,
    pub version: String,
}

impl Record for MomentRecord {
    const CSV_HEADER: &'static [&'static str] = &[
        "n",
        "d",
        "k",
        "metric",
        "generator",
        "set_size",
        "seed",
        "mode",
        "value",
        "estimate",
        "stderr",
        "bound",
        "holds",
        "tau_free_bound",
        "tau_free_holds",
        "guaranteed",
        "version",
    ];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.d.to_string(),
            self.k.to_string(),
            self.metric.to_string(),
            self.generator.clone(),
            self.set_size.to_string(),
            self.seed.to_string(),
            self.mode.to_string(),
            fmt_opt_u128(&self.value),
            fmt_opt_real(&self.estimate),
            fmt_opt_real(&self.stderr),
            fmt_real(self.bound),
            fmt_opt_bool(&self.holds),
            fmt_real(self.tau_free_bound),
            fmt_opt_bool(&self.tau_free_holds),
            fmt_bool(self.guaranteed),
            self.version.clone(),
        ]
    }
}

/// One evaluated size threshold.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdRecord {
    pub n: u64,
    pub d: usize,
    pub k: Option<usize>,
    pub set_size: u64,
    pub name: String,
    pub bound: f64,
    pub applies: bool,
    pub vacuous: bool,
    pub version: String,
}

impl Record for ThresholdRecord {
    const CSV_HEADER: &'static [&'static str] = &[
        "n", "d", "k", "set_size", "name", "bound", "applies", "vacuous", "version",
    ];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.d.to_string(),
            self.k.map(|k| k.to_string()).unwrap_or_default(),
            self.set_size.to_string(),
            self.name.clone(),
            fmt_real(self.bound),
            fmt_bool(self.applies),
            fmt_bool(self.vacuous),
            self.version.clone(),
        ]
    }
}

/// Factorization summary.
#[derive(Debug, Clone, Serialize)]
pub struct FactorRecord {
    pub n: u64,
    /// e.g. `3^2*5`
    pub factorization: String,
    pub tau: u64,
    pub gamma: u64,
    pub version: String,
}

impl Record for FactorRecord {
    const CSV_HEADER: &'static [&'static str] = &["n", "factorization", "tau", "gamma", "version"];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.factorization.clone(),
            self.tau.to_string(),
            self.gamma.to_string(),
            self.version.clone(),
        ]
    }
}
