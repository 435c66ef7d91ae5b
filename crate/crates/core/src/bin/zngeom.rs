//! Command-line surface for exact counting experiments over Z_n^d.
//!
//! Serialized records go to `--out` (or stdout when absent); human
//! summaries and timings go to stderr, so record output stays
//! byte-reproducible for a fixed seed regardless of `--threads`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use zn_geometry::harness::{
    fmt_real, generate_set, run_coverage_sweep, run_identity_suite, run_simplex_experiment,
    sweep_violation, to_csv, to_json, ExperimentConfig, FactorRecord, Generator, MomentRecord,
    MuRecord, Record, SetRecord, StarsRecord, ThresholdRecord, TOOLKIT_VERSION,
};
use zn_geometry::{dist, dot, simplex};
use zn_geometry::{CensusMode, Metric, Modulus};

#[derive(Parser)]
#[command(
    name = "zngeom",
    version,
    about = "Dot-product sets, distance sets, k-stars, and simplex types over Z_n^d"
)]
struct Cli {
    /// Worker threads for the global pool (0 = library default).
    /// Results are identical for any value; this only affects speed.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor an odd modulus and report tau(n) and gamma(n)
    Factor {
        n: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Dot-product set of a generated point set
    ProductSet {
        #[command(flatten)]
        set: SetOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Distance set of a generated point set
    DistanceSet {
        #[command(flatten)]
        set: SetOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Pair-product histogram with its deviation bound
    Mu {
        #[command(flatten)]
        set: SetOpts,
        /// Also dump the full histogram (trial,t,count rows) to this path
        #[arg(long)]
        histogram_out: Option<PathBuf>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Average k-star set cardinality over base tuples
    Stars {
        #[command(flatten)]
        set: SetOpts,
        #[command(flatten)]
        stat: StatOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Second moments of the star counting functions, with bound checks
    Mk {
        #[command(flatten)]
        set: SetOpts,
        #[command(flatten)]
        stat: StatOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Simplex-type census with density and saturation
    Simplices {
        #[command(flatten)]
        set: SetOpts,
        #[command(flatten)]
        stat: StatOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Coverage sweep over a grid of set sizes
    Sweep {
        #[command(flatten)]
        set: SetOpts,
        /// Comma-separated size grid, one sweep row per (size, trial)
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<u64>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Cross-module identity and bound suite
    Verify {
        #[arg(long, value_delimiter = ',', default_value = "3,9,15")]
        n_list: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        d_list: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        instances: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Evaluate the closed-form size thresholds for Z_n^d
    Thresholds {
        n: u64,
        d: usize,
        /// Also evaluate the k-star/simplex size bound
        k: Option<usize>,
        /// Treat n as p^ell and add the prime-power thresholds
        #[arg(long)]
        ell: Option<u32>,
        /// Set size to compare the bounds against
        #[arg(long, default_value_t = 0)]
        size: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Args)]
struct SetOpts {
    /// Odd modulus n >= 3
    #[arg(long)]
    n: u64,
    /// Dimension d >= 1
    #[arg(long)]
    d: usize,
    /// Set size for the uniform generator
    #[arg(long, default_value_t = 1)]
    size: u64,
    #[arg(long, default_value_t = 1)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// uniform | divisible | full | file:<path>
    #[arg(long, default_value = "uniform")]
    generator: String,
}

impl SetOpts {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::new(self.n, self.d);
        cfg.generator = Generator::from_str(&self.generator)?;
        cfg.set_size = self.size;
        cfg.trials = self.trials;
        cfg.seed = self.seed;
        Ok(cfg)
    }
}

#[derive(Args)]
struct StatOpts {
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// distance | dot
    #[arg(long, default_value = "distance")]
    metric: String,
    /// exact | sampled
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Sample budget (draws) for sampled mode
    #[arg(long)]
    budget: Option<u64>,
}

impl StatOpts {
    fn metric(&self) -> Result<Metric> {
        Ok(Metric::from_str(&self.metric)?)
    }

    fn mode(&self) -> Result<CensusMode> {
        Ok(CensusMode::from_str(&self.mode)?)
    }
}

#[derive(Args)]
struct OutputOpts {
    /// Write records here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
}

impl OutputOpts {
    fn emit<R: Record>(&self, records: &[R]) -> Result<()> {
        let text = match self.format.as_str() {
            "csv" => to_csv(records),
            "json" => to_json(records),
            other => bail!("unknown format {other:?}, expected csv or json"),
        };
        match &self.out {
            Some(path) => fs::write(path, text)
                .with_context(|| format!("writing {}", path.display()))?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

/// Per-trial seed derivation for the statistics that take a bare seed.
fn trial_seed(seed: u64, trial: u32) -> u64 {
    seed ^ u64::from(trial).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if cli.threads > 0 {
        // ignore the error if a pool already exists; thread count never
        // affects results
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }

    match cli.command {
        Command::Factor { n, output } => {
            let modulus = Modulus::new(n)?;
            let factorization = modulus
                .factors()
                .iter()
                .map(|&(p, a)| {
                    if a == 1 {
                        p.to_string()
                    } else {
                        format!("{p}^{a}")
                    }
                })
                .collect::<Vec<_>>()
                .join("*");
            eprintln!(
                "n = {n} = {factorization}, tau = {}, gamma = {}",
                modulus.tau(),
                modulus.gamma()
            );
            output.emit(&[FactorRecord {
                n,
                factorization,
                tau: modulus.tau(),
                gamma: modulus.gamma(),
                version: TOOLKIT_VERSION.to_string(),
            }])?;
            Ok(ExitCode::SUCCESS)
        }

        Command::ProductSet { set, output } => {
            let records = value_set_records(&set, "product")?;
            output.emit(&records)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::DistanceSet { set, output } => {
            let records = value_set_records(&set, "distance")?;
            output.emit(&records)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Mu {
            set,
            histogram_out,
            output,
        } => {
            let cfg = set.config()?;
            cfg.validate()?;
            let mut records = Vec::new();
            let mut dump = String::from("trial,t,count\n");
            for trial in 0..cfg.trials {
                let e = generate_set(&cfg, u64::from(trial))?;
                let hist = dot::product_histogram(&e);
                let dev = dot::deviation_from_histogram(&e, &hist);
                for (t, &count) in hist.counts().iter().enumerate() {
                    dump.push_str(&format!("{trial},{t},{count}\n"));
                }
                records.push(MuRecord {
                    n: cfg.n,
                    d: cfg.d,
                    generator: cfg.generator.to_string(),
                    set_size: e.len() as u64,
                    seed: cfg.seed,
                    total: hist.total(),
                    support_size: hist.support_size() as u64,
                    min_count: hist.counts().iter().copied().min().unwrap_or(0),
                    max_count: hist.counts().iter().copied().max().unwrap_or(0),
                    max_dev: dev.max_dev,
                    bound: dev.bound,
                    holds: dev.holds,
                    version: TOOLKIT_VERSION.to_string(),
                });
            }
            if let Some(path) = histogram_out {
                fs::write(&path, dump)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            output.emit(&records)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Stars { set, stat, output } => {
            let cfg = set.config()?;
            let modulus = cfg.validate()?;
            let metric = stat.metric()?;
            let k = stat.k;
            if k == 0 || k > cfg.d {
                bail!("k = {k} must satisfy 1 <= k <= d = {}", cfg.d);
            }
            let bound = simplex::size_bound(&modulus, cfg.d, k);
            let mut records = Vec::new();
            for trial in 0..cfg.trials {
                let e = generate_set(&cfg, u64::from(trial))?;
                let samples = match stat.mode()? {
                    CensusMode::Exact => {
                        let tuples = (e.len() as u128).pow(k as u32);
                        if tuples > 1_000_000_000 {
                            bail!(
                                "exact star average needs {tuples} base tuples; \
                                 use --mode sampled --budget <draws>"
                            );
                        }
                        u64::MAX
                    }
                    CensusMode::Sampled => stat.budget.unwrap_or(1000),
                };
                let avg = match metric {
                    Metric::Distance => {
                        dist::star_average(&e, k, samples, trial_seed(cfg.seed, trial))?
                    }
                    Metric::DotProduct => {
                        dot::star_average(&e, k, samples, trial_seed(cfg.seed, trial))?
                    }
                };
                records.push(StarsRecord {
                    n: cfg.n,
                    d: cfg.d,
                    k,
                    metric: metric.name(),
                    generator: cfg.generator.to_string(),
                    set_size: e.len() as u64,
                    seed: cfg.seed,
                    samples: avg.samples,
                    exact: avg.exact,
                    estimate: avg.estimate,
                    stderr: avg.stderr,
                    ratio_to_nk: avg.estimate / (cfg.n as f64).powi(k as i32),
                    size_bound: bound,
                    applies: (e.len() as f64) > bound,
                    version: TOOLKIT_VERSION.to_string(),
                });
            }
            output.emit(&records)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Mk { set, stat, output } => {
            let cfg = set.config()?;
            cfg.validate()?;
            let metric = stat.metric()?;
            let k = stat.k;
            if k == 0 {
                bail!("k must be >= 1");
            }
            let mut records = Vec::new();
            let mut any_guaranteed_failure = false;
            for trial in 0..cfg.trials {
                let e = generate_set(&cfg, u64::from(trial))?;
                let record = match stat.mode()? {
                    CensusMode::Exact => {
                        let check = match metric {
                            Metric::Distance => dist::star_second_moment_check(&e, k)?,
                            Metric::DotProduct => dot::star_second_moment_check(&e, k)?,
                        };
                        if check.guaranteed && !check.holds {
                            any_guaranteed_failure = true;
                        }
                        MomentRecord {
                            n: cfg.n,
                            d: cfg.d,
                            k,
                            metric: metric.name(),
                            generator: cfg.generator.to_string(),
                            set_size: e.len() as u64,
                            seed: cfg.seed,
                            mode: "exact",
                            value: Some(check.value),
                            estimate: None,
                            stderr: None,
                            bound: check.bound,
                            holds: Some(check.holds),
                            tau_free_bound: check.tau_free_bound,
                            tau_free_holds: Some(check.tau_free_holds),
                            guaranteed: check.guaranteed,
                            version: TOOLKIT_VERSION.to_string(),
                        }
                    }
                    CensusMode::Sampled => {
                        let pairs = stat.budget.unwrap_or(1000);
                        let seed = trial_seed(cfg.seed, trial);
                        let (estimate, stderr) = match metric {
                            Metric::Distance => {
                                dist::star_second_moment_sampled(&e, k, pairs, seed)?
                            }
                            Metric::DotProduct => {
                                dot::star_second_moment_sampled(&e, k, pairs, seed)?
                            }
                        };
                        // bound formula does not depend on the value
                        let bounds = zn_geometry::moment_bounds(&e, k);
                        MomentRecord {
                            n: cfg.n,
                            d: cfg.d,
                            k,
                            metric: metric.name(),
                            generator: cfg.generator.to_string(),
                            set_size: e.len() as u64,
                            seed: cfg.seed,
                            mode: "sampled",
                            value: None,
                            estimate: Some(estimate),
                            stderr: Some(stderr),
                            bound: bounds.0,
                            holds: None,
                            tau_free_bound: bounds.1,
                            tau_free_holds: None,
                            guaranteed: false,
                            version: TOOLKIT_VERSION.to_string(),
                        }
                    }
                };
                records.push(record);
            }
            output.emit(&records)?;
            if any_guaranteed_failure {
                eprintln!("guaranteed k=1 second-moment bound FAILED");
                return Ok(ExitCode::FAILURE);
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Simplices { set, stat, output } => {
            let mut cfg = set.config()?;
            cfg.k = stat.k;
            cfg.metric = stat.metric()?;
            cfg.mode = stat.mode()?;
            if let Some(budget) = stat.budget {
                cfg.budget = budget;
            } else if cfg.mode == CensusMode::Exact {
                cfg.budget = simplex::EXACT_TUPLE_CAP as u64;
            }
            let record = run_simplex_experiment(&cfg)?;
            eprintln!(
                "census: {} distinct types over {} tuples, density {}",
                record.distinct,
                record.tuples_examined,
                fmt_real(record.density)
            );
            output.emit(&[record])?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Sweep { set, sizes, output } => {
            let cfg = set.config()?;
            let records = run_coverage_sweep(&cfg, &sizes)?;
            let violations = records.iter().filter(|r| sweep_violation(r)).count();
            eprintln!(
                "sweep: {} rows, {} theorem-guaranteed violations",
                records.len(),
                violations
            );
            output.emit(&records)?;
            if violations > 0 {
                return Ok(ExitCode::FAILURE);
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify {
            n_list,
            d_list,
            instances,
            seed,
            output,
        } => {
            let mut pairs = Vec::new();
            for &n in &n_list {
                for &d in &d_list {
                    pairs.push((n, d));
                }
            }
            let report = run_identity_suite(&pairs, instances, seed)?;
            eprintln!(
                "identity suite: {} cells, max gap {}, guaranteed checks {}",
                report.records.len(),
                fmt_real(report.max_gap),
                if report.all_guaranteed_pass {
                    "PASS"
                } else {
                    "FAIL"
                }
            );
            output.emit(&report.records)?;
            if !report.all_guaranteed_pass {
                return Ok(ExitCode::FAILURE);
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Thresholds {
            n,
            d,
            k,
            ell,
            size,
            output,
        } => {
            let modulus = Modulus::new(n)?;
            let mut records: Vec<ThresholdRecord> = dot::coverage_thresholds(&modulus, d, size, ell)?
                .into_iter()
                .map(|r| ThresholdRecord {
                    n,
                    d,
                    k: None,
                    set_size: size,
                    name: r.name.to_string(),
                    bound: r.bound,
                    applies: r.applies,
                    vacuous: r.vacuous,
                    version: TOOLKIT_VERSION.to_string(),
                })
                .collect();
            if let Some(k) = k {
                let bound = simplex::size_bound(&modulus, d, k);
                records.push(ThresholdRecord {
                    n,
                    d,
                    k: Some(k),
                    set_size: size,
                    name: "star_simplex_size".to_string(),
                    bound,
                    applies: (size as f64) > bound,
                    vacuous: bound >= modulus.volume_f64(d),
                    version: TOOLKIT_VERSION.to_string(),
                });
            }
            for r in &records {
                eprintln!(
                    "{}: bound {}{}{}",
                    r.name,
                    fmt_real(r.bound),
                    if r.applies { " (applies)" } else { "" },
                    if r.vacuous { " (vacuous)" } else { "" }
                );
            }
            output.emit(&records)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn value_set_records(set: &SetOpts, kind: &'static str) -> Result<Vec<SetRecord>> {
    let cfg = set.config()?;
    cfg.validate()?;
    let mut records = Vec::new();
    for trial in 0..cfg.trials {
        let e = generate_set(&cfg, u64::from(trial))?;
        let values = match kind {
            "product" => dot::product_set(&e),
            _ => dist::distance_set(&e),
        };
        records.push(SetRecord {
            kind,
            n: cfg.n,
            d: cfg.d,
            generator: cfg.generator.to_string(),
            set_size: e.len() as u64,
            seed: cfg.seed,
            value_count: values.len() as u64,
            covers_ring: values.len() as u64 == cfg.n,
            values: values
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            version: TOOLKIT_VERSION.to_string(),
        });
    }
    Ok(records)
}
