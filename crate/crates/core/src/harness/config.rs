use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::Modulus;
use crate::simplex::{CensusMode, Metric};

/// How a trial's point set is produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    /// `set_size` distinct points drawn uniformly without replacement,
    /// deterministically from `(seed, trial_index)`.
    UniformRandom,
    /// All points with every coordinate divisible by `gamma(n)`;
    /// ignores `set_size`.
    Divisible,
    /// All of Z_n^d; ignores `set_size`.
    FullSpace,
    /// Points read from a file in the point-list format.
    Listed(PathBuf),
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::UniformRandom),
            "divisible" => Ok(Self::Divisible),
            "full" => Ok(Self::FullSpace),
            other => match other.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(Self::Listed(PathBuf::from(path))),
                _ => Err(Error::InvalidArgument(format!(
                    "unknown generator {other:?}, expected uniform | divisible | full | file:<path>"
                ))),
            },
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UniformRandom => write!(f, "uniform"),
            Self::Divisible => write!(f, "divisible"),
            Self::FullSpace => write!(f, "full"),
            Self::Listed(path) => write!(f, "file:{}", path.display()),
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// One experiment's full configuration.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub n: u64,
    pub d: usize,
    pub k: usize,
    pub generator: Generator,
    pub set_size: u64,
    pub trials: u32,
    pub seed: u64,
    pub metric: Metric,
    pub mode: CensusMode,
    pub budget: u64,
}

impl ExperimentConfig {
    pub fn new(n: u64, d: usize) -> Self {
        Self {
            n,
            d,
            k: 1,
            generator: Generator::UniformRandom,
            set_size: 1,
            trials: 1,
            seed: 0,
            metric: Metric::Distance,
            mode: CensusMode::Exact,
            budget: 1_000_000,
        }
    }

    /// Checks the config invariants and returns the factored modulus.
    pub fn validate(&self) -> Result<Modulus> {
        let modulus = Modulus::new(self.n)?;
        if self.d == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        if self.k == 0 || self.k > self.d {
            return Err(Error::InvalidArgument(format!(
                "k = {} must satisfy 1 <= k <= d = {}",
                self.k, self.d
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        if let Some(volume) = modulus.volume(self.d) {
            if self.set_size as u128 > volume {
                return Err(Error::InvalidArgument(format!(
                    "set_size {} exceeds |Z_{}^{}| = {volume}",
                    self.set_size, self.n, self.d
                )));
            }
        }
        if matches!(self.generator, Generator::UniformRandom) && self.set_size == 0 {
            return Err(Error::InvalidArgument("set_size must be >= 1".into()));
        }
        Ok(modulus)
    }
}
