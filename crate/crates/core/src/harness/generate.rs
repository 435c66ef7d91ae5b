use std::collections::HashSet;
use std::fs::File;
use std::io::BufReader;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dot::divisible_construction;
use crate::error::{Error, Result};
use crate::harness::config::{ExperimentConfig, Generator};
use crate::points::PointSet;
use crate::ring::Modulus;

/// A generator positioned on an independent stream of the master seed.
/// Streams keep parallel trials reproducible for any thread count.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `size` distinct points drawn uniformly without replacement by
/// sequential rejection: memory stays O(size) no matter how large Z_n^d
/// is, and the draw order is a pure function of `(seed, stream)`.
pub fn uniform_random_set(
    modulus: &Modulus,
    dim: usize,
    size: u64,
    seed: u64,
    stream: u64,
) -> Result<PointSet> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    if let Some(volume) = modulus.volume(dim) {
        if size as u128 > volume {
            return Err(Error::InvalidArgument(format!(
                "cannot draw {size} distinct points from a space of {volume}"
            )));
        }
    }
    let n = modulus.n();
    let mut rng = stream_rng(seed, stream);
    let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(size as usize);
    let mut coords = Vec::with_capacity(size as usize * dim);
    while (seen.len() as u64) < size {
        let point: Vec<u64> = (0..dim).map(|_| rng.random_range(0..n)).collect();
        if seen.insert(point.clone()) {
            coords.extend_from_slice(&point);
        }
    }
    Ok(PointSet::from_parts_unchecked(modulus.clone(), dim, coords))
}

/// Produces the point set for one trial of an experiment.
pub fn generate_set(cfg: &ExperimentConfig, trial_index: u64) -> Result<PointSet> {
    let modulus = cfg.validate()?;
    match &cfg.generator {
        Generator::UniformRandom => {
            uniform_random_set(&modulus, cfg.d, cfg.set_size, cfg.seed, trial_index)
        }
        Generator::Divisible => divisible_construction(&modulus, cfg.d),
        Generator::FullSpace => PointSet::full_space(modulus, cfg.d),
        Generator::Listed(path) => {
            let file = File::open(path)?;
            let set = PointSet::read_from(BufReader::new(file))?;
            if set.modulus().n() != cfg.n || set.dim() != cfg.d {
                return Err(Error::InvalidArgument(format!(
                    "point file is over Z_{}^{}, config wants Z_{}^{}",
                    set.modulus().n(),
                    set.dim(),
                    cfg.n,
                    cfg.d
                )));
            }
            Ok(set)
        }
    }
}
