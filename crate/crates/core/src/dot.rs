//! Dot-product incidence counting over Z_n^d: the pair histogram and its
//! deviation from the mean, the dot-product set and ring-coverage
//! predicate, closed-form size thresholds, the divisibility construction
//! that witnesses their sharpness, and dot-product k-star statistics.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hist::{StarHistogram, ValueHistogram};
use crate::moments::{self, MomentBoundCheck};
use crate::points::{PointSet, MAX_POINTS};
use crate::ring::Modulus;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

/// Dot product of two coordinate slices, reduced mod n. No length check;
/// callers inside the crate guarantee matching dimensions.
#[inline]
pub(crate) fn dot_unchecked(x: &[u64], y: &[u64], n: u64) -> u64 {
    if n < (1 << 26) {
        // products stay below 2^52, so a u64 accumulator is safe for any
        // realistic dimension
        let mut acc = 0u64;
        for (a, b) in x.iter().zip(y) {
            acc += a * b;
        }
        acc % n
    } else {
        let mut acc = 0u128;
        for (a, b) in x.iter().zip(y) {
            acc += *a as u128 * *b as u128;
        }
        (acc % n as u128) as u64
    }
}

/// `x . y = x_1 y_1 + ... + x_d y_d` mod n.
pub fn dot(x: &[u64], y: &[u64], modulus: &Modulus) -> Result<u64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(dot_unchecked(x, y, modulus.n()))
}

/// Histogram of `x . y` over all ordered pairs of `E`, including `x = y`;
/// the total is exactly `|E|^2`. Pair counting is blocked over `x` with
/// per-block histograms merged at the end, so the counts are exact
/// integers for any thread count.
pub fn product_histogram(set: &PointSet) -> ValueHistogram {
    let n = set.modulus().n();
    (0..set.len())
        .into_par_iter()
        .with_min_len(64)
        .fold(
            || ValueHistogram::new(set.modulus()),
            |mut hist, i| {
                let x = set.point(i);
                for y in set.iter() {
                    hist.increment(dot_unchecked(x, y, n));
                }
                hist
            },
        )
        .reduce(
            || ValueHistogram::new(set.modulus()),
            |mut a, b| {
                a.merge(&b);
                a
            },
        )
}

/// The dot-product set `{ x . y : x, y in E }`. Identical to the support
/// of [`product_histogram`]; the scan stops early once all `n` residues
/// have appeared, which cannot change the result.
pub fn product_set(set: &PointSet) -> BTreeSet<u64> {
    let n = set.modulus().n();
    let mut values = BTreeSet::new();
    'outer: for x in set.iter() {
        for y in set.iter() {
            values.insert(dot_unchecked(x, y, n));
            if values.len() as u64 == n {
                break 'outer;
            }
        }
    }
    values
}

/// `true` iff the dot-product set is all of Z_n.
pub fn covers_ring(set: &PointSet) -> bool {
    product_set(set).len() as u64 == set.modulus().n()
}

/// Deviation of the pair histogram from its mean `|E|^2 / n`, against the
/// closed-form bound `tau(n) n^{d-1} |E| / gamma(n)^{(d-2)/2}`.
///
/// The bound's derivation needs `d >= 2`; for `d = 1` the formula is still
/// evaluated but `holds` is observational.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DeviationCheck {
    pub max_dev: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn product_deviation(set: &PointSet) -> DeviationCheck {
    let hist = product_histogram(set);
    deviation_from_histogram(set, &hist)
}

/// Same check, reusing an already-computed pair histogram.
pub fn deviation_from_histogram(set: &PointSet, hist: &ValueHistogram) -> DeviationCheck {
    let m = set.modulus();
    let n = m.n();
    let mean = (set.len() as f64) * (set.len() as f64) / n as f64;
    let max_dev = hist
        .counts()
        .iter()
        .map(|&c| (c as f64 - mean).abs())
        .fold(0.0, f64::max);
    let bound = m.tau() as f64 * (n as f64).powi(set.dim() as i32 - 1) * set.len() as f64
        / (m.gamma() as f64).powf((set.dim() as f64 - 2.0) / 2.0);
    DeviationCheck {
        max_dev,
        bound,
        holds: max_dev <= bound,
    }
}

/// One evaluated size threshold: a set larger than `bound` gets the named
/// coverage guarantee. `vacuous` flags bounds at or above `n^d`, which no
/// subset can exceed.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub name: &'static str,
    pub bound: f64,
    pub set_size: u64,
    pub applies: bool,
    pub vacuous: bool,
}

impl ThresholdReport {
    fn new(name: &'static str, bound: f64, set_size: u64, volume: f64) -> Self {
        Self {
            name,
            bound,
            set_size,
            applies: (set_size as f64) > bound,
            vacuous: bound >= volume,
        }
    }
}

/// Evaluates every closed-form coverage threshold for subsets of Z_n^d.
///
/// Always reported, for general odd n:
///  - `unit_coverage`:      sqrt(2) tau(n) n^d / gamma(n)^{(d-1)/2}
///  - `ring_coverage_weak`: 2 sqrt(tau(n)) n^{d+1} / gamma(n)^{d/2}
///  - `ring_coverage`:      tau(n) n^d / gamma(n)^{(d-2)/2}
///
/// With `ell` given, `n` must be exactly `p^ell`, and two prime-power
/// thresholds over `q = p^ell` are added:
///  - `prime_power_unit_coverage`: ell q^{(2ell-1)d/(2ell) + 1/(2ell)}
///  - `prime_power_ring_coverage`: (ell+1) q^{(2ell-1)d/(2ell) + 1/ell}
pub fn coverage_thresholds(
    modulus: &Modulus,
    dim: usize,
    set_size: u64,
    ell: Option<u32>,
) -> Result<Vec<ThresholdReport>> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    let n = modulus.n() as f64;
    let tau = modulus.tau() as f64;
    let gamma = modulus.gamma() as f64;
    let d = dim as f64;
    let volume = modulus.volume_f64(dim);

    let mut reports = vec![
        ThresholdReport::new(
            "unit_coverage",
            2f64.sqrt() * tau * n.powf(d) / gamma.powf((d - 1.0) / 2.0),
            set_size,
            volume,
        ),
        ThresholdReport::new(
            "ring_coverage_weak",
            2.0 * tau.sqrt() * n.powf(d + 1.0) / gamma.powf(d / 2.0),
            set_size,
            volume,
        ),
        ThresholdReport::new(
            "ring_coverage",
            tau * n.powf(d) / gamma.powf((d - 2.0) / 2.0),
            set_size,
            volume,
        ),
    ];

    if let Some(ell) = ell {
        let factors = modulus.factors();
        if factors.len() != 1 || factors[0].1 != ell {
            return Err(Error::InvalidArgument(format!(
                "n = {} is not p^{ell}, cannot evaluate prime-power thresholds",
                modulus.n()
            )));
        }
        let l = ell as f64;
        let exponent = (2.0 * l - 1.0) * d / (2.0 * l);
        reports.push(ThresholdReport::new(
            "prime_power_unit_coverage",
            l * n.powf(exponent + 1.0 / (2.0 * l)),
            set_size,
            volume,
        ));
        reports.push(ThresholdReport::new(
            "prime_power_ring_coverage",
            (l + 1.0) * n.powf(exponent + 1.0 / l),
            set_size,
            volume,
        ));
    }
    Ok(reports)
}

/// The set of all points whose coordinates are multiples of `gamma(n)`.
/// Its size is exactly `(n / gamma)^d` and every pairwise dot product is
/// divisible by `gamma^2`, so the dot-product set contains no unit.
pub fn divisible_construction(modulus: &Modulus, dim: usize) -> Result<PointSet> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    let gamma = modulus.gamma();
    let per_axis = modulus.n() / gamma;
    let count = (per_axis as u128).checked_pow(dim as u32).filter(|&c| c <= MAX_POINTS);
    let count = count.ok_or(Error::SizeBound {
        what: "divisible-construction point count",
        got: (per_axis as u128).checked_pow(dim as u32).unwrap_or(u128::MAX),
        limit: MAX_POINTS,
    })? as usize;

    let mut coords = Vec::with_capacity(count * dim);
    let mut digits = vec![0u64; dim];
    loop {
        coords.extend(digits.iter().map(|&v| v * gamma));
        let mut axis = dim;
        loop {
            if axis == 0 {
                return Ok(PointSet::from_parts_unchecked(
                    modulus.clone(),
                    dim,
                    coords,
                ));
            }
            axis -= 1;
            digits[axis] += 1;
            if digits[axis] < per_axis {
                break;
            }
            digits[axis] = 0;
        }
    }
}

fn check_bases(set: &PointSet, bases: &[Vec<u64>]) -> Result<()> {
    if bases.is_empty() {
        return Err(Error::InvalidArgument("need at least one base point".into()));
    }
    let n = set.modulus().n();
    for b in bases {
        if b.len() != set.dim() {
            return Err(Error::DimensionMismatch {
                left: set.dim(),
                right: b.len(),
            });
        }
        if let Some(&c) = b.iter().find(|&&c| c >= n) {
            return Err(Error::CoordinateRange { value: c, n });
        }
    }
    Ok(())
}

/// Counting function of the dot-product k-star: for each tuple
/// `(x.y_1, ..., x.y_k)` over `x in E`, how many points of `E` realize it.
/// One pass over `E`; the total equals `|E|`.
pub fn star_histogram(set: &PointSet, bases: &[Vec<u64>]) -> Result<StarHistogram> {
    check_bases(set, bases)?;
    let n = set.modulus().n();
    let mut hist = StarHistogram::new(bases.to_vec());
    for x in set.iter() {
        let tuple: Vec<u64> = bases.iter().map(|y| dot_unchecked(x, y, n)).collect();
        hist.increment(tuple);
    }
    Ok(hist)
}

/// The dot-product k-star set `{ (x.y_1, ..., x.y_k) : x in E }`.
pub fn star_set(set: &PointSet, bases: &[Vec<u64>]) -> Result<BTreeSet<Vec<u64>>> {
    Ok(star_histogram(set, bases)?
        .support()
        .map(|t| t.to_vec())
        .collect())
}

/// Average star-set cardinality over base tuples from `E^k`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StarAverage {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub exact: bool,
}

/// `(1/|E|^k) * sum over base tuples of |star set|`, enumerated exactly
/// when `sample_bases` covers all of `E^k` and estimated by uniform
/// sampling (with replacement) otherwise.
pub fn star_average(set: &PointSet, k: usize, sample_bases: u64, seed: u64) -> Result<StarAverage> {
    star_average_impl(set, k, sample_bases, seed, dot_unchecked)
}

pub(crate) fn star_average_impl(
    set: &PointSet,
    k: usize,
    sample_bases: u64,
    seed: u64,
    value: impl Fn(&[u64], &[u64], u64) -> u64,
) -> Result<StarAverage> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    if set.is_empty() {
        return Err(Error::InvalidArgument("point set is empty".into()));
    }
    if sample_bases == 0 {
        return Err(Error::InvalidArgument("need at least one base sample".into()));
    }
    let n = set.modulus().n();
    let len = set.len();
    let tuple_count = (len as u128).checked_pow(k as u32);

    let star_size = |indices: &[usize]| -> f64 {
        let mut seen: std::collections::HashSet<Vec<u64>> = std::collections::HashSet::new();
        for x in set.iter() {
            let tuple: Vec<u64> = indices
                .iter()
                .map(|&i| value(x, set.point(i), n))
                .collect();
            seen.insert(tuple);
        }
        seen.len() as f64
    };

    if let Some(total) = tuple_count.filter(|&t| t <= sample_bases as u128) {
        // full enumeration over E^k
        let mut indices = vec![0usize; k];
        let mut sum = 0.0;
        loop {
            sum += star_size(&indices);
            let mut slot = k;
            loop {
                if slot == 0 {
                    return Ok(StarAverage {
                        estimate: sum / total as f64,
                        stderr: 0.0,
                        samples: total as u64,
                        exact: true,
                    });
                }
                slot -= 1;
                indices[slot] += 1;
                if indices[slot] < len {
                    break;
                }
                indices[slot] = 0;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices = vec![0usize; k];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..sample_bases {
        for slot in indices.iter_mut() {
            *slot = rng.random_range(0..len);
        }
        let v = star_size(&indices);
        sum += v;
        sum_sq += v * v;
    }
    let samples = sample_bases as f64;
    let mean = sum / samples;
    let stderr = if sample_bases >= 2 {
        let var = (sum_sq - samples * mean * mean) / (samples - 1.0);
        (var.max(0.0) / samples).sqrt()
    } else {
        0.0
    };
    Ok(StarAverage {
        estimate: mean,
        stderr,
        samples: sample_bases,
        exact: false,
    })
}

/// Exact dot-product second moment `K_k`: the sum over base k-tuples and
/// value k-tuples of the squared star count, computed through the
/// pair-class reformulation `sum_{x,x'} c(x,x')^k` with
/// `c(x,x') = #{ y in E : x.y = x'.y }`.
pub fn star_second_moment(set: &PointSet, k: usize) -> Result<u128> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    moments::check_exact_budget(set.len(), "exact dot-product second moment")?;
    let n = set.modulus().n();
    let matrix = moments::value_matrix(set, |x, y| dot_unchecked(x, y, n));
    moments::pair_power_sum(&matrix, set.len(), k)
}

/// `K_k` against the closed-form bound (with the `tau(n)` factor; the
/// tau-free variant is reported alongside for comparison).
pub fn star_second_moment_check(set: &PointSet, k: usize) -> Result<MomentBoundCheck> {
    let value = star_second_moment(set, k)?;
    Ok(moments::bound_check(set, k, value))
}

/// Sampled estimate of `K_k` over ordered `(x, x')` pairs.
pub fn star_second_moment_sampled(
    set: &PointSet,
    k: usize,
    pairs: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if k == 0 || pairs == 0 {
        return Err(Error::InvalidArgument("k and pairs must be >= 1".into()));
    }
    let n = set.modulus().n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(moments::pair_power_sampled(set, k, pairs, &mut rng, |x, y| {
        dot_unchecked(x, y, n)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn line(n: u64) -> PointSet {
        PointSet::full_space(m(n), 1).unwrap()
    }

    #[test]
    fn dot_examples() {
        assert_eq!(dot(&[1, 2], &[2, 2], &m(5)).unwrap(), 1);
        assert_eq!(dot(&[0, 0], &[4, 3], &m(5)).unwrap(), 0);
        assert_eq!(dot(&[3, 3], &[3, 0], &m(9)).unwrap(), 0);
        assert!(dot(&[1], &[1, 2], &m(5)).is_err());
    }

    #[test]
    fn histogram_of_the_full_line() {
        let hist = product_histogram(&line(3));
        assert_eq!(hist.count(0), 5);
        assert_eq!(hist.count(1), 2);
        assert_eq!(hist.count(2), 2);
        assert_eq!(hist.total(), 9);
    }

    #[test]
    fn histogram_of_two_unit_vectors() {
        let e = PointSet::new(m(5), 2, [[1u64, 0], [0, 1]]).unwrap();
        let hist = product_histogram(&e);
        assert_eq!(hist.count(0), 2);
        assert_eq!(hist.count(1), 2);
        assert_eq!(hist.total(), 4);
        assert_eq!(hist.support_size(), 2);
    }

    #[test]
    fn histogram_of_singleton() {
        let e = PointSet::new(m(7), 2, [[2u64, 3]]).unwrap();
        let hist = product_histogram(&e);
        assert_eq!(hist.count((4 + 9) % 7), 1);
        assert_eq!(hist.total(), 1);
    }

    #[test]
    fn product_set_examples() {
        let e = PointSet::new(m(5), 2, [[1u64, 0], [0, 1]]).unwrap();
        assert_eq!(product_set(&e), BTreeSet::from([0, 1]));
        assert_eq!(product_set(&line(3)), BTreeSet::from([0, 1, 2]));
        let zero = PointSet::new(m(5), 2, [[0u64, 0]]).unwrap();
        assert_eq!(product_set(&zero), BTreeSet::from([0]));
    }

    #[test]
    fn product_set_is_histogram_support() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let mut pts = std::collections::BTreeSet::new();
            while pts.len() < 20 {
                pts.insert(vec![rng.random_range(0..9u64), rng.random_range(0..9u64)]);
            }
            let e = PointSet::new(m(9), 2, pts).unwrap();
            let from_hist: BTreeSet<u64> = product_histogram(&e).support().collect();
            assert_eq!(product_set(&e), from_hist);
        }
    }

    #[test]
    fn covers_ring_examples() {
        assert!(covers_ring(&line(3)));
        let zero = PointSet::new(m(5), 1, [[0u64]]).unwrap();
        assert!(!covers_ring(&zero));
    }

    #[test]
    fn deviation_of_full_space_holds() {
        for (n, d) in [(9u64, 2usize), (15, 2), (9, 3)] {
            let e = PointSet::full_space(m(n), d).unwrap();
            let check = product_deviation(&e);
            assert!(check.holds, "n={n} d={d}: {check:?}");
        }
    }

    #[test]
    fn deviation_of_singleton() {
        let e = PointSet::new(m(9), 3, [[1u64, 2, 3]]).unwrap();
        let check = product_deviation(&e);
        let expected = 1.0 - 1.0 / 9.0;
        assert!((check.max_dev - expected).abs() < 1e-12);
        assert!(check.holds);
    }

    #[test]
    fn threshold_report_values() {
        // ring_coverage at (9, 5): 3 * 9^5 / 3^{3/2} = 59049 / sqrt(3)
        let reports = coverage_thresholds(&m(9), 5, 35_000, None).unwrap();
        let ring = reports.iter().find(|r| r.name == "ring_coverage").unwrap();
        let expected = 59049.0 / 3f64.sqrt();
        assert!((ring.bound - expected).abs() < 1e-9 * expected);
        assert!(!ring.vacuous);
        assert!(ring.applies);

        // ring_coverage at (15, 3) is vacuous: 4 * 3375 / sqrt(3) >= 3375
        let reports = coverage_thresholds(&m(15), 3, 0, None).unwrap();
        let ring = reports.iter().find(|r| r.name == "ring_coverage").unwrap();
        assert!((ring.bound - 13500.0 / 3f64.sqrt()).abs() < 1e-6);
        assert!(ring.vacuous);
        assert!(!ring.applies);
    }

    #[test]
    fn prime_power_threshold_agrees_with_general_form() {
        // for n = p^ell the prime-power ring threshold coincides with the
        // general one: (ell+1) q^{(2ell-1)d/(2ell) + 1/ell} = tau q^d / p^{(d-2)/2}
        for (n, ell, d) in [(9u64, 2u32, 5usize), (27, 3, 4), (25, 2, 3)] {
            let reports = coverage_thresholds(&m(n), d, 0, Some(ell)).unwrap();
            let general = reports.iter().find(|r| r.name == "ring_coverage").unwrap();
            let pp = reports
                .iter()
                .find(|r| r.name == "prime_power_ring_coverage")
                .unwrap();
            assert!(
                (general.bound - pp.bound).abs() < 1e-9 * general.bound,
                "n={n}: {} vs {}",
                general.bound,
                pp.bound
            );
        }
    }

    #[test]
    fn thresholds_reject_wrong_ell() {
        assert!(coverage_thresholds(&m(15), 3, 0, Some(2)).is_err());
        assert!(coverage_thresholds(&m(9), 3, 0, Some(3)).is_err());
        assert!(coverage_thresholds(&m(9), 3, 0, Some(2)).is_ok());
    }

    #[test]
    fn divisible_construction_examples() {
        let e = divisible_construction(&m(9), 2).unwrap();
        assert_eq!(e.len(), 9);
        assert_eq!(product_set(&e), BTreeSet::from([0]));

        let e = divisible_construction(&m(15), 2).unwrap();
        assert_eq!(e.len(), 25);
        let pi = product_set(&e);
        assert!(pi.iter().all(|&t| !e.modulus().is_unit(t)));

        let e = divisible_construction(&m(15), 1).unwrap();
        assert_eq!(e.len(), 5);
        assert_eq!(product_set(&e), BTreeSet::from([0, 3, 6, 9, 12]));
    }

    #[test]
    fn star_set_examples() {
        let full2 = PointSet::full_space(m(5), 2).unwrap();
        // zero base: only the zero tuple
        let s = star_set(&full2, &[vec![0, 0]]).unwrap();
        assert_eq!(s, BTreeSet::from([vec![0]]));
        // first coordinate surjects
        let s = star_set(&full2, &[vec![1, 0]]).unwrap();
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn star_histogram_counts_points() {
        let full = PointSet::full_space(m(9), 2).unwrap();
        let hist = star_histogram(&full, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(hist.total(), 81);
        // (x.e1, x.e2) = x, so every tuple appears exactly once
        assert_eq!(hist.support_size(), 81);
    }

    #[test]
    fn star_average_exact_on_full_plane() {
        let full = PointSet::full_space(m(5), 2).unwrap();
        let avg = star_average(&full, 1, u64::MAX, 0).unwrap();
        assert!(avg.exact);
        assert_eq!(avg.samples, 25);
        assert!((avg.estimate - 121.0 / 25.0).abs() < 1e-12);
        assert_eq!(avg.stderr, 0.0);
    }

    #[test]
    fn star_average_of_singleton() {
        let e = PointSet::new(m(9), 2, [[0u64, 0]]).unwrap();
        let avg = star_average(&e, 1, 10, 3).unwrap();
        assert!(avg.exact);
        assert_eq!(avg.estimate, 1.0);
    }

    #[test]
    fn star_average_sampled_tracks_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        let mut pts = std::collections::BTreeSet::new();
        while pts.len() < 120 {
            pts.insert((0..3).map(|_| rng.random_range(0..9u64)).collect::<Vec<_>>());
        }
        let e = PointSet::new(m(9), 3, pts).unwrap();
        let exact = star_average(&e, 1, u64::MAX, 0).unwrap();
        assert!(exact.exact);
        let sampled = star_average(&e, 1, 60, 17).unwrap();
        assert!(!sampled.exact);
        let diff = (sampled.estimate - exact.estimate).abs();
        assert!(diff <= 3.0 * sampled.stderr.max(f64::EPSILON), "{sampled:?} vs {exact:?}");
    }

    #[test]
    fn second_moment_of_singleton() {
        let e = PointSet::new(m(9), 2, [[0u64, 0]]).unwrap();
        for k in 1..=3 {
            assert_eq!(star_second_moment(&e, k).unwrap(), 1);
        }
    }

    #[test]
    fn second_moment_matches_definitional_sum() {
        // oracle: K_1 = sum over y in E, t in Z_n of mu_y(t)^2
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let mut pts = std::collections::BTreeSet::new();
        while pts.len() < 50 {
            pts.insert(vec![rng.random_range(0..9u64), rng.random_range(0..9u64)]);
        }
        let e = PointSet::new(m(9), 2, pts).unwrap();
        let n = 9u64;
        let mut oracle = 0u128;
        for y in e.iter() {
            let mut counts = vec![0u64; n as usize];
            for x in e.iter() {
                counts[dot_unchecked(x, y, n) as usize] += 1;
            }
            oracle += counts.iter().map(|&c| (c as u128) * (c as u128)).sum::<u128>();
        }
        assert_eq!(star_second_moment(&e, 1).unwrap(), oracle);
    }

    #[test]
    fn full_line_second_moment_by_oracle() {
        // 27 triples (x, x', y) in Z_3: count those with x*y = x'*y
        let e = line(3);
        let mut oracle = 0u128;
        for x in 0..3u64 {
            for x2 in 0..3u64 {
                for y in 0..3u64 {
                    if (x * y) % 3 == (x2 * y) % 3 {
                        oracle += 1;
                    }
                }
            }
        }
        assert_eq!(star_second_moment(&e, 1).unwrap(), oracle);
    }

    #[test]
    fn bound_check_shape() {
        let e = line(3);
        let check = star_second_moment_check(&e, 1).unwrap();
        assert!(check.guaranteed);
        assert!(check.holds, "{check:?}");
        assert!(check.bound >= check.tau_free_bound);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn histogram_total_is_size_squared(seed in 0u64..1000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let size = rng.random_range(1..30usize);
            let mut pts = std::collections::BTreeSet::new();
            while pts.len() < size {
                pts.insert(vec![rng.random_range(0..15u64), rng.random_range(0..15u64)]);
            }
            let e = PointSet::new(m(15), 2, pts).unwrap();
            let hist = product_histogram(&e);
            prop_assert_eq!(hist.total(), (size * size) as u64);
        }
    }
}
