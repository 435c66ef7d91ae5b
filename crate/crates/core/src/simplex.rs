//! Congruence-type enumeration for distance and dot-product simplices.
//!
//! A (k+1)-point configuration is labeled by its `C(k+1, 2)` pairwise
//! values `t_{i,j}` for `0 <= i < j <= k`, in lexicographic `(i, j)`
//! order. Labels are over ordered tuples, degenerate tuples included, and
//! are not canonicalized across vertex permutations. A census collects
//! the distinct labels realized by tuples from `E^{k+1}`, either
//! exhaustively or by uniform sampling with a saturation curve.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::dist_unchecked;
use crate::dot::dot_unchecked;
use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::ring::Modulus;

/// Exact-mode tuple cap; larger jobs must opt into sampling.
pub const EXACT_TUPLE_CAP: u128 = 1_000_000_000;

/// Number of sampling shards. Fixed so that shard streams, and therefore
/// the census, do not depend on the thread count.
const SAMPLE_SHARDS: u64 = 64;

/// Checkpoints per sampled census (one every `budget / 50` draws).
const CURVE_POINTS: u64 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Metric {
    Distance,
    DotProduct,
}

impl Metric {
    #[inline]
    pub(crate) fn value(self, x: &[u64], y: &[u64], n: u64) -> u64 {
        match self {
            Metric::Distance => dist_unchecked(x, y, n),
            Metric::DotProduct => dot_unchecked(x, y, n),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Distance => "distance",
            Metric::DotProduct => "dot",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distance" => Ok(Metric::Distance),
            "dot" | "dotproduct" => Ok(Metric::DotProduct),
            other => Err(Error::InvalidArgument(format!(
                "unknown metric {other:?}, expected `distance` or `dot`"
            ))),
        }
    }
}

/// The label of one (k+1)-point configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplexType {
    pub k: usize,
    pub metric: Metric,
    /// `t_{i,j}` for `0 <= i < j <= k`, lexicographic in `(i, j)`.
    pub labels: Vec<u64>,
}

/// Labels of `points` under `metric`. Self-values `t_{i,i}` are not part
/// of the label.
pub fn type_of(points: &[&[u64]], metric: Metric, modulus: &Modulus) -> Result<SimplexType> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "a simplex type needs at least two points".into(),
        ));
    }
    let n = modulus.n();
    let dim = points[0].len();
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: p.len(),
            });
        }
        if let Some(&c) = p.iter().find(|&&c| c >= n) {
            return Err(Error::CoordinateRange { value: c, n });
        }
    }
    let k = points.len() - 1;
    let mut labels = Vec::with_capacity(k * (k + 1) / 2);
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            labels.push(metric.value(points[i], points[j], n));
        }
    }
    Ok(SimplexType { k, metric, labels })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CensusMode {
    Exact,
    Sampled,
}

impl std::str::FromStr for CensusMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(CensusMode::Exact),
            "sampled" => Ok(CensusMode::Sampled),
            other => Err(Error::InvalidArgument(format!(
                "unknown mode {other:?}, expected `exact` or `sampled`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CensusCheckpoint {
    pub tuples: u64,
    pub distinct: u64,
}

/// Distinct simplex types observed over tuples from `E^{k+1}`.
///
/// Labels are packed into 128-bit radix-n codes internally; the decoded
/// tuples are available through [`TypeCensus::types`].
#[derive(Debug, Clone)]
pub struct TypeCensus {
    k: usize,
    metric: Metric,
    n: u64,
    label_count: usize,
    codes: BTreeSet<u128>,
    tuples_examined: u64,
    exact: bool,
    curve: Vec<CensusCheckpoint>,
}

impl TypeCensus {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn distinct_count(&self) -> u64 {
        self.codes.len() as u64
    }

    pub fn tuples_examined(&self) -> u64 {
        self.tuples_examined
    }

    pub fn exact(&self) -> bool {
        self.exact
    }

    pub fn curve(&self) -> &[CensusCheckpoint] {
        &self.curve
    }

    /// `|distinct| / n^{k(k+1)/2}`.
    pub fn density(&self) -> f64 {
        self.codes.len() as f64 / (self.n as f64).powi(self.label_count as i32)
    }

    /// Decoded label tuples, in code order.
    pub fn types(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        self.codes.iter().map(move |&code| {
            let mut labels = vec![0u64; self.label_count];
            let mut rest = code;
            for slot in labels.iter_mut() {
                *slot = (rest % self.n as u128) as u64;
                rest /= self.n as u128;
            }
            labels
        })
    }

    pub fn contains(&self, labels: &[u64]) -> bool {
        encode(labels, self.n).is_some_and(|code| self.codes.contains(&code))
    }

    /// `true` if every type of `self` also occurs in `other`.
    pub fn is_subset_of(&self, other: &TypeCensus) -> bool {
        self.codes.is_subset(&other.codes)
    }
}

#[inline]
fn encode(labels: &[u64], n: u64) -> Option<u128> {
    let mut code = 0u128;
    for &t in labels.iter().rev() {
        code = code.checked_mul(n as u128)?.checked_add(t as u128)?;
    }
    Some(code)
}

fn label_space_guard(n: u64, label_count: usize) -> Result<()> {
    let mut cap = 1u128;
    for _ in 0..label_count {
        cap = cap.checked_mul(n as u128).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "label space n^{label_count} with n = {n} does not fit the 128-bit packing"
            ))
        })?;
    }
    Ok(())
}

/// Collects the simplex types realized by `E`.
///
/// Exact mode walks all `|E|^{k+1}` ordered tuples (repeated points
/// included) and needs that count within both `budget` and the hard
/// [`EXACT_TUPLE_CAP`]. Sampled mode draws `budget` tuples uniformly with
/// replacement, checkpointing the distinct count 50 times along the way;
/// shard streams are derived from `seed` independently of the thread
/// count, so the census is reproducible.
pub fn census(
    set: &PointSet,
    k: usize,
    metric: Metric,
    mode: CensusMode,
    budget: u64,
    seed: u64,
) -> Result<TypeCensus> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    if set.is_empty() {
        return Err(Error::InvalidArgument("point set is empty".into()));
    }
    let n = set.modulus().n();
    let label_count = k * (k + 1) / 2;
    label_space_guard(n, label_count)?;

    match mode {
        CensusMode::Exact => census_exact(set, k, metric, budget),
        CensusMode::Sampled => census_sampled(set, k, metric, budget, seed),
    }
}

fn census_exact(set: &PointSet, k: usize, metric: Metric, budget: u64) -> Result<TypeCensus> {
    let len = set.len() as u128;
    let total = len.checked_pow(k as u32 + 1).filter(|&t| {
        t <= EXACT_TUPLE_CAP && t <= budget as u128
    });
    let total = match total {
        Some(t) => t as u64,
        None => {
            return Err(Error::BudgetExceeded {
                what: "exact census tuples",
                needed: len.checked_pow(k as u32 + 1).unwrap_or(u128::MAX),
                budget: (budget as u128).min(EXACT_TUPLE_CAP),
            })
        }
    };
    let n = set.modulus().n();
    let len = set.len() as u64;
    let label_count = k * (k + 1) / 2;

    let codes = (0..total as usize)
        .into_par_iter()
        .with_min_len(1024)
        .fold(
            || (HashSet::<u128>::new(), vec![0usize; k + 1]),
            |(mut seen, mut indices), flat| {
                let mut rest = flat as u64;
                for slot in indices.iter_mut() {
                    *slot = (rest % len) as usize;
                    rest /= len;
                }
                seen.insert(tuple_code(set, &indices, metric, n));
                (seen, indices)
            },
        )
        .map(|(seen, _)| seen)
        .reduce(HashSet::new, |a, b| {
            if a.len() < b.len() {
                return reduce_into(b, a);
            }
            reduce_into(a, b)
        });

    let distinct = codes.len() as u64;
    Ok(TypeCensus {
        k,
        metric,
        n,
        label_count,
        codes: codes.into_iter().collect(),
        tuples_examined: total,
        exact: true,
        curve: vec![CensusCheckpoint {
            tuples: total,
            distinct,
        }],
    })
}

fn reduce_into(mut big: HashSet<u128>, small: HashSet<u128>) -> HashSet<u128> {
    big.extend(small);
    big
}

#[inline]
fn tuple_code(set: &PointSet, indices: &[usize], metric: Metric, n: u64) -> u128 {
    let mut code = 0u128;
    // reverse lexicographic accumulation matches `encode`
    for i in (0..indices.len()).rev() {
        for j in ((i + 1)..indices.len()).rev() {
            let t = metric.value(set.point(indices[i]), set.point(indices[j]), n);
            code = code * n as u128 + t as u128;
        }
    }
    code
}

fn census_sampled(
    set: &PointSet,
    k: usize,
    metric: Metric,
    budget: u64,
    seed: u64,
) -> Result<TypeCensus> {
    if budget == 0 {
        return Err(Error::InvalidArgument("sampling budget must be >= 1".into()));
    }
    let n = set.modulus().n();
    let len = set.len();
    let label_count = k * (k + 1) / 2;
    let rounds = CURVE_POINTS.min(budget);

    struct Shard {
        rng: ChaCha8Rng,
        seen: HashSet<u128>,
        fresh: Vec<u128>,
    }
    let mut shards: Vec<Shard> = (0..SAMPLE_SHARDS)
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s + 1);
            Shard {
                rng,
                seen: HashSet::new(),
                fresh: Vec::new(),
            }
        })
        .collect();

    let mut global: HashSet<u128> = HashSet::new();
    let mut curve = Vec::with_capacity(rounds as usize);
    let mut drawn = 0u64;

    for round in 0..rounds {
        let mut round_quota = budget / rounds;
        if round < budget % rounds {
            round_quota += 1;
        }
        shards.par_iter_mut().enumerate().for_each(|(s, shard)| {
            let s = s as u64;
            let mut quota = round_quota / SAMPLE_SHARDS;
            if s < round_quota % SAMPLE_SHARDS {
                quota += 1;
            }
            let mut indices = vec![0usize; k + 1];
            for _ in 0..quota {
                for slot in indices.iter_mut() {
                    *slot = shard.rng.random_range(0..len);
                }
                let code = tuple_code(set, &indices, metric, n);
                if shard.seen.insert(code) {
                    shard.fresh.push(code);
                }
            }
        });
        drawn += round_quota;
        for shard in shards.iter_mut() {
            global.extend(shard.fresh.drain(..));
        }
        curve.push(CensusCheckpoint {
            tuples: drawn,
            distinct: global.len() as u64,
        });
    }

    Ok(TypeCensus {
        k,
        metric,
        n,
        label_count,
        codes: global.into_iter().collect(),
        tuples_examined: budget,
        exact: false,
        curve,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Saturation {
    pub plateaued: bool,
    pub last_gain: f64,
}

/// Plateau heuristic over the saturation curve: the census is considered
/// saturated when the final 20% of draws added less than 1% new types.
/// Exact censuses are saturated by definition.
pub fn saturation_estimate(census: &TypeCensus) -> Result<Saturation> {
    if census.exact {
        return Ok(Saturation {
            plateaued: true,
            last_gain: 0.0,
        });
    }
    if census.curve.len() < 2 {
        return Err(Error::InvalidArgument(
            "saturation needs at least two checkpoints".into(),
        ));
    }
    let last = census.curve.last().unwrap();
    let cutoff = 0.8 * last.tuples as f64;
    let base = census
        .curve
        .iter()
        .take_while(|cp| (cp.tuples as f64) <= cutoff)
        .last()
        .unwrap_or(&census.curve[0]);
    let last_gain = if last.distinct == 0 {
        0.0
    } else {
        (last.distinct - base.distinct) as f64 / last.distinct as f64
    };
    Ok(Saturation {
        plateaued: last_gain < 0.01,
        last_gain,
    })
}

/// The shared size threshold of the star and simplex coverage statements:
/// `sqrt(tau(n)) * n^{d + (k-1)/2} / gamma(n)^{(d-1)/2}`.
pub fn size_bound(modulus: &Modulus, dim: usize, k: usize) -> f64 {
    let n = modulus.n() as f64;
    (modulus.tau() as f64).sqrt() * n.powf(dim as f64 + (k as f64 - 1.0) / 2.0)
        / (modulus.gamma() as f64).powf((dim as f64 - 1.0) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::distance_set;
    use crate::dot::{divisible_construction, product_histogram};
    use rand::Rng;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn random_set(n: u64, d: usize, size: usize, seed: u64) -> PointSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = std::collections::BTreeSet::new();
        while pts.len() < size {
            pts.insert((0..d).map(|_| rng.random_range(0..n)).collect::<Vec<_>>());
        }
        PointSet::new(m(n), d, pts).unwrap()
    }

    #[test]
    fn type_of_examples() {
        let t = type_of(
            &[&[0, 0], &[1, 2], &[1, 0]],
            Metric::Distance,
            &m(5),
        )
        .unwrap();
        assert_eq!(t.labels, vec![0, 1, 4]);

        let t = type_of(
            &[&[1, 0], &[0, 1], &[1, 1]],
            Metric::DotProduct,
            &m(5),
        )
        .unwrap();
        assert_eq!(t.labels, vec![0, 1, 1]);

        let t = type_of(&[&[2, 2], &[2, 2]], Metric::Distance, &m(9)).unwrap();
        assert_eq!(t.labels, vec![0]);
        assert_eq!(t.k, 1);
    }

    #[test]
    fn type_is_translation_invariant_for_distances() {
        let pts = [&[1u64, 2][..], &[3, 0][..], &[4, 4][..]];
        let shifted: Vec<Vec<u64>> = pts.iter().map(|p| vec![(p[0] + 3) % 5, (p[1] + 4) % 5]).collect();
        let shifted_refs: Vec<&[u64]> = shifted.iter().map(|p| p.as_slice()).collect();
        let a = type_of(&pts, Metric::Distance, &m(5)).unwrap();
        let b = type_of(&shifted_refs, Metric::Distance, &m(5)).unwrap();
        assert_eq!(a.labels, b.labels);
    }

    #[test]
    fn type_permutes_with_vertices() {
        let pts = [&[1u64, 2][..], &[3, 0][..], &[4, 4][..], &[0, 1][..]];
        let modulus = m(9);
        for metric in [Metric::Distance, Metric::DotProduct] {
            let base = type_of(&pts, metric, &modulus).unwrap();
            let perm = [2usize, 0, 3, 1];
            let permuted: Vec<&[u64]> = perm.iter().map(|&i| pts[i]).collect();
            let relabeled = type_of(&permuted, metric, &modulus).unwrap();
            // pair (i, j) of the permuted tuple is pair (perm[i], perm[j]) of
            // the original, up to order
            let index_of = |i: usize, j: usize| {
                let (i, j) = if i < j { (i, j) } else { (j, i) };
                // position of (i, j) in lexicographic order over 4 points
                let mut pos = 0;
                for a in 0..4 {
                    for b in (a + 1)..4 {
                        if (a, b) == (i, j) {
                            return pos;
                        }
                        pos += 1;
                    }
                }
                unreachable!()
            };
            for (pos, (i, j)) in (0..4)
                .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
                .enumerate()
            {
                assert_eq!(
                    relabeled.labels[pos],
                    base.labels[index_of(perm[i], perm[j])]
                );
            }
        }
    }

    #[test]
    fn exact_census_of_full_plane_k1() {
        let full = PointSet::full_space(m(5), 2).unwrap();
        let c = census(&full, 1, Metric::Distance, CensusMode::Exact, 1 << 20, 0).unwrap();
        assert!(c.exact());
        assert_eq!(c.distinct_count(), 5);
        assert_eq!(c.tuples_examined(), 625);
        assert!((c.density() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn census_of_singleton_has_one_zero_type() {
        let e = PointSet::new(m(9), 2, [[4u64, 7]]).unwrap();
        for k in 1..=3 {
            let c = census(&e, k, Metric::Distance, CensusMode::Exact, 1 << 20, 0).unwrap();
            assert_eq!(c.distinct_count(), 1);
            let only: Vec<Vec<u64>> = c.types().collect();
            assert_eq!(only[0], vec![0; k * (k + 1) / 2]);
            assert!((c.density() - (9f64).powi(-((k * (k + 1) / 2) as i32))).abs() < 1e-15);
        }
    }

    #[test]
    fn divisible_construction_dot_census_density() {
        let e = divisible_construction(&m(9), 2).unwrap();
        let c = census(&e, 1, Metric::DotProduct, CensusMode::Exact, 1 << 20, 0).unwrap();
        assert_eq!(c.distinct_count(), 1);
        assert!((c.density() - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_census_is_subset_of_exact_and_saturates() {
        let e = random_set(5, 2, 20, 77);
        let exact = census(&e, 2, Metric::Distance, CensusMode::Exact, 1 << 20, 0).unwrap();
        let sampled = census(
            &e,
            2,
            Metric::Distance,
            CensusMode::Sampled,
            10 * 8000,
            123,
        )
        .unwrap();
        assert!(sampled.is_subset_of(&exact));
        // ten times the exact tuple count reaches the full set
        assert_eq!(sampled.distinct_count(), exact.distinct_count());
        let sat = saturation_estimate(&sampled).unwrap();
        assert!(sat.plateaued, "last_gain = {}", sat.last_gain);
    }

    #[test]
    fn exact_census_is_monotone_under_inclusion() {
        let f = random_set(9, 2, 24, 5);
        let sub: Vec<Vec<u64>> = (0..12).map(|i| f.point(i).to_vec()).collect();
        let e = PointSet::new(m(9), 2, sub).unwrap();
        for metric in [Metric::Distance, Metric::DotProduct] {
            for k in 1..=2 {
                let small = census(&e, k, metric, CensusMode::Exact, 1 << 24, 0).unwrap();
                let big = census(&f, k, metric, CensusMode::Exact, 1 << 24, 0).unwrap();
                assert!(small.is_subset_of(&big));
                assert!(small.distinct_count() <= big.distinct_count());
            }
        }
    }

    #[test]
    fn k1_census_matches_pair_supports() {
        let e = random_set(9, 2, 18, 9);
        let c = census(&e, 1, Metric::Distance, CensusMode::Exact, 1 << 20, 0).unwrap();
        let from_census: std::collections::BTreeSet<u64> =
            c.types().map(|t| t[0]).collect();
        assert_eq!(from_census, distance_set(&e));

        let c = census(&e, 1, Metric::DotProduct, CensusMode::Exact, 1 << 20, 0).unwrap();
        let from_census: std::collections::BTreeSet<u64> =
            c.types().map(|t| t[0]).collect();
        let mu_support: std::collections::BTreeSet<u64> =
            product_histogram(&e).support().collect();
        assert_eq!(from_census, mu_support);
    }

    #[test]
    fn exact_budget_is_enforced() {
        let e = random_set(9, 2, 40, 3);
        assert!(matches!(
            census(&e, 2, Metric::Distance, CensusMode::Exact, 1000, 0),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn saturation_of_singleton_sample() {
        let e = PointSet::new(m(9), 2, [[0u64, 0]]).unwrap();
        let c = census(&e, 1, Metric::Distance, CensusMode::Sampled, 100, 7).unwrap();
        let sat = saturation_estimate(&c).unwrap();
        assert!(sat.plateaued);
        assert_eq!(sat.last_gain, 0.0);
    }

    #[test]
    fn sampled_census_deterministic_across_thread_pools() {
        let e = random_set(9, 3, 50, 21);
        let run = || {
            census(&e, 2, Metric::DotProduct, CensusMode::Sampled, 20_000, 99).unwrap()
        };
        let a = run();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(7).build().unwrap();
        let b = pool.install(run);
        assert_eq!(a.distinct_count(), b.distinct_count());
        assert_eq!(
            a.curve().iter().map(|c| (c.tuples, c.distinct)).collect::<Vec<_>>(),
            b.curve().iter().map(|c| (c.tuples, c.distinct)).collect::<Vec<_>>()
        );
        assert!(a.is_subset_of(&b) && b.is_subset_of(&a));
    }

    #[test]
    fn size_bound_formula() {
        // k = 1: sqrt(tau) n^d / gamma^{(d-1)/2}
        let b = size_bound(&m(9), 5, 1);
        let expected = 3f64.sqrt() * 9f64.powi(5) / 3f64.powi(2);
        assert!((b - expected).abs() < 1e-9);
        // k = 2 raises the exponent by 1/2
        let b2 = size_bound(&m(9), 5, 2);
        assert!((b2 - expected * 3.0).abs() < 1e-6, "{b2} vs {}", expected * 3.0);
    }
}
