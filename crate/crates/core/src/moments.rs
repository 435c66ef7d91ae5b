//! Shared machinery for the pair-class second moments.
//!
//! Both the distance statistic `M_k` and the dot-product statistic `K_k`
//! collapse, by exchanging the order of summation, from a sum of squared
//! star counts over all base k-tuples to
//!
//! ```text
//!   sum over (x, x') in E^2 of c(x, x')^k,
//!   c(x, x') = #{ y in E : v(x, y) = v(x', y) }
//! ```
//!
//! where `v` is the pairwise value (distance or dot product). This turns
//! an `|E|^k * n^k` object into an `|E|^2`-pair scan with an `|E|` inner
//! loop; the equivalence is exact and is unit-tested against the
//! definitional sums at tiny sizes.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::points::PointSet;

/// Scalar-operation budget for the exact pair scan (`~2 * |E|^3`).
pub const EXACT_MOMENT_BUDGET: u128 = 10_000_000_000;

/// Outcome of a second-moment bound check.
///
/// `bound` carries the divisor-count factor `tau(n)`; `tau_free_bound`
/// drops it and is reported for comparison only. `guaranteed` marks the
/// `k = 1` case, whose bound has an explicit constant; for `k >= 2` the
/// hidden constants are untracked and `holds` is observational.
#[derive(Debug, Clone, Copy)]
pub struct MomentBoundCheck {
    pub k: usize,
    pub value: u128,
    pub bound: f64,
    pub holds: bool,
    pub tau_free_bound: f64,
    pub tau_free_holds: bool,
    pub guaranteed: bool,
}

pub(crate) fn check_exact_budget(len: usize, what: &'static str) -> Result<()> {
    let needed = 2 * (len as u128).pow(3);
    if needed > EXACT_MOMENT_BUDGET {
        return Err(Error::BudgetExceeded {
            what,
            needed,
            budget: EXACT_MOMENT_BUDGET,
        });
    }
    Ok(())
}

/// Dense `|E| x |E|` matrix of pairwise values, row-parallel.
pub(crate) fn value_matrix<F>(set: &PointSet, value: F) -> Vec<u64>
where
    F: Fn(&[u64], &[u64]) -> u64 + Sync,
{
    let len = set.len();
    let mut matrix = vec![0u64; len * len];
    matrix
        .par_chunks_mut(len)
        .enumerate()
        .for_each(|(i, row)| {
            let xi = set.point(i);
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = value(xi, set.point(j));
            }
        });
    matrix
}

/// `sum over (i, i') of c(i, i')^k`, with `c` the number of columns where
/// rows `i` and `i'` of the value matrix agree. Errors on u128 overflow.
pub(crate) fn pair_power_sum(matrix: &[u64], len: usize, k: usize) -> Result<u128> {
    (0..len)
        .into_par_iter()
        .map(|i| -> Option<u128> {
            let row_i = &matrix[i * len..(i + 1) * len];
            let mut acc = 0u128;
            for i2 in 0..len {
                let row_i2 = &matrix[i2 * len..(i2 + 1) * len];
                let c = row_i
                    .iter()
                    .zip(row_i2)
                    .filter(|(a, b)| a == b)
                    .count() as u128;
                acc = acc.checked_add(c.checked_pow(k as u32)?)?;
            }
            Some(acc)
        })
        .try_reduce(|| 0u128, |a, b| a.checked_add(b))
        .ok_or_else(|| Error::InvalidArgument("second moment overflows 128 bits".into()))
}

/// Monte-Carlo estimate of the pair-power sum: samples ordered pairs
/// `(x, x')` uniformly, evaluates `c(x, x')^k` on the fly, and scales the
/// sample mean by `|E|^2`. Returns `(estimate, stderr)`.
pub(crate) fn pair_power_sampled<F>(
    set: &PointSet,
    k: usize,
    pairs: u64,
    rng: &mut impl rand::Rng,
    value: F,
) -> (f64, f64)
where
    F: Fn(&[u64], &[u64]) -> u64,
{
    let len = set.len();
    let scale = (len as f64) * (len as f64);
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for _ in 0..pairs {
        let i = rng.random_range(0..len);
        let i2 = rng.random_range(0..len);
        let xi = set.point(i);
        let xi2 = set.point(i2);
        let mut c = 0u64;
        for y in set.iter() {
            if value(xi, y) == value(xi2, y) {
                c += 1;
            }
        }
        let v = (c as f64).powi(k as i32);
        sum += v;
        sum_sq += v * v;
    }
    let samples = pairs as f64;
    let mean = sum / samples;
    let stderr = if pairs >= 2 {
        let var = (sum_sq - samples * mean * mean) / (samples - 1.0);
        (var.max(0.0) / samples).sqrt()
    } else {
        0.0
    };
    (mean * scale, stderr * scale)
}

/// The `(bound, tau_free_bound)` pair of the second-moment bound for a
/// set, without computing the moment itself.
pub fn moment_bounds(set: &PointSet, k: usize) -> (f64, f64) {
    let check = bound_check(set, k, 0);
    (check.bound, check.tau_free_bound)
}

/// Closed form of the second-moment bound:
/// `|E|^{k+2} / n^k + tau(n) * n^{2d-1} * |E|^k / gamma(n)^{d-1}`.
pub(crate) fn bound_check(set: &PointSet, k: usize, value: u128) -> MomentBoundCheck {
    let m = set.modulus();
    let n = m.n() as f64;
    let d = set.dim() as i32;
    let size = set.len() as f64;
    let main = size.powi(k as i32 + 2) / n.powi(k as i32);
    let error_term = n.powi(2 * d - 1) * size.powi(k as i32) / (m.gamma() as f64).powi(d - 1);
    let bound = main + m.tau() as f64 * error_term;
    let tau_free_bound = main + error_term;
    let value_f = value as f64;
    MomentBoundCheck {
        k,
        value,
        bound,
        holds: value_f <= bound,
        tau_free_bound,
        tau_free_holds: value_f <= tau_free_bound,
        guaranteed: k == 1,
    }
}
