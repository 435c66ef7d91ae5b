//! Discrete Fourier analysis on Z_n^d.
//!
//! Conventions: `chi(x) = exp(2*pi*i*x/n)`, forward transform
//! `F(m) = n^{-d} * sum_x f(x) chi(-x.m)`, inverse
//! `f(x) = sum_m chi(x.m) F(m)`. Transforms are evaluated axis by axis
//! (d passes of 1-D transforms, `O(d*n^{d+1})` scalar work) over dense
//! tables capped at `2^22` entries.
//!
//! This layer is a floating-point cross-check for the exact counting
//! modules; integer claims are never derived from it. Summation within a
//! transform line runs sequentially in index order and parallelism only
//! splits independent output elements, so results are bit-identical for
//! any thread count.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dot;
use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::ring::Modulus;

/// Dense table size cap (`n^d` entries).
pub const MAX_TABLE: u128 = 1 << 22;

/// The additive character `chi(x) = exp(2*pi*i*x/n)`; n-periodic in `x`.
pub fn chi(modulus: &Modulus, x: u64) -> Complex64 {
    let n = modulus.n();
    let r = x % n;
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * r as f64 / n as f64)
}

/// A complex-valued function on Z_n^d, stored densely in row-major order
/// (coordinate 0 most significant).
#[derive(Debug, Clone)]
pub struct GridFunction {
    modulus: Modulus,
    dim: usize,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn zero(modulus: Modulus, dim: usize) -> Result<Self> {
        let total = table_len(&modulus, dim)?;
        Ok(Self {
            modulus,
            dim,
            values: vec![Complex64::new(0.0, 0.0); total],
        })
    }

    pub fn from_values(modulus: Modulus, dim: usize, values: Vec<Complex64>) -> Result<Self> {
        let total = table_len(&modulus, dim)?;
        if values.len() != total {
            return Err(Error::InvalidArgument(format!(
                "grid over Z_{}^{} needs {} values, got {}",
                modulus.n(),
                dim,
                total,
                values.len()
            )));
        }
        Ok(Self {
            modulus,
            dim,
            values,
        })
    }

    /// The 0/1 indicator of a point set.
    pub fn from_indicator(set: &PointSet) -> Result<Self> {
        let mut f = Self::zero(set.modulus().clone(), set.dim())?;
        for p in set.iter() {
            let idx = f.index_of(p);
            f.values[idx] = Complex64::new(1.0, 0.0);
        }
        Ok(f)
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn index_of(&self, point: &[u64]) -> usize {
        debug_assert_eq!(point.len(), self.dim);
        let n = self.modulus.n();
        point
            .iter()
            .fold(0usize, |acc, &c| acc * n as usize + (c % n) as usize)
    }

    pub fn value_at(&self, point: &[u64]) -> Complex64 {
        self.values[self.index_of(point)]
    }

    /// Largest absolute difference against another grid of the same shape.
    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A dense table of Fourier coefficients, indexed by frequency vectors in
/// Z_n^d with the same layout as [`GridFunction`].
#[derive(Debug, Clone)]
pub struct FourierTable(GridFunction);

impl FourierTable {
    pub fn grid(&self) -> &GridFunction {
        &self.0
    }

    pub fn modulus(&self) -> &Modulus {
        self.0.modulus()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn values(&self) -> &[Complex64] {
        self.0.values()
    }

    pub fn value_at(&self, freq: &[u64]) -> Complex64 {
        self.0.value_at(freq)
    }

    pub fn from_grid(grid: GridFunction) -> Self {
        Self(grid)
    }
}

fn table_len(modulus: &Modulus, dim: usize) -> Result<usize> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    let total = modulus.volume(dim).filter(|&t| t <= MAX_TABLE);
    match total {
        Some(t) => Ok(t as usize),
        None => Err(Error::SizeBound {
            what: "dense Fourier table size",
            got: modulus.volume(dim).unwrap_or(u128::MAX),
            limit: MAX_TABLE,
        }),
    }
}

/// One 1-D pass along `axis`: `out[.., m, ..] = scale * sum_j in[.., j, ..]
/// * tab[(j*m) % n]`. Each output element is an independent sequential sum.
fn axis_pass(
    values: &[Complex64],
    n: usize,
    dim: usize,
    axis: usize,
    tab: &[Complex64],
    scale: f64,
) -> Vec<Complex64> {
    let inner: usize = n.pow((dim - 1 - axis) as u32);
    let span = n * inner;
    (0..values.len())
        .into_par_iter()
        .map(|idx| {
            let outer_base = idx / span * span;
            let m = (idx / inner) % n;
            let i = idx % inner;
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let w = tab[(j * m) % n];
                acc += values[outer_base + j * inner + i] * w;
            }
            acc * scale
        })
        .collect()
}

fn character_table(modulus: &Modulus, sign: f64) -> Vec<Complex64> {
    let n = modulus.n();
    (0..n)
        .map(|r| Complex64::from_polar(1.0, sign * 2.0 * std::f64::consts::PI * r as f64 / n as f64))
        .collect()
}

/// Forward transform with the `n^{-d}` normalization.
pub fn forward_transform(f: &GridFunction) -> Result<FourierTable> {
    let n = f.modulus.n() as usize;
    let tab = character_table(&f.modulus, -1.0);
    let mut values = f.values.clone();
    for axis in 0..f.dim {
        values = axis_pass(&values, n, f.dim, axis, &tab, 1.0 / n as f64);
    }
    Ok(FourierTable(GridFunction {
        modulus: f.modulus.clone(),
        dim: f.dim,
        values,
    }))
}

/// Inverse transform (no normalization, matching the forward `n^{-d}`).
pub fn inverse_transform(t: &FourierTable) -> Result<GridFunction> {
    let g = &t.0;
    let n = g.modulus.n() as usize;
    let tab = character_table(&g.modulus, 1.0);
    let mut values = g.values.clone();
    for axis in 0..g.dim {
        values = axis_pass(&values, n, g.dim, axis, &tab, 1.0);
    }
    Ok(GridFunction {
        modulus: g.modulus.clone(),
        dim: g.dim,
        values,
    })
}

/// Both sides of the Plancherel identity, evaluated independently.
#[derive(Debug, Clone, Copy)]
pub struct PlancherelCheck {
    /// `n^{-d} * sum_x f(x) * conj(g(x))`
    pub lhs: Complex64,
    /// `sum_m F(m) * conj(G(m))`
    pub rhs: Complex64,
    pub abs_gap: f64,
}

pub fn plancherel_check(f: &GridFunction, g: &GridFunction) -> Result<PlancherelCheck> {
    if f.modulus.n() != g.modulus.n() || f.dim != g.dim {
        return Err(Error::InvalidArgument(
            "Plancherel check needs two grids of the same shape".into(),
        ));
    }
    let scale = 1.0 / f.modulus.volume_f64(f.dim);
    let lhs = f
        .values
        .iter()
        .zip(&g.values)
        .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b.conj())
        * scale;
    let fh = forward_transform(f)?;
    let gh = forward_transform(g)?;
    let rhs = fh
        .values()
        .iter()
        .zip(gh.values())
        .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b.conj());
    Ok(PlancherelCheck {
        lhs,
        rhs,
        abs_gap: (lhs - rhs).norm(),
    })
}

/// Fourier coefficient of the indicator of `set` at a single frequency:
/// `n^{-d} * sum_{x in E} chi(-x.w)`. Direct evaluation, no table.
pub fn indicator_fourier_at(set: &PointSet, freq: &[u64]) -> Result<Complex64> {
    if freq.len() != set.dim() {
        return Err(Error::DimensionMismatch {
            left: set.dim(),
            right: freq.len(),
        });
    }
    let m = set.modulus();
    let n = m.n();
    let mut acc = Complex64::new(0.0, 0.0);
    for x in set.iter() {
        let phase = dot::dot_unchecked(x, freq, n);
        acc += chi(m, (n - phase) % n);
    }
    Ok(acc / m.volume_f64(set.dim()))
}

/// Gap of the star-transform identity: the transform of the k-tuple
/// counting function `#{x in E : x.y_i = t_i}` at `s`, against
/// `n^{d-k} * Ehat(s_1 y_1 + ... + s_k y_k)`.
///
/// The left side goes through exact integer star counts and a direct DFT
/// over their support; the right side evaluates characters per point of
/// `E`, so the two routes share no intermediate results.
pub fn star_transform_identity_gap(
    set: &PointSet,
    bases: &[Vec<u64>],
    s_vec: &[u64],
) -> Result<f64> {
    let k = bases.len();
    if k == 0 || k > 3 {
        return Err(Error::InvalidArgument(format!(
            "star identity supports 1 <= k <= 3, got {k}"
        )));
    }
    if s_vec.len() != k {
        return Err(Error::DimensionMismatch {
            left: k,
            right: s_vec.len(),
        });
    }
    let m = set.modulus();
    let n = m.n();
    let d = set.dim();

    // left: n^{-k} * sum over the star histogram support
    let hist = dot::star_histogram(set, bases)?;
    let mut lhs = Complex64::new(0.0, 0.0);
    for (tuple, count) in hist.entries() {
        let mut phase = 0u64;
        for (&t, &s) in tuple.iter().zip(s_vec) {
            phase = (phase + crate::dot::mul_mod(t, s, n)) % n;
        }
        lhs += chi(m, (n - phase) % n) * count as f64;
    }
    lhs /= (n as f64).powi(k as i32);

    // right: n^{d-k} * Ehat(sum_i s_i y_i)
    let mut freq = vec![0u64; d];
    for (base, &s) in bases.iter().zip(s_vec) {
        for (w, &c) in freq.iter_mut().zip(base) {
            *w = (*w + crate::dot::mul_mod(s, c, n)) % n;
        }
    }
    let rhs = indicator_fourier_at(set, &freq)? * (n as f64).powi(d as i32 - k as i32);

    Ok((lhs - rhs).norm())
}

/// Largest deviation from the character orthogonality relation
/// `n^{-d} sum_x chi(x.m) = [m = 0]`, over every frequency `m` in Z_n^d.
/// Quadratic in the table size, so capped at `n^d <= 4096`.
pub fn orthogonality_max_gap(modulus: &Modulus, dim: usize) -> Result<f64> {
    let total = modulus.volume(dim).filter(|&t| t <= 4096).ok_or(Error::SizeBound {
        what: "orthogonality scan size",
        got: modulus.volume(dim).unwrap_or(u128::MAX),
        limit: 4096,
    })? as usize;
    let n = modulus.n();
    let scale = 1.0 / modulus.volume_f64(dim);
    let decode = |mut idx: usize| {
        let mut v = vec![0u64; dim];
        for a in (0..dim).rev() {
            v[a] = (idx % n as usize) as u64;
            idx /= n as usize;
        }
        v
    };
    let mut max_gap: f64 = 0.0;
    for mi in 0..total {
        let mvec = decode(mi);
        let mut acc = Complex64::new(0.0, 0.0);
        for xi in 0..total {
            let xvec = decode(xi);
            let phase = dot::dot_unchecked(&xvec, &mvec, n);
            acc += chi(modulus, phase);
        }
        acc *= scale;
        let expect = if mi == 0 { 1.0 } else { 0.0 };
        max_gap = max_gap.max((acc - Complex64::new(expect, 0.0)).norm());
    }
    Ok(max_gap)
}
