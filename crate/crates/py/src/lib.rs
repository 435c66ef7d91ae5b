//! Python bindings for the zn-geometry counting library.
//!
//! Exposes the factored modulus, point sets over Z_n^d, and the main
//! counting operations (pair histograms, dot-product/distance sets,
//! k-star statistics, second moments, simplex censuses, and the
//! closed-form size thresholds) as a `zngeom` extension module.

use std::collections::BTreeMap;
use std::str::FromStr;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use zn_geometry as zn;
use zn_geometry::harness;

fn err(e: zn::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_metric(metric: &str) -> PyResult<zn::Metric> {
    zn::Metric::from_str(metric).map_err(err)
}

/// An odd modulus n >= 3 with its prime factorization, divisor count
/// `tau`, and smallest prime divisor `gamma`.
#[pyclass(name = "Modulus", frozen)]
struct PyModulus {
    inner: zn::Modulus,
}

#[pymethods]
impl PyModulus {
    #[new]
    fn new(n: u64) -> PyResult<Self> {
        Ok(Self {
            inner: zn::Modulus::new(n).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn factors(&self) -> Vec<(u64, u32)> {
        self.inner.factors().to_vec()
    }

    #[getter]
    fn tau(&self) -> u64 {
        self.inner.tau()
    }

    #[getter]
    fn gamma(&self) -> u64 {
        self.inner.gamma()
    }

    fn is_unit(&self, s: u64) -> bool {
        self.inner.is_unit(s)
    }

    /// Per-prime valuations of `s`, capped at each prime's exponent;
    /// `s = 0` maps to the full exponent vector.
    fn valuations(&self, s: u64) -> Vec<u32> {
        self.inner.valuations(s).beta().to_vec()
    }

    /// `gcd(mult, n)^d`, the number of solutions of `mult * y = 0` in Z_n^d.
    fn kernel_size(&self, mult: u64, d: usize) -> u128 {
        self.inner.kernel_size(mult, d)
    }

    fn euler_phi(&self) -> u64 {
        self.inner.euler_phi()
    }

    fn __repr__(&self) -> String {
        format!(
            "Modulus(n={}, tau={}, gamma={})",
            self.inner.n(),
            self.inner.tau(),
            self.inner.gamma()
        )
    }
}

/// A deduplicated set of points in Z_n^d.
#[pyclass(name = "PointSet", frozen)]
struct PyPointSet {
    inner: zn::PointSet,
}

#[pymethods]
impl PyPointSet {
    #[new]
    fn new(n: u64, d: usize, points: Vec<Vec<u64>>) -> PyResult<Self> {
        let modulus = zn::Modulus::new(n).map_err(err)?;
        Ok(Self {
            inner: zn::PointSet::new(modulus, d, points).map_err(err)?,
        })
    }

    /// All of Z_n^d.
    #[staticmethod]
    fn full_space(n: u64, d: usize) -> PyResult<Self> {
        let modulus = zn::Modulus::new(n).map_err(err)?;
        Ok(Self {
            inner: zn::PointSet::full_space(modulus, d).map_err(err)?,
        })
    }

    /// All points with every coordinate divisible by gamma(n).
    #[staticmethod]
    fn divisible(n: u64, d: usize) -> PyResult<Self> {
        let modulus = zn::Modulus::new(n).map_err(err)?;
        Ok(Self {
            inner: zn::dot::divisible_construction(&modulus, d).map_err(err)?,
        })
    }

    /// `size` distinct points drawn uniformly, deterministic in
    /// `(seed, stream)`.
    #[staticmethod]
    #[pyo3(signature = (n, d, size, seed, stream = 0))]
    fn uniform_random(n: u64, d: usize, size: u64, seed: u64, stream: u64) -> PyResult<Self> {
        let modulus = zn::Modulus::new(n).map_err(err)?;
        Ok(Self {
            inner: harness::uniform_random_set(&modulus, d, size, seed, stream).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.modulus().n()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn points(&self) -> Vec<Vec<u64>> {
        self.inner.iter().map(|p| p.to_vec()).collect()
    }

    fn translate(&self, v: Vec<u64>) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.translate(&v).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "PointSet(n={}, d={}, len={})",
            self.inner.modulus().n(),
            self.inner.dim(),
            self.inner.len()
        )
    }
}

/// Histogram of `x . y` over all ordered pairs, as a dict of nonzero
/// counts; the values sum to `len(set) ** 2`.
#[pyfunction]
fn product_histogram(set: &PyPointSet) -> BTreeMap<u64, u64> {
    let hist = zn::dot::product_histogram(&set.inner);
    hist.support().map(|t| (t, hist.count(t))).collect()
}

/// The dot-product set as a sorted list of residues.
#[pyfunction]
fn product_set(set: &PyPointSet) -> Vec<u64> {
    zn::dot::product_set(&set.inner).into_iter().collect()
}

/// `True` iff the dot-product set is all of Z_n.
#[pyfunction]
fn covers_ring(set: &PyPointSet) -> bool {
    zn::dot::covers_ring(&set.inner)
}

/// `(max_dev, bound, holds)` of the pair histogram against its mean.
#[pyfunction]
fn product_deviation(set: &PyPointSet) -> (f64, f64, bool) {
    let check = zn::dot::product_deviation(&set.inner);
    (check.max_dev, check.bound, check.holds)
}

/// The distance set as a sorted list of residues.
#[pyfunction]
fn distance_set(set: &PyPointSet) -> Vec<u64> {
    zn::dist::distance_set(&set.inner).into_iter().collect()
}

/// The k-star value set for fixed base points, under `metric`.
#[pyfunction]
#[pyo3(signature = (set, bases, metric = "distance"))]
fn star_set(set: &PyPointSet, bases: Vec<Vec<u64>>, metric: &str) -> PyResult<Vec<Vec<u64>>> {
    let result = match parse_metric(metric)? {
        zn::Metric::Distance => zn::dist::star_set(&set.inner, &bases),
        zn::Metric::DotProduct => zn::dot::star_set(&set.inner, &bases),
    };
    Ok(result.map_err(err)?.into_iter().collect())
}

/// Average star-set cardinality over base tuples from E^k:
/// `(estimate, stderr, samples, exact)`.
#[pyfunction]
#[pyo3(signature = (set, k, samples, seed = 0, metric = "distance"))]
fn star_average(
    set: &PyPointSet,
    k: usize,
    samples: u64,
    seed: u64,
    metric: &str,
) -> PyResult<(f64, f64, u64, bool)> {
    let avg = match parse_metric(metric)? {
        zn::Metric::Distance => zn::dist::star_average(&set.inner, k, samples, seed),
        zn::Metric::DotProduct => zn::dot::star_average(&set.inner, k, samples, seed),
    }
    .map_err(err)?;
    Ok((avg.estimate, avg.stderr, avg.samples, avg.exact))
}

/// Exact second moment of the k-star counting function (M_k for
/// distances, K_k for dot products).
#[pyfunction]
#[pyo3(signature = (set, k, metric = "distance"))]
fn star_second_moment(set: &PyPointSet, k: usize, metric: &str) -> PyResult<u128> {
    match parse_metric(metric)? {
        zn::Metric::Distance => zn::dist::star_second_moment(&set.inner, k),
        zn::Metric::DotProduct => zn::dot::star_second_moment(&set.inner, k),
    }
    .map_err(err)
}

/// Second moment against its closed-form bound, as a dict.
#[pyfunction]
#[pyo3(signature = (set, k, metric = "distance"))]
fn star_second_moment_check(
    set: &PyPointSet,
    k: usize,
    metric: &str,
    py: Python<'_>,
) -> PyResult<Py<PyAny>> {
    let check = match parse_metric(metric)? {
        zn::Metric::Distance => zn::dist::star_second_moment_check(&set.inner, k),
        zn::Metric::DotProduct => zn::dot::star_second_moment_check(&set.inner, k),
    }
    .map_err(err)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("k", check.k)?;
    dict.set_item("value", check.value)?;
    dict.set_item("bound", check.bound)?;
    dict.set_item("holds", check.holds)?;
    dict.set_item("tau_free_bound", check.tau_free_bound)?;
    dict.set_item("tau_free_holds", check.tau_free_holds)?;
    dict.set_item("guaranteed", check.guaranteed)?;
    Ok(dict.into_any().unbind())
}

/// Labels `t_{i,j}` (lexicographic in `(i, j)`) of a point configuration.
#[pyfunction]
#[pyo3(signature = (points, n, metric = "distance"))]
fn simplex_type(points: Vec<Vec<u64>>, n: u64, metric: &str) -> PyResult<Vec<u64>> {
    let modulus = zn::Modulus::new(n).map_err(err)?;
    let refs: Vec<&[u64]> = points.iter().map(|p| p.as_slice()).collect();
    Ok(
        zn::simplex::type_of(&refs, parse_metric(metric)?, &modulus)
            .map_err(err)?
            .labels,
    )
}

/// Result of a simplex-type census.
#[pyclass(name = "Census", frozen)]
struct PyCensus {
    inner: zn::TypeCensus,
    plateaued: bool,
    last_gain: f64,
}

#[pymethods]
impl PyCensus {
    #[getter]
    fn distinct(&self) -> u64 {
        self.inner.distinct_count()
    }

    #[getter]
    fn tuples_examined(&self) -> u64 {
        self.inner.tuples_examined()
    }

    #[getter]
    fn exact(&self) -> bool {
        self.inner.exact()
    }

    #[getter]
    fn density(&self) -> f64 {
        self.inner.density()
    }

    #[getter]
    fn plateaued(&self) -> bool {
        self.plateaued
    }

    #[getter]
    fn last_gain(&self) -> f64 {
        self.last_gain
    }

    /// Distinct label tuples.
    fn types(&self) -> Vec<Vec<u64>> {
        self.inner.types().collect()
    }

    /// `(tuples, distinct)` checkpoints of the saturation curve.
    fn curve(&self) -> Vec<(u64, u64)> {
        self.inner
            .curve()
            .iter()
            .map(|c| (c.tuples, c.distinct))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Census(k={}, distinct={}, tuples={}, exact={})",
            self.inner.k(),
            self.inner.distinct_count(),
            self.inner.tuples_examined(),
            self.inner.exact()
        )
    }
}

/// Simplex-type census over tuples from E^(k+1).
#[pyfunction]
#[pyo3(signature = (set, k, metric = "distance", mode = "exact", budget = 1_000_000, seed = 0))]
fn census(
    set: &PyPointSet,
    k: usize,
    metric: &str,
    mode: &str,
    budget: u64,
    seed: u64,
) -> PyResult<PyCensus> {
    let mode = zn::CensusMode::from_str(mode).map_err(err)?;
    let result =
        zn::simplex::census(&set.inner, k, parse_metric(metric)?, mode, budget, seed)
            .map_err(err)?;
    let sat = zn::simplex::saturation_estimate(&result).map_err(err)?;
    Ok(PyCensus {
        inner: result,
        plateaued: sat.plateaued,
        last_gain: sat.last_gain,
    })
}

/// Closed-form coverage thresholds as `(name, bound, applies, vacuous)`
/// tuples; pass `ell` for the prime-power variants over n = p^ell.
#[pyfunction]
#[pyo3(signature = (n, d, set_size = 0, ell = None))]
fn coverage_thresholds(
    n: u64,
    d: usize,
    set_size: u64,
    ell: Option<u32>,
) -> PyResult<Vec<(String, f64, bool, bool)>> {
    let modulus = zn::Modulus::new(n).map_err(err)?;
    Ok(zn::dot::coverage_thresholds(&modulus, d, set_size, ell)
        .map_err(err)?
        .into_iter()
        .map(|r| (r.name.to_string(), r.bound, r.applies, r.vacuous))
        .collect())
}

/// The shared k-star/simplex size threshold.
#[pyfunction]
fn size_bound(n: u64, d: usize, k: usize) -> PyResult<f64> {
    let modulus = zn::Modulus::new(n).map_err(err)?;
    Ok(zn::simplex::size_bound(&modulus, d, k))
}

/// Gap of the star-transform identity on a point set.
#[pyfunction]
fn star_transform_identity_gap(
    set: &PyPointSet,
    bases: Vec<Vec<u64>>,
    s_vec: Vec<u64>,
) -> PyResult<f64> {
    zn::fourier::star_transform_identity_gap(&set.inner, &bases, &s_vec).map_err(err)
}

/// Largest deviation from character orthogonality over Z_n^d (n^d <= 4096).
#[pyfunction]
fn orthogonality_max_gap(n: u64, d: usize) -> PyResult<f64> {
    let modulus = zn::Modulus::new(n).map_err(err)?;
    zn::fourier::orthogonality_max_gap(&modulus, d).map_err(err)
}

#[pymodule]
fn zngeom(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyModulus>()?;
    m.add_class::<PyPointSet>()?;
    m.add_class::<PyCensus>()?;
    m.add_function(wrap_pyfunction!(product_histogram, m)?)?;
    m.add_function(wrap_pyfunction!(product_set, m)?)?;
    m.add_function(wrap_pyfunction!(covers_ring, m)?)?;
    m.add_function(wrap_pyfunction!(product_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(distance_set, m)?)?;
    m.add_function(wrap_pyfunction!(star_set, m)?)?;
    m.add_function(wrap_pyfunction!(star_average, m)?)?;
    m.add_function(wrap_pyfunction!(star_second_moment, m)?)?;
    m.add_function(wrap_pyfunction!(star_second_moment_check, m)?)?;
    m.add_function(wrap_pyfunction!(simplex_type, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(coverage_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(size_bound, m)?)?;
    m.add_function(wrap_pyfunction!(star_transform_identity_gap, m)?)?;
    m.add_function(wrap_pyfunction!(orthogonality_max_gap, m)?)?;
    Ok(())
}
