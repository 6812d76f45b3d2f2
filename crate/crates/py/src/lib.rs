//! Python bindings over the core crate: planning, sampling, and the
//! dimension estimators, with clouds passed as lists of coordinate rows.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dimest_core::baselines;
use dimest_core::estimator::{self, DimEstimate, Metric, PointCloud};
use dimest_core::geometry::{self, ScalePair};
use dimest_core::harness::{self, EstimatorKind, ExperimentConfig, Mode};
use dimest_core::planner;
use dimest_core::reference;
use dimest_core::samplers::{self, ManifoldSpec, Seed};
use dimest_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::CapExceeded(m) => PyRuntimeError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn scale_pair(eps1: f64, eps2: f64) -> PyResult<ScalePair> {
    ScalePair::new(eps1, eps2).map_err(py_err)
}

fn metric_from_period(period: Option<f64>) -> Metric {
    match period {
        Some(p) => Metric::FlatTorus { period: p },
        None => Metric::Euclidean,
    }
}

fn cloud(rows: Vec<Vec<f64>>, period: Option<f64>) -> PyResult<PointCloud> {
    PointCloud::from_rows(&rows, metric_from_period(period)).map_err(py_err)
}

fn manifold(spec: &str) -> PyResult<ManifoldSpec> {
    spec.parse().map_err(py_err)
}

/// Either the published scales for d or an explicitly given pair.
fn scales_or_standard(d: u32, eps1: Option<f64>, eps2: Option<f64>) -> PyResult<ScalePair> {
    match (eps1, eps2) {
        (Some(a), Some(b)) => scale_pair(a, b),
        (None, None) => reference::standard_scales(d).map_err(py_err),
        _ => Err(PyValueError::new_err("give both eps1 and eps2 or neither")),
    }
}

/// Safety gap of the rounded two-scale estimator for dimension d.
#[pyfunction]
fn gap_delta(d: u32, eps1: f64, eps2: f64) -> PyResult<f64> {
    geometry::gap_delta(d, scale_pair(eps1, eps2)?).map_err(py_err)
}

/// Rigorous sample-size plan; returns delta, rho, the law coefficients, and
/// the integer point budget when a volume is given.
#[pyfunction]
#[pyo3(signature = (d, eps1, eps2, alpha1=None, failure_prob=0.1, vol=None))]
fn plan_theory(
    py: Python<'_>,
    d: u32,
    eps1: f64,
    eps2: f64,
    alpha1: Option<f64>,
    failure_prob: f64,
    vol: Option<f64>,
) -> PyResult<Py<PyDict>> {
    let alpha1 = match alpha1 {
        Some(a) => a,
        None => reference::standard_alpha1(d).map_err(py_err)?,
    };
    let plan = planner::theoretical_plan(d, scale_pair(eps1, eps2)?, alpha1, failure_prob)
        .map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("d", plan.d)?;
    out.set_item("eps1", plan.scales.eps1)?;
    out.set_item("eps2", plan.scales.eps2)?;
    out.set_item("alpha1", plan.alpha1)?;
    out.set_item("delta", plan.delta)?;
    out.set_item("rho", plan.rho)?;
    out.set_item("n_const", plan.n_const)?;
    out.set_item("n_coeff", plan.n_coeff)?;
    if let Some(v) = vol {
        out.set_item("n_points", plan.n_points(v))?;
    }
    Ok(out.into())
}

/// Grid search for the scales and split minimizing the rigorous budget.
#[pyfunction]
#[pyo3(signature = (d, vol, grid_step=0.01, alpha_step=0.01, failure_prob=0.1))]
fn scale_search(
    py: Python<'_>,
    d: u32,
    vol: f64,
    grid_step: f64,
    alpha_step: f64,
    failure_prob: f64,
) -> PyResult<Py<PyDict>> {
    let plan =
        planner::scale_search(d, vol, grid_step, alpha_step, failure_prob).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("eps1", plan.scales.eps1)?;
    out.set_item("eps2", plan.scales.eps2)?;
    out.set_item("alpha1", plan.alpha1)?;
    out.set_item("delta", plan.delta)?;
    out.set_item("n_points", plan.n_points(vol))?;
    Ok(out.into())
}

/// Close-pair budget from the exact binomial heuristic.
#[pyfunction]
#[pyo3(signature = (d, eps1=None, eps2=None, confidence=0.9))]
fn pairs_required(d: u32, eps1: Option<f64>, eps2: Option<f64>, confidence: f64) -> PyResult<u64> {
    planner::pairs_required_exact(d, scales_or_standard(d, eps1, eps2)?, confidence)
        .map_err(py_err)
}

/// Close-pair budget from the normal approximation.
#[pyfunction]
#[pyo3(signature = (d, eps1=None, eps2=None, z=1.64))]
fn pairs_required_clt(d: u32, eps1: Option<f64>, eps2: Option<f64>, z: f64) -> PyResult<u64> {
    planner::pairs_required_clt(d, scales_or_standard(d, eps1, eps2)?, z).map_err(py_err)
}

/// Points needed so a volume-vol manifold yields the close-pair budget.
#[pyfunction]
fn points_for_pairs(n_pairs: u64, d: u32, eps1: f64, vol: f64) -> PyResult<u64> {
    planner::points_for_pairs(n_pairs, d, eps1, vol).map_err(py_err)
}

/// Sample n points from a manifold spec such as "sphere:3" or "clifford:2".
/// The same (seed, stream) always returns the same rows.
#[pyfunction]
#[pyo3(signature = (spec, n, seed=0, stream=0))]
fn sample(spec: &str, n: usize, seed: u64, stream: u64) -> PyResult<Vec<Vec<f64>>> {
    let cloud = samplers::sample(&manifold(spec)?, n, Seed::new(seed, stream)).map_err(py_err)?;
    Ok(cloud.rows().map(|r| r.to_vec()).collect())
}

/// Unordered pairs of rows within distance eps. A period switches the
/// metric to the flat torus.
#[pyfunction]
#[pyo3(signature = (rows, eps, period=None))]
fn count_pairs(rows: Vec<Vec<f64>>, eps: f64, period: Option<f64>) -> PyResult<u64> {
    Ok(estimator::count_pairs(&cloud(rows, period)?, eps).map_err(py_err)?.count)
}

/// Two-scale dimension estimate. The result dict always carries the pair
/// counts; "dimension" and "raw_slope" appear only when the ratio is
/// defined, "lower_bound" when only the small scale is empty.
#[pyfunction]
#[pyo3(signature = (rows, eps1, eps2, period=None))]
fn estimate(
    py: Python<'_>,
    rows: Vec<Vec<f64>>,
    eps1: f64,
    eps2: f64,
    period: Option<f64>,
) -> PyResult<Py<PyDict>> {
    let x = cloud(rows, period)?;
    let s = scale_pair(eps1, eps2)?;
    let c1 = estimator::count_pairs(&x, s.eps1).map_err(py_err)?.count;
    let c2 = estimator::count_pairs(&x, s.eps2).map_err(py_err)?.count;
    let out = PyDict::new(py);
    out.set_item("n_points", x.n())?;
    out.set_item("pairs_eps1", c1)?;
    out.set_item("pairs_eps2", c2)?;
    match estimator::dim_corr_from_counts(c1, c2, s) {
        DimEstimate::Defined { raw_slope, rounded } => {
            out.set_item("raw_slope", raw_slope)?;
            out.set_item("dimension", rounded)?;
        }
        DimEstimate::GreaterThan { lower, limit_slope } => {
            out.set_item("lower_bound", lower)?;
            out.set_item("limit_slope", limit_slope)?;
        }
        DimEstimate::Undefined => {}
    }
    Ok(out.into())
}

/// One-scale correlation-integral slope.
#[pyfunction]
#[pyo3(signature = (rows, eps, period=None))]
fn dim_gp(rows: Vec<Vec<f64>>, eps: f64, period: Option<f64>) -> PyResult<f64> {
    estimator::dim_gp(&cloud(rows, period)?, eps).map_err(py_err)
}

/// Angle-statistic dimension over candidate dimensions d_lo..=d_hi.
#[pyfunction]
#[pyo3(signature = (rows, eps1, d_lo=1, d_hi=12, period=None))]
fn anova_dimension(
    rows: Vec<Vec<f64>>,
    eps1: f64,
    d_lo: u32,
    d_hi: u32,
    period: Option<f64>,
) -> PyResult<u32> {
    baselines::anova_dimension(&cloud(rows, period)?, eps1, d_lo..=d_hi).map_err(py_err)
}

/// Mean of (angle - pi/2)^2 between independent uniform directions in
/// dimension d (d >= 1, half-integers allowed for d >= 2).
#[pyfunction]
fn beta(d: f64) -> PyResult<f64> {
    if d.fract() == 0.0 && d >= 1.0 && d <= u32::MAX as f64 {
        baselines::beta_for_dimension(d as u32).map_err(py_err)
    } else {
        baselines::beta_d(d).map_err(py_err)
    }
}

/// Monte Carlo success-rate experiment; returns the summary fields.
#[pyfunction]
#[pyo3(signature = (spec, pairs=None, points=None, eps1=None, eps2=None, estimator="corr", trials=100, seed=0))]
#[allow(clippy::too_many_arguments)]
fn run_experiment(
    py: Python<'_>,
    spec: &str,
    pairs: Option<u64>,
    points: Option<u64>,
    eps1: Option<f64>,
    eps2: Option<f64>,
    estimator: &str,
    trials: u32,
    seed: u64,
) -> PyResult<Py<PyDict>> {
    let manifold = manifold(spec)?;
    let mode = match (pairs, points) {
        (Some(n), None) => Mode::FixedPairs(n),
        (None, Some(n)) => Mode::FixedPoints(n),
        _ => return Err(PyValueError::new_err("give exactly one of pairs or points")),
    };
    let kind = match estimator {
        "corr" => EstimatorKind::Corr,
        "gp" => EstimatorKind::Gp,
        "anova" => EstimatorKind::Anova,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown estimator '{other}' (expected corr, gp, or anova)"
            )))
        }
    };
    let scales = scales_or_standard(manifold.intrinsic_dim(), eps1, eps2)?;
    let mut config = ExperimentConfig::new(manifold, mode, scales, kind, seed);
    config.trials = trials;
    let report = harness::run_experiment(&config).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("trials", report.config.trials)?;
    out.set_item("successes", report.successes)?;
    out.set_item("valid_trials", report.valid_trials)?;
    out.set_item("invalid_trials", report.invalid_trials)?;
    out.set_item("success_rate", report.success_rate)?;
    out.set_item("wall_time_ms", report.wall_time_ms)?;
    Ok(out.into())
}

#[pymodule]
fn dimest(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(gap_delta, m)?)?;
    m.add_function(wrap_pyfunction!(plan_theory, m)?)?;
    m.add_function(wrap_pyfunction!(scale_search, m)?)?;
    m.add_function(wrap_pyfunction!(pairs_required, m)?)?;
    m.add_function(wrap_pyfunction!(pairs_required_clt, m)?)?;
    m.add_function(wrap_pyfunction!(points_for_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(count_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(dim_gp, m)?)?;
    m.add_function(wrap_pyfunction!(anova_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(beta, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
