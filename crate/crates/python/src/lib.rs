//! Python bindings: score matrices, the solvers, model export, the instance
//! generator and the set-function checker.

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use distcut::data::{self, InstanceSpec};
use distcut::greedy::GreedyMode;
use distcut::lp::{export_ilp, export_iqp};
use distcut::set_function::{self, Crossing, Indexing, ItemSubset};
use distcut::{
    bucket_histogram as histogram, distinguishability as metric, median_cutoffs as medians,
    CutoffValues, Error, ExactOptions, Method, Scheme, ScoreMatrix, SmoothConfig, SolveReport,
};

create_exception!(
    distcut_py,
    CapacityError,
    PyValueError,
    "Instance exceeds a solver limit."
);

fn to_py(err: Error) -> PyErr {
    match err {
        e if e.is_capacity() => CapacityError::new_err(e.to_string()),
        e @ Error::Numeric(_) => PyArithmeticError::new_err(e.to_string()),
        e @ Error::Io { .. } => PyOSError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn scheme(name: &str) -> PyResult<Scheme> {
    match name {
        "count" => Ok(Scheme::Count),
        "subset" => Ok(Scheme::Subset),
        _ => Err(PyValueError::new_err(format!("unknown scheme `{name}`"))),
    }
}

/// An n x m matrix of item scores.
#[pyclass(name = "Scores", frozen)]
pub struct PyScores {
    inner: ScoreMatrix,
}

#[pymethods]
impl PyScores {
    #[new]
    #[pyo3(signature = (rows, ids = None))]
    fn new(rows: Vec<Vec<f64>>, ids: Option<Vec<String>>) -> PyResult<Self> {
        let inner = match ids {
            Some(ids) => ScoreMatrix::with_ids(ids, rows),
            None => ScoreMatrix::from_rows(rows),
        }
        .map_err(to_py)?;
        Ok(Self { inner })
    }

    /// The embedded 50 x 3 demonstration table.
    #[staticmethod]
    fn demo() -> Self {
        Self {
            inner: data::demo_table(),
        }
    }

    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        data::parse_csv(text)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn read_csv(path: std::path::PathBuf) -> PyResult<Self> {
        let text =
            std::fs::read_to_string(&path).map_err(|source| to_py(Error::Io { path, source }))?;
        Self::from_csv(&text)
    }

    fn to_csv(&self) -> String {
        data::to_csv(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.inner.ids().to_vec()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.inner.rows().map(<[f64]>::to_vec).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Scores(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

/// Result of one solver run.
#[pyclass(name = "Report", frozen)]
pub struct PyReport {
    inner: SolveReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn method(&self) -> &'static str {
        self.inner.method.name()
    }

    /// Cut-off values; unbounded cut-offs are `-inf` / `inf`.
    #[getter]
    fn cutoffs(&self) -> Vec<f64> {
        self.inner.cutoffs.0.clone()
    }

    #[getter]
    fn cut_indices(&self) -> Option<Vec<usize>> {
        self.inner.cut_indices.as_ref().map(|k| k.0.clone())
    }

    #[getter]
    fn bucket_counts(&self) -> Vec<usize> {
        self.inner.histogram.counts().to_vec()
    }

    #[getter]
    fn distinguishability(&self) -> f64 {
        self.inner.d()
    }

    #[getter]
    fn objective(&self) -> f64 {
        self.inner.objective
    }

    #[getter]
    fn smoothed_objective(&self) -> Option<f64> {
        self.inner.smoothed_objective
    }

    #[getter]
    fn iterations(&self) -> u64 {
        self.inner.iterations
    }

    #[getter]
    fn evaluations(&self) -> u64 {
        self.inner.evaluations
    }

    #[getter]
    fn elapsed_ms(&self) -> f64 {
        self.inner.elapsed_ms()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(method={}, d={:.6}, bucket_counts={:?})",
            self.inner.method,
            self.inner.d(),
            self.inner.histogram.counts()
        )
    }
}

/// Runs one method: median, greedy, exact_count, exact_subset, min_range or
/// continuous.
#[pyfunction]
#[pyo3(signature = (scores, method = "greedy", *, mode = "best", budget = None, r = None))]
fn solve(
    py: Python<'_>,
    scores: &PyScores,
    method: &str,
    mode: &str,
    budget: Option<u128>,
    r: Option<f64>,
) -> PyResult<PyReport> {
    let method: Method = method.parse().map_err(to_py)?;
    let mode: GreedyMode = mode.parse().map_err(to_py)?;
    let exact = budget.map_or_else(ExactOptions::default, |budget| ExactOptions { budget });
    let mut smooth = SmoothConfig::default();
    if let Some(r) = r {
        smooth.r = r;
    }
    let s = &scores.inner;
    let report = py.detach(|| match method {
        Method::Median => distcut::solve_median(s),
        Method::Greedy => distcut::solve_greedy(s, mode),
        Method::ExactCount => distcut::solve_exact_count(s, &exact),
        Method::ExactSubset => distcut::solve_exact_subset(s, &exact),
        Method::MinRange => distcut::solve_min_range(s, &exact),
        Method::Continuous => distcut::solve_continuous(s, &smooth),
    });
    report.map(|inner| PyReport { inner }).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (scores, cutoffs, scheme = "count"))]
fn bucket_counts(scores: &PyScores, cutoffs: Vec<f64>, scheme: &str) -> PyResult<Vec<usize>> {
    let h =
        histogram(&scores.inner, &CutoffValues(cutoffs), self::scheme(scheme)?).map_err(to_py)?;
    Ok(h.counts().to_vec())
}

/// Fraction of ordered pairs of distinct items in different buckets.
#[pyfunction]
#[pyo3(signature = (scores, cutoffs, scheme = "count"))]
fn distinguishability(scores: &PyScores, cutoffs: Vec<f64>, scheme: &str) -> PyResult<f64> {
    let h =
        histogram(&scores.inner, &CutoffValues(cutoffs), self::scheme(scheme)?).map_err(to_py)?;
    metric(&h).map(|d| d.value()).map_err(to_py)
}

#[pyfunction]
fn median_cutoffs(scores: &PyScores) -> Vec<f64> {
    medians(&scores.inner).0
}

/// LP-format model text; `formulation` is `iqp` (squared counts) or `ilp`
/// (range of counts).
#[pyfunction]
#[pyo3(signature = (scores, formulation = "iqp"))]
fn export_model(scores: &PyScores, formulation: &str) -> PyResult<String> {
    match formulation {
        "iqp" => export_iqp(&scores.inner),
        "ilp" => export_ilp(&scores.inner),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown formulation `{other}`"
            )))
        }
    }
    .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n = 100, m = 3, seed = 0, stream = 0, scale = 100.0))]
fn generate_instance(n: usize, m: usize, seed: u64, stream: u64, scale: f64) -> PyResult<PyScores> {
    data::generate_instance(&InstanceSpec {
        n,
        m,
        seed,
        stream,
        scale,
    })
    .map(|inner| PyScores { inner })
    .map_err(to_py)
}

fn crossing(strict: bool) -> Crossing {
    if strict {
        Crossing::Strict
    } else {
        Crossing::Inclusive
    }
}

/// Sum of squared bucket counts under the cut-offs induced by `items`.
#[pyfunction]
#[pyo3(signature = (scores, items, *, one_based = false, strict = false))]
fn set_value(scores: &PyScores, items: Vec<usize>, one_based: bool, strict: bool) -> PyResult<u64> {
    let subset = if one_based {
        ItemSubset::from_one_based(&items).map_err(to_py)?
    } else {
        ItemSubset::new(items)
    };
    set_function::set_value_with(&scores.inner, &subset, crossing(strict)).map_err(to_py)
}

/// Marginal gains of item `x` on `a ⊆ b`, with violation flags.
#[pyfunction]
#[pyo3(signature = (scores, a, b, x, *, one_based = true, strict = false))]
fn check_modularity<'py>(
    py: Python<'py>,
    scores: &PyScores,
    a: Vec<usize>,
    b: Vec<usize>,
    x: usize,
    one_based: bool,
    strict: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let indexing = if one_based {
        Indexing::OneBased
    } else {
        Indexing::ZeroBased
    };
    let r = set_function::check_modularity_numbered(
        &scores.inner,
        &a,
        &b,
        x,
        indexing,
        crossing(strict),
    )
    .map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("marginal_a", r.marginal_a)?;
    out.set_item("marginal_b", r.marginal_b)?;
    out.set_item("submodular_violated", r.submodular_violated)?;
    out.set_item("supermodular_violated", r.supermodular_violated)?;
    Ok(out)
}

#[pymodule]
fn distcut_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScores>()?;
    m.add_class::<PyReport>()?;
    m.add("CapacityError", m.py().get_type::<CapacityError>())?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(bucket_counts, m)?)?;
    m.add_function(wrap_pyfunction!(distinguishability, m)?)?;
    m.add_function(wrap_pyfunction!(median_cutoffs, m)?)?;
    m.add_function(wrap_pyfunction!(export_model, m)?)?;
    m.add_function(wrap_pyfunction!(generate_instance, m)?)?;
    m.add_function(wrap_pyfunction!(set_value, m)?)?;
    m.add_function(wrap_pyfunction!(check_modularity, m)?)?;
    Ok(())
}
