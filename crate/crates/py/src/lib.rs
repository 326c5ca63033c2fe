//! Python bindings: the main types (distributions, component families,
//! size pmfs, random extremes) plus the grid checks, theorem and
//! proposition drivers, the variation-diminishing transform and the Monte
//! Carlo oracle. Kernels and sequence functions may be Python callables.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use stochord_core as core;
use stochord_core::{
    CheckVerdict, Classification, ComponentFamily, DistSpec, ExtremeKind, Grid, GridTransform,
    Kernel, OrderingVerdict, RandomExtremeSpec, SignedSequenceFn, SimConfig, SizePmf, SystemSpec,
    TheoremReport,
};

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_kind(kind: &str) -> PyResult<ExtremeKind> {
    match kind {
        "min" => Ok(ExtremeKind::Min),
        "max" => Ok(ExtremeKind::Max),
        other => Err(PyValueError::new_err(format!(
            "kind must be 'min' or 'max', got '{other}'"
        ))),
    }
}

/// A shifted Weibull/exponential lifetime.
#[pyclass(name = "Dist", frozen, from_py_object)]
#[derive(Clone)]
struct PyDist {
    inner: DistSpec,
}

#[pymethods]
impl PyDist {
    /// Weibull with survival exp(-rate * (x - shift)^shape).
    #[staticmethod]
    #[pyo3(signature = (shape, rate, shift = 0.0))]
    fn weibull(shape: f64, rate: f64, shift: f64) -> PyResult<Self> {
        let inner = DistSpec::weibull(shape, rate)
            .and_then(|d| d.with_shift(shift))
            .map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (rate, shift = 0.0))]
    fn exponential(rate: f64, shift: f64) -> PyResult<Self> {
        let inner = DistSpec::exponential(rate)
            .and_then(|d| d.with_shift(shift))
            .map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn shape(&self) -> f64 {
        self.inner.shape()
    }

    #[getter]
    fn rate(&self) -> f64 {
        self.inner.rate()
    }

    #[getter]
    fn shift(&self) -> f64 {
        self.inner.shift()
    }

    fn sf(&self, x: f64) -> f64 {
        self.inner.sf(x)
    }

    fn log_sf(&self, x: f64) -> f64 {
        self.inner.log_sf(x)
    }

    fn cdf(&self, x: f64) -> f64 {
        self.inner.cdf(x)
    }

    fn pdf(&self, x: f64) -> PyResult<f64> {
        self.inner.pdf(x).map_err(err)
    }

    fn hazard(&self, x: f64) -> PyResult<f64> {
        self.inner.hazard(x).map_err(err)
    }

    fn rev_hazard(&self, x: f64) -> PyResult<f64> {
        self.inner.rev_hazard(x).map_err(err)
    }

    /// Time x with sf(x) = u.
    fn inv_sf(&self, u: f64) -> f64 {
        self.inner.inv_sf(u)
    }

    fn __repr__(&self) -> String {
        format!(
            "Dist(shape={}, rate={}, shift={})",
            self.inner.shape(),
            self.inner.rate(),
            self.inner.shift()
        )
    }
}

/// Ordered component lifetimes; the size-n system takes the first n.
#[pyclass(name = "Family", frozen, from_py_object)]
#[derive(Clone)]
struct PyFamily {
    inner: ComponentFamily,
}

impl PyFamily {
    fn system(&self, n: usize, kind: ExtremeKind) -> PyResult<SystemSpec> {
        SystemSpec::new(self.inner.clone(), n, kind).map_err(err)
    }
}

#[pymethods]
impl PyFamily {
    #[new]
    #[pyo3(signature = (components, label = "family"))]
    fn new(components: Vec<PyDist>, label: &str) -> Self {
        Self {
            inner: ComponentFamily::new(components.into_iter().map(|d| d.inner).collect(), label),
        }
    }

    /// Location-shift family from an unshifted base.
    #[staticmethod]
    #[pyo3(signature = (base, shifts, label = "family"))]
    fn from_shifts(base: PyDist, shifts: Vec<f64>, label: &str) -> PyResult<Self> {
        Ok(Self {
            inner: ComponentFamily::from_shifts(base.inner, &shifts, label).map_err(err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    fn min_sf(&self, n: usize, x: f64) -> PyResult<f64> {
        self.system(n, ExtremeKind::Min)?.min_sf(x).map_err(err)
    }

    fn min_hazard(&self, n: usize, x: f64) -> PyResult<f64> {
        self.system(n, ExtremeKind::Min)?.min_hazard(x).map_err(err)
    }

    fn min_pdf(&self, n: usize, x: f64) -> PyResult<f64> {
        self.system(n, ExtremeKind::Min)?.min_pdf(x).map_err(err)
    }

    fn max_cdf(&self, n: usize, x: f64) -> PyResult<f64> {
        self.system(n, ExtremeKind::Max)?.max_cdf(x).map_err(err)
    }

    fn max_rev_hazard(&self, n: usize, x: f64) -> PyResult<f64> {
        self.system(n, ExtremeKind::Max)?
            .max_rev_hazard(x)
            .map_err(err)
    }

    fn max_pdf(&self, n: usize, x: f64) -> PyResult<f64> {
        self.system(n, ExtremeKind::Max)?.max_pdf(x).map_err(err)
    }
}

/// Pmf of the random component count.
#[pyclass(name = "Pmf", frozen, from_py_object)]
#[derive(Clone)]
struct PyPmf {
    inner: SizePmf,
}

#[pymethods]
impl PyPmf {
    #[staticmethod]
    fn explicit(atoms: Vec<(u32, f64)>) -> PyResult<Self> {
        Ok(Self {
            inner: SizePmf::explicit(atoms).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (q, tail_bound = 1e-12))]
    fn geometric(q: f64, tail_bound: f64) -> PyResult<Self> {
        Ok(Self {
            inner: SizePmf::geometric(q, tail_bound).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (mu, tail_bound = 1e-12))]
    fn poisson_shifted(mu: f64, tail_bound: f64) -> PyResult<Self> {
        Ok(Self {
            inner: SizePmf::poisson_shifted(mu, tail_bound).map_err(err)?,
        })
    }

    fn atoms(&self) -> Vec<(u32, f64)> {
        self.inner.atoms().to_vec()
    }

    #[getter]
    fn truncation_tail(&self) -> f64 {
        self.inner.truncation_tail()
    }

    #[getter]
    fn source(&self) -> String {
        self.inner.source().to_string()
    }

    #[getter]
    fn max_n(&self) -> u32 {
        self.inner.max_n()
    }
}

/// Mixture law of the extreme over a random component count.
#[pyclass(name = "RandomExtreme", frozen, from_py_object)]
#[derive(Clone)]
struct PyRandomExtreme {
    inner: RandomExtremeSpec,
}

#[pymethods]
impl PyRandomExtreme {
    #[new]
    fn new(family: PyFamily, pmf: PyPmf, kind: &str) -> PyResult<Self> {
        Ok(Self {
            inner: RandomExtremeSpec::new(family.inner, pmf.inner, parse_kind(kind)?)
                .map_err(err)?,
        })
    }

    fn min_sf(&self, x: f64) -> PyResult<f64> {
        self.inner.rand_min_sf(x).map_err(err)
    }

    fn max_cdf(&self, x: f64) -> PyResult<f64> {
        self.inner.rand_max_cdf(x).map_err(err)
    }

    fn pdf(&self, x: f64) -> PyResult<f64> {
        self.inner.rand_pdf(x).map_err(err)
    }

    fn hazard(&self, x: f64) -> PyResult<f64> {
        self.inner.rand_hazard(x).map_err(err)
    }

    fn rev_hazard(&self, x: f64) -> PyResult<f64> {
        self.inner.rand_rev_hazard(x).map_err(err)
    }
}

fn grid_from(points: Vec<f64>, mono_tol: f64, trim_floor: f64) -> PyResult<Grid> {
    Ok(Grid::from_points(points, GridTransform::Direct)
        .map_err(err)?
        .with_mono_tol(mono_tol)
        .with_trim_floor(trim_floor))
}

/// Unit-interval substitution grid: x = -ln y for y equally spaced
/// in (0, exp(-min_x)).
#[pyfunction]
#[pyo3(signature = (points, min_x = 0.0))]
fn neg_log_unit_grid(points: usize, min_x: f64) -> Vec<f64> {
    Grid::neg_log_unit_above(points, min_x).points().to_vec()
}

fn verdict_dict<'py>(py: Python<'py>, v: &OrderingVerdict) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("holds", v.holds)?;
    d.set_item("worst_violation", v.worst_violation)?;
    d.set_item("points_checked", v.points_checked)?;
    d.set_item("trimmed", v.trimmed)?;
    d.set_item("low_coverage", v.low_coverage)?;
    Ok(d)
}

fn check_dict<'py>(py: Python<'py>, v: &CheckVerdict) -> PyResult<Bound<'py, PyDict>> {
    match v {
        CheckVerdict::Ordering(o) => verdict_dict(py, o),
        CheckVerdict::Kernel(k) => {
            let d = PyDict::new(py);
            d.set_item("holds", k.holds)?;
            d.set_item("worst_violation", k.worst_violation)?;
            d.set_item("minors_checked", k.minors_checked)?;
            Ok(d)
        }
    }
}

fn classification_str(c: Classification) -> &'static str {
    match c {
        Classification::Consistent => "CONSISTENT",
        Classification::HypothesisFail => "HYPOTHESIS_FAIL",
        Classification::Anomaly => "ANOMALY",
    }
}

fn report_dict<'py>(py: Python<'py>, report: &TheoremReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("theorem", &report.id)?;
    d.set_item("pmf", &report.pmf_source)?;
    let hyps = PyList::empty(py);
    for h in &report.hypotheses {
        let item = check_dict(py, &h.verdict)?;
        item.set_item("label", &h.label)?;
        hyps.append(item)?;
    }
    d.set_item("hypotheses", hyps)?;
    let concl = check_dict(py, &report.conclusion.verdict)?;
    concl.set_item("label", &report.conclusion.label)?;
    d.set_item("conclusion", concl)?;
    d.set_item("classification", classification_str(report.classification))?;
    d.set_item("notes", report.notes.clone())?;
    Ok(d)
}

/// Runs one preservation-theorem driver (`"3.1"` .. `"3.8"`).
#[pyfunction]
#[pyo3(signature = (id, fam_x, fam_y, pmf, grid, mono_tol = 1e-9, trim_floor = 1e-12))]
#[allow(clippy::too_many_arguments)]
fn verify_theorem<'py>(
    py: Python<'py>,
    id: &str,
    fam_x: PyFamily,
    fam_y: PyFamily,
    pmf: PyPmf,
    grid: Vec<f64>,
    mono_tol: f64,
    trim_floor: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let id: core::TheoremId = id.parse().map_err(err)?;
    let grid = grid_from(grid, mono_tol, trim_floor)?;
    let report =
        core::verify_theorem(id, &fam_x.inner, &fam_y.inner, &pmf.inner, &grid).map_err(err)?;
    report_dict(py, &report)
}

fn curve_fn<'a>(f: &'a Bound<'a, PyAny>) -> impl Fn(f64) -> f64 + 'a {
    move |x| {
        f.call1((x,))
            .and_then(|v| v.extract::<f64>())
            .unwrap_or(f64::NAN)
    }
}

/// Usual stochastic order: sf_a <= sf_b pointwise on the grid.
#[pyfunction]
#[pyo3(signature = (sf_a, sf_b, grid, mono_tol = 1e-9, trim_floor = 1e-12))]
fn check_st<'py>(
    py: Python<'py>,
    sf_a: Bound<'py, PyAny>,
    sf_b: Bound<'py, PyAny>,
    grid: Vec<f64>,
    mono_tol: f64,
    trim_floor: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let grid = grid_from(grid, mono_tol, trim_floor)?;
    let v = core::check_st(curve_fn(&sf_a), curve_fn(&sf_b), &grid);
    verdict_dict(py, &v)
}

macro_rules! ratio_check {
    ($name:ident, $core_fn:path, $doc:literal) => {
        #[doc = $doc]
        #[pyfunction]
        #[pyo3(signature = (a, b, grid, mono_tol = 1e-9, trim_floor = 1e-12))]
        fn $name<'py>(
            py: Python<'py>,
            a: Bound<'py, PyAny>,
            b: Bound<'py, PyAny>,
            grid: Vec<f64>,
            mono_tol: f64,
            trim_floor: f64,
        ) -> PyResult<Bound<'py, PyDict>> {
            let grid = grid_from(grid, mono_tol, trim_floor)?;
            let v = $core_fn(curve_fn(&a), curve_fn(&b), &grid).map_err(err)?;
            verdict_dict(py, &v)
        }
    };
}

ratio_check!(
    check_hr,
    core::check_hr,
    "Hazard rate order A <= B: sf_b/sf_a nondecreasing on the grid."
);
ratio_check!(
    check_rh,
    core::check_rh,
    "Reversed hazard order A <= B: cdf_b/cdf_a nondecreasing on the grid."
);
ratio_check!(
    check_lr,
    core::check_lr,
    "Likelihood ratio order A <= B: pdf_b/pdf_a nondecreasing on the grid."
);

fn py_kernel(callable: Bound<'_, PyAny>, name: &str) -> Kernel {
    let obj: Py<PyAny> = callable.unbind();
    Kernel::new(name, move |n, x| {
        Python::attach(|py| {
            obj.bind(py)
                .call1((n, x))
                .and_then(|v| v.extract::<f64>())
                .unwrap_or(f64::NAN)
        })
    })
}

fn py_seq_fn(callable: Bound<'_, PyAny>, name: &str) -> SignedSequenceFn {
    let obj: Py<PyAny> = callable.unbind();
    SignedSequenceFn::new(name, move |n, x| {
        Python::attach(|py| {
            obj.bind(py)
                .call1((n, x))
                .and_then(|v| v.extract::<f64>())
                .unwrap_or(f64::NAN)
        })
    })
}

/// TP2 check of a kernel callable k(n, x) by adjacent 2x2 minors.
#[pyfunction]
#[pyo3(signature = (kernel, n_grid, x_grid, tol = 1e-9))]
fn check_tp2<'py>(
    py: Python<'py>,
    kernel: Bound<'py, PyAny>,
    n_grid: Vec<u32>,
    x_grid: Vec<f64>,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let k = py_kernel(kernel, "py kernel");
    let v = core::check_tp2(&k, &n_grid, &x_grid, tol).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("holds", v.holds)?;
    d.set_item("worst_violation", v.worst_violation)?;
    d.set_item("minors_checked", v.minors_checked)?;
    Ok(d)
}

/// RR2 check of a kernel callable k(n, x).
#[pyfunction]
#[pyo3(signature = (kernel, n_grid, x_grid, tol = 1e-9))]
fn check_rr2<'py>(
    py: Python<'py>,
    kernel: Bound<'py, PyAny>,
    n_grid: Vec<u32>,
    x_grid: Vec<f64>,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let k = py_kernel(kernel, "py kernel");
    let v = core::check_rr2(&k, &n_grid, &x_grid, tol).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("holds", v.holds)?;
    d.set_item("worst_violation", v.worst_violation)?;
    d.set_item("minors_checked", v.minors_checked)?;
    Ok(d)
}

/// Sums f(n, x) * k(n, x) * weight(n); returns (x, value, tail_bound) rows.
#[pyfunction]
#[pyo3(signature = (f, kernel, x_grid, n_max = 10_000, weights = None))]
fn vd_transform(
    f: Bound<'_, PyAny>,
    kernel: Bound<'_, PyAny>,
    x_grid: Vec<f64>,
    n_max: u32,
    weights: Option<PyPmf>,
) -> PyResult<Vec<(f64, f64, f64)>> {
    let f = py_seq_fn(f, "py f");
    let k = py_kernel(kernel, "py kernel");
    let samples = core::vd_transform(&f, &k, weights.as_ref().map(|w| &w.inner), &x_grid, n_max)
        .map_err(err)?;
    Ok(samples
        .iter()
        .map(|s| (s.x, s.value, s.tail_bound))
        .collect())
}

/// Sign changes of x-sorted (x, value) samples outside a dead band.
#[pyfunction]
fn sign_changes<'py>(
    py: Python<'py>,
    samples: Vec<(f64, f64)>,
    dead_band: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let rep = core::sign_changes(&samples, dead_band);
    let d = PyDict::new(py);
    d.set_item("count", rep.count)?;
    d.set_item("pattern", rep.pattern)?;
    d.set_item("change_locations", rep.change_locations)?;
    Ok(d)
}

/// Runs one variation-diminishing proposition driver (`"3.1"` .. `"3.4"`).
#[pyfunction]
#[pyo3(signature = (id, f, kernel, n_grid, x_grid, n_max = 10_000, tol = 1e-9))]
#[allow(clippy::too_many_arguments)]
fn verify_proposition<'py>(
    py: Python<'py>,
    id: &str,
    f: Bound<'py, PyAny>,
    kernel: Bound<'py, PyAny>,
    n_grid: Vec<u32>,
    x_grid: Vec<f64>,
    n_max: u32,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let id: core::PropositionId = id.parse().map_err(err)?;
    let f = py_seq_fn(f, "py f");
    let k = py_kernel(kernel, "py kernel");
    let rep =
        core::verify_proposition(id, &f, &k, &n_grid, &x_grid, None, n_max, tol).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("proposition", rep.id)?;
    d.set_item("classification", classification_str(rep.classification))?;
    d.set_item("kernel_holds", rep.kernel.holds)?;
    d.set_item("f_monotone_holds", rep.f_monotone.holds)?;
    d.set_item("f_sign_pattern_holds", rep.f_sign_pattern.holds)?;
    d.set_item("sign_count", rep.sign_report.count)?;
    d.set_item("sign_pattern", rep.sign_report.pattern)?;
    Ok(d)
}

/// Reproduces one counterexample case ("I" .. "IV") on its canonical grid.
#[pyfunction]
fn counterexample<'py>(py: Python<'py>, case: &str) -> PyResult<Bound<'py, PyDict>> {
    let case: core::CounterCase = case.parse().map_err(err)?;
    let run = core::counterexample(case).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("case", case.label())?;
    d.set_item("samples", run.samples.clone())?;
    d.set_item("count", run.report.count)?;
    d.set_item("pattern", run.report.pattern.clone())?;
    d.set_item("max_abs_diff", run.max_abs_diff)?;
    Ok(d)
}

/// Monte Carlo check of a random extreme against its analytic curve.
#[pyfunction]
#[pyo3(signature = (spec, seed, n_samples, checkpoints, confidence_k = 3.0))]
fn mc_oracle<'py>(
    py: Python<'py>,
    spec: PyRandomExtreme,
    seed: u64,
    n_samples: usize,
    checkpoints: Vec<f64>,
    confidence_k: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = SimConfig::new(seed, n_samples, checkpoints)
        .map_err(err)?
        .with_confidence_k(confidence_k);
    let curve = core::simulate_random_extreme(&spec.inner, &cfg);
    let analytic = |x: f64| match spec.inner.kind() {
        ExtremeKind::Min => spec.inner.rand_min_sf(x).unwrap_or(f64::NAN),
        ExtremeKind::Max => spec.inner.rand_max_cdf(x).unwrap_or(f64::NAN),
    };
    let report = core::oracle_compare(analytic, &curve, cfg.confidence_k);
    let d = PyDict::new(py);
    d.set_item("pass", report.pass)?;
    let rows: Vec<(f64, f64, f64, f64, f64)> = report
        .rows
        .iter()
        .map(|r| (r.x, r.analytic, r.empirical, r.se, r.z))
        .collect();
    d.set_item("rows", rows)?;
    Ok(d)
}

#[pymodule]
fn stochord(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDist>()?;
    m.add_class::<PyFamily>()?;
    m.add_class::<PyPmf>()?;
    m.add_class::<PyRandomExtreme>()?;
    m.add_function(wrap_pyfunction!(neg_log_unit_grid, m)?)?;
    m.add_function(wrap_pyfunction!(verify_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(check_st, m)?)?;
    m.add_function(wrap_pyfunction!(check_hr, m)?)?;
    m.add_function(wrap_pyfunction!(check_rh, m)?)?;
    m.add_function(wrap_pyfunction!(check_lr, m)?)?;
    m.add_function(wrap_pyfunction!(check_tp2, m)?)?;
    m.add_function(wrap_pyfunction!(check_rr2, m)?)?;
    m.add_function(wrap_pyfunction!(vd_transform, m)?)?;
    m.add_function(wrap_pyfunction!(sign_changes, m)?)?;
    m.add_function(wrap_pyfunction!(verify_proposition, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(mc_oracle, m)?)?;
    Ok(())
}
