//! Python bindings: `QuadLinkage`, `ArmLinkage` and the cross-ratio helpers.
//!
//! Structured results (arcs, fold certificates, slices, annulus images) are
//! returned as plain dicts and lists; complex numbers inside them appear as
//! `[re, im]` pairs, while scalar complex results are Python `complex`.

use linkage_core::arm::{self, TSlice};
use linkage_core::geom;
use linkage_core::quad;
use linkage_core::{
    ArmLinkage as CoreArm, Complex64, ExtendedComplex, LinkageError as CoreError, PlanarConfig,
    QuadLinkage as CoreQuad, TorusPoint,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(linkage_py, LinkageError, PyValueError, "Invalid or unsupported linkage input.");
create_exception!(
    linkage_py,
    NonGenericArmError,
    LinkageError,
    "A 3-arm whose aligned lengths make the critical set singular."
);

fn py_err(e: CoreError) -> PyErr {
    match e {
        CoreError::NonGenericArm(_) => NonGenericArmError::new_err(e.to_string()),
        _ => LinkageError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for linkage_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    Ok(pythonize::pythonize(py, v)?)
}

fn finite(z: ExtendedComplex) -> Option<Complex64> {
    z.finite()
}

/// Cross-ratio `[p, q; z, w]`; `None` stands for infinity.
#[pyfunction]
fn cross_ratio(p: Complex64, q: Complex64, z: Complex64, w: Complex64) -> PyResult<Option<Complex64>> {
    Ok(finite(geom::cross_ratio(p, q, z, w).py()?))
}

/// Uniformizer `R = [v1, v3; v2, v4]` of a closed quadrilateral.
#[pyfunction]
fn uniformizer(v1: Complex64, v2: Complex64, v3: Complex64, v4: Complex64) -> PyResult<Option<Complex64>> {
    let cfg = PlanarConfig::new([v1, v2, v3, v4], geom::ConfigKind::Closed).py()?;
    Ok(finite(geom::uniformizer(&cfg).py()?))
}

/// A closed four-bar with side lengths `a, b, c, d`.
#[pyclass(name = "QuadLinkage", module = "linkage_py", frozen)]
struct PyQuad(CoreQuad);

#[pymethods]
impl PyQuad {
    #[new]
    fn new(a: f64, b: f64, c: f64, d: f64) -> PyResult<Self> {
        Ok(Self(CoreQuad::new(a, b, c, d).py()?))
    }

    /// Parses `"a,b,c,d"`; decimal inputs are kept exact for degeneracy tests.
    #[staticmethod]
    fn parse(s: &str) -> PyResult<Self> {
        Ok(Self(s.parse::<CoreQuad>().py()?))
    }

    #[getter]
    fn lengths(&self) -> [f64; 4] {
        self.0.lengths()
    }

    fn is_nondegenerate(&self) -> bool {
        self.0.is_nondegenerate()
    }

    /// Name of the degenerate case, or `None`.
    fn degenerate_case<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &quad::degenerate_case(&self.0))
    }

    fn topology(&self) -> String {
        format!("{:?}", self.0.classify_topology())
    }

    fn is_connected(&self) -> bool {
        self.0.is_connected()
    }

    fn is_surjective(&self) -> PyResult<bool> {
        self.0.is_surjective().py()
    }

    fn image_radius(&self) -> f64 {
        self.0.image_radius()
    }

    fn f_tau(&self, tau: f64) -> f64 {
        self.0.f_tau(tau)
    }

    fn tau_star(&self) -> Option<f64> {
        quad::tau_star(&self.0)
    }

    fn r_image<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &quad::r_image(&self.0).py()?)
    }

    fn cr_image<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &quad::cr_image(&self.0).py()?)
    }

    /// Configurations `(alpha, gamma)` with `arg R = tau`.
    fn fiber(&self, tau: f64) -> PyResult<Vec<(f64, f64)>> {
        let pts = quad::solve_tau_fiber(&self.0, tau).py()?;
        Ok(pts.iter().map(|p| (p.alpha, p.gamma)).collect())
    }

    /// Uniformizer of the configuration with angles `(alpha, gamma)`.
    fn r_at(&self, alpha: f64, gamma: f64) -> PyResult<Option<Complex64>> {
        let v = quad::embed_config(&self.0, alpha, gamma).py()?;
        Ok(finite(geom::uniformizer(&v).py()?))
    }

    fn g_residual(&self, alpha: f64, gamma: f64) -> f64 {
        quad::g_residual(&self.0, alpha, gamma)
    }

    /// Components of the moduli space as lists of `(alpha, gamma)`.
    #[pyo3(signature = (samples = 1024))]
    fn trace(&self, samples: usize) -> PyResult<Vec<Vec<(f64, f64)>>> {
        let comps = quad::trace_moduli(&self.0, samples).py()?;
        Ok(comps
            .iter()
            .map(|c| c.iter().map(|p| (p.alpha, p.gamma)).collect())
            .collect())
    }

    fn critical_points<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &quad::critical_points(&self.0).py()?)
    }

    #[pyo3(signature = (samples = 1024))]
    fn mapping_degree<'py>(&self, py: Python<'py>, samples: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &quad::mapping_degree(&self.0, samples).py()?)
    }

    fn degenerate_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &quad::degenerate_image_report(&self.0).py()?)
    }

    fn __repr__(&self) -> String {
        let [a, b, c, d] = self.0.lengths();
        format!("QuadLinkage({a}, {b}, {c}, {d})")
    }
}

/// A planar robot 3-arm with link lengths `a, b, c`.
#[pyclass(name = "ArmLinkage", module = "linkage_py", frozen)]
struct PyArm(CoreArm);

fn slice_dict<'py>(py: Python<'py>, s: &TSlice) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, s)
}

#[pymethods]
impl PyArm {
    #[new]
    fn new(a: f64, b: f64, c: f64) -> PyResult<Self> {
        Ok(Self(CoreArm::new(a, b, c).py()?))
    }

    #[staticmethod]
    fn parse(s: &str) -> PyResult<Self> {
        Ok(Self(s.parse::<CoreArm>().py()?))
    }

    #[getter]
    fn lengths(&self) -> [f64; 3] {
        self.0.lengths()
    }

    fn is_generic(&self) -> bool {
        self.0.require_generic().is_ok()
    }

    /// Raises `NonGenericArmError` unless the arm is generic.
    fn require_generic(&self) -> PyResult<()> {
        self.0.require_generic().py()
    }

    fn case(&self) -> String {
        format!("{:?}", self.0.case())
    }

    fn t_range(&self) -> (f64, f64) {
        self.0.t_range()
    }

    fn disc_radius(&self) -> f64 {
        self.0.disc_radius()
    }

    fn morse_t_values(&self) -> PyResult<Vec<f64>> {
        arm::morse_t_values(&self.0).py()
    }

    fn r_inverse(&self, phi: f64, eta: f64) -> Complex64 {
        arm::r_inverse(&self.0, TorusPoint::new(phi, eta))
    }

    fn jacobian(&self, phi: f64, eta: f64) -> f64 {
        arm::jacobian(&self.0, TorusPoint::new(phi, eta))
    }

    fn end_to_end(&self, phi: f64, eta: f64) -> f64 {
        arm::end_to_end(&self.0, TorusPoint::new(phi, eta))
    }

    fn t_slice<'py>(&self, py: Python<'py>, t: f64) -> PyResult<Bound<'py, PyAny>> {
        slice_dict(py, &arm::t_slice(&self.0, t).py()?)
    }

    /// Closed curves of the critical set as lists of `(phi, eta)`.
    #[pyo3(signature = (grid = arm::DEFAULT_GRID))]
    fn critical_set(&self, grid: usize) -> PyResult<Vec<Vec<(f64, f64)>>> {
        let curves = arm::critical_set(&self.0, grid).py()?;
        Ok(curves
            .iter()
            .map(|c| c.points.iter().map(|p| (p.phi, p.eta)).collect())
            .collect())
    }

    /// Number of preimages of `w` under `1/R`, or `None` too close to a fold.
    #[pyo3(signature = (w, grid = 128))]
    fn preimage_count(&self, w: Complex64, grid: usize) -> PyResult<Option<usize>> {
        arm::preimage_count(&self.0, w, grid).py()
    }

    #[pyo3(signature = (frames = arm::DEFAULT_FRAMES, grid = arm::DEFAULT_GRID))]
    fn annulus_image<'py>(&self, py: Python<'py>, frames: usize, grid: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &arm::annulus_image(&self.0, frames, grid).py()?)
    }

    fn __repr__(&self) -> String {
        let [a, b, c] = self.0.lengths();
        format!("ArmLinkage({a}, {b}, {c})")
    }
}

#[pymodule]
fn linkage_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LinkageError", m.py().get_type::<LinkageError>())?;
    m.add("NonGenericArmError", m.py().get_type::<NonGenericArmError>())?;
    m.add_class::<PyQuad>()?;
    m.add_class::<PyArm>()?;
    m.add_function(wrap_pyfunction!(cross_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(uniformizer, m)?)?;
    Ok(())
}
