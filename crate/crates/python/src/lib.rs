//! Python bindings: complexes, Green functions, the identity suite and free-energy sweeps.

use num::rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;
use simplicial_green::curvature::{stable_curvature, unstable_curvature};
use simplicial_green::hodge::betti;
use simplicial_green::io::complex_to_json;
use simplicial_green::potential::zeta;
use simplicial_green::thermo::{
    conjecture_probe, critical_points, interior_energy_minimizer, san_diego_check, sweep, zero_temperature_minimum,
    FreeEnergy, NewtonOptions, SweepConfig,
};
use simplicial_green::verify::{verify_complex, Tolerances};
use simplicial_green::{fixtures, green_function, Error, ExactMatrix, Face, GraphSpec, SimplicialComplex};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn fraction<'py>(py: Python<'py>, x: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((x.to_string(),))
}

fn fractions<'py>(py: Python<'py>, xs: &[BigRational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    xs.iter().map(|x| fraction(py, x)).collect()
}

fn int_matrix(m: &ExactMatrix) -> PyResult<Vec<Vec<i64>>> {
    let flat = m.to_i64().ok_or_else(|| PyValueError::new_err("matrix is not integral"))?;
    Ok(flat.chunks(m.cols().max(1)).take(m.rows()).map(<[i64]>::to_vec).collect())
}

/// A finite abstract simplicial complex with faces in canonical order.
#[pyclass(name = "Complex", module = "sgreen", frozen)]
struct PyComplex {
    inner: SimplicialComplex,
}

#[pymethods]
impl PyComplex {
    /// Closure of the given faces.
    #[staticmethod]
    fn from_maximal(faces: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(PyComplex { inner: SimplicialComplex::from_maximal_faces(&faces).map_err(err)? })
    }

    /// Exactly the given faces; fails unless closed under subsets.
    #[staticmethod]
    fn from_faces(faces: Vec<Vec<usize>>) -> PyResult<Self> {
        let faces = faces.into_iter().map(Face::new).collect::<Result<Vec<_>, _>>().map_err(err)?;
        Ok(PyComplex { inner: SimplicialComplex::from_faces(faces).map_err(err)? })
    }

    /// Whitney (clique) complex of a graph.
    #[staticmethod]
    fn whitney(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let g = GraphSpec::new(n, edges).map_err(err)?;
        Ok(PyComplex { inner: SimplicialComplex::whitney(&g).map_err(err)? })
    }

    /// `k<n>`, `c<n>`, `octahedron` or `icosahedron`.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        let g = fixtures::named_graph(name).ok_or_else(|| PyValueError::new_err(format!("unknown fixture {name}")))?;
        Ok(PyComplex { inner: SimplicialComplex::whitney(&g).map_err(err)? })
    }

    #[staticmethod]
    fn random(n: usize, p: f64, seed: u64) -> PyResult<Self> {
        Ok(PyComplex { inner: SimplicialComplex::erdos_renyi_whitney(n, p, seed).map_err(err)? })
    }

    fn faces(&self) -> Vec<Vec<usize>> {
        self.inner.faces().iter().map(|f| f.vertices().to_vec()).collect()
    }

    fn fvector(&self) -> Vec<usize> {
        self.inner.fvector().to_vec()
    }

    fn euler_characteristic(&self) -> i64 {
        self.inner.euler_characteristic()
    }

    fn refine(&self) -> PyResult<Self> {
        Ok(PyComplex { inner: self.inner.barycentric_refinement().map_err(err)? })
    }

    fn to_json(&self) -> String {
        complex_to_json(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Complex(fvector={:?})", self.inner.fvector())
    }
}

/// Connection Laplacian `1 + A′` as nested integer lists.
#[pyfunction]
fn connection_laplacian(c: &PyComplex) -> PyResult<Vec<Vec<i64>>> {
    int_matrix(green_function(&c.inner).map_err(err)?.laplacian())
}

/// Green function `g = (1 + A′)^{-1}` as nested integer lists.
#[pyfunction]
fn green(c: &PyComplex) -> PyResult<Vec<Vec<i64>>> {
    int_matrix(green_function(&c.inner).map_err(err)?.matrix())
}

/// `(K⁻, K⁺)` per face.
#[pyfunction]
fn curvatures(c: &PyComplex) -> (Vec<i64>, Vec<i64>) {
    (stable_curvature(&c.inner).values, unstable_curvature(&c.inner).values)
}

#[pyfunction(name = "betti")]
fn betti_numbers(c: &PyComplex) -> Vec<usize> {
    betti(&c.inner)
}

/// Identity suite report as a dict.
#[pyfunction]
#[pyo3(signature = (c, tol_eig = 1e-8))]
fn verify<'py>(py: Python<'py>, c: &PyComplex, tol_eig: f64) -> PyResult<Bound<'py, PyAny>> {
    let r = verify_complex(&c.inner, &Tolerances { eig: tol_eig, heat: tol_eig }).map_err(err)?;
    to_py(py, &r)
}

/// Coefficients of `det(1 + zA′)` from degree 0 upward.
#[pyfunction]
fn zeta_coefficients<'py>(py: Python<'py>, c: &PyComplex) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let z = zeta(&c.inner).map_err(err)?;
    let int = py.import("builtins")?.getattr("int")?;
    z.coefficients.iter().map(|x| int.call1((x.to_string(),))).collect()
}

/// Exact interior energy minimizer: `(p, energy)` as fractions.
#[pyfunction]
fn energy_minimizer<'py>(py: Python<'py>, c: &PyComplex) -> PyResult<(Vec<Bound<'py, PyAny>>, Bound<'py, PyAny>)> {
    let gf = green_function(&c.inner).map_err(err)?;
    let m = interior_energy_minimizer(&gf).map_err(err)?;
    Ok((fractions(py, &m.p)?, fraction(py, &m.energy)?))
}

/// Lowest energy over the interior minimizer and support-restricted candidates: `(energy, support)`.
#[pyfunction]
fn zero_temperature<'py>(py: Python<'py>, c: &PyComplex) -> PyResult<(Bound<'py, PyAny>, Vec<usize>)> {
    let gf = green_function(&c.inner).map_err(err)?;
    let (e, support) = zero_temperature_minimum(&gf).map_err(err)?;
    Ok((fraction(py, &e)?, support))
}

#[pyfunction]
#[pyo3(signature = (c, tol_eig = 1e-8))]
fn san_diego<'py>(py: Python<'py>, c: &PyComplex, tol_eig: f64) -> PyResult<Bound<'py, PyAny>> {
    let gf = green_function(&c.inner).map_err(err)?;
    to_py(py, &san_diego_check(&c.inner, &gf, tol_eig).map_err(err)?)
}

/// Critical points of `F(·, β)` from seeded multistart Newton.
#[pyfunction(name = "critical_points")]
#[pyo3(signature = (c, beta, starts = 64, seed = 0))]
fn py_critical_points<'py>(py: Python<'py>, c: &PyComplex, beta: f64, starts: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let gf = green_function(&c.inner).map_err(err)?;
    let pts = critical_points(&FreeEnergy::new(&gf), beta, starts, seed, &NewtonOptions::default()).map_err(err)?;
    to_py(py, &pts)
}

/// Continuation sweep; returns a dict with events, bifurcations, catastrophes and the min curve.
#[pyfunction(name = "sweep")]
#[pyo3(signature = (c, beta_from = 0.0, beta_to = 1.0, steps = 400, starts = 16, seed = 0))]
fn py_sweep<'py>(
    py: Python<'py>,
    c: &PyComplex,
    beta_from: f64,
    beta_to: f64,
    steps: usize,
    starts: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let gf = green_function(&c.inner).map_err(err)?;
    let r = sweep(&gf, &SweepConfig::new(beta_from, beta_to, steps, starts, seed)).map_err(err)?;
    let out = to_py(py, &r)?;
    out.set_item("conjecture_probe", to_py(py, &conjecture_probe(&r))?)?;
    out.set_item("branches_csv", r.branches_csv())?;
    Ok(out)
}

#[pymodule]
fn sgreen(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyComplex>()?;
    m.add_function(wrap_pyfunction!(connection_laplacian, m)?)?;
    m.add_function(wrap_pyfunction!(green, m)?)?;
    m.add_function(wrap_pyfunction!(curvatures, m)?)?;
    m.add_function(wrap_pyfunction!(betti_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(energy_minimizer, m)?)?;
    m.add_function(wrap_pyfunction!(zero_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(san_diego, m)?)?;
    m.add_function(wrap_pyfunction!(py_critical_points, m)?)?;
    m.add_function(wrap_pyfunction!(py_sweep, m)?)?;
    Ok(())
}
