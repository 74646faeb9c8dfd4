//! Python bindings: field towers, cuspidal parameters, tame pairs, gamma
//! factors by every method, and the verification suites.

use num_complex::Complex64;
use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;

use cuspgamma::arith::{lcm, prime_power};
use cuspgamma::characters::{self, AddChar, MultChar, RegularOrbit};
use cuspgamma::cuspidal::{self, CuspidalSpec};
use cuspgamma::fields::DEFAULT_FIELD_LIMIT;
use cuspgamma::gamma_finite::{self, FiniteMethod, TauParam};
use cuspgamma::gamma_local::{self, tau_param};
use cuspgamma::gln::{MatFq, DEFAULT_ENUM_LIMIT};
use cuspgamma::level_zero::{self, pair_to_rep};
use cuspgamma::verify::{self, SizeClass, Suite, SuiteConfig};
use cuspgamma::{FieldTower, TowerOptions};

fn err(e: cuspgamma::Error) -> PyErr {
    if e.is_resource_limit() {
        PyOverflowError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn build_tower(q: u64, degree: u32, modulus_rank: usize, limit: u64) -> PyResult<FieldTower> {
    let opts = TowerOptions { limit, modulus_rank };
    FieldTower::for_q(q, degree, &opts).map_err(err)
}

fn psi(tower: &FieldTower, shift: u64) -> PyResult<AddChar> {
    if shift == 0 || shift >= tower.q() {
        return Err(PyValueError::new_err(format!(
            "psi_shift must lie in 1..={}",
            tower.q() - 1
        )));
    }
    let g = tower.subfield_generator(1).map_err(err)?;
    AddChar::new(tower, 1, tower.pow(g, shift as i64 - 1)).map_err(err)
}

fn json_to_py(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// The field `F_{q^degree}` with subfields `F_{q^d}` for `d | degree`.
#[pyclass(name = "Tower", module = "cuspgamma", frozen)]
struct PyTower {
    inner: FieldTower,
}

#[pymethods]
impl PyTower {
    #[new]
    #[pyo3(signature = (q, degree, modulus_rank = 0, limit = DEFAULT_FIELD_LIMIT))]
    fn new(q: u64, degree: u32, modulus_rank: usize, limit: u64) -> PyResult<Self> {
        Ok(PyTower {
            inner: build_tower(q, degree, modulus_rank, limit)?,
        })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    /// Size of the multiplicative group of the ambient field.
    #[getter]
    fn order(&self) -> u64 {
        self.inner.order()
    }

    /// Coefficients of the primitive polynomial, constant term first.
    #[getter]
    fn modulus(&self) -> Vec<u64> {
        self.inner.modulus().to_vec()
    }

    /// `r` with the generator of `reference` equal to `g^r` here.
    fn relabel_log(&self, reference: &PyTower) -> PyResult<u64> {
        self.inner.relabel_log(&reference.inner).map_err(err)
    }

    /// `G(β, ψ)` for `β` of exponent `exponent` on `F_{q^level}^×`.
    #[pyo3(signature = (level, exponent, psi_shift = 1))]
    fn gauss_sum(&self, level: u32, exponent: u64, psi_shift: u64) -> PyResult<Complex64> {
        let t = &self.inner;
        let phi = psi(t, psi_shift)?.lift(t, level).map_err(err)?;
        Ok(characters::gauss_sum(t, &MultChar::new(t.q(), level, exponent), &phi))
    }

    fn __repr__(&self) -> String {
        format!("Tower(q={}, degree={})", self.inner.q(), self.inner.degree())
    }
}

/// A cuspidal representation of `GL_n(F_q)`, named by a regular orbit.
#[pyclass(name = "Cuspidal", module = "cuspgamma", frozen)]
struct PyCuspidal {
    inner: CuspidalSpec,
}

#[pymethods]
impl PyCuspidal {
    #[new]
    fn new(q: u64, n: u32, exponent: u64) -> PyResult<Self> {
        Ok(PyCuspidal {
            inner: CuspidalSpec::from_exponent(q, n, exponent).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    #[getter]
    fn orbit(&self) -> Vec<u64> {
        self.inner.orbit().exponents().to_vec()
    }

    #[getter]
    fn dimension(&self) -> u128 {
        self.inner.dimension()
    }

    /// Character value at a matrix given row by row as integers mod `p`
    /// (for prime `q`) or as field indices `-1` (zero), `0`, `1`, ...
    #[pyo3(signature = (tower, entries, as_indices = false))]
    fn char_value(&self, tower: &PyTower, entries: Vec<i64>, as_indices: bool) -> PyResult<Complex64> {
        let t = &tower.inner;
        let n = self.inner.n() as usize;
        let a = if as_indices {
            let elems = entries
                .iter()
                .map(|&k| if k < 0 { t.zero() } else { t.from_index(k as u64) })
                .collect();
            MatFq::from_entries(t, n, elems)
        } else {
            MatFq::from_ints(t, n, &entries)
        }
        .map_err(err)?;
        cuspidal::char_value(t, &self.inner, &a).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Cuspidal(q={}, n={}, orbit={:?})",
            self.inner.q(),
            self.inner.n(),
            self.inner.orbit().exponents()
        )
    }
}

/// A level-zero admissible tame pair: the value at the uniformizer and a
/// regular orbit of the residual character.
#[pyclass(name = "TamePair", module = "cuspgamma", frozen)]
struct PyTamePair {
    inner: level_zero::TamePair,
}

#[pymethods]
impl PyTamePair {
    #[new]
    #[pyo3(signature = (q, n, exponent, scalar = Complex64::new(1.0, 0.0)))]
    fn new(q: u64, n: u32, exponent: u64, scalar: Complex64) -> PyResult<Self> {
        let orbit = RegularOrbit::regular(q, n, exponent).map_err(err)?;
        Ok(PyTamePair {
            inner: level_zero::TamePair::new(scalar, orbit).map_err(err)?,
        })
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    #[getter]
    fn scalar(&self) -> Complex64 {
        self.inner.scalar()
    }

    #[getter]
    fn orbit(&self) -> Vec<u64> {
        self.inner.orbit().exponents().to_vec()
    }

    /// Residue size of the base field of the orbit.
    #[getter]
    fn base_q(&self) -> u64 {
        self.inner.q().pow(self.inner.base())
    }

    /// Base change to the degree-`m` unramified extension.
    #[pyo3(signature = (m, field_limit = DEFAULT_FIELD_LIMIT))]
    fn base_change(&self, m: u32, field_limit: u64) -> PyResult<Vec<PyTamePair>> {
        Ok(level_zero::base_change(&self.inner, m, field_limit)
            .map_err(err)?
            .into_iter()
            .map(|inner| PyTamePair { inner })
            .collect())
    }

    fn __repr__(&self) -> String {
        let s = self.inner.scalar();
        format!(
            "TamePair(scalar={}{:+}j, orbit={:?})",
            s.re,
            s.im,
            self.inner.orbit().exponents()
        )
    }
}

/// Regular orbits for `F_{q^n}^×`, each as its list of exponents.
#[pyfunction]
fn enumerate_regular_orbits(q: u64, n: u32) -> PyResult<Vec<Vec<u64>>> {
    if prime_power(q).is_none() {
        return Err(err(cuspgamma::Error::NotPrimePower(q)));
    }
    Ok(characters::enumerate_regular_orbits(q, n)
        .into_iter()
        .map(|o| o.exponents().to_vec())
        .collect())
}

fn finite_method(name: &str) -> PyResult<FiniteMethod> {
    match name {
        "bessel" | "bessel_sum" => Ok(FiniteMethod::BesselSum),
        "closed" | "closed_form" => Ok(FiniteMethod::ClosedForm),
        "nien" | "nien_n_by_1" => Ok(FiniteMethod::NienNBy1),
        other => Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    }
}

/// Finite gamma factor `γ(π × τ, ψ)` for `π` on `GL_n(F_q)` and `τ` a
/// character (`m = 1`) or cuspidal representation of `GL_m(F_q)`.
#[pyfunction(name = "gamma_finite")]
#[pyo3(signature = (q, n, m, pi_exponent, tau_exponent, method = "closed", psi_shift = 1))]
fn py_gamma_finite(
    q: u64,
    n: u32,
    m: u32,
    pi_exponent: u64,
    tau_exponent: u64,
    method: &str,
    psi_shift: u64,
) -> PyResult<Complex64> {
    let method = finite_method(method)?;
    let pi = CuspidalSpec::from_exponent(q, n, pi_exponent).map_err(err)?;
    let tau = if m == 1 {
        TauParam::Char(MultChar::new(q, 1, tau_exponent))
    } else {
        TauParam::Cusp(CuspidalSpec::from_exponent(q, m, tau_exponent).map_err(err)?)
    };
    let tower = build_tower(q, lcm(n, m.max(1)), 0, DEFAULT_FIELD_LIMIT)?;
    let psi = psi(&tower, psi_shift)?;
    let r = match (method, &tau) {
        (FiniteMethod::BesselSum, _) => gamma_finite::gamma_bessel(&tower, &pi, &tau, &psi, DEFAULT_ENUM_LIMIT),
        (FiniteMethod::ClosedForm, _) => gamma_finite::gamma_closed(&tower, &pi, &tau, &psi),
        (FiniteMethod::NienNBy1, TauParam::Char(c)) => gamma_finite::gamma_n_by_1(&tower, &pi, c, &psi),
        (FiniteMethod::NienNBy1, TauParam::Cusp(_)) => {
            return Err(PyValueError::new_err("the n x 1 formula needs m = 1"))
        }
    };
    Ok(r.map_err(err)?.value)
}

fn same_q(a: &PyTamePair, b: &PyTamePair) -> PyResult<u64> {
    let q = a.inner.q();
    if b.inner.q() != q || a.inner.base() != 1 || b.inner.base() != 1 {
        return Err(PyValueError::new_err("pairs must be over the same base field F_q"));
    }
    Ok(q)
}

/// Local gamma factor of two level-zero supercuspidals. `method` is
/// `"closed"` or `"bridge"`; a bridge goes through the finite gamma factor
/// computed by `finite_method`.
#[pyfunction(name = "gamma_local")]
#[pyo3(signature = (pi, tau, method = "closed", finite_method = "closed", psi_shift = 1))]
fn py_gamma_local(
    pi: &PyTamePair,
    tau: &PyTamePair,
    method: &str,
    finite_method: &str,
    psi_shift: u64,
) -> PyResult<Complex64> {
    let q = same_q(pi, tau)?;
    let (rp, rt) = (
        pair_to_rep(&pi.inner).map_err(err)?,
        pair_to_rep(&tau.inner).map_err(err)?,
    );
    let tower = build_tower(q, lcm(rp.n(), rt.n()), 0, DEFAULT_FIELD_LIMIT)?;
    let psi = psi(&tower, psi_shift)?;
    let r = match method {
        "closed" | "closed_form" => gamma_local::gamma_local_closed(&tower, &rp, &rt, &psi),
        "bridge" => {
            let fm = self::finite_method(finite_method)?;
            gamma_local::gamma_local_bridge(&tower, &rp, &rt, &psi, fm, DEFAULT_ENUM_LIMIT)
        }
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    Ok(r.map_err(err)?.value)
}

/// The finite-side data of a level-zero pair, as `(n, m, labels of π, labels of τ)`.
#[pyfunction]
fn residual_labels(pi: &PyTamePair, tau: &PyTamePair) -> PyResult<(u32, u32, Vec<u64>, Vec<u64>)> {
    let (rp, rt) = (
        pair_to_rep(&pi.inner).map_err(err)?,
        pair_to_rep(&tau.inner).map_err(err)?,
    );
    Ok((
        rp.n(),
        rt.n(),
        rp.cusp().orbit().exponents().to_vec(),
        tau_param(&rt).labels(),
    ))
}

/// Step-by-step recomputation through base change and induction, as a dict.
#[pyfunction]
#[pyo3(signature = (pi, tau, psi_shift = 1, tol = 1e-6))]
fn verify_chain(py: Python<'_>, pi: &PyTamePair, tau: &PyTamePair, psi_shift: u64, tol: f64) -> PyResult<Py<PyAny>> {
    let q = same_q(pi, tau)?;
    let tower = build_tower(q, lcm(pi.inner.degree(), tau.inner.degree()), 0, DEFAULT_FIELD_LIMIT)?;
    let psi = psi(&tower, psi_shift)?;
    let report =
        gamma_local::verify_chain(&tower, &pi.inner, &tau.inner, &psi, DEFAULT_FIELD_LIMIT, tol).map_err(err)?;
    json_to_py(
        py,
        &serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))?,
    )
}

/// `γ(s, χ, ψ)` for the unramified character with `χ(ϖ) = c` of the field
/// with residue size `q^m_base`.
#[pyfunction]
#[pyo3(signature = (q, c, s, m_base = 1))]
fn gamma_unramified(q: u64, c: Complex64, s: Complex64, m_base: u32) -> PyResult<Complex64> {
    let f = gamma_local::gamma_unramified_char(q, c, m_base).map_err(err)?;
    Ok(f.eval_at_s((q as f64).powi(m_base as i32), s))
}

/// Runs one verification suite and returns its report as a dict.
#[pyfunction]
#[pyo3(signature = (suite, size_class = "quick", seed = 0, tol_rel = 1e-6))]
fn run_suite(py: Python<'_>, suite: &str, size_class: &str, seed: u64, tol_rel: f64) -> PyResult<Py<PyAny>> {
    let suite: Suite = suite.parse().map_err(PyValueError::new_err)?;
    let size = match size_class {
        "quick" => SizeClass::Quick,
        "full" => SizeClass::Full,
        other => return Err(PyValueError::new_err(format!("unknown size class {other:?}"))),
    };
    let mut cfg = SuiteConfig::new(size);
    cfg.seed = seed;
    cfg.tol_rel = tol_rel;
    let report = py.detach(|| verify::run_suite(suite, &cfg)).map_err(err)?;
    json_to_py(
        py,
        &serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))?,
    )
}

/// Names accepted by [`run_suite`].
#[pyfunction]
fn suite_names() -> Vec<&'static str> {
    Suite::ALL.iter().map(|s| s.name()).collect()
}

#[pymodule(name = "cuspgamma")]
fn cuspgamma_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTower>()?;
    m.add_class::<PyCuspidal>()?;
    m.add_class::<PyTamePair>()?;
    m.add_function(wrap_pyfunction!(enumerate_regular_orbits, m)?)?;
    m.add_function(wrap_pyfunction!(py_gamma_finite, m)?)?;
    m.add_function(wrap_pyfunction!(py_gamma_local, m)?)?;
    m.add_function(wrap_pyfunction!(residual_labels, m)?)?;
    m.add_function(wrap_pyfunction!(verify_chain, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_unramified, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(suite_names, m)?)?;
    Ok(())
}
