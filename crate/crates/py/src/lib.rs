//! Python bindings: junction builders and the main observables, plus the
//! special functions. Complex matrices cross the boundary as nested lists of
//! Python complex numbers; zero temperature is float('inf') for beta.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use stargraph_transport::dirac::DiracSystem;
use stargraph_transport::error::Error;
use stargraph_transport::numerics::special;
use stargraph_transport::reservoir::{DiracReservoirBank, ReservoirBank, Statistics};
use stargraph_transport::schrodinger::{
    friedel_oscillation_closed_form, steady_current_limits, thermal_noise_bounds_two_lead,
    SchrodingerSystem,
};
use stargraph_transport::vertex::{
    Coupling, GaugePhases, TwoLeadParams, UnitaryMatrix, VertexCoupling,
};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Validation(_) | Error::Domain(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn matrix_to_py(m: &stargraph_transport::linalg::CMatrix) -> Vec<Vec<Complex64>> {
    let n = m.n();
    (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)]).collect())
        .collect()
}

fn parse_statistics(s: &str) -> PyResult<Statistics> {
    match s {
        "fermi" => Ok(Statistics::Fermi),
        "bose" => Ok(Statistics::Bose),
        other => Err(PyValueError::new_err(format!(
            "statistics must be 'fermi' or 'bose', got '{other}'"
        ))),
    }
}

/// A Schrödinger junction: boundary matrix (or two-lead parameters), one
/// reservoir per lead, and the transport observables.
#[pyclass]
struct SchrodingerJunction {
    inner: SchrodingerSystem,
}

#[pymethods]
impl SchrodingerJunction {
    /// Build from an explicit boundary pair (U, lambda) or, with
    /// critical=True, from the scale-invariant S = U junction.
    #[new]
    #[pyo3(signature = (u, beta, mu, *, mass=1.0, charge=1.0, statistics="fermi",
                        lam=None, critical=false, gauge=None, override_bound_states=false))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        u: Vec<Vec<Complex64>>,
        beta: Vec<f64>,
        mu: Vec<f64>,
        mass: f64,
        charge: f64,
        statistics: &str,
        lam: Option<f64>,
        critical: bool,
        gauge: Option<Vec<f64>>,
        override_bound_states: bool,
    ) -> PyResult<Self> {
        let unitary = UnitaryMatrix::new(&u).map_err(to_py_err)?;
        let coupling = if critical {
            Coupling::Critical(unitary)
        } else {
            let lambda = lam.ok_or_else(|| {
                PyValueError::new_err("non-critical junctions need the scale parameter lam")
            })?;
            Coupling::Spectral(VertexCoupling::new(unitary, lambda).map_err(to_py_err)?)
        };
        let bank =
            ReservoirBank::new(beta, mu, parse_statistics(statistics)?).map_err(to_py_err)?;
        let phases = match gauge {
            Some(g) => Some(GaugePhases::new(g).map_err(to_py_err)?),
            None => None,
        };
        let mut inner =
            SchrodingerSystem::new(mass, charge, coupling, bank, phases).map_err(to_py_err)?;
        if override_bound_states {
            inner = inner.with_bound_state_override();
        }
        Ok(SchrodingerJunction { inner })
    }

    /// Two-lead junction from the general (eta1, eta2, theta, phi) family.
    #[staticmethod]
    #[pyo3(signature = (eta1, eta2, theta, phi, beta, mu, *, mass=1.0, charge=1.0, statistics="fermi"))]
    #[allow(clippy::too_many_arguments)]
    fn two_lead(
        eta1: f64,
        eta2: f64,
        theta: f64,
        phi: f64,
        beta: Vec<f64>,
        mu: Vec<f64>,
        mass: f64,
        charge: f64,
        statistics: &str,
    ) -> PyResult<Self> {
        let params = TwoLeadParams::new(eta1, eta2, theta, phi).map_err(to_py_err)?;
        let bank =
            ReservoirBank::new(beta, mu, parse_statistics(statistics)?).map_err(to_py_err)?;
        let inner = SchrodingerSystem::new(mass, charge, Coupling::TwoLead(params), bank, None)
            .map_err(to_py_err)?;
        Ok(SchrodingerJunction { inner })
    }

    fn smatrix(&self, k: f64) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(matrix_to_py(&self.inner.s_at(k).map_err(to_py_err)?))
    }

    fn bound_state_free(&self) -> bool {
        self.inner.bound_state_free()
    }

    fn steady_current(&self) -> PyResult<Vec<f64>> {
        Ok(self.inner.steady_current().map_err(to_py_err)?.values)
    }

    fn steady_current_quadrature(&self) -> PyResult<Vec<f64>> {
        Ok(self
            .inner
            .steady_current_quadrature()
            .map_err(to_py_err)?
            .values)
    }

    fn conductance(&self) -> PyResult<Vec<Vec<f64>>> {
        Ok(self.inner.conductance().map_err(to_py_err)?.values)
    }

    fn heat_current(&self) -> PyResult<Vec<f64>> {
        Ok(self.inner.heat_current().map_err(to_py_err)?.values)
    }

    fn noise(&self) -> PyResult<Vec<Vec<f64>>> {
        Ok(self.inner.noise_zero_freq().map_err(to_py_err)?.values)
    }

    fn noise_critical_closed_form(&self) -> PyResult<Vec<Vec<f64>>> {
        Ok(self
            .inner
            .noise_critical_closed_form()
            .map_err(to_py_err)?
            .values)
    }

    fn shot_noise(&self) -> PyResult<Vec<Vec<f64>>> {
        Ok(self.inner.shot_noise().map_err(to_py_err)?.values)
    }

    /// (total, oscillating, equilibrium_reference, nonequilibrium_shift).
    fn charge_density(&self, lead: usize, x: f64) -> PyResult<(f64, f64, f64, f64)> {
        if lead == 0 || lead > self.inner.n() {
            return Err(PyValueError::new_err("leads are numbered from 1"));
        }
        let p = self
            .inner
            .charge_density_profile(lead - 1, x)
            .map_err(to_py_err)?;
        Ok((
            p.total,
            p.oscillating,
            p.equilibrium_reference,
            p.nonequilibrium_shift,
        ))
    }

    /// (total, stefan_boltzmann, nonequilibrium_shift).
    fn energy_density(&self, lead: usize, x: f64) -> PyResult<(f64, f64, f64)> {
        if lead == 0 || lead > self.inner.n() {
            return Err(PyValueError::new_err("leads are numbered from 1"));
        }
        let p = self
            .inner
            .energy_density_profile(lead - 1, x)
            .map_err(to_py_err)?;
        Ok((p.total, p.stefan_boltzmann, p.nonequilibrium_shift))
    }
}

/// A massless Dirac junction with particle and antiparticle potentials.
#[pyclass]
struct DiracJunction {
    inner: DiracSystem,
}

#[pymethods]
impl DiracJunction {
    #[new]
    #[pyo3(signature = (u, beta, mu, mu_tilde, *, charge=1.0, gauge=None))]
    fn new(
        u: Vec<Vec<Complex64>>,
        beta: Vec<f64>,
        mu: Vec<f64>,
        mu_tilde: Vec<f64>,
        charge: f64,
        gauge: Option<Vec<f64>>,
    ) -> PyResult<Self> {
        let unitary = UnitaryMatrix::new(&u).map_err(to_py_err)?;
        let bank = DiracReservoirBank::new(beta, mu, mu_tilde).map_err(to_py_err)?;
        let phases = match gauge {
            Some(g) => Some(GaugePhases::new(g).map_err(to_py_err)?),
            None => None,
        };
        Ok(DiracJunction {
            inner: DiracSystem::new(charge, unitary, bank, phases).map_err(to_py_err)?,
        })
    }

    fn charge_conjugation_symmetric(&self) -> bool {
        self.inner.charge_conjugation_symmetric()
    }

    fn current(&self) -> PyResult<Vec<f64>> {
        Ok(self.inner.current().map_err(to_py_err)?.values)
    }

    fn conductance(&self) -> PyResult<Vec<Vec<f64>>> {
        Ok(self.inner.conductance().map_err(to_py_err)?.values)
    }

    fn heat_current(&self) -> PyResult<Vec<f64>> {
        Ok(self.inner.heat_current().map_err(to_py_err)?.values)
    }

    /// (charge_density_per_lead, energy_density_per_lead); x-independent.
    fn densities(&self) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let (rho, eps) = self.inner.densities().map_err(to_py_err)?;
        Ok((rho.values, eps.values))
    }

    fn noise(&self) -> PyResult<Vec<Vec<f64>>> {
        Ok(self.inner.noise_zero_freq().map_err(to_py_err)?.values)
    }
}

/// The general two-lead scattering matrix at momentum k.
#[pyfunction]
fn two_lead_smatrix(
    eta1: f64,
    eta2: f64,
    theta: f64,
    phi: f64,
    k: f64,
) -> PyResult<Vec<Vec<Complex64>>> {
    let p = TwoLeadParams::new(eta1, eta2, theta, phi).map_err(to_py_err)?;
    Ok(matrix_to_py(&p.smatrix(k)))
}

/// Polylogarithm Li_s(x) for x <= 0.
#[pyfunction]
fn polylog(s: f64, x: f64) -> PyResult<f64> {
    special::polylog(s, x).map_err(to_py_err)
}

/// I(a) = integral of 1/(a - ln xi) over (0, 1) = e^a E1(a).
#[pyfunction]
fn exp_integral_i(a: f64) -> PyResult<f64> {
    special::exp_integral_i(a).map_err(to_py_err)
}

/// Zero-temperature Friedel oscillation amplitude for real U_ii at
/// criticality: e U_ii sin(2 x sqrt(2 m mu)) / (2 pi x).
#[pyfunction]
fn friedel_closed_form(charge: f64, mass: f64, u_ii: f64, mu: f64, x: f64) -> PyResult<f64> {
    friedel_oscillation_closed_form(charge, mass, u_ii, mu, x).map_err(to_py_err)
}

/// High- and zero-temperature scale-invariant current limits
/// (J(high T), J(T = 0)); the first is exactly half the second.
#[pyfunction]
fn critical_current_limits(
    u: Vec<Vec<Complex64>>,
    charge: f64,
    mu: Vec<f64>,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let unitary = UnitaryMatrix::new(&u).map_err(to_py_err)?;
    let (high, zero) = steady_current_limits(&unitary, charge, &mu).map_err(to_py_err)?;
    Ok((high.values, zero.values))
}

/// Two-lead thermal noise (eta2 = 0, mu = 0): (value, lower, upper).
#[pyfunction]
#[pyo3(signature = (eta, theta, beta, *, mass=1.0, charge=1.0))]
fn thermal_noise(
    eta: f64,
    theta: f64,
    beta: f64,
    mass: f64,
    charge: f64,
) -> PyResult<(f64, f64, f64)> {
    let params = TwoLeadParams::new(eta, 0.0, theta, 0.0).map_err(to_py_err)?;
    let b = thermal_noise_bounds_two_lead(&params, mass, charge, beta).map_err(to_py_err)?;
    Ok((b.value, b.lower, b.upper))
}

#[pymodule]
fn stargraph_py(_py: Python<'_>, m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<SchrodingerJunction>()?;
    m.add_class::<DiracJunction>()?;
    m.add_function(wrap_pyfunction!(two_lead_smatrix, m)?)?;
    m.add_function(wrap_pyfunction!(polylog, m)?)?;
    m.add_function(wrap_pyfunction!(exp_integral_i, m)?)?;
    m.add_function(wrap_pyfunction!(friedel_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(critical_current_limits, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_noise, m)?)?;
    Ok(())
}
