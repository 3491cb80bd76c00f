//! Charge and energy density profiles along the leads, including the Friedel
//! oscillations generated by the vertex.
//!
//! The oscillating integrand is 2 Re[S_ii(k) e^{-2ikx}] d_i(k); adaptive
//! quadrature is kept honest by splitting at the half-period momenta
//! k_j = j pi / (2x). The energy density carries the dispersion weight
//! omega(k); its homogeneous piece is the junction Stefan-Boltzmann law,
//! with a polylogarithm closed form at criticality.

use std::f64::consts::PI;

use super::SchrodingerSystem;
use crate::error::{Error, Result};
use crate::numerics::special::polylog_neg_exp;
use crate::observable::{ChargeDensityPoint, EnergyDensityPoint, LeadVector, ObservableKind};
use crate::reservoir::Statistics;

/// Consistency tolerance for the internal eq = total + neq cross-check.
const DENSITY_CONSISTENCY_TOL: f64 = 1e-9;

impl SchrodingerSystem {
    fn oscillation_breakpoints(&self, i: usize, x: f64) -> Vec<f64> {
        let top = self.window_edge(i);
        let step = PI / (2.0 * x);
        let count = ((top / step).ceil() as usize).min(200_000);
        (1..=count).map(|j| j as f64 * step).collect()
    }

    fn check_density_consistency(&self, total: f64, eq: f64, neq: f64) -> Result<f64> {
        let residual = (total + neq - eq).abs();
        let scale = total.abs().max(eq.abs()).max(1.0);
        if residual > (DENSITY_CONSISTENCY_TOL * scale).max(1e-12) {
            return Err(Error::internal(format!(
                "density split failed its cross-check: |total + neq - eq| = {residual:.3e}"
            )));
        }
        Ok(residual)
    }

    /// Charge density at distance x > 0 on lead i, decomposed into the
    /// oscillating part, the isolated-lead equilibrium reference and the
    /// x-independent non-equilibrium shift.
    pub fn charge_density_profile(&self, i: usize, x: f64) -> Result<ChargeDensityPoint> {
        if !(x > 0.0) {
            return Err(Error::domain(format!(
                "density profile requires x > 0 (the vertex itself is excluded), got x = {x}"
            )));
        }
        let note = self.density_note()?;
        let n = self.n();
        let e = self.charge;
        let bps = self.oscillation_breakpoints(i, x);

        let osc = self.lead_term(
            i,
            |k| {
                let s = self.s_at(k).expect("S(k) evaluable for k > 0");
                (s[(i, i)] * num_complex::Complex64::from_polar(1.0, -2.0 * k * x)).re / PI
            },
            &bps,
        )?;
        let homogeneous = self.lead_term(i, |_| 1.0 / (2.0 * PI), &[])?;
        let mut transmitted = crate::numerics::quad::QuadratureResult::zero();
        let mut shift = crate::numerics::quad::QuadratureResult::zero();
        for j in 0..n {
            let t = self.lead_term(
                j,
                |k| {
                    let s = self.s_at(k).expect("S(k) evaluable for k > 0");
                    s[(i, j)].norm_sqr() / (2.0 * PI)
                },
                &[],
            )?;
            transmitted = transmitted.accumulate(&t);
            let d = self.lead_term(
                j,
                |k| {
                    let s = self.s_at(k).expect("S(k) evaluable for k > 0");
                    let delta = if i == j { 1.0 } else { 0.0 };
                    (delta - s[(i, j)].norm_sqr()) / (2.0 * PI)
                },
                &[],
            )?;
            shift = shift.accumulate(&d);
        }

        let total = e * (osc.value + homogeneous.value + transmitted.value);
        let oscillating = e * osc.value;
        let equilibrium_reference = e * (osc.value + 2.0 * homogeneous.value);
        let nonequilibrium_shift = e * shift.value;
        let consistency_residual =
            self.check_density_consistency(total, equilibrium_reference, nonequilibrium_shift)?;

        Ok(ChargeDensityPoint {
            total,
            oscillating,
            equilibrium_reference,
            nonequilibrium_shift,
            consistency_residual,
            converged: osc.converged
                && homogeneous.converged
                && transmitted.converged
                && shift.converged,
            note,
        })
    }

    /// Energy density at distance x > 0 on lead i: the total profile, its
    /// homogeneous Stefan-Boltzmann part and the non-equilibrium shift.
    pub fn energy_density_profile(&self, i: usize, x: f64) -> Result<EnergyDensityPoint> {
        if !(x > 0.0) {
            return Err(Error::domain(format!(
                "density profile requires x > 0 (the vertex itself is excluded), got x = {x}"
            )));
        }
        let note = self.density_note()?;
        let bps = self.oscillation_breakpoints(i, x);

        let osc = self.lead_term(
            i,
            |k| {
                let s = self.s_at(k).expect("S(k) evaluable for k > 0");
                self.omega(k)
                    * (s[(i, i)] * num_complex::Complex64::from_polar(1.0, -2.0 * k * x)).re
                    / PI
            },
            &bps,
        )?;
        let sb = self.stefan_boltzmann_quadrature_lead(i)?;
        let shift = self.energy_shift_lead(i)?;

        Ok(EnergyDensityPoint {
            total: osc.value + sb.value,
            stefan_boltzmann: sb.value,
            nonequilibrium_shift: shift.value,
            converged: osc.converged && sb.converged && shift.converged,
            note,
        })
    }

    fn stefan_boltzmann_quadrature_lead(
        &self,
        i: usize,
    ) -> Result<crate::numerics::quad::QuadratureResult> {
        let n = self.n();
        let mut acc = crate::numerics::quad::QuadratureResult::zero();
        for j in 0..n {
            let t = self.lead_term(
                j,
                |k| {
                    let s = self.s_at(k).expect("S(k) evaluable for k > 0");
                    let delta = if i == j { 1.0 } else { 0.0 };
                    self.omega(k) * (delta + s[(i, j)].norm_sqr()) / (2.0 * PI)
                },
                &[],
            )?;
            acc = acc.accumulate(&t);
        }
        Ok(acc)
    }

    fn energy_shift_lead(&self, i: usize) -> Result<crate::numerics::quad::QuadratureResult> {
        let n = self.n();
        let mut acc = crate::numerics::quad::QuadratureResult::zero();
        for j in 0..n {
            let t = self.lead_term(
                j,
                |k| {
                    let s = self.s_at(k).expect("S(k) evaluable for k > 0");
                    let delta = if i == j { 1.0 } else { 0.0 };
                    self.omega(k) * (delta - s[(i, j)].norm_sqr()) / (2.0 * PI)
                },
                &[],
            )?;
            acc = acc.accumulate(&t);
        }
        Ok(acc)
    }

    /// Homogeneous (Stefan-Boltzmann) energy density per lead, by quadrature.
    pub fn stefan_boltzmann_quadrature(&self) -> Result<LeadVector> {
        let n = self.n();
        let _ = self.density_note()?;
        let mut values = vec![0.0; n];
        let mut errors = vec![0.0; n];
        let mut converged = true;
        for i in 0..n {
            let r = self.stefan_boltzmann_quadrature_lead(i)?;
            values[i] = r.value;
            errors[i] = r.error_estimate;
            converged &= r.converged;
        }
        Ok(LeadVector {
            kind: ObservableKind::EnergyDensity,
            values,
            errors,
            converged,
            note: self.density_note()?,
        })
    }

    /// Stefan-Boltzmann law at criticality:
    /// eps_i = -(1/4) sqrt(m / 2 pi) sum_j (delta_ij + |U_ij|^2)
    ///         beta_j^{-3/2} Li_{3/2}(-e^{beta_j mu_j}),
    /// with the sharp-window value (2 m mu^+)^{3/2} / (12 pi m) on
    /// zero-temperature leads.
    pub fn stefan_boltzmann_critical(&self) -> Result<LeadVector> {
        let u = self
            .coupling()
            .critical_matrix()
            .ok_or_else(|| {
                Error::domain("Stefan-Boltzmann closed form requires a scale-invariant coupling")
            })?
            .clone();
        if self.bank().statistics() != Statistics::Fermi {
            return Err(Error::domain(
                "the polylogarithm closed form is stated for Fermi statistics",
            ));
        }
        let n = self.n();
        let m = self.mass();
        let mut per_lead = Vec::with_capacity(n);
        for j in 0..n {
            let (b, mu) = (self.bank().beta(j), self.bank().mu(j));
            let term = if self.bank().is_zero_temperature(j) {
                (2.0 * m * mu.max(0.0)).powf(1.5) / (12.0 * PI * m)
            } else {
                -0.25 * (m / (2.0 * PI)).sqrt() * b.powf(-1.5) * polylog_neg_exp(1.5, b * mu)?
            };
            per_lead.push(term);
        }
        let values: Vec<f64> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let delta = if i == j { 1.0 } else { 0.0 };
                        (delta + u.entry(i, j).norm_sqr()) * per_lead[j]
                    })
                    .sum()
            })
            .collect();
        Ok(LeadVector {
            kind: ObservableKind::EnergyDensity,
            values,
            errors: vec![0.0; n],
            converged: true,
            note: None,
        })
    }
}

/// Zero-temperature Friedel oscillation of the charge density for a
/// scale-invariant coupling with real U_ii:
/// rho_osc(x) = e U_ii sin(2 x sqrt(2 m mu)) / (2 pi x).
///
/// The prefactor follows from integrating the defining window integral
/// int_0^{k_F} (dk/2pi) 2 U_ii cos(2kx); the amplitude decays as 1/x.
pub fn friedel_oscillation_closed_form(
    charge: f64,
    mass: f64,
    u_ii: f64,
    mu: f64,
    x: f64,
) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("Friedel closed form requires x > 0"));
    }
    if mu < 0.0 {
        return Ok(0.0);
    }
    let kf = (2.0 * mass * mu).sqrt();
    Ok(charge * u_ii * (2.0 * x * kf).sin() / (2.0 * PI * x))
}
