//! Non-equilibrium steady-state observables of the Schrödinger junction:
//! steady charge current, conductance, heat current, density profiles and
//! zero-frequency noise.
//!
//! All integrals run over the outgoing momenta k > 0. Leads at (effective)
//! zero temperature contribute sharp Fermi windows [0, sqrt(2 m mu_j)];
//! finite-temperature leads are integrated over their occupied window plus an
//! exponentially mapped tail. Scale-invariant couplings additionally admit
//! closed forms, kept as separate entry points so the quadrature route can be
//! checked against them.

mod density;
mod noise;

pub use density::friedel_oscillation_closed_form;
pub use noise::{
    noise_critical_closed_form, shot_noise, thermal_noise_bounds_two_lead,
    thermal_noise_bounds_two_lead_from_config,
};

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::numerics::quad::{
    integrate_finite_split, integrate_semi_infinite_split, QuadratureResult, QuadratureSettings,
};
use crate::numerics::special::{li2_neg_exp, softplus};
use crate::observable::{LeadMatrix, LeadVector, ObservableKind};
use crate::reservoir::{ReservoirBank, Statistics};
use crate::vertex::{gauge_dress, Coupling, GaugePhases, UnitaryMatrix};

/// Occupations below e^{-FERMI_WINDOW} are dropped from the quadrature head;
/// the mapped tail picks up what little is left.
const FERMI_WINDOW: f64 = 45.0;

/// A quantum wire junction with Schrödinger bulk dynamics.
#[derive(Debug, Clone)]
pub struct SchrodingerSystem {
    mass: f64,
    charge: f64,
    coupling: Coupling,
    bank: ReservoirBank,
    gauge: Option<GaugePhases>,
    override_bound_states: bool,
    quad: QuadratureSettings,
}

impl SchrodingerSystem {
    pub fn new(
        mass: f64,
        charge: f64,
        coupling: Coupling,
        bank: ReservoirBank,
        gauge: Option<GaugePhases>,
    ) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::validation(format!(
                "mass must be positive and finite, got {mass}"
            )));
        }
        if !charge.is_finite() {
            return Err(Error::validation("charge must be finite"));
        }
        if coupling.n() != bank.n() {
            return Err(Error::Validation(format!(
                "coupling has {} leads but the reservoir bank has {}",
                coupling.n(),
                bank.n()
            )));
        }
        if let Some(g) = &gauge {
            if g.n() != coupling.n() {
                return Err(Error::Validation(format!(
                    "{} gauge phases for {} leads",
                    g.n(),
                    coupling.n()
                )));
            }
        }
        Ok(SchrodingerSystem {
            mass,
            charge,
            coupling,
            bank,
            gauge,
            override_bound_states: false,
            quad: QuadratureSettings::default(),
        })
    }

    /// Allow density observables on couplings with bound-state channels.
    /// Results then carry a warning note: the bound-state contribution to the
    /// densities is not included.
    pub fn with_bound_state_override(mut self) -> Self {
        self.override_bound_states = true;
        self
    }

    pub fn with_quadrature(mut self, settings: QuadratureSettings) -> Self {
        self.quad = settings;
        self
    }

    pub fn n(&self) -> usize {
        self.bank.n()
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn bank(&self) -> &ReservoirBank {
        &self.bank
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    pub fn gauge_phases(&self) -> Option<&GaugePhases> {
        self.gauge.as_ref()
    }

    pub fn bound_state_free(&self) -> bool {
        self.coupling.bound_state_free()
    }

    pub fn override_active(&self) -> bool {
        self.override_bound_states
    }

    pub(crate) fn omega(&self, k: f64) -> f64 {
        k * k / (2.0 * self.mass)
    }

    /// Scattering matrix at momentum k, gauge-dressed when phases are set.
    pub fn s_at(&self, k: f64) -> Result<CMatrix> {
        let s = self.coupling.smatrix(k)?;
        Ok(match &self.gauge {
            Some(g) => gauge_dress(&s, g),
            None => s,
        })
    }

    /// The boundary matrix for closed forms, gauge-dressed when phases are
    /// set, present only for scale-invariant couplings.
    fn critical_dressed(&self) -> Result<Option<UnitaryMatrix>> {
        match self.coupling.critical_matrix() {
            None => Ok(None),
            Some(u) => Ok(Some(match &self.gauge {
                Some(g) => crate::vertex::gauge_dress_unitary(u, g)?,
                None => u.clone(),
            })),
        }
    }

    pub(crate) fn quad_settings(&self) -> QuadratureSettings {
        let scale = self.bank.min_finite_beta().map_or(1.0, |b| 1.0 / b);
        self.quad.with_tail_scale(scale)
    }

    /// Fermi momentum of lead j (zero when mu_j <= 0).
    pub(crate) fn k_fermi(&self, j: usize) -> f64 {
        (2.0 * self.mass * self.bank.mu(j).max(0.0)).sqrt()
    }

    /// Upper edge of the occupied momentum window of lead j.
    pub(crate) fn window_edge(&self, j: usize) -> f64 {
        if self.bank.is_zero_temperature(j) {
            self.k_fermi(j)
        } else {
            (2.0 * self.mass * (self.bank.mu(j).max(0.0) + FERMI_WINDOW / self.bank.beta(j))).sqrt()
        }
    }

    /// Integral of w(k) * d_j(k) over outgoing momenta, with optional extra
    /// break points (oscillation half-periods).
    pub(crate) fn lead_term<W: Fn(f64) -> f64>(
        &self,
        j: usize,
        w: W,
        extra_breakpoints: &[f64],
    ) -> Result<QuadratureResult> {
        let settings = self.quad_settings();
        if self.bank.is_zero_temperature(j) {
            let kf = self.k_fermi(j);
            if kf <= 0.0 {
                return Ok(QuadratureResult::zero());
            }
            integrate_finite_split(w, 0.0, kf, extra_breakpoints, &settings)
        } else {
            let cut = self.window_edge(j);
            let mut bps: Vec<f64> = extra_breakpoints
                .iter()
                .copied()
                .filter(|&b| b < cut)
                .collect();
            bps.push(cut);
            integrate_semi_infinite_split(
                |k| w(k) * self.bank.occupation_d(j, self.omega(k)),
                &bps,
                &settings,
            )
        }
    }

    /// Integral over outgoing momenta of an integrand mixing several leads
    /// (noise kernels), split at every lead's window edge.
    pub(crate) fn full_range_integral<F: Fn(f64) -> f64>(
        &self,
        f: F,
        extra_breakpoints: &[f64],
    ) -> Result<QuadratureResult> {
        let settings = self.quad_settings();
        let n = self.n();
        let mut bps: Vec<f64> = extra_breakpoints.to_vec();
        for j in 0..n {
            bps.push(self.window_edge(j));
        }
        if (0..n).all(|j| self.bank.is_zero_temperature(j)) {
            let top = bps.iter().copied().fold(0.0f64, f64::max);
            if top <= 0.0 {
                return Ok(QuadratureResult::zero());
            }
            integrate_finite_split(f, 0.0, top, &bps, &settings)
        } else {
            integrate_semi_infinite_split(f, &bps, &settings)
        }
    }

    fn flow_note(&self) -> Option<String> {
        if self.bound_state_free() {
            None
        } else {
            Some(
                "coupling carries bound-state channels (some eta > 0); flows are unaffected".into(),
            )
        }
    }

    pub(crate) fn density_note(&self) -> Result<Option<String>> {
        if self.bound_state_free() {
            Ok(None)
        } else if self.override_bound_states {
            Ok(Some(
                "bound-state override active: densities omit the bound-state contribution".into(),
            ))
        } else {
            Err(Error::Validation(
                "coupling carries bound-state channels (some eta > 0); density observables \
                 require the explicit override"
                    .into(),
            ))
        }
    }

    /// Per-lead closed-form factor (1/beta_j) ln(1 + e^{beta_j mu_j}) that
    /// drives every scale-invariant Fermi flow; reduces to mu_j^+ at T = 0.
    fn critical_fermi_log(&self, j: usize) -> f64 {
        let (b, m) = (self.bank.beta(j), self.bank.mu(j));
        if b == f64::INFINITY {
            m.max(0.0)
        } else {
            softplus(b * m) / b
        }
    }

    /// Heat analogue: -Li2(-e^{beta mu})/beta^2, reducing to (mu^+)^2/2.
    fn critical_fermi_dilog(&self, j: usize) -> Result<f64> {
        let (b, m) = (self.bank.beta(j), self.bank.mu(j));
        if b == f64::INFINITY || b * m.abs().max(1.0) > 1e8 {
            Ok(0.5 * m.max(0.0).powi(2))
        } else {
            Ok(-li2_neg_exp(b * m)? / (b * b))
        }
    }

    /// Steady electric current J_i. Scale-invariant Fermi couplings evaluate
    /// the exact closed form; everything else integrates the
    /// Landauer-Büttiker kernel.
    pub fn steady_current(&self) -> Result<LeadVector> {
        if self.bank.statistics() == Statistics::Fermi {
            if let Some(u) = self.critical_dressed()? {
                let n = self.n();
                let logs: Vec<f64> = (0..n).map(|j| self.critical_fermi_log(j)).collect();
                let values: Vec<f64> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let delta = if i == j { 1.0 } else { 0.0 };
                                self.charge / (2.0 * PI)
                                    * (delta - u.entry(i, j).norm_sqr())
                                    * logs[j]
                            })
                            .sum()
                    })
                    .collect();
                return Ok(LeadVector {
                    kind: ObservableKind::Current,
                    errors: vec![0.0; n],
                    converged: true,
                    note: self.flow_note(),
                    values,
                });
            }
        }
        self.steady_current_quadrature()
    }

    /// Landauer-Büttiker integral for the current, regardless of criticality.
    pub fn steady_current_quadrature(&self) -> Result<LeadVector> {
        let n = self.n();
        let pref = self.charge / (self.mass * 2.0 * PI);
        let mut values = vec![0.0; n];
        let mut errors = vec![0.0; n];
        let mut converged = true;
        for i in 0..n {
            for j in 0..n {
                let delta = if i == j { 1.0 } else { 0.0 };
                let term = self.lead_term(
                    j,
                    |k| {
                        let s = self.s_at(k).expect("S(k) evaluable for k > 0");
                        pref * k * (delta - s[(i, j)].norm_sqr())
                    },
                    &[],
                )?;
                values[i] += term.value;
                errors[i] += term.error_estimate;
                converged &= term.converged;
            }
        }
        Ok(LeadVector {
            kind: ObservableKind::Current,
            values,
            errors,
            converged,
            note: self.flow_note(),
        })
    }

    /// Conductance tensor G_ij with the voltage convention V_j = mu_j / e.
    pub fn conductance(&self) -> Result<LeadMatrix> {
        let n = self.n();
        for j in 0..n {
            if self.bank.mu(j) == 0.0 {
                return Err(Error::Domain(format!(
                    "conductance uses the reservoir voltage V_j = mu_j / e; lead {} has mu = 0",
                    j + 1
                )));
            }
        }
        if self.bank.statistics() == Statistics::Fermi {
            if let Some(u) = self.critical_dressed()? {
                let mut values = vec![vec![0.0; n]; n];
                for i in 0..n {
                    for j in 0..n {
                        let delta = if i == j { 1.0 } else { 0.0 };
                        values[i][j] = self.charge * self.charge / (2.0 * PI)
                            * (delta - u.entry(i, j).norm_sqr())
                            * self.critical_fermi_log(j)
                            / self.bank.mu(j);
                    }
                }
                return Ok(LeadMatrix {
                    kind: ObservableKind::Conductance,
                    errors: vec![vec![0.0; n]; n],
                    converged: true,
                    note: self.flow_note(),
                    values,
                });
            }
        }
        let pref = self.charge * self.charge / (self.mass * 2.0 * PI);
        let mut values = vec![vec![0.0; n]; n];
        let mut errors = vec![vec![0.0; n]; n];
        let mut converged = true;
        for i in 0..n {
            for j in 0..n {
                let delta = if i == j { 1.0 } else { 0.0 };
                let term = self.lead_term(
                    j,
                    |k| {
                        let s = self.s_at(k).expect("S(k) evaluable for k > 0");
                        pref * k * (delta - s[(i, j)].norm_sqr())
                    },
                    &[],
                )?;
                values[i][j] = term.value / self.bank.mu(j);
                errors[i][j] = term.error_estimate / self.bank.mu(j).abs();
                converged &= term.converged;
            }
        }
        Ok(LeadMatrix {
            kind: ObservableKind::Conductance,
            values,
            errors,
            converged,
            note: self.flow_note(),
        })
    }

    /// Heat (energy) current T_i. Scale-invariant Fermi couplings use the
    /// dilogarithm closed form.
    pub fn heat_current(&self) -> Result<LeadVector> {
        if self.bank.statistics() == Statistics::Fermi {
            if let Some(u) = self.critical_dressed()? {
                let n = self.n();
                let mut dilogs = Vec::with_capacity(n);
                for j in 0..n {
                    dilogs.push(self.critical_fermi_dilog(j)?);
                }
                let values: Vec<f64> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let delta = if i == j { 1.0 } else { 0.0 };
                                (delta - u.entry(i, j).norm_sqr()) * dilogs[j] / (2.0 * PI)
                            })
                            .sum()
                    })
                    .collect();
                return Ok(LeadVector {
                    kind: ObservableKind::HeatCurrent,
                    errors: vec![0.0; n],
                    converged: true,
                    note: self.flow_note(),
                    values,
                });
            }
        }
        self.heat_current_quadrature()
    }

    /// Landauer-Büttiker integral for the heat current.
    pub fn heat_current_quadrature(&self) -> Result<LeadVector> {
        let n = self.n();
        let pref = 1.0 / (self.mass * 2.0 * PI);
        let mut values = vec![0.0; n];
        let mut errors = vec![0.0; n];
        let mut converged = true;
        for i in 0..n {
            for j in 0..n {
                let delta = if i == j { 1.0 } else { 0.0 };
                let term = self.lead_term(
                    j,
                    |k| {
                        let s = self.s_at(k).expect("S(k) evaluable for k > 0");
                        pref * k * self.omega(k) * (delta - s[(i, j)].norm_sqr())
                    },
                    &[],
                )?;
                values[i] += term.value;
                errors[i] += term.error_estimate;
                converged &= term.converged;
            }
        }
        Ok(LeadVector {
            kind: ObservableKind::HeatCurrent,
            values,
            errors,
            converged,
            note: self.flow_note(),
        })
    }
}

/// High- and zero-temperature limits of the scale-invariant steady current:
/// J_i(0, mu) = (e/4pi) sum_j (delta_ij - |U_ij|^2) mu_j and
/// J_i(inf, mu) = (e/2pi) sum_j (delta_ij - |U_ij|^2) mu_j, so the pair
/// satisfies J(0, mu) = J(inf, mu)/2 identically.
pub fn steady_current_limits(
    u: &UnitaryMatrix,
    charge: f64,
    mu: &[f64],
) -> Result<(LeadVector, LeadVector)> {
    let n = u.n();
    if mu.len() != n {
        return Err(Error::validation(format!(
            "{} chemical potentials for {} leads",
            mu.len(),
            n
        )));
    }
    let weighted: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    (delta - u.entry(i, j).norm_sqr()) * mu[j]
                })
                .sum()
        })
        .collect();
    let high_t = LeadVector {
        kind: ObservableKind::Current,
        values: weighted.iter().map(|w| charge * w / (4.0 * PI)).collect(),
        errors: vec![0.0; n],
        converged: true,
        note: None,
    };
    let zero_t = LeadVector {
        kind: ObservableKind::Current,
        values: weighted.iter().map(|w| charge * w / (2.0 * PI)).collect(),
        errors: vec![0.0; n],
        converged: true,
        note: None,
    };
    Ok((high_t, zero_t))
}

/// Quartic product of S-matrix entries entering the noise kernels.
pub(crate) fn noise_quartic(s: &CMatrix, i: usize, j: usize, l: usize, m: usize) -> Complex64 {
    s[(i, l)] * s[(j, l)].conj() * s[(j, m)] * s[(i, m)].conj()
}
