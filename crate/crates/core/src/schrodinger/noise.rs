//! Zero-frequency current noise: the manifestly symmetric quadrature kernel,
//! the scale-invariant closed forms for equal temperatures, the shot-noise
//! limit and the two-lead thermal-noise envelope.

use std::cell::Cell;
use std::f64::consts::PI;

use super::{noise_quartic, SchrodingerSystem};
use crate::error::{Error, Result};
use crate::numerics::quad::{integrate_finite, QuadratureSettings};
use crate::numerics::special::{coth_half, exp_integral_i, sigmoid, softplus};
use crate::observable::{LeadMatrix, ObservableKind, ThermalNoiseBounds};
use crate::reservoir::{ReservoirBank, Statistics};
use crate::vertex::{TwoLeadParams, UnitaryMatrix};

/// Equal-temperature pair weight of the Fermi closed form:
/// (e^{a_l} + e^{a_m})/(e^{a_l} - e^{a_m}) * ln[(1 + e^{a_l})/(1 + e^{a_m})],
/// continued by its limit 2 e^a/(1 + e^a) across a_l = a_m.
fn fermi_pair_weight(a_l: f64, a_m: f64) -> f64 {
    let d = a_l - a_m;
    if d.abs() < 1e-9 {
        2.0 * sigmoid(0.5 * (a_l + a_m))
    } else {
        coth_half(d) * (softplus(a_l) - softplus(a_m))
    }
}

/// e^a / (1 - e^a) for a < 0.
fn bose_weight(a: f64) -> f64 {
    1.0 / (-a).exp_m1()
}

/// Bose analogue of the pair weight, with logs of (1 - e^a).
fn bose_pair_weight(a_l: f64, a_m: f64) -> f64 {
    let d = a_l - a_m;
    if d.abs() < 1e-9 {
        2.0 * bose_weight(0.5 * (a_l + a_m))
    } else {
        coth_half(d) * ((-a_m.exp()).ln_1p() - (-a_l.exp()).ln_1p())
    }
}

/// Exact zero-frequency noise of a scale-invariant junction with equal
/// inverse temperatures and arbitrary chemical potentials.
pub fn noise_critical_closed_form(
    u: &UnitaryMatrix,
    bank: &ReservoirBank,
    charge: f64,
) -> Result<LeadMatrix> {
    let n = u.n();
    if bank.n() != n {
        return Err(Error::validation(
            "boundary matrix and bank lead counts differ",
        ));
    }
    let beta = bank.beta(0);
    if !beta.is_finite() {
        return Err(Error::domain(
            "the equal-temperature closed form needs finite beta; use the shot-noise limit at T = 0",
        ));
    }
    if bank
        .betas()
        .iter()
        .any(|&b| (b - beta).abs() > 1e-12 * beta)
    {
        return Err(Error::domain(
            "closed-form noise requires equal inverse temperatures; use the quadrature path",
        ));
    }
    let a: Vec<f64> = (0..n).map(|i| beta * bank.mu(i)).collect();
    let (occ, pair): (Vec<f64>, Box<dyn Fn(usize, usize) -> f64>) = match bank.statistics() {
        Statistics::Fermi => (
            a.iter().map(|&ai| sigmoid(ai)).collect(),
            Box::new({
                let a = a.clone();
                move |l: usize, m: usize| fermi_pair_weight(a[l], a[m])
            }),
        ),
        Statistics::Bose => (
            a.iter().map(|&ai| bose_weight(ai)).collect(),
            Box::new({
                let a = a.clone();
                move |l: usize, m: usize| bose_pair_weight(a[l], a[m])
            }),
        ),
    };

    let pref = charge * charge / (2.0 * PI * beta);
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut val = 0.0;
            if i == j {
                val += occ[i];
            }
            val -= u.entry(i, j).norm_sqr() * occ[j];
            val -= u.entry(j, i).norm_sqr() * occ[i];
            for l in 0..n {
                val += u.entry(i, l).norm_sqr() * u.entry(j, l).norm_sqr() * occ[l];
            }
            let mut cross = num_complex::Complex64::new(0.0, 0.0);
            for l in 0..n {
                for m in 0..n {
                    if l == m {
                        continue;
                    }
                    let coeff =
                        u.entry(i, l).conj() * u.entry(j, l) * u.entry(j, m).conj() * u.entry(i, m);
                    cross += coeff * (0.5 * pair(l, m));
                }
            }
            values[i][j] = pref * (val + cross.re);
        }
    }
    Ok(LeadMatrix {
        kind: ObservableKind::Noise,
        errors: vec![vec![0.0; n]; n],
        converged: true,
        note: None,
        values,
    })
}

/// Shot noise of a scale-invariant junction (the zero-temperature limit of
/// the closed form): +(e^2/4pi) sum_{l != m} for fermions, opposite sign for
/// bosons.
pub fn shot_noise(
    u: &UnitaryMatrix,
    charge: f64,
    mu: &[f64],
    statistics: Statistics,
) -> Result<LeadMatrix> {
    let n = u.n();
    if mu.len() != n {
        return Err(Error::validation(format!(
            "{} chemical potentials for {} leads",
            mu.len(),
            n
        )));
    }
    let sign = match statistics {
        Statistics::Fermi => 1.0,
        Statistics::Bose => -1.0,
    };
    let pref = sign * charge * charge / (4.0 * PI);
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for l in 0..n {
                for m in 0..n {
                    if l == m {
                        continue;
                    }
                    let coeff =
                        u.entry(i, l).conj() * u.entry(j, l) * u.entry(j, m).conj() * u.entry(i, m);
                    acc += coeff * (mu[l] - mu[m]).abs();
                }
            }
            values[i][j] = pref * acc.re;
        }
    }
    Ok(LeadMatrix {
        kind: ObservableKind::Noise,
        errors: vec![vec![0.0; n]; n],
        converged: true,
        note: None,
        values,
    })
}

/// Two-lead thermal noise (eta_2 = 0, equal temperatures, mu = 0): the
/// quadrature value of the xi-form integral together with its analytic
/// envelope C I(a)/4 <= P <= C I(a), C = [e eta sin(theta)]^2 / (2 pi m),
/// a = beta eta^2 / (2 m). The envelope follows from 1 <= (1 + xi)^2 <= 4
/// under the integral; it carries the T and ln(T) asymptotics at low and
/// high temperature.
pub fn thermal_noise_bounds_two_lead(
    params: &TwoLeadParams,
    mass: f64,
    charge: f64,
    beta: f64,
) -> Result<ThermalNoiseBounds> {
    if params.eta2 != 0.0 {
        return Err(Error::domain(
            "the thermal-noise envelope is derived for eta_2 = 0",
        ));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain("thermal noise needs finite beta > 0"));
    }
    if !(mass > 0.0) {
        return Err(Error::domain("mass must be positive"));
    }
    let eta = params.eta1;
    let s_theta = params.theta.sin();
    if eta == 0.0 || s_theta == 0.0 {
        return Ok(ThermalNoiseBounds {
            value: 0.0,
            lower: 0.0,
            upper: 0.0,
            converged: true,
            note: Some("leads are isolated (eta = 0 or theta = 0); noise vanishes".into()),
        });
    }
    let a = beta * eta * eta / (2.0 * mass);
    let c = (charge * eta * s_theta).powi(2) / (2.0 * PI * mass);
    let settings = QuadratureSettings {
        rel_tol: 1e-12,
        abs_tol: 1e-300,
        max_subdivisions: 200,
        tail_decay_scale: 1.0,
    };
    let integral = integrate_finite(
        |xi: f64| 1.0 / ((1.0 + xi) * (1.0 + xi) * (a - xi.ln())),
        0.0,
        1.0,
        &settings,
    )?;
    let envelope = exp_integral_i(a)?;
    Ok(ThermalNoiseBounds {
        value: c * integral.value,
        lower: 0.25 * c * envelope,
        upper: c * envelope,
        converged: integral.converged,
        note: None,
    })
}

/// Thermal-noise envelope for a configured system: requires the two-lead
/// coupling with eta_2 = 0, Fermi statistics, equal finite temperatures and
/// vanishing chemical potentials.
pub fn thermal_noise_bounds_two_lead_from_config(
    sys: &SchrodingerSystem,
) -> Result<ThermalNoiseBounds> {
    let params = match sys.coupling() {
        crate::vertex::Coupling::TwoLead(p) => *p,
        _ => {
            return Err(Error::domain(
                "two_lead_thermal_noise needs a two_lead coupling",
            ))
        }
    };
    let bank = sys.bank();
    if bank.statistics() != Statistics::Fermi {
        return Err(Error::domain(
            "two_lead_thermal_noise is a Fermi observable",
        ));
    }
    let beta = bank.beta(0);
    if !beta.is_finite() || (bank.beta(1) - beta).abs() > 1e-12 * beta {
        return Err(Error::domain(
            "two_lead_thermal_noise needs equal finite temperatures",
        ));
    }
    if bank.mu(0) != 0.0 || bank.mu(1) != 0.0 {
        return Err(Error::domain(
            "two_lead_thermal_noise is derived at mu = (0, 0)",
        ));
    }
    thermal_noise_bounds_two_lead(&params, sys.mass(), sys.charge(), beta)
}

impl SchrodingerSystem {
    /// Zero-frequency noise power by quadrature of the manifestly symmetric
    /// kernel, valid for any coupling, statistics and reservoir data.
    pub fn noise_zero_freq(&self) -> Result<LeadMatrix> {
        let n = self.n();
        let pref = self.charge() * self.charge() / (self.mass() * 2.0 * PI);
        let worst_imag = Cell::new(0.0f64);
        let mut values = vec![vec![0.0; n]; n];
        let mut errors = vec![vec![0.0; n]; n];
        let mut converged = true;

        for i in 0..n {
            for j in 0..n {
                let r = self.full_range_integral(
                    |k| {
                        let s = self.s_at(k).expect("S(k) evaluable for k > 0");
                        let w = self.omega(k);
                        let d: Vec<f64> = (0..n).map(|l| self.bank().occupation_d(l, w)).collect();
                        let c: Vec<f64> = (0..n).map(|l| self.bank().complement_c(l, w)).collect();
                        let mut val = 0.0;
                        if i == j {
                            val += d[i] * c[i];
                        }
                        val -= s[(i, j)].norm_sqr() * d[j] * c[j];
                        val -= s[(j, i)].norm_sqr() * d[i] * c[i];
                        let mut cross = num_complex::Complex64::new(0.0, 0.0);
                        for l in 0..n {
                            for m in 0..n {
                                cross += noise_quartic(&s, i, j, l, m)
                                    * (0.5 * (c[l] * d[m] + c[m] * d[l]));
                            }
                        }
                        worst_imag.set(worst_imag.get().max(cross.im.abs()));
                        pref * k * (val + cross.re)
                    },
                    &[],
                )?;
                values[i][j] = r.value;
                errors[i][j] = r.error_estimate;
                converged &= r.converged;
            }
        }
        if worst_imag.get() > 1e-10 {
            return Err(Error::internal(format!(
                "noise kernel acquired an imaginary part {:.3e}",
                worst_imag.get()
            )));
        }
        Ok(LeadMatrix {
            kind: ObservableKind::Noise,
            values,
            errors,
            converged,
            note: None,
        })
    }

    /// Closed-form noise for this system's scale-invariant coupling.
    pub fn noise_critical_closed_form(&self) -> Result<LeadMatrix> {
        let u = self.coupling().critical_matrix().ok_or_else(|| {
            Error::domain("closed-form noise requires a scale-invariant coupling")
        })?;
        let dressed = match self.gauge_phases() {
            Some(g) => crate::vertex::gauge_dress_unitary(u, g)?,
            None => u.clone(),
        };
        noise_critical_closed_form(&dressed, self.bank(), self.charge())
    }

    /// Shot noise for this system's scale-invariant coupling.
    pub fn shot_noise(&self) -> Result<LeadMatrix> {
        let u = self
            .coupling()
            .critical_matrix()
            .ok_or_else(|| Error::domain("shot noise requires a scale-invariant coupling"))?;
        let dressed = match self.gauge_phases() {
            Some(g) => crate::vertex::gauge_dress_unitary(u, g)?,
            None => u.clone(),
        };
        shot_noise(
            &dressed,
            self.charge(),
            self.bank().mus(),
            self.bank().statistics(),
        )
    }
}
