//! Massless Dirac junction observables: steady current, conductance, heat
//! flow, lead densities and zero-frequency noise, with independent particle
//! and antiparticle chemical potentials.
//!
//! The boundary condition is scale invariant, so every flow observable has a
//! closed form in logs and dilogarithms; quadrature over the kernel remains
//! available as the cross-check route and for unequal-temperature noise.
//! Gauge phases dress the boundary matrix exactly as in the Schrödinger case;
//! the electromagnetic coupling for Dirac leads is stated without formulas in
//! the source material, so this phase rule is an extrapolation.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::quad::{
    integrate_finite_split, integrate_semi_infinite_split, QuadratureResult, QuadratureSettings,
};
use crate::numerics::special::{li2_neg_exp, sigmoid, softplus};
use crate::observable::{LeadMatrix, LeadVector, ObservableKind};
use crate::reservoir::DiracReservoirBank;
use crate::vertex::{gauge_dress_unitary, GaugePhases, UnitaryMatrix};

/// Occupations below e^{-FERMI_WINDOW} are dropped from the quadrature head.
const FERMI_WINDOW: f64 = 45.0;

/// A quantum wire junction with massless Dirac bulk dynamics and the
/// dispersion omega(k) = |k|.
#[derive(Debug, Clone)]
pub struct DiracSystem {
    charge: f64,
    u: UnitaryMatrix,
    bank: DiracReservoirBank,
    gauge: Option<GaugePhases>,
    quad: QuadratureSettings,
}

impl DiracSystem {
    pub fn new(
        charge: f64,
        u: UnitaryMatrix,
        bank: DiracReservoirBank,
        gauge: Option<GaugePhases>,
    ) -> Result<Self> {
        if !charge.is_finite() {
            return Err(Error::validation("charge must be finite"));
        }
        if u.n() != bank.n() {
            return Err(Error::Validation(format!(
                "boundary matrix has {} leads but the reservoir bank has {}",
                u.n(),
                bank.n()
            )));
        }
        if let Some(g) = &gauge {
            if g.n() != u.n() {
                return Err(Error::Validation(format!(
                    "{} gauge phases for {} leads",
                    g.n(),
                    u.n()
                )));
            }
        }
        Ok(DiracSystem {
            charge,
            u,
            bank,
            gauge,
            quad: QuadratureSettings::default(),
        })
    }

    pub fn with_quadrature(mut self, settings: QuadratureSettings) -> Self {
        self.quad = settings;
        self
    }

    pub fn n(&self) -> usize {
        self.u.n()
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn bank(&self) -> &DiracReservoirBank {
        &self.bank
    }

    pub fn boundary_matrix(&self) -> &UnitaryMatrix {
        &self.u
    }

    /// Gauge-dressed boundary matrix used by every observable.
    pub fn dressed(&self) -> Result<UnitaryMatrix> {
        match &self.gauge {
            Some(g) => gauge_dress_unitary(&self.u, g),
            None => Ok(self.u.clone()),
        }
    }

    /// Derived flag: charge conjugation maps the state onto itself iff
    /// conj(U) = -U and mu_i = -mu_tilde_i on every lead.
    pub fn charge_conjugation_symmetric(&self) -> bool {
        let n = self.n();
        let mut matrix_ok = true;
        for i in 0..n {
            for j in 0..n {
                if self.u.entry(i, j).re.abs() > 1e-12 {
                    matrix_ok = false;
                }
            }
        }
        matrix_ok && (0..n).all(|i| (self.bank.mu(i) + self.bank.mu_tilde(i)).abs() <= 1e-12)
    }

    fn quad_settings(&self) -> QuadratureSettings {
        let scale = self.bank.min_finite_beta().map_or(1.0, |b| 1.0 / b);
        self.quad.with_tail_scale(scale)
    }

    /// (1/beta) ln[(1 + e^{beta mu})/(1 + e^{-beta mu_tilde})]; at T = 0 this
    /// is mu theta(mu) + mu_tilde theta(-mu_tilde), with theta(0) = 0.
    fn log_factor(&self, j: usize) -> f64 {
        let (b, mu, mt) = (self.bank.beta(j), self.bank.mu(j), self.bank.mu_tilde(j));
        if b == f64::INFINITY {
            let particle = if mu > 0.0 { mu } else { 0.0 };
            let anti = if mt < 0.0 { mt } else { 0.0 };
            particle + anti
        } else {
            (softplus(b * mu) - softplus(-b * mt)) / b
        }
    }

    /// beta^{-2} [Li2(-e^{beta mu}) + Li2(-e^{-beta mu_tilde})]; at T = 0 the
    /// surviving part is -(mu^2 theta(mu) + mu_tilde^2 theta(-mu_tilde))/2.
    fn dilog_factor(&self, j: usize) -> Result<f64> {
        let (b, mu, mt) = (self.bank.beta(j), self.bank.mu(j), self.bank.mu_tilde(j));
        if b == f64::INFINITY {
            let particle = if mu > 0.0 { mu * mu } else { 0.0 };
            let anti = if mt < 0.0 { mt * mt } else { 0.0 };
            Ok(-0.5 * (particle + anti))
        } else {
            Ok((li2_neg_exp(b * mu)? + li2_neg_exp(-b * mt)?) / (b * b))
        }
    }

    fn weighted_sum(&self, u: &UnitaryMatrix, sign: f64, factors: &[f64]) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let delta = if i == j { 1.0 } else { 0.0 };
                        (delta + sign * u.entry(i, j).norm_sqr()) * factors[j]
                    })
                    .sum()
            })
            .collect()
    }

    /// Steady electric current, exact closed form. Vanishes identically on
    /// charge-conjugation-symmetric systems; for mu_tilde = mu it is
    /// temperature independent.
    pub fn current(&self) -> Result<LeadVector> {
        let u = self.dressed()?;
        let n = self.n();
        let factors: Vec<f64> = (0..n)
            .map(|j| self.charge / (2.0 * PI) * self.log_factor(j))
            .collect();
        Ok(LeadVector {
            kind: ObservableKind::Current,
            values: self.weighted_sum(&u, -1.0, &factors),
            errors: vec![0.0; n],
            converged: true,
            note: None,
        })
    }

    /// High- and zero-temperature limits of the current: the pair
    /// ((e/4pi) sum (delta - |U|^2)(mu + mu_tilde),
    ///  (e/2pi) sum (delta - |U|^2)[mu theta(mu) + mu_tilde theta(-mu_tilde)]).
    pub fn current_limits(&self) -> Result<(LeadVector, LeadVector)> {
        let u = self.dressed()?;
        let n = self.n();
        let high: Vec<f64> = (0..n)
            .map(|j| self.charge / (4.0 * PI) * (self.bank.mu(j) + self.bank.mu_tilde(j)))
            .collect();
        let zero: Vec<f64> = (0..n)
            .map(|j| {
                let mu = self.bank.mu(j);
                let mt = self.bank.mu_tilde(j);
                let particle = if mu > 0.0 { mu } else { 0.0 };
                let anti = if mt < 0.0 { mt } else { 0.0 };
                self.charge / (2.0 * PI) * (particle + anti)
            })
            .collect();
        let make = |factors: Vec<f64>| LeadVector {
            kind: ObservableKind::Current,
            values: self.weighted_sum(&u, -1.0, &factors),
            errors: vec![0.0; n],
            converged: true,
            note: None,
        };
        Ok((make(high), make(zero)))
    }

    /// Conductance tensor with the reservoir voltage convention V_j = mu_j/e;
    /// not symmetric for generic reservoir data.
    pub fn conductance(&self) -> Result<LeadMatrix> {
        let u = self.dressed()?;
        let n = self.n();
        for j in 0..n {
            if self.bank.mu(j) == 0.0 {
                return Err(Error::Domain(format!(
                    "conductance uses the reservoir voltage V_j = mu_j / e; lead {} has mu = 0",
                    j + 1
                )));
            }
        }
        let mut values = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let delta = if i == j { 1.0 } else { 0.0 };
                values[i][j] = self.charge * self.charge / (2.0 * PI)
                    * (delta - u.entry(i, j).norm_sqr())
                    * self.log_factor(j)
                    / self.bank.mu(j);
            }
        }
        Ok(LeadMatrix {
            kind: ObservableKind::Conductance,
            values,
            errors: vec![vec![0.0; n]; n],
            converged: true,
            note: None,
        })
    }

    /// Heat current, exact dilogarithm closed form.
    pub fn heat_current(&self) -> Result<LeadVector> {
        let u = self.dressed()?;
        let n = self.n();
        let mut factors = Vec::with_capacity(n);
        for j in 0..n {
            factors.push(-self.dilog_factor(j)? / (2.0 * PI));
        }
        Ok(LeadVector {
            kind: ObservableKind::HeatCurrent,
            values: self.weighted_sum(&u, -1.0, &factors),
            errors: vec![0.0; n],
            converged: true,
            note: None,
        })
    }

    /// Charge and energy densities per lead. They follow from the current
    /// and heat closed forms by the sign replacement
    /// (delta_ij - |U_ij|^2) -> (delta_ij + |U_ij|^2) and are x-independent:
    /// the massless Dirac junction shows no Friedel oscillations.
    pub fn densities(&self) -> Result<(LeadVector, LeadVector)> {
        let u = self.dressed()?;
        let n = self.n();
        let charge_factors: Vec<f64> = (0..n)
            .map(|j| self.charge / (2.0 * PI) * self.log_factor(j))
            .collect();
        let mut energy_factors = Vec::with_capacity(n);
        for j in 0..n {
            energy_factors.push(-self.dilog_factor(j)? / (2.0 * PI));
        }
        let charge_density = LeadVector {
            kind: ObservableKind::ChargeDensity,
            values: self.weighted_sum(&u, 1.0, &charge_factors),
            errors: vec![0.0; n],
            converged: true,
            note: None,
        };
        let energy_density = LeadVector {
            kind: ObservableKind::EnergyDensity,
            values: self.weighted_sum(&u, 1.0, &energy_factors),
            errors: vec![0.0; n],
            converged: true,
            note: None,
        };
        Ok((charge_density, energy_density))
    }

    fn window_edge(&self, j: usize) -> (f64, f64) {
        let (mu, mt) = (self.bank.mu(j), self.bank.mu_tilde(j));
        if self.bank.is_zero_temperature(j) {
            (mu.max(0.0), (-mt).max(0.0))
        } else {
            let w = FERMI_WINDOW / self.bank.beta(j);
            (mu.max(0.0) + w, (-mt).max(0.0) + w)
        }
    }

    /// Integrals of w(k) f_j(k) and w(k) f~_j(k) over outgoing momenta.
    fn lead_pair_integral<W: Fn(f64) -> f64 + Copy>(
        &self,
        j: usize,
        w: W,
    ) -> Result<(QuadratureResult, QuadratureResult)> {
        let settings = self.quad_settings();
        let (edge_p, edge_a) = self.window_edge(j);
        let particle = if self.bank.is_zero_temperature(j) {
            if edge_p > 0.0 {
                integrate_finite_split(w, 0.0, edge_p, &[], &settings)?
            } else {
                QuadratureResult::zero()
            }
        } else {
            integrate_semi_infinite_split(
                |k| w(k) * self.bank.dirac_occupations(j, k).0,
                &[edge_p],
                &settings,
            )?
        };
        let anti = if self.bank.is_zero_temperature(j) {
            if edge_a > 0.0 {
                integrate_finite_split(w, 0.0, edge_a, &[], &settings)?
            } else {
                QuadratureResult::zero()
            }
        } else {
            integrate_semi_infinite_split(
                |k| w(k) * self.bank.dirac_occupations(j, k).1,
                &[edge_a],
                &settings,
            )?
        };
        Ok((particle, anti))
    }

    /// Quadrature route for the current: e sum_j (delta - |U|^2)
    /// int (dk/2pi) [f_j - f~_j].
    pub fn current_quadrature(&self) -> Result<LeadVector> {
        let u = self.dressed()?;
        let n = self.n();
        let mut factors = Vec::with_capacity(n);
        let mut err = 0.0;
        let mut converged = true;
        for j in 0..n {
            let (p, a) = self.lead_pair_integral(j, |_| 1.0 / (2.0 * PI))?;
            factors.push(self.charge * (p.value - a.value));
            err += p.error_estimate + a.error_estimate;
            converged &= p.converged && a.converged;
        }
        Ok(LeadVector {
            kind: ObservableKind::Current,
            values: self.weighted_sum(&u, -1.0, &factors),
            errors: vec![err; n],
            converged,
            note: None,
        })
    }

    /// Quadrature route for the heat current, with the omega(k) = k weight.
    pub fn heat_current_quadrature(&self) -> Result<LeadVector> {
        let u = self.dressed()?;
        let n = self.n();
        let mut factors = Vec::with_capacity(n);
        let mut err = 0.0;
        let mut converged = true;
        for j in 0..n {
            let (p, a) = self.lead_pair_integral(j, |k| k / (2.0 * PI))?;
            factors.push(p.value + a.value);
            err += p.error_estimate + a.error_estimate;
            converged &= p.converged && a.converged;
        }
        Ok(LeadVector {
            kind: ObservableKind::HeatCurrent,
            values: self.weighted_sum(&u, -1.0, &factors),
            errors: vec![err; n],
            converged,
            note: None,
        })
    }

    /// Zero-frequency noise. Equal finite temperatures take the exact closed
    /// form; anything else integrates the kernel.
    pub fn noise_zero_freq(&self) -> Result<LeadMatrix> {
        let finite = self.bank.betas().iter().all(|b| b.is_finite());
        if finite && self.bank.equal_betas() {
            self.noise_closed_form()
        } else {
            self.noise_quadrature()
        }
    }

    /// Equal-temperature closed form for the noise power.
    pub fn noise_closed_form(&self) -> Result<LeadMatrix> {
        if !self.bank.equal_betas() {
            return Err(Error::domain(
                "closed-form Dirac noise requires equal inverse temperatures",
            ));
        }
        let beta = self.bank.beta(0);
        if !beta.is_finite() {
            return Err(Error::domain(
                "closed-form Dirac noise requires finite temperature",
            ));
        }
        let u = self.dressed()?;
        let n = self.n();
        let a: Vec<f64> = (0..n).map(|i| beta * self.bank.mu(i)).collect();
        let at: Vec<f64> = (0..n).map(|i| -beta * self.bank.mu_tilde(i)).collect();
        let occ: Vec<f64> = (0..n).map(|i| sigmoid(a[i]) + sigmoid(at[i])).collect();

        let pair = |l: usize, m: usize| -> f64 {
            let w = |x: f64, y: f64| {
                if (x - y).abs() < 1e-9 {
                    2.0 * sigmoid(0.5 * (x + y))
                } else {
                    crate::numerics::special::coth_half(x - y) * (softplus(x) - softplus(y))
                }
            };
            w(a[l], a[m]) + w(at[l], at[m])
        };

        let pref = self.charge * self.charge / (2.0 * PI * beta);
        let mut values = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let delta = if i == j { 1.0 } else { 0.0 };
                let mut val =
                    (delta - u.entry(i, j).norm_sqr()) * occ[i] - u.entry(j, i).norm_sqr() * occ[j];
                let mut cross = num_complex::Complex64::new(0.0, 0.0);
                for l in 0..n {
                    for m in 0..n {
                        let coeff = u.entry(l, i)
                            * u.entry(l, j).conj()
                            * u.entry(m, j)
                            * u.entry(m, i).conj();
                        cross += coeff * (0.5 * pair(l, m));
                    }
                }
                val += cross.re;
                values[i][j] = pref * val;
            }
        }
        Ok(LeadMatrix {
            kind: ObservableKind::Noise,
            values,
            errors: vec![vec![0.0; n]; n],
            converged: true,
            note: None,
        })
    }

    /// Quadrature route for the noise, with the kernel
    /// F_lm(k) = f_l (1 - f_m) + f~_l (1 - f~_m).
    pub fn noise_quadrature(&self) -> Result<LeadMatrix> {
        let u = self.dressed()?;
        let n = self.n();
        let settings = self.quad_settings();
        let mut bps = Vec::new();
        let mut all_zero_t = true;
        for j in 0..n {
            let (p, a) = self.window_edge(j);
            bps.push(p);
            bps.push(a);
            all_zero_t &= self.bank.is_zero_temperature(j);
        }
        let pref = self.charge * self.charge / (2.0 * PI);
        let mut values = vec![vec![0.0; n]; n];
        let mut errors = vec![vec![0.0; n]; n];
        let mut converged = true;
        for i in 0..n {
            for j in 0..n {
                let integrand = |k: f64| {
                    let kernel = |l: usize, m: usize| self.bank.noise_kernel(l, m, k);
                    let delta = if i == j { 1.0 } else { 0.0 };
                    let val = (delta - u.entry(i, j).norm_sqr()) * kernel(i, i)
                        - u.entry(j, i).norm_sqr() * kernel(j, j);
                    let mut cross = num_complex::Complex64::new(0.0, 0.0);
                    for l in 0..n {
                        for m in 0..n {
                            let coeff = u.entry(l, i)
                                * u.entry(l, j).conj()
                                * u.entry(m, j)
                                * u.entry(m, i).conj();
                            cross += coeff * (0.5 * (kernel(l, m) + kernel(m, l)));
                        }
                    }
                    pref * (val + cross.re)
                };
                let r = if all_zero_t {
                    let top = bps.iter().copied().fold(0.0f64, f64::max);
                    if top <= 0.0 {
                        QuadratureResult::zero()
                    } else {
                        integrate_finite_split(integrand, 0.0, top, &bps, &settings)?
                    }
                } else {
                    integrate_semi_infinite_split(integrand, &bps, &settings)?
                };
                values[i][j] = r.value;
                errors[i][j] = r.error_estimate;
                converged &= r.converged;
            }
        }
        Ok(LeadMatrix {
            kind: ObservableKind::Noise,
            values,
            errors,
            converged,
            note: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn full_transmission() -> UnitaryMatrix {
        UnitaryMatrix::new(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap()
    }

    fn hadamard() -> UnitaryMatrix {
        let r = 1.0 / 2.0f64.sqrt();
        UnitaryMatrix::new(&[vec![c(r, 0.0), c(r, 0.0)], vec![c(r, 0.0), c(-r, 0.0)]]).unwrap()
    }

    fn sys(u: UnitaryMatrix, beta: Vec<f64>, mu: Vec<f64>, mt: Vec<f64>) -> DiracSystem {
        let bank = DiracReservoirBank::new(beta, mu, mt).unwrap();
        DiracSystem::new(1.0, u, bank, None).unwrap()
    }

    #[test]
    fn temperature_independent_current_at_equal_potentials() {
        // mu_tilde = mu = (1, 0): J_1 = 1/(2pi) for any temperatures.
        for betas in [vec![1.0, 1.0], vec![0.3, 7.0], vec![5.0, 0.1]] {
            let s = sys(full_transmission(), betas, vec![1.0, 0.0], vec![1.0, 0.0]);
            let j = s.current().unwrap();
            assert!(
                (j.values[0] - 1.0 / (2.0 * PI)).abs() < 1e-14,
                "{}",
                j.values[0]
            );
            assert!((j.values[0] + j.values[1]).abs() < 1e-15);
        }
    }

    #[test]
    fn charge_conjugation_symmetric_current_vanishes() {
        // conj(U) = -U needs purely imaginary entries.
        let u = UnitaryMatrix::new(&[
            vec![c(0.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let s = sys(u, vec![1.0, 2.0], vec![0.8, -0.4], vec![-0.8, 0.4]);
        assert!(s.charge_conjugation_symmetric());
        let j = s.current().unwrap();
        assert!(j.max_abs() < 1e-15);
        let (rho, eps) = s.densities().unwrap();
        assert!(rho.max_abs() < 1e-15);
        // Heat and noise survive: particle and antiparticle parts add.
        let t = s.heat_current().unwrap();
        assert!(t.max_abs() > 1e-4);
        let p = s.noise_zero_freq().unwrap();
        assert!(p.get(0, 0) > 0.0);
        let _ = eps;
    }

    #[test]
    fn current_closed_form_matches_quadrature() {
        let s = sys(hadamard(), vec![1.7, 0.8], vec![0.9, -0.2], vec![0.3, 0.5]);
        let closed = s.current().unwrap();
        let quad = s.current_quadrature().unwrap();
        for i in 0..2 {
            assert!(
                (closed.values[i] - quad.values[i]).abs() < 1e-9,
                "lead {i}: {} vs {}",
                closed.values[i],
                quad.values[i]
            );
        }
        assert!(closed.kirchhoff_ok());
    }

    #[test]
    fn heat_worked_value_and_quadrature() {
        // Full transmission, mu = mu_tilde = 0, beta = (1, 2):
        // T_1 = 2 |Li2(-1)| (1 - 1/4) / (2 pi).
        let s = sys(
            full_transmission(),
            vec![1.0, 2.0],
            vec![0.0, 0.0],
            vec![0.0, 0.0],
        );
        let t = s.heat_current().unwrap();
        let expected = 0.196_349_540_849_362_08;
        assert!((t.values[0] - expected).abs() < 1e-10, "{}", t.values[0]);
        let tq = s.heat_current_quadrature().unwrap();
        assert!((tq.values[0] - expected).abs() < 1e-9, "{}", tq.values[0]);
        assert!(t.kirchhoff_ok());
    }

    #[test]
    fn single_lead_energy_density_value() {
        // n = 1, U = 1, mu = mu_tilde = 0, beta = 1: energy density pi/6.
        let u = UnitaryMatrix::identity(1);
        let s = sys(u, vec![1.0], vec![0.0], vec![0.0]);
        let (_, eps) = s.densities().unwrap();
        assert!(
            (eps.values[0] - PI / 6.0).abs() < 1e-10,
            "{}",
            eps.values[0]
        );
    }

    #[test]
    fn conductance_reconstruction_and_asymmetry() {
        let s = sys(hadamard(), vec![1.0, 3.0], vec![0.7, 0.2], vec![-0.1, 0.9]);
        let g = s.conductance().unwrap();
        let j = s.current().unwrap();
        for i in 0..2 {
            let rebuilt: f64 = (0..2)
                .map(|jj| g.get(i, jj) * s.bank().mu(jj) / s.charge())
                .sum();
            assert!((rebuilt - j.values[i]).abs() < 1e-13);
        }
        assert!(g.column_kirchhoff_residual() < 1e-15);
        assert!(
            (g.get(0, 1) - g.get(1, 0)).abs() > 1e-6,
            "expected asymmetric G"
        );
    }

    #[test]
    fn current_limit_consistency() {
        let s = sys(hadamard(), vec![1e4, 1e4], vec![1.0, 0.2], vec![-0.5, 0.4]);
        let j = s.current().unwrap();
        let (_, zero_t) = s.current_limits().unwrap();
        for i in 0..2 {
            let rel = (j.values[i] - zero_t.values[i]).abs() / zero_t.values[i].abs().max(1e-12);
            assert!(
                rel < 1e-3,
                "lead {i}: {} vs {}",
                j.values[i],
                zero_t.values[i]
            );
        }
        // mu = mu_tilde: the high-T limit coincides with the exact value.
        let s = sys(hadamard(), vec![2.0, 2.0], vec![0.6, -0.1], vec![0.6, -0.1]);
        let j = s.current().unwrap();
        let (high_t, _) = s.current_limits().unwrap();
        for i in 0..2 {
            assert!((j.values[i] - high_t.values[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn thermal_noise_closed_form_value() {
        // mu = mu_tilde = 0, equal beta: P = (e^2/2pi beta)(2 delta - |U|^2 - |U|^2).
        let s = sys(hadamard(), vec![1.0, 1.0], vec![0.0, 0.0], vec![0.0, 0.0]);
        let p = s.noise_zero_freq().unwrap();
        assert!(
            (p.get(0, 0) - 1.0 / (2.0 * PI)).abs() < 1e-13,
            "{}",
            p.get(0, 0)
        );
        let q = s.noise_quadrature().unwrap();
        assert!((q.get(0, 0) - p.get(0, 0)).abs() < 1e-8);
        assert!(p.kirchhoff_ok() && q.kirchhoff_ok());
    }

    #[test]
    fn noise_closed_form_matches_quadrature_generic() {
        let s = sys(hadamard(), vec![1.4, 1.4], vec![0.8, -0.3], vec![0.2, 0.6]);
        let closed = s.noise_closed_form().unwrap();
        let quad = s.noise_quadrature().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let rel =
                    (closed.get(i, j) - quad.get(i, j)).abs() / closed.get(i, j).abs().max(1e-12);
                assert!(
                    rel < 1e-6,
                    "({i},{j}): {} vs {}",
                    closed.get(i, j),
                    quad.get(i, j)
                );
            }
        }
    }

    #[test]
    fn unequal_beta_noise_uses_quadrature_and_conserves() {
        let s = sys(hadamard(), vec![0.9, 2.2], vec![0.5, -0.2], vec![0.1, 0.3]);
        let p = s.noise_zero_freq().unwrap();
        assert!(p.kirchhoff_ok());
        assert!(p.asymmetry() < 1e-12);
    }
}
