//! Per-lead thermal reservoirs and the occupation distributions entering
//! every observable integrand.
//!
//! Zero temperature is a distinct representable state (beta = infinity), not
//! a large float: the observable quadratures then switch to sharp Fermi
//! cutoffs instead of chasing a near-step integrand. A finite beta beyond the
//! overflow guard is treated the same way.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::special::sigmoid;

/// beta * max(|mu|, 1) beyond which a lead is handled as zero-temperature.
pub const BETA_ZERO_THRESHOLD: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Fermi,
    Bose,
}

/// Reservoir data for a Schrödinger junction.
#[derive(Debug, Clone)]
pub struct ReservoirBank {
    beta: Vec<f64>,
    mu: Vec<f64>,
    statistics: Statistics,
}

impl ReservoirBank {
    pub fn new(beta: Vec<f64>, mu: Vec<f64>, statistics: Statistics) -> Result<Self> {
        if beta.len() != mu.len() {
            return Err(Error::validation(format!(
                "{} temperatures vs {} chemical potentials",
                beta.len(),
                mu.len()
            )));
        }
        if beta.is_empty() {
            return Err(Error::validation("reservoir bank needs at least one lead"));
        }
        for (i, &b) in beta.iter().enumerate() {
            if !(b > 0.0) {
                return Err(Error::Validation(format!(
                    "lead {}: inverse temperature must be positive (infinity encodes T = 0), got {}",
                    i + 1,
                    b
                )));
            }
        }
        for (i, &m) in mu.iter().enumerate() {
            if !m.is_finite() {
                return Err(Error::Validation(format!(
                    "lead {}: chemical potential must be finite",
                    i + 1
                )));
            }
            if statistics == Statistics::Bose {
                if m >= 0.0 {
                    return Err(Error::Validation(format!(
                        "lead {}: Bose statistics requires mu < 0 strictly (occupancy diverges otherwise), got mu = {}",
                        i + 1,
                        m
                    )));
                }
                if beta[i] == f64::INFINITY {
                    return Err(Error::Validation(format!(
                        "lead {}: zero-temperature Bose reservoirs are not supported",
                        i + 1
                    )));
                }
            }
        }
        Ok(ReservoirBank {
            beta,
            mu,
            statistics,
        })
    }

    pub fn n(&self) -> usize {
        self.beta.len()
    }

    pub fn beta(&self, i: usize) -> f64 {
        self.beta[i]
    }

    pub fn mu(&self, i: usize) -> f64 {
        self.mu[i]
    }

    pub fn betas(&self) -> &[f64] {
        &self.beta
    }

    pub fn mus(&self) -> &[f64] {
        &self.mu
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    /// Lead treated as zero temperature: exactly beta = inf, or beyond the
    /// exp-overflow guard.
    pub fn is_zero_temperature(&self, i: usize) -> bool {
        let b = self.beta[i];
        b == f64::INFINITY || b * self.mu[i].abs().max(1.0) > BETA_ZERO_THRESHOLD
    }

    /// Smallest finite inverse temperature, used to scale quadrature tails.
    pub fn min_finite_beta(&self) -> Option<f64> {
        self.beta
            .iter()
            .copied()
            .filter(|b| b.is_finite())
            .fold(None, |acc, b| Some(acc.map_or(b, |a: f64| a.min(b))))
    }

    /// All leads share one (beta, mu) pair.
    pub fn is_equilibrium(&self) -> bool {
        self.beta.iter().all(|&b| b == self.beta[0]) && self.mu.iter().all(|&m| m == self.mu[0])
    }

    /// Occupation d_i(omega) = e^{-beta (omega - mu)} / (1 ± e^{-beta (omega - mu)}).
    ///
    /// At zero temperature the Fermi case returns the step theta(mu - omega)
    /// with value 1/2 on the edge.
    pub fn occupation_d(&self, i: usize, omega: f64) -> f64 {
        let (b, m) = (self.beta[i], self.mu[i]);
        match self.statistics {
            Statistics::Fermi => {
                if self.is_zero_temperature(i) {
                    if omega < m {
                        1.0
                    } else if omega > m {
                        0.0
                    } else {
                        0.5
                    }
                } else {
                    sigmoid(-b * (omega - m))
                }
            }
            Statistics::Bose => {
                let x = (-b * (omega - m)).exp();
                x / (1.0 - x)
            }
        }
    }

    /// c_i(omega) = 1 / (1 ± e^{-beta (omega - mu)}); for Fermi statistics
    /// the identity c = 1 - d holds exactly.
    pub fn complement_c(&self, i: usize, omega: f64) -> f64 {
        match self.statistics {
            Statistics::Fermi => 1.0 - self.occupation_d(i, omega),
            Statistics::Bose => 1.0 + self.occupation_d(i, omega),
        }
    }
}

/// Reservoir data for a Dirac junction: Fermi statistics with independent
/// particle and antiparticle chemical potentials.
#[derive(Debug, Clone)]
pub struct DiracReservoirBank {
    beta: Vec<f64>,
    mu: Vec<f64>,
    mu_tilde: Vec<f64>,
}

impl DiracReservoirBank {
    pub fn new(beta: Vec<f64>, mu: Vec<f64>, mu_tilde: Vec<f64>) -> Result<Self> {
        if beta.len() != mu.len() || beta.len() != mu_tilde.len() {
            return Err(Error::validation(
                "beta, mu and mu_tilde must all have one entry per lead",
            ));
        }
        if beta.is_empty() {
            return Err(Error::validation("reservoir bank needs at least one lead"));
        }
        for (i, &b) in beta.iter().enumerate() {
            if !(b > 0.0) {
                return Err(Error::Validation(format!(
                    "lead {}: inverse temperature must be positive, got {}",
                    i + 1,
                    b
                )));
            }
        }
        if mu.iter().chain(mu_tilde.iter()).any(|m| !m.is_finite()) {
            return Err(Error::validation("chemical potentials must be finite"));
        }
        Ok(DiracReservoirBank { beta, mu, mu_tilde })
    }

    pub fn n(&self) -> usize {
        self.beta.len()
    }

    pub fn beta(&self, i: usize) -> f64 {
        self.beta[i]
    }

    pub fn mu(&self, i: usize) -> f64 {
        self.mu[i]
    }

    pub fn mu_tilde(&self, i: usize) -> f64 {
        self.mu_tilde[i]
    }

    pub fn betas(&self) -> &[f64] {
        &self.beta
    }

    pub fn is_zero_temperature(&self, i: usize) -> bool {
        let b = self.beta[i];
        let m = self.mu[i].abs().max(self.mu_tilde[i].abs()).max(1.0);
        b == f64::INFINITY || b * m > BETA_ZERO_THRESHOLD
    }

    pub fn min_finite_beta(&self) -> Option<f64> {
        self.beta
            .iter()
            .copied()
            .filter(|b| b.is_finite())
            .fold(None, |acc, b| Some(acc.map_or(b, |a: f64| a.min(b))))
    }

    pub fn is_equilibrium(&self) -> bool {
        self.beta.iter().all(|&b| b == self.beta[0])
            && self.mu.iter().all(|&m| m == self.mu[0])
            && self.mu_tilde.iter().all(|&m| m == self.mu_tilde[0])
    }

    pub fn equal_betas(&self) -> bool {
        self.beta.iter().all(|&b| b == self.beta[0])
    }

    /// Noise kernel F_ij(k) = f_i (1 - f_j) + f~_i (1 - f~_j). Non-negative,
    /// and symmetric under i <-> j only when the two reservoirs coincide.
    pub fn noise_kernel(&self, i: usize, j: usize, k: f64) -> f64 {
        let (fi, fti) = self.dirac_occupations(i, k);
        let (fj, ftj) = self.dirac_occupations(j, k);
        fi * (1.0 - fj) + fti * (1.0 - ftj)
    }

    /// Particle and antiparticle occupations (f_i, f~_i) at momentum k, with
    /// the massless dispersion omega = |k|.
    pub fn dirac_occupations(&self, i: usize, k: f64) -> (f64, f64) {
        let w = k.abs();
        let (b, m, mt) = (self.beta[i], self.mu[i], self.mu_tilde[i]);
        if self.is_zero_temperature(i) {
            let f = if w < m {
                1.0
            } else if w > m {
                0.0
            } else {
                0.5
            };
            let ft = if w < -mt {
                1.0
            } else if w > -mt {
                0.0
            } else {
                0.5
            };
            (f, ft)
        } else {
            (sigmoid(-b * (w - m)), sigmoid(-b * (w + mt)))
        }
    }
}
