//! Result containers for per-lead and per-pair observables.

use std::fmt;

/// Relative tolerance for declaring a Kirchhoff sum zero.
pub const KIRCHHOFF_REL_TOL: f64 = 1e-9;
/// Absolute floor below which a residual is zero regardless of scale.
pub const KIRCHHOFF_ABS_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableKind {
    Current,
    HeatCurrent,
    Conductance,
    Noise,
    ChargeDensity,
    EnergyDensity,
}

impl ObservableKind {
    pub fn label(&self) -> &'static str {
        match self {
            ObservableKind::Current => "current",
            ObservableKind::HeatCurrent => "heat_current",
            ObservableKind::Conductance => "conductance",
            ObservableKind::Noise => "noise",
            ObservableKind::ChargeDensity => "charge_density",
            ObservableKind::EnergyDensity => "energy_density",
        }
    }

    /// Units with hbar = k_B = 1; energies and momenta set every scale.
    pub fn units(&self) -> &'static str {
        match self {
            ObservableKind::Current => "e*momentum^2/mass (charge per time)",
            ObservableKind::HeatCurrent => "energy^2 (energy per time)",
            ObservableKind::Conductance => "e^2 (dimensionless conductance quantum units x 2pi)",
            ObservableKind::Noise => "e^2*energy",
            ObservableKind::ChargeDensity => "e*momentum (charge per length)",
            ObservableKind::EnergyDensity => "energy*momentum (energy per length)",
        }
    }
}

impl fmt::Display for ObservableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One value per lead, with quadrature error budgets.
#[derive(Debug, Clone)]
pub struct LeadVector {
    pub kind: ObservableKind,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub converged: bool,
    pub note: Option<String>,
}

impl LeadVector {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// |sum_i v_i|, the Kirchhoff residual of a conserved flow.
    pub fn kirchhoff_residual(&self) -> f64 {
        self.values.iter().sum::<f64>().abs()
    }

    pub fn kirchhoff_ok(&self) -> bool {
        let scale = self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        self.kirchhoff_residual() <= (KIRCHHOFF_REL_TOL * scale).max(KIRCHHOFF_ABS_FLOOR)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }
}

/// One value per ordered lead pair.
#[derive(Debug, Clone)]
pub struct LeadMatrix {
    pub kind: ObservableKind,
    pub values: Vec<Vec<f64>>,
    pub errors: Vec<Vec<f64>>,
    pub converged: bool,
    pub note: Option<String>,
}

impl LeadMatrix {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    /// Largest |column sum|, the Kirchhoff residual over the first index.
    pub fn column_kirchhoff_residual(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|j| (0..n).map(|i| self.values[i][j]).sum::<f64>().abs())
            .fold(0.0, f64::max)
    }

    /// Largest |row sum|.
    pub fn row_kirchhoff_residual(&self) -> f64 {
        self.values
            .iter()
            .map(|row| row.iter().sum::<f64>().abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .fold(0.0f64, |a, v| a.max(v.abs()))
    }

    pub fn kirchhoff_ok(&self) -> bool {
        let tol = (KIRCHHOFF_REL_TOL * self.max_abs()).max(KIRCHHOFF_ABS_FLOOR);
        self.column_kirchhoff_residual() <= tol && self.row_kirchhoff_residual() <= tol
    }

    /// Largest |P_ij - P_ji|.
    pub fn asymmetry(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.values[i][j] - self.values[j][i]).abs());
            }
        }
        worst
    }
}

/// Decomposition of the charge density at one point (lead i, distance x).
#[derive(Debug, Clone)]
pub struct ChargeDensityPoint {
    pub total: f64,
    pub oscillating: f64,
    pub equilibrium_reference: f64,
    pub nonequilibrium_shift: f64,
    /// |total + shift - reference| from the internal cross-check.
    pub consistency_residual: f64,
    pub converged: bool,
    pub note: Option<String>,
}

/// Decomposition of the energy density at one point.
#[derive(Debug, Clone)]
pub struct EnergyDensityPoint {
    pub total: f64,
    pub stefan_boltzmann: f64,
    pub nonequilibrium_shift: f64,
    pub converged: bool,
    pub note: Option<String>,
}

/// Two-lead thermal noise value with its analytic envelope.
#[derive(Debug, Clone)]
pub struct ThermalNoiseBounds {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub converged: bool,
    pub note: Option<String>,
}
