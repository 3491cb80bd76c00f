//! Vertex scattering matrices for all self-adjoint point-like interactions on
//! an n-edge star graph.
//!
//! A boundary pair (U, lambda) fixes the junction. The scattering matrix is
//! evaluated through its k-independent spectral form: the unitary that
//! diagonalizes U diagonalizes S(k) for every k, with channel eigenvalues
//! (k + i eta_i) / (k - i eta_i), eta_i = lambda tan(alpha_i). Channels with
//! eigenphase ±pi/2 (Dirichlet type) carry the constant eigenvalue -1.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::linalg::{unitary_eigen, CMatrix};

pub const UNITARITY_TOL: f64 = 1e-12;
pub const DERIVED_TOL: f64 = 1e-10;

/// An n-by-n matrix validated to be unitary at construction.
#[derive(Debug, Clone)]
pub struct UnitaryMatrix {
    matrix: CMatrix,
    defect: f64,
    valid: bool,
}

impl UnitaryMatrix {
    pub fn new(rows: &[Vec<Complex64>]) -> Result<Self> {
        let matrix = CMatrix::from_rows(rows)?;
        Self::from_matrix(matrix)
    }

    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let (defect, at) = matrix.unitarity_defect();
        if defect > UNITARITY_TOL {
            return Err(Error::Validation(format!(
                "matrix is not unitary: |(U U† − I)_({},{})| = {:.3e} exceeds {:.0e}",
                at.0 + 1,
                at.1 + 1,
                defect,
                UNITARITY_TOL
            )));
        }
        Ok(UnitaryMatrix {
            matrix,
            defect,
            valid: true,
        })
    }

    /// Store without bailing out; `is_valid` reports the check outcome.
    pub fn new_unchecked(matrix: CMatrix) -> Self {
        let (defect, _) = matrix.unitarity_defect();
        let valid = defect <= UNITARITY_TOL;
        UnitaryMatrix {
            matrix,
            defect,
            valid,
        }
    }

    pub fn identity(n: usize) -> Self {
        UnitaryMatrix {
            matrix: CMatrix::identity(n),
            defect: 0.0,
            valid: true,
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// U^{-1} = U† for a unitary matrix.
    pub fn inverse(&self) -> CMatrix {
        self.matrix.adjoint()
    }

    pub fn is_valid(&self) -> bool {
        self.valid
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.defect
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }
}

/// Channel parameter eta_i = lambda tan(alpha_i); Dirichlet channels
/// (alpha = ±pi/2) are kept symbolic so their S-matrix entry is exactly -1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelEta {
    Finite(f64),
    Infinite,
}

/// Eigenphases and diagonalizing unitary of a boundary matrix.
#[derive(Debug, Clone)]
pub struct SpectralData {
    /// alpha_i folded into [-pi/2, pi/2].
    pub eigenphases: Vec<f64>,
    /// Columns are the eigenvectors; diagonalizes U and S(k) for every k.
    pub basis: CMatrix,
}

/// Diagonalize a unitary boundary matrix: U = basis · diag(e^{2 i alpha}) · basis†.
pub fn diagonalize_vertex(u: &UnitaryMatrix) -> Result<SpectralData> {
    let (eigs, basis) = unitary_eigen(u.matrix())?;
    let eigenphases: Vec<f64> = eigs.iter().map(|z| 0.5 * z.arg()).collect();

    let n = u.n();
    let mut d = CMatrix::zeros(n);
    for (i, &alpha) in eigenphases.iter().enumerate() {
        d[(i, i)] = Complex64::from_polar(1.0, 2.0 * alpha);
    }
    let reconstructed = basis.mul(&d).mul(&basis.adjoint());
    let residual = reconstructed.max_abs_diff(u.matrix());
    if residual > DERIVED_TOL {
        return Err(Error::internal(format!(
            "spectral reconstruction residual {residual:.3e} exceeds {DERIVED_TOL:.0e}"
        )));
    }
    Ok(SpectralData { eigenphases, basis })
}

/// The (U, lambda) boundary condition with its spectral decomposition.
#[derive(Debug, Clone)]
pub struct VertexCoupling {
    u: UnitaryMatrix,
    lambda: f64,
    spectral: SpectralData,
    etas: Vec<ChannelEta>,
}

impl VertexCoupling {
    pub fn new(u: UnitaryMatrix, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::validation("lambda must be finite"));
        }
        let spectral = diagonalize_vertex(&u)?;
        let etas = spectral
            .eigenphases
            .iter()
            .map(|&alpha| {
                if FRAC_PI_2 - alpha.abs() < 1e-12 {
                    ChannelEta::Infinite
                } else {
                    ChannelEta::Finite(lambda * alpha.tan())
                }
            })
            .collect();
        Ok(VertexCoupling {
            u,
            lambda,
            spectral,
            etas,
        })
    }

    /// Build the coupling from chosen channel data instead of a boundary
    /// matrix; U is reconstructed as basis · diag(e^{2 i alpha}) · basis†.
    pub fn from_spectral(basis: UnitaryMatrix, eigenphases: &[f64], lambda: f64) -> Result<Self> {
        let n = basis.n();
        if eigenphases.len() != n {
            return Err(Error::validation(format!(
                "{} eigenphases for a {}-lead basis",
                eigenphases.len(),
                n
            )));
        }
        let mut d = CMatrix::zeros(n);
        for (i, &alpha) in eigenphases.iter().enumerate() {
            if !(-FRAC_PI_2..=FRAC_PI_2).contains(&alpha) {
                return Err(Error::validation(format!(
                    "eigenphase {} = {} outside [-pi/2, pi/2]",
                    i + 1,
                    alpha
                )));
            }
            d[(i, i)] = Complex64::from_polar(1.0, 2.0 * alpha);
        }
        let u = basis.matrix().mul(&d).mul(&basis.matrix().adjoint());
        Self::new(UnitaryMatrix::from_matrix(u)?, lambda)
    }

    pub fn n(&self) -> usize {
        self.u.n()
    }

    pub fn boundary_matrix(&self) -> &UnitaryMatrix {
        &self.u
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn spectral(&self) -> &SpectralData {
        &self.spectral
    }

    pub fn etas(&self) -> &[ChannelEta] {
        &self.etas
    }

    /// True when no channel has a pole in the upper half k-plane, so the
    /// junction carries no bound state. A numerically-zero positive eta is
    /// tolerated as zero.
    pub fn bound_state_free(&self) -> bool {
        let tiny = 1e-14 * self.lambda.abs().max(1.0);
        self.etas.iter().all(|eta| match eta {
            ChannelEta::Finite(e) => *e <= tiny,
            ChannelEta::Infinite => true,
        })
    }

    /// S(k) = basis · diag((k + i eta)/(k - i eta)) · basis†, valid for any
    /// real k. Dirichlet channels contribute -1; a zero-eta channel
    /// contributes +1 (the k = 0 point itself is never sampled by the
    /// observable quadratures).
    pub fn smatrix(&self, k: f64) -> CMatrix {
        let n = self.n();
        let mut d = CMatrix::zeros(n);
        for (i, eta) in self.etas.iter().enumerate() {
            d[(i, i)] = match eta {
                ChannelEta::Infinite => Complex64::new(-1.0, 0.0),
                ChannelEta::Finite(e) => {
                    if *e == 0.0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(k, *e) / Complex64::new(k, -*e)
                    }
                }
            };
        }
        self.spectral
            .basis
            .mul(&d)
            .mul(&self.spectral.basis.adjoint())
    }
}

/// Scale-invariant junction: S(k) = U for k > 0 and U^{-1} for k < 0.
pub fn critical_smatrix(u: &UnitaryMatrix, k: f64) -> Result<CMatrix> {
    if k == 0.0 {
        return Err(Error::domain(
            "critical scattering matrix is a step function, undefined at k = 0",
        ));
    }
    Ok(if k > 0.0 {
        u.matrix().clone()
    } else {
        u.inverse()
    })
}

/// Parameters of the general two-lead scattering matrix.
#[derive(Debug, Clone, Copy)]
pub struct TwoLeadParams {
    pub eta1: f64,
    pub eta2: f64,
    pub theta: f64,
    pub phi: f64,
}

impl TwoLeadParams {
    pub fn new(eta1: f64, eta2: f64, theta: f64, phi: f64) -> Result<Self> {
        for (name, v) in [
            ("eta1", eta1),
            ("eta2", eta2),
            ("theta", theta),
            ("phi", phi),
        ] {
            if !v.is_finite() {
                return Err(Error::Validation(format!("two-lead {name} must be finite")));
            }
        }
        let p = TwoLeadParams {
            eta1,
            eta2,
            theta,
            phi,
        };
        // Unitarity and hermitian analyticity on a probe grid.
        let mut worst = 0.0f64;
        for i in 0..16 {
            let k = 0.01 * (100.0f64 / 0.01).powf(i as f64 / 15.0);
            let s = p.smatrix(k);
            let (defect, _) = s.unitarity_defect();
            worst = worst.max(defect);
            let ha = s.adjoint().max_abs_diff(&p.smatrix(-k));
            worst = worst.max(ha);
        }
        if worst > DERIVED_TOL {
            return Err(Error::Validation(format!(
                "two-lead parameters violate S-matrix laws on the probe grid ({worst:.3e})"
            )));
        }
        Ok(p)
    }

    pub fn bound_state_free(&self) -> bool {
        self.eta1 <= 0.0 && self.eta2 <= 0.0
    }

    /// The most general 2x2 scattering matrix, directly from its rational
    /// form. k = 0 is outside the sampled domain when eta1*eta2 = 0.
    pub fn smatrix(&self, k: f64) -> CMatrix {
        let i = Complex64::new(0.0, 1.0);
        let de = (self.eta1 - self.eta2) * Complex64::new(1.0, 0.0);
        let denom =
            (Complex64::new(k, 0.0) - i * self.eta1) * (Complex64::new(k, 0.0) - i * self.eta2);
        let mut s = CMatrix::zeros(2);
        s[(0, 0)] = (Complex64::new(k * k + self.eta1 * self.eta2, 0.0)
            + i * k * de * self.theta.cos())
            / denom;
        s[(1, 1)] = (Complex64::new(k * k + self.eta1 * self.eta2, 0.0)
            - i * k * de * self.theta.cos())
            / denom;
        let off = -i * k * de * self.theta.sin();
        s[(0, 1)] = off * Complex64::from_polar(1.0, self.phi) / denom;
        s[(1, 0)] = off * Complex64::from_polar(1.0, -self.phi) / denom;
        s
    }
}

/// Static gauge phases alpha_i = alpha(0, i); the charge factor is already
/// absorbed into the stored values.
#[derive(Debug, Clone)]
pub struct GaugePhases {
    pub alpha: Vec<f64>,
}

impl GaugePhases {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.iter().any(|a| !a.is_finite()) {
            return Err(Error::validation("gauge phases must be finite"));
        }
        Ok(GaugePhases { alpha })
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }
}

/// Dress a matrix with gauge phases: entry (i, j) picks up
/// e^{-i alpha_i} e^{+i alpha_j}. Diagonal entries and all moduli are
/// unchanged, and unitarity is preserved.
pub fn gauge_dress(m: &CMatrix, phases: &GaugePhases) -> CMatrix {
    let n = m.n();
    assert_eq!(n, phases.alpha.len(), "gauge phase count must match leads");
    let mut out = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let ph = Complex64::from_polar(1.0, phases.alpha[j] - phases.alpha[i]);
            out[(i, j)] = m[(i, j)] * ph;
        }
    }
    out
}

pub fn gauge_dress_unitary(u: &UnitaryMatrix, phases: &GaugePhases) -> Result<UnitaryMatrix> {
    UnitaryMatrix::from_matrix(gauge_dress(u.matrix(), phases))
}

/// The three ways a system can carry its vertex interaction.
#[derive(Debug, Clone)]
pub enum Coupling {
    Spectral(VertexCoupling),
    TwoLead(TwoLeadParams),
    Critical(UnitaryMatrix),
}

impl Coupling {
    pub fn n(&self) -> usize {
        match self {
            Coupling::Spectral(c) => c.n(),
            Coupling::TwoLead(_) => 2,
            Coupling::Critical(u) => u.n(),
        }
    }

    pub fn smatrix(&self, k: f64) -> Result<CMatrix> {
        match self {
            Coupling::Spectral(c) => Ok(c.smatrix(k)),
            Coupling::TwoLead(p) => Ok(p.smatrix(k)),
            Coupling::Critical(u) => critical_smatrix(u, k),
        }
    }

    pub fn bound_state_free(&self) -> bool {
        match self {
            Coupling::Spectral(c) => c.bound_state_free(),
            Coupling::TwoLead(p) => p.bound_state_free(),
            Coupling::Critical(_) => true,
        }
    }

    /// Present when the closed-form critical expressions apply.
    pub fn critical_matrix(&self) -> Option<&UnitaryMatrix> {
        match self {
            Coupling::Critical(u) => Some(u),
            _ => None,
        }
    }
}
