//! Small dense complex matrices and eigendecomposition of unitary matrices.
//!
//! Lead counts are tiny (a junction rarely has more than a handful of edges),
//! so everything here is written for clarity over asymptotic speed: row-major
//! `Vec<Complex64>` storage and a cyclic Jacobi eigensolver.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense n-by-n complex matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::validation("matrix must have at least one row"));
        }
        let mut m = CMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::validation(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
            for (j, z) in row.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::validation(format!(
                        "entry ({}, {}) is not finite",
                        i + 1,
                        j + 1
                    )));
                }
                m[(i, j)] = *z;
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    m[(i, j)] += a * other[(k, j)];
                }
            }
        }
        m
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_offdiag_abs(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    worst = worst.max(self[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// max-norm of `M M† − I` together with the worst entry location.
    pub fn unitarity_defect(&self) -> (f64, (usize, usize)) {
        let prod = self.mul(&self.adjoint());
        let mut worst = 0.0f64;
        let mut at = (0, 0);
        for i in 0..self.n {
            for j in 0..self.n {
                let target = if i == j { 1.0 } else { 0.0 };
                let dev = (prod[(i, j)] - Complex64::new(target, 0.0)).norm();
                if dev > worst {
                    worst = dev;
                    at = (i, j);
                }
            }
        }
        (worst, at)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns the eigenvalues in ascending order and the matrix whose columns
/// are the corresponding orthonormal eigenvectors. Deterministic: the sweep
/// order and rotation choices are fixed functions of the input.
pub fn hermitian_eigen(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = h.n();
    let mut a = h.clone();
    // Symmetrize against rounding in the caller's assembly.
    for i in 0..n {
        for j in 0..n {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)].conj());
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
    }
    let mut v = CMatrix::identity(n);

    let scale: f64 = a
        .data
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let tol = 1e-15 * scale;

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= tol {
            let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
            pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)));
            let vals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let mut vecs = CMatrix::zeros(n);
            for (col, &(_, src)) in pairs.iter().enumerate() {
                for r in 0..n {
                    vecs[(r, col)] = v[(r, src)];
                }
            }
            return Ok((vals, vecs));
        }

        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = a[(p, q)];
                let habs = hpq.norm();
                if habs <= tol {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = hpq / habs;

                // Rotation angle from the 2x2 block [[app, |h|], [|h|, aqq]].
                let tau = (aqq - app) / (2.0 * habs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let s_ph = phase * s; // s * e^{i phi}

                // A <- R† A R with R = I except R[p,p]=c, R[p,q]=s e^{i phi},
                // R[q,p]=-s e^{-i phi}, R[q,q]=c.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = c * aip - s_ph.conj() * aiq;
                    a[(i, q)] = s_ph * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = c * apj - s_ph * aqj;
                    a[(q, j)] = s_ph.conj() * apj + c * aqj;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = c * vip - s_ph.conj() * viq;
                    v[(i, q)] = s_ph * vip + c * viq;
                }
            }
        }
    }

    Err(Error::internal(
        "Jacobi eigensolver failed to converge in 60 sweeps",
    ))
}

/// Eigendecomposition of a unitary matrix.
///
/// A unitary U is normal, so it shares eigenvectors with the commuting
/// Hermitian pair Re-part and Im-part. We diagonalize the Hermitian
/// combination H(t) = (U + U†)/2 + t (U − U†)/(2i); for generic t the
/// eigenvalues cos(2α) + t sin(2α) of distinct eigenphases stay distinct, so
/// the H-eigenbasis diagonalizes U itself. A handful of fixed t values guards
/// against the measure-zero collisions.
///
/// Returns the unimodular eigenvalues and the diagonalizing unitary (columns
/// are eigenvectors), with channels sorted by eigenvalue phase.
pub fn unitary_eigen(u: &CMatrix) -> Result<(Vec<Complex64>, CMatrix)> {
    let n = u.n();
    if n == 1 {
        return Ok((vec![u[(0, 0)]], CMatrix::identity(1)));
    }
    let u_adj = u.adjoint();
    let mut re_part = CMatrix::zeros(n);
    let mut im_part = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            re_part[(i, j)] = 0.5 * (u[(i, j)] + u_adj[(i, j)]);
            im_part[(i, j)] = Complex64::new(0.0, -0.5) * (u[(i, j)] - u_adj[(i, j)]);
        }
    }

    const MIX: [f64; 4] = [
        0.739_085_133_215_160_7,
        0.288_675_134_594_812_9,
        1.902_113_032_590_307,
        3.535_533_905_932_738,
    ];
    let mut best: Option<(f64, Vec<Complex64>, CMatrix)> = None;
    for &t in MIX.iter() {
        let mut h = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] = re_part[(i, j)] + t * im_part[(i, j)];
            }
        }
        let (_, basis) = hermitian_eigen(&h)?;
        let d = basis.adjoint().mul(u).mul(&basis);
        let defect = d.max_offdiag_abs();
        let eigs: Vec<Complex64> = (0..n).map(|i| d[(i, i)]).collect();
        if best.as_ref().map_or(true, |(b, _, _)| defect < *b) {
            best = Some((defect, eigs, basis));
        }
        if defect <= 1e-12 {
            break;
        }
    }
    let (defect, eigs, basis) = best.unwrap();
    if defect > 1e-10 {
        return Err(Error::internal(format!(
            "unitary eigendecomposition left off-diagonal residue {defect:.3e}"
        )));
    }

    // Sort channels by eigenphase for reproducible spectral data.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eigs[i]
            .arg()
            .partial_cmp(&eigs[j].arg())
            .unwrap()
            .then(i.cmp(&j))
    });
    let sorted_eigs: Vec<Complex64> = order.iter().map(|&i| eigs[i]).collect();
    let mut sorted_basis = CMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            sorted_basis[(r, col)] = basis[(r, src)];
        }
    }
    Ok((sorted_eigs, sorted_basis))
}
