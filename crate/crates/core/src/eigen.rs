//! Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! Each rotation diagonalizes one 2×2 principal block. For a Hermitian block
//! [[α, β], [conj(β), γ]] with β = r·e^{iφ}, the phase is absorbed first
//! (reducing to a real symmetric block) and the standard Jacobi tangent
//! formula then yields the rotation angle. Off-diagonal mass decreases
//! monotonically and the sweep count stays small at the target sizes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Default relative tolerance of the numeric kernel.
pub const KTOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues ascending plus a unitary matrix of eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must be Hermitian within `ktol` relative to its size
/// (`NotHermitian` otherwise); the strictly-Hermitian average
/// `(H + H*)/2` is what actually gets diagonalized, so tiny asymmetry
/// from accumulated rounding is tolerated but never amplified.
pub fn hermitian_eigen(h: &ComplexMatrix, ktol: f64) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let defect = h.hermitian_defect();
    if defect > ktol {
        return Err(Error::NotHermitian { residual: defect });
    }
    let n = h.rows();
    if n == 0 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![],
            eigenvectors: ComplexMatrix::zeros(0, 0)?,
        });
    }

    // Work on the exactly-Hermitian part.
    let mut a = h.add(&h.adjoint())?.scale_re(0.5);
    let mut v = ComplexMatrix::identity(n)?;
    let scale = a.frobenius_norm();
    let off_target = scale * (n as f64) * f64::EPSILON;

    let mut converged = scale == 0.0;
    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= off_target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    // A stall slightly above the eps-level target is still far below ktol.
    if !converged && off_diagonal_norm(&a) > scale * 1e-12 {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n)?;
    for (dst, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, dst, v.get(row, src));
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eig_hermitian(h: &ComplexMatrix, ktol: f64) -> Result<f64> {
    Ok(hermitian_eigen(h, ktol)?.min())
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc += a.get(p, q).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation zeroing the (p, q) entry.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{iφ}
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = a.rows();
    // Columns: A ← A·Q with Q = [[c, s], [−s·conj(phase), c·conj(phase)]]
    // acting on columns p, q.
    let sp = Complex64::new(s, 0.0) * phase.conj();
    let cp = Complex64::new(c, 0.0) * phase.conj();
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp.scale(c) - sp * akq);
        a.set(k, q, akp.scale(s) + cp * akq);
    }
    // Rows: A ← Q^H·A.
    let sph = Complex64::new(s, 0.0) * phase;
    let cph = Complex64::new(c, 0.0) * phase;
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk.scale(c) - sph * aqk);
        a.set(q, k, apk.scale(s) + cph * aqk);
    }
    // Pin the rotated block to its exact post-rotation values.
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    a.set(p, p, Complex64::new(app - t * r, 0.0));
    a.set(q, q, Complex64::new(aqq + t * r, 0.0));

    // Accumulate V ← V·Q.
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp.scale(c) - sp * vkq);
        v.set(k, q, vkp.scale(s) + cp * vkq);
    }
}
