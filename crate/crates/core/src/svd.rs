//! Singular value decomposition and everything derived from it.
//!
//! The SVD is computed by one-sided Jacobi (Hestenes): right rotations
//! orthogonalize the columns of the working matrix. Those rotations are
//! exactly the Jacobi rotations that diagonalize M*M, but applying them to
//! the columns directly avoids forming the Gram matrix, so small singular
//! values keep full absolute accuracy and rank-deficient inputs reconstruct
//! to eps-level rather than sqrt(eps)-level.

use num_complex::Complex64;

use crate::eigen::{hermitian_eigen, KTOL};
use crate::error::{Error, Result};
use crate::matrix::{vec_norm, ComplexMatrix};

const MAX_SWEEPS: usize = 64;

/// Thin SVD: `M = left · diag(singulars) · right*` with min(rows, cols)
/// orthonormal columns on both sides and singular values descending.
#[derive(Debug, Clone)]
pub struct SvdDecomposition {
    pub left: ComplexMatrix,
    pub singulars: Vec<f64>,
    pub right: ComplexMatrix,
}

impl SvdDecomposition {
    pub fn sigma_max(&self) -> f64 {
        self.singulars.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.singulars.last().copied().unwrap_or(0.0)
    }
}

/// Default rank cutoff for a matrix of the given shape.
pub fn default_rtol(rows: usize, cols: usize) -> f64 {
    rows.max(cols).max(1) as f64 * 1e-12
}

pub fn svd(m: &ComplexMatrix) -> Result<SvdDecomposition> {
    if m.rows() < m.cols() {
        let t = svd(&m.adjoint())?;
        return Ok(SvdDecomposition {
            left: t.right,
            singulars: t.singulars,
            right: t.left,
        });
    }
    let rows = m.rows();
    let cols = m.cols();
    if cols == 0 {
        return Ok(SvdDecomposition {
            left: ComplexMatrix::zeros(rows, 0)?,
            singulars: vec![],
            right: ComplexMatrix::zeros(0, 0)?,
        });
    }

    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(cols)?;
    let ortho_tol = (rows as f64).sqrt() * f64::EPSILON * 16.0;
    // Columns at rounding level carry no direction information; excluding
    // them from rotations is what makes rank-deficient sweeps terminate.
    let noise_floor = {
        let f = m.frobenius_norm() * f64::EPSILON * 16.0;
        f * f
    };

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols - 1 {
            for q in p + 1..cols {
                if orthogonalize_pair(&mut a, &mut v, p, q, ortho_tol, noise_floor) {
                    rotated = true;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    // Column norms are the singular values.
    let mut sigma: Vec<f64> = (0..cols).map(|j| vec_norm(&a.column(j))).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
    let mut aw = ComplexMatrix::zeros(rows, cols)?;
    let mut vw = ComplexMatrix::zeros(cols, cols)?;
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..rows {
            aw.set(r, dst, a.get(r, src));
        }
        for r in 0..cols {
            vw.set(r, dst, v.get(r, src));
        }
    }
    sigma = order.iter().map(|&i| sigma[i]).collect();

    // Left vectors: normalized columns where the norm is meaningful,
    // orthonormal completion where it is not.
    let sigma_max = sigma[0];
    let normalize_cutoff = sigma_max * rows.max(cols) as f64 * f64::EPSILON;
    let mut left = ComplexMatrix::zeros(rows, cols)?;
    let mut filled: Vec<usize> = Vec::new();
    for j in 0..cols {
        if sigma[j] > normalize_cutoff && sigma[j] > 0.0 {
            for r in 0..rows {
                left.set(r, j, aw.get(r, j).scale(1.0 / sigma[j]));
            }
            filled.push(j);
        }
    }
    for j in 0..cols {
        if sigma[j] <= normalize_cutoff || sigma[j] == 0.0 {
            let col = complete_column(&left, &filled, rows);
            for r in 0..rows {
                left.set(r, j, col[r]);
            }
            filled.push(j);
        }
    }

    Ok(SvdDecomposition {
        left,
        singulars: sigma,
        right: vw,
    })
}

/// Rotate columns p, q of the working matrix so they become orthogonal.
/// Returns true when a rotation was actually applied.
fn orthogonalize_pair(
    a: &mut ComplexMatrix,
    v: &mut ComplexMatrix,
    p: usize,
    q: usize,
    tol: f64,
    noise_floor: f64,
) -> bool {
    let rows = a.rows();
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut gamma = Complex64::new(0.0, 0.0);
    for k in 0..rows {
        let ap = a.get(k, p);
        let aq = a.get(k, q);
        alpha += ap.norm_sqr();
        beta += aq.norm_sqr();
        gamma += ap.conj() * aq;
    }
    if alpha <= noise_floor || beta <= noise_floor {
        return false;
    }
    let g = gamma.norm();
    if g <= tol * (alpha * beta).sqrt() || g == 0.0 {
        return false;
    }
    let phase = gamma / g;
    let tau = (beta - alpha) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let sp = Complex64::new(s, 0.0) * phase.conj();
    let cp = Complex64::new(c, 0.0) * phase.conj();
    for k in 0..rows {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp.scale(c) - sp * akq);
        a.set(k, q, akp.scale(s) + cp * akq);
    }
    let n = v.rows();
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp.scale(c) - sp * vkq);
        v.set(k, q, vkp.scale(s) + cp * vkq);
    }
    true
}

/// Next orthonormal completion column: a coordinate vector orthogonalized
/// twice against the already-filled columns.
fn complete_column(left: &ComplexMatrix, filled: &[usize], rows: usize) -> Vec<Complex64> {
    for cand in 0..rows {
        let mut col = vec![Complex64::new(0.0, 0.0); rows];
        col[cand] = Complex64::new(1.0, 0.0);
        for _pass in 0..2 {
            for &j in filled {
                let u = left.column(j);
                let proj = crate::matrix::inner(&col, &u);
                for r in 0..rows {
                    col[r] -= proj * u[r];
                }
            }
        }
        let n = vec_norm(&col);
        if n > 0.5 {
            return col.iter().map(|z| z / n).collect();
        }
    }
    // Unreachable for consistent shapes: fewer filled columns than rows.
    vec![Complex64::new(0.0, 0.0); rows]
}

/// Operator (spectral) norm.
pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(svd(m)?.sigma_max())
}

/// Count of singular values above `rtol · σ_max`.
pub fn numerical_rank(m: &ComplexMatrix, rtol: f64) -> Result<usize> {
    let d = svd(m)?;
    let cutoff = rtol * d.sigma_max();
    Ok(d.singulars.iter().filter(|&&s| s > cutoff).count())
}

/// Orthonormal columns spanning the numerical range of `m`.
pub fn range_basis(m: &ComplexMatrix, rtol: f64) -> Result<ComplexMatrix> {
    let d = svd(m)?;
    let cutoff = rtol * d.sigma_max();
    let rank = d.singulars.iter().filter(|&&s| s > cutoff).count();
    let mut q = ComplexMatrix::zeros(m.rows(), rank)?;
    for j in 0..rank {
        for i in 0..m.rows() {
            q.set(i, j, d.left.get(i, j));
        }
    }
    Ok(q)
}

/// Moore–Penrose pseudo-inverse with rank cutoff `rtol · σ_max`.
///
/// The zero matrix maps to the (transposed) zero matrix. For invertible
/// input this agrees with the inverse to kernel accuracy.
pub fn pseudo_inverse(m: &ComplexMatrix, rtol: f64) -> Result<ComplexMatrix> {
    if rtol <= 0.0 {
        return Err(Error::BadParameters(format!(
            "pseudo-inverse cutoff must be positive, got {rtol}"
        )));
    }
    let d = svd(m)?;
    let cutoff = rtol * d.sigma_max();
    let k = d.singulars.len();
    let mut out = ComplexMatrix::zeros(m.cols(), m.rows())?;
    for j in 0..k {
        let s = d.singulars[j];
        if s <= cutoff || s == 0.0 {
            continue;
        }
        let inv = 1.0 / s;
        // out += inv · v_j · u_j*
        for r in 0..m.cols() {
            let vr = d.right.get(r, j);
            if vr.re == 0.0 && vr.im == 0.0 {
                continue;
            }
            for c in 0..m.rows() {
                let add = vr * d.left.get(c, j).conj();
                let cur = out.get(r, c);
                out.set(r, c, cur + add.scale(inv));
            }
        }
    }
    Ok(out)
}

/// Hermitian PSD square root via eigendecomposition.
///
/// Eigenvalues in `[−ktol·‖H‖, 0)` are clamped to zero; anything below that
/// is a genuine PSD violation and errors.
pub fn psd_sqrt(h: &ComplexMatrix, ktol: f64) -> Result<ComplexMatrix> {
    let e = hermitian_eigen(h, ktol)?;
    let scale = e
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .fold(0.0f64, f64::max);
    let floor = -ktol * scale;
    if e.min() < floor {
        return Err(Error::NotPsd { min_eig: e.min() });
    }
    let n = h.rows();
    let mut out = ComplexMatrix::zeros(n, n)?;
    for j in 0..n {
        let lambda = e.eigenvalues[j].max(0.0);
        if lambda == 0.0 {
            continue;
        }
        let root = lambda.sqrt();
        let col = e.eigenvectors.column(j);
        for r in 0..n {
            if col[r].re == 0.0 && col[r].im == 0.0 {
                continue;
            }
            for c in 0..n {
                let add = col[r] * col[c].conj();
                let cur = out.get(r, c);
                out.set(r, c, cur + add.scale(root));
            }
        }
    }
    // Kill rounding asymmetry so the result is Hermitian exactly.
    Ok(out.add(&out.adjoint())?.scale_re(0.5))
}

/// Convenience caller with the kernel default tolerance.
pub fn psd_sqrt_default(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    psd_sqrt(h, KTOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruction_residual(m: &ComplexMatrix, d: &SvdDecomposition) -> f64 {
        let k = d.singulars.len();
        let mut approx = ComplexMatrix::zeros(m.rows(), m.cols()).unwrap();
        for j in 0..k {
            for r in 0..m.rows() {
                for col in 0..m.cols() {
                    let add = d.left.get(r, j) * d.right.get(col, j).conj();
                    let cur = approx.get(r, col);
                    approx.set(r, col, cur + add.scale(d.singulars[j]));
                }
            }
        }
        m.sub(&approx).unwrap().frobenius_norm()
    }

    fn random_matrix(rng: &mut SplitMix64, rows: usize, cols: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(rows, cols).unwrap();
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, rng.complex_gaussian());
            }
        }
        m
    }

    fn right_shift(n: usize) -> ComplexMatrix {
        // e_i ↦ e_{i+1}, last basis vector annihilated by truncation
        let mut m = ComplexMatrix::zeros(n, n).unwrap();
        for i in 0..n - 1 {
            m.set(i + 1, i, c(1.0, 0.0));
        }
        m
    }

    #[test]
    fn diagonal_singulars() {
        let m = ComplexMatrix::from_real_diag(&[3.0, 2.0, 0.0]).unwrap();
        let d = svd(&m).unwrap();
        assert_eq!(d.singulars, vec![3.0, 2.0, 0.0]);
    }

    #[test]
    fn right_shift_singulars() {
        let d = svd(&right_shift(4)).unwrap();
        assert_eq!(d.singulars.len(), 4);
        for s in &d.singulars[..3] {
            assert!((s - 1.0).abs() < 1e-14);
        }
        assert!(d.singulars[3].abs() < 1e-14);
    }

    #[test]
    fn zero_matrix_all_zero_singulars() {
        let m = ComplexMatrix::zeros(3, 2).unwrap();
        let d = svd(&m).unwrap();
        assert_eq!(d.singulars, vec![0.0, 0.0]);
        // completion still orthonormal
        let g = d.left.adjoint().mul(&d.left).unwrap();
        assert!(g.sub(&ComplexMatrix::identity(2).unwrap()).unwrap().frobenius_norm() < 1e-14);
    }

    #[test]
    fn random_svd_reconstructs() {
        let mut rng = SplitMix64::new(17);
        for _ in 0..40 {
            let rows = rng.uniform_usize(1, 9);
            let cols = rng.uniform_usize(1, 9);
            let m = random_matrix(&mut rng, rows, cols);
            let d = svd(&m).unwrap();
            let scale = d.sigma_max().max(1e-30);
            assert!(
                reconstruction_residual(&m, &d) <= 1e-12 * scale.max(1.0),
                "residual too large at {rows}x{cols}"
            );
            for w in d.singulars.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn pseudo_inverse_of_diag() {
        let m = ComplexMatrix::from_real_diag(&[2.0, 0.0]).unwrap();
        let p = pseudo_inverse(&m, default_rtol(2, 2)).unwrap();
        assert!((p.get(0, 0).re - 0.5).abs() < 1e-15);
        assert_eq!(p.get(1, 1), c(0.0, 0.0));
    }

    #[test]
    fn pseudo_inverse_inverts_invertible() {
        let mut rng = SplitMix64::new(23);
        let m = random_matrix(&mut rng, 4, 4);
        let p = pseudo_inverse(&m, default_rtol(4, 4)).unwrap();
        let res = p
            .mul(&m)
            .unwrap()
            .sub(&ComplexMatrix::identity(4).unwrap())
            .unwrap()
            .frobenius_norm();
        assert!(res <= 1e-9, "residual {res}");
    }

    #[test]
    fn pseudo_inverse_zero_matrix() {
        let m = ComplexMatrix::zeros(3, 2).unwrap();
        let p = pseudo_inverse(&m, default_rtol(3, 2)).unwrap();
        assert_eq!(p.rows(), 2);
        assert_eq!(p.cols(), 3);
        assert!(p.frobenius_norm() == 0.0);
    }

    #[test]
    fn psd_sqrt_of_diag() {
        let h = ComplexMatrix::from_real_diag(&[4.0, 1.0, 0.0]).unwrap();
        let r = psd_sqrt_default(&h).unwrap();
        let expect = ComplexMatrix::from_real_diag(&[2.0, 1.0, 0.0]).unwrap();
        assert!(r.sub(&expect).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let mut rng = SplitMix64::new(29);
        for _ in 0..20 {
            let n = rng.uniform_usize(1, 8);
            let g = random_matrix(&mut rng, n, n);
            let h = g.mul(&g.adjoint()).unwrap();
            let r = psd_sqrt_default(&h).unwrap();
            let res = r.mul(&r).unwrap().sub(&h).unwrap().frobenius_norm();
            let scale = h.frobenius_norm().max(1.0);
            assert!(res <= 1e-9 * scale, "residual {res}");
        }
    }

    #[test]
    fn psd_sqrt_rejects_indefinite() {
        let h = ComplexMatrix::from_real_diag(&[1.0, -1.0]).unwrap();
        assert!(matches!(psd_sqrt_default(&h), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn spectral_norm_picks_largest_magnitude() {
        let h = ComplexMatrix::from_real_diag(&[2.0, -3.0]).unwrap();
        assert!((spectral_norm(&h).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn range_basis_of_right_shift() {
        let q = range_basis(&right_shift(4), default_rtol(4, 4)).unwrap();
        assert_eq!(q.cols(), 3);
        // spans {e2, e3, e4}: first coordinate of every basis vector is 0
        for j in 0..3 {
            assert!(q.get(0, j).norm() < 1e-13);
        }
    }

    #[test]
    fn rank_of_rank_deficient_product() {
        let mut rng = SplitMix64::new(31);
        let a = random_matrix(&mut rng, 4, 2);
        let b = random_matrix(&mut rng, 2, 4);
        let m = a.mul(&b).unwrap();
        assert_eq!(numerical_rank(&m, default_rtol(4, 4)).unwrap(), 2);
    }
}
