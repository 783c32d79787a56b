//! Operator-theoretic predicates: Douglas-style range inclusion with
//! majorization constant and factor, injectivity constants, co-isometry and
//! commutation tests, pseudo-inverse verification, range compression.
//!
//! In finite dimension every operator has closed range, so "closed range"
//! hypotheses from the operator-theory literature are vacuously true here;
//! the checks below test the remaining content.

use num_complex::Complex64;

use crate::eigen::{hermitian_eigen, KTOL};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::svd::{pseudo_inverse, range_basis, spectral_norm, svd};

/// Outcome of the three-way range-inclusion equivalence for (T₁, T₂):
/// inclusion `R(T₁) ⊆ R(T₂)`, majorization `T₁T₁* ⪯ λ²·T₂T₂*`, and
/// factorization `T₁ = T₂·U`.
#[derive(Debug, Clone)]
pub struct DouglasReport {
    pub range_included: bool,
    /// Least λ ≥ 0 with `T₁T₁* ⪯ λ²·T₂T₂*`; present iff included.
    pub lambda_min: Option<f64>,
    /// Minimal-norm factor `U = T₂⁺·T₁`; present iff included.
    pub factor_u: Option<ComplexMatrix>,
    /// (inclusion residual, factor residual, majorization margin).
    pub residuals: (f64, f64, f64),
    /// Unit direction in R(T₁) escaping R(T₂); present iff not included.
    pub witness: Option<Vec<Complex64>>,
}

/// Decide `R(t1) ⊆ R(t2)` and, when it holds, produce the majorization
/// constant and the factor.
///
/// The inclusion test is `‖(I − t2·t2⁺)·t1‖ ≤ rtol·max(1, ‖t1‖)`. The
/// constant λ is found by bisection on the PSD boundary of
/// `λ²·t2t2* − t1t1*`, returning the feasible endpoint.
pub fn douglas_check(
    t1: &ComplexMatrix,
    t2: &ComplexMatrix,
    rtol: f64,
) -> Result<DouglasReport> {
    if !t1.is_square() || !t2.is_square() || t1.rows() != t2.rows() {
        return Err(Error::DimensionMismatch(format!(
            "douglas check needs equal square matrices, got {}x{} and {}x{}",
            t1.rows(),
            t1.cols(),
            t2.rows(),
            t2.cols()
        )));
    }
    let n = t1.rows();
    let id = ComplexMatrix::identity(n)?;
    let t2_pinv = pseudo_inverse(t2, rtol)?;
    let projector_defect = id.sub(&t2.mul(&t2_pinv)?)?;
    let escape = projector_defect.mul(t1)?;
    let t1_norm = spectral_norm(t1)?;
    let inclusion_residual = spectral_norm(&escape)?;
    let range_included = inclusion_residual <= rtol * t1_norm.max(1.0);

    let factor = t2_pinv.mul(t1)?;
    let factor_residual = spectral_norm(&t2.mul(&factor)?.sub(t1)?)?;

    let g1 = t1.mul(&t1.adjoint())?;
    let g2 = t2.mul(&t2.adjoint())?;
    let scale = spectral_norm(&g1)?.max(1.0);
    let margin_at = |lambda: f64| -> Result<f64> {
        let shifted = g2.scale_re(lambda * lambda).sub(&g1)?;
        Ok(hermitian_eigen(&shifted, KTOL)?.min())
    };

    // Bracket top: ‖t1‖/σ⁺_min(t2) + 1, with σ⁺_min the smallest nonzero
    // singular value of t2.
    let d2 = svd(t2)?;
    let cutoff = rtol * d2.sigma_max();
    let sigma_plus_min = d2
        .singulars
        .iter()
        .copied()
        .filter(|&s| s > cutoff)
        .fold(f64::INFINITY, f64::min);
    let bracket_top = if sigma_plus_min.is_finite() {
        t1_norm / sigma_plus_min + 1.0
    } else {
        1.0
    };
    let top_margin = margin_at(bracket_top)?;
    let majorization_margin = top_margin;

    let (lambda_min, factor_u, witness) = if range_included {
        let lambda = if t1_norm == 0.0 {
            0.0
        } else if top_margin >= -KTOL * scale {
            // Bisect down from the feasible top; keep hi on the feasible side.
            let mut lo = 0.0;
            let mut hi = bracket_top;
            while hi - lo > 1e-9 {
                let mid = 0.5 * (lo + hi);
                if margin_at(mid)? >= -KTOL * scale {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            hi
        } else {
            // Projector test passed but majorization fails even at the top:
            // borderline inclusion; surface it as excluded-level residuals.
            bracket_top
        };
        (Some(lambda), Some(factor), None)
    } else {
        // Dominant escaping direction: top left singular vector of the
        // projected remainder.
        let esc = svd(&escape)?;
        let w = if esc.sigma_max() > 0.0 {
            Some(esc.left.column(0))
        } else {
            None
        };
        (None, None, w)
    };

    Ok(DouglasReport {
        range_included,
        lambda_min,
        factor_u,
        residuals: (inclusion_residual, factor_residual, majorization_margin),
        witness,
    })
}

/// Largest c with `c‖x‖² ≤ ‖t·x‖²`, i.e. σ_min(t)². Positive iff t is
/// injective.
pub fn injectivity_constant(t: &ComplexMatrix) -> Result<f64> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "injectivity constant needs a square matrix, got {}x{}",
            t.rows(),
            t.cols()
        )));
    }
    let s = svd(t)?.sigma_min();
    Ok(s * s)
}

/// `‖t·t* − I‖ ≤ tol`.
pub fn is_coisometry(t: &ComplexMatrix, tol: f64) -> Result<bool> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "co-isometry test needs a square matrix, got {}x{}",
            t.rows(),
            t.cols()
        )));
    }
    let id = ComplexMatrix::identity(t.rows())?;
    let defect = t.mul(&t.adjoint())?.sub(&id)?;
    Ok(spectral_norm(&defect)? <= tol)
}

/// Spectral norm of the commutator `t·k − k·t`.
pub fn commutation_residual(t: &ComplexMatrix, k: &ComplexMatrix) -> Result<f64> {
    if t.rows() != k.rows() || t.cols() != k.cols() || !t.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "commutator needs equal square matrices, got {}x{} and {}x{}",
            t.rows(),
            t.cols(),
            k.rows(),
            k.cols()
        )));
    }
    spectral_norm(&t.mul(k)?.sub(&k.mul(t)?)?)
}

/// Residuals of the defining pseudo-inverse properties of `t_plus` against
/// `t`: null-space match `N(t⁺) = R(t)^⊥`, range match `R(t⁺) = N(t)^⊥`,
/// and the identity `t·t⁺·x = x` on R(t).
pub fn pseudo_inverse_verify(
    t: &ComplexMatrix,
    t_plus: &ComplexMatrix,
    rtol: f64,
) -> Result<(f64, f64, f64)> {
    if t.rows() != t_plus.cols() || t.cols() != t_plus.rows() {
        return Err(Error::DimensionMismatch(format!(
            "pseudo-inverse of {}x{} must be {}x{}, got {}x{}",
            t.rows(),
            t.cols(),
            t.cols(),
            t.rows(),
            t_plus.rows(),
            t_plus.cols()
        )));
    }
    let projector = |m: &ComplexMatrix| -> Result<ComplexMatrix> {
        let q = range_basis(m, rtol)?;
        q.mul(&q.adjoint())
    };
    // N(t⁺) = R((t⁺)*)^⊥ must match R(t)^⊥, i.e. the range projectors of
    // (t⁺)* and t must agree.
    let p_left = projector(&t_plus.adjoint())?;
    let p_range_t = projector(t)?;
    let null_residual = spectral_norm(&p_left.sub(&p_range_t)?)?;

    // R(t⁺) must match N(t)^⊥ = R(t*).
    let p_range_tplus = projector(t_plus)?;
    let p_row_t = projector(&t.adjoint())?;
    let range_residual = spectral_norm(&p_range_tplus.sub(&p_row_t)?)?;

    // t·t⁺ restricted to R(t) is the identity.
    let q = range_basis(t, rtol)?;
    let identity_residual = spectral_norm(&t.mul(t_plus)?.mul(&q)?.sub(&q)?)?;

    Ok((null_residual, range_residual, identity_residual))
}

/// Compression of `s` to the range of `k`: returns `Q*·s·Q` for an
/// orthonormal range basis Q of k, together with σ_min(s·Q) — a lower
/// bound certificate for `‖S x‖` over unit x in R(k).
///
/// An operator with trivial range yields the empty compression and an
/// infinite (vacuous) lower bound.
pub fn restrict_to_range(
    s: &ComplexMatrix,
    k: &ComplexMatrix,
    rtol: f64,
) -> Result<(ComplexMatrix, f64)> {
    if !s.is_square() || !k.is_square() || s.rows() != k.rows() {
        return Err(Error::DimensionMismatch(format!(
            "range restriction needs equal square matrices, got {}x{} and {}x{}",
            s.rows(),
            s.cols(),
            k.rows(),
            k.cols()
        )));
    }
    let q = range_basis(k, rtol)?;
    let compressed = q.adjoint().mul(s)?.mul(&q)?;
    if q.cols() == 0 {
        return Ok((compressed, f64::INFINITY));
    }
    let sq = s.mul(&q)?;
    Ok((compressed, svd(&sq)?.sigma_min()))
}
