//! Dense complex matrices, row-major storage.
//!
//! This is the carrier type for every operator in the crate. Matrices are
//! immutable values as far as the public API is concerned; all operations
//! allocate fresh results. Sizes are capped at [`MAX_DIM`] because the
//! toolkit targets desk-scale certification problems, not HPC workloads.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest accepted row/column count.
pub const MAX_DIM: usize = 256;

/// Dense complex matrix with row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given shape. Shapes with zero rows or columns are
    /// legal (they show up as empty range bases and empty compressions).
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_dims(rows, cols)?;
        Ok(Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        })
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        Ok(m)
    }

    /// Build from nested rows. All rows must have equal length and all
    /// entries must be finite.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        check_dims(r, c)?;
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {c}",
                    row.len()
                )));
            }
            for (j, &z) in row.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFiniteEntry { row: i, col: j });
                }
                data.push(z);
            }
        }
        Ok(Self { rows: r, cols: c, data })
    }

    /// Build from a real diagonal.
    pub fn from_real_diag(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len(), diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(d, 0.0));
        }
        Ok(m)
    }

    /// Build an n×1 column matrix from a vector.
    pub fn from_column(v: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(v.len(), 1)?;
        for (i, &z) in v.iter().enumerate() {
            m.set(i, 0, z);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Column `j` as an owned vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self {
            rows: self.cols,
            cols: self.rows,
            data: vec![Complex64::new(0.0, 0.0); self.data.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self {
            rows: self.rows,
            cols: other.cols,
            data: vec![Complex64::new(0.0, 0.0); self.rows * other.cols],
        };
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} does not match {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self.get(i, j) * v[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// Frobenius norm. Used for cheap internal residual checks; the
    /// user-facing operator norm lives in [`crate::svd::spectral_norm`].
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        let n = self.rows.min(self.cols);
        (0..n).map(|i| self.get(i, i)).sum()
    }

    /// `‖self − self*‖_F / max(1, ‖self‖_F)`, zero for exactly Hermitian input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self.get(i, j) - self.get(j, i).conj();
                acc += d.norm_sqr();
            }
        }
        acc.sqrt() / self.frobenius_norm().max(1.0)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows > MAX_DIM {
        return Err(Error::DimensionLimit(rows));
    }
    if cols > MAX_DIM {
        return Err(Error::DimensionLimit(cols));
    }
    Ok(())
}

/// Conjugate transpose as a free function, mirroring the `*` notation.
pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

/// Inner product `⟨u, v⟩ = Σ u_k conj(v_k)`, linear in the first slot.
///
/// This convention is fixed project-wide; the biframe machinery depends on it.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_self_adjoint() {
        let i3 = ComplexMatrix::identity(3).unwrap();
        assert_eq!(i3.adjoint(), i3);
    }

    #[test]
    fn adjoint_transposes_real_shift() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let a = m.adjoint();
        assert_eq!(a.get(0, 0), c(0.0, 0.0));
        assert_eq!(a.get(1, 0), c(1.0, 0.0));
        assert_eq!(a.get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn adjoint_conjugates_entries() {
        let mut m = ComplexMatrix::zeros(3, 3).unwrap();
        m.set(0, 1, c(0.0, 1.0));
        let a = m.adjoint();
        assert_eq!(a.get(1, 0), c(0.0, -1.0));
    }

    #[test]
    fn adjoint_is_an_involution() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 2.0), c(-0.5, 0.25)],
            vec![c(0.0, -3.0), c(4.0, 0.125)],
        ])
        .unwrap();
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn rejects_oversized_matrices() {
        assert!(matches!(
            ComplexMatrix::zeros(MAX_DIM + 1, 1),
            Err(Error::DimensionLimit(_))
        ));
    }

    #[test]
    fn rejects_non_finite_entries() {
        let rows = vec![vec![c(f64::NAN, 0.0)]];
        assert!(matches!(
            ComplexMatrix::from_rows(&rows),
            Err(Error::NonFiniteEntry { row: 0, col: 0 })
        ));
    }

    #[test]
    fn rejects_ragged_rows() {
        let rows = vec![vec![c(1.0, 0.0)], vec![]];
        assert!(ComplexMatrix::from_rows(&rows).is_err());
    }

    #[test]
    fn mul_against_hand_computed_product() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(2.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let b = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, -1.0)],
        ])
        .unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.get(0, 0), c(0.0, 1.0));
        assert_eq!(p.get(0, 1), c(2.0, 0.0));
        assert_eq!(p.get(1, 0), c(0.0, 0.0));
        assert_eq!(p.get(1, 1), c(2.0, 0.0));
    }

    #[test]
    fn inner_is_linear_in_first_slot() {
        let u = [c(0.0, 1.0)];
        let v = [c(0.0, 1.0)];
        assert_eq!(inner(&u, &v), c(1.0, 0.0));
        assert_eq!(inner(&[c(0.0, 2.0)], &v), c(2.0, 0.0));
    }

    #[test]
    fn hermitian_defect_detects_skew_part() {
        let h = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 1.0), c(2.0, 0.0)],
        ])
        .unwrap();
        assert!(h.hermitian_defect() > 0.1);
        let sym = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, -1.0), c(2.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(sym.hermitian_defect(), 0.0);
    }
}
