//! Frame sequences, biframe pairs and the operators they induce.
//!
//! A `FrameSequence` is a finite list of vectors in ℂⁿ. Infinite families
//! from the literature are modeled by finite truncations; gallery instances
//! record the truncation dimension in their provenance. The biframe operator
//! of a pair (X, Y) is `S = Σ yᵢ xᵢ*`, so that `S x = Σ ⟨x, xᵢ⟩ yᵢ` with the
//! inner product linear in the first slot.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{inner, ComplexMatrix, MAX_DIM};

/// Finite sequence of vectors in ℂⁿ. May be empty (all induced operators
/// are then zero).
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    dim: usize,
    vectors: Vec<Vec<Complex64>>,
}

impl FrameSequence {
    pub fn new(dim: usize, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionLimit(dim));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "vector {i} has length {}, expected {dim}",
                    v.len()
                )));
            }
            for (j, z) in v.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFiniteEntry { row: i, col: j });
                }
            }
        }
        Ok(Self { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    /// Elementwise sum of two sequences of equal length and dimension.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim || self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "sequence sum needs equal shape: {}x{} vs {}x{}",
                self.len(),
                self.dim,
                other.len(),
                other.dim
            )));
        }
        let vectors = self
            .vectors
            .iter()
            .zip(&other.vectors)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(Self { dim: self.dim, vectors })
    }

    /// Rescale every vector by a complex factor.
    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            vectors: self
                .vectors
                .iter()
                .map(|v| v.iter().map(|z| z * factor).collect())
                .collect(),
        }
    }
}

/// Ordered pair of sequences of equal length and dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct BiframePair {
    pub x: FrameSequence,
    pub y: FrameSequence,
}

impl BiframePair {
    pub fn new(x: FrameSequence, y: FrameSequence) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch(format!(
                "pair dimensions differ: {} vs {}",
                x.dim(),
                y.dim()
            )));
        }
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch(format!(
                "pair lengths differ: {} vs {}",
                x.len(),
                y.len()
            )));
        }
        Ok(Self { x, y })
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// The pair with the roles of X and Y exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }
}

/// Biframe operator `S = Σ yᵢ xᵢ*`.
pub fn biframe_operator(pair: &BiframePair) -> Result<ComplexMatrix> {
    let n = pair.dim();
    let mut s = ComplexMatrix::zeros(n, n)?;
    for (x, y) in pair.x.vectors().iter().zip(pair.y.vectors()) {
        for r in 0..n {
            if y[r].re == 0.0 && y[r].im == 0.0 {
                continue;
            }
            for c in 0..n {
                let cur = s.get(r, c);
                s.set(r, c, cur + y[r] * x[c].conj());
            }
        }
    }
    Ok(s)
}

/// The sesquilinear form `Φ(v) = Σ ⟨v, xᵢ⟩ ⟨yᵢ, v⟩`, summed directly.
///
/// Agrees with `⟨S v, v⟩` for the biframe operator S, which is what the
/// operator-form oracle in the tests checks.
pub fn pair_form(pair: &BiframePair, v: &[Complex64]) -> Result<Complex64> {
    if v.len() != pair.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} does not match pair dimension {}",
            v.len(),
            pair.dim()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, y) in pair.x.vectors().iter().zip(pair.y.vectors()) {
        acc += inner(v, x) * inner(y, v);
    }
    Ok(acc)
}

/// Hermitian part `(S + S*)/2`; carries the real part of the quadratic form.
pub fn hermitian_part(s: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "hermitian part needs a square matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    Ok(s.add(&s.adjoint())?.scale_re(0.5))
}

/// Frame operator of a single sequence: `Σ xᵢ xᵢ*`, Hermitian PSD by
/// construction.
pub fn frame_operator(x: &FrameSequence) -> Result<ComplexMatrix> {
    let pair = BiframePair::new(x.clone(), x.clone())?;
    biframe_operator(&pair)
}

/// Map every vector of the sequence through `T`.
pub fn apply_operator_to_sequence(
    t: &ComplexMatrix,
    x: &FrameSequence,
) -> Result<FrameSequence> {
    if t.cols() != x.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator has {} columns, sequence dimension is {}",
            t.cols(),
            x.dim()
        )));
    }
    let vectors = x
        .vectors()
        .iter()
        .map(|v| t.apply(v))
        .collect::<Result<Vec<_>>>()?;
    FrameSequence::new(t.rows(), vectors)
}

/// Map both sequences of a pair through `T`.
pub fn apply_operator_to_pair(t: &ComplexMatrix, p: &BiframePair) -> Result<BiframePair> {
    BiframePair::new(
        apply_operator_to_sequence(t, &p.x)?,
        apply_operator_to_sequence(t, &p.y)?,
    )
}

/// Standard basis vector e_i of ℂⁿ.
pub fn basis_vector(n: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[i] = Complex64::new(1.0, 0.0);
    v
}

/// The full standard basis of ℂⁿ as a sequence.
pub fn standard_basis(n: usize) -> Result<FrameSequence> {
    FrameSequence::new(n, (0..n).map(|i| basis_vector(n, i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn scaled(n: usize, i: usize, f: f64) -> Vec<Complex64> {
        basis_vector(n, i).iter().map(|z| z.scale(f)).collect()
    }

    fn random_pair(rng: &mut SplitMix64, n: usize, m: usize) -> BiframePair {
        let x = FrameSequence::new(n, (0..m).map(|_| rng.complex_vector(n)).collect()).unwrap();
        let y = FrameSequence::new(n, (0..m).map(|_| rng.complex_vector(n)).collect()).unwrap();
        BiframePair::new(x, y).unwrap()
    }

    /// The 4-dimensional pair with a singular diagonal biframe operator:
    /// X = {e1, e1, 2e2, 3e3}, Y = {e1, e1, e2/2, e3/3}.
    fn singular_diag_pair() -> BiframePair {
        let x = FrameSequence::new(
            4,
            vec![
                basis_vector(4, 0),
                basis_vector(4, 0),
                scaled(4, 1, 2.0),
                scaled(4, 2, 3.0),
            ],
        )
        .unwrap();
        let y = FrameSequence::new(
            4,
            vec![
                basis_vector(4, 0),
                basis_vector(4, 0),
                scaled(4, 1, 0.5),
                scaled(4, 2, 1.0 / 3.0),
            ],
        )
        .unwrap();
        BiframePair::new(x, y).unwrap()
    }

    #[test]
    fn singular_diag_operator_is_exact() {
        let s = biframe_operator(&singular_diag_pair()).unwrap();
        let expect = ComplexMatrix::from_real_diag(&[2.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn standard_basis_gives_identity() {
        let b = standard_basis(5).unwrap();
        let p = BiframePair::new(b.clone(), b).unwrap();
        let s = biframe_operator(&p).unwrap();
        assert_eq!(s, ComplexMatrix::identity(5).unwrap());
    }

    #[test]
    fn operator_matches_direct_summation() {
        // S e_k must equal Σ ⟨e_k, xᵢ⟩ yᵢ, summed directly.
        let mut rng = SplitMix64::new(7);
        let p = random_pair(&mut rng, 3, 5);
        let s = biframe_operator(&p).unwrap();
        for k in 0..3 {
            let e = basis_vector(3, k);
            let via_op = s.apply(&e).unwrap();
            let mut direct = [c(0.0, 0.0); 3];
            for (x, y) in p.x.vectors().iter().zip(p.y.vectors()) {
                let w = inner(&e, x);
                for r in 0..3 {
                    direct[r] += w * y[r];
                }
            }
            for r in 0..3 {
                assert!((via_op[r] - direct[r]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pair_form_on_the_diag_example() {
        let p = singular_diag_pair();
        let v = basis_vector(4, 0);
        let phi = pair_form(&p, &v).unwrap();
        assert_eq!(phi, c(2.0, 0.0));
        let zero = [c(0.0, 0.0); 4];
        assert_eq!(pair_form(&p, &zero).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn pair_form_agrees_with_operator_form() {
        let mut rng = SplitMix64::new(13);
        for _ in 0..25 {
            let n = rng.uniform_usize(1, 6);
            let m = rng.uniform_usize(0, 7);
            let p = random_pair(&mut rng, n, m);
            let s = biframe_operator(&p).unwrap();
            let v = rng.complex_vector(n);
            let phi = pair_form(&p, &v).unwrap();
            let sv = s.apply(&v).unwrap();
            let quad = inner(&sv, &v);
            assert!((phi - quad).norm() <= 1e-10 * (1.0 + quad.norm()));
        }
    }

    #[test]
    fn hermitian_part_examples() {
        let d = ComplexMatrix::from_real_diag(&[2.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(hermitian_part(&d).unwrap(), d);
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let h = hermitian_part(&m).unwrap();
        assert_eq!(h.get(0, 1), c(0.5, 0.0));
        assert_eq!(h.get(1, 0), c(0.5, 0.0));
    }

    #[test]
    fn hermitian_part_carries_real_quadratic_form() {
        let mut rng = SplitMix64::new(19);
        let p = random_pair(&mut rng, 4, 6);
        let s = biframe_operator(&p).unwrap();
        let h = hermitian_part(&s).unwrap();
        for _ in 0..10 {
            let v = rng.complex_vector(4);
            let hv = h.apply(&v).unwrap();
            let sv = s.apply(&v).unwrap();
            let lhs = inner(&hv, &v).re;
            let rhs = inner(&sv, &v).re;
            assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn frame_operator_examples() {
        let b = standard_basis(3).unwrap();
        assert_eq!(
            frame_operator(&b).unwrap(),
            ComplexMatrix::identity(3).unwrap()
        );
        let single = FrameSequence::new(2, vec![scaled(2, 0, 2.0)]).unwrap();
        assert_eq!(
            frame_operator(&single).unwrap(),
            ComplexMatrix::from_real_diag(&[4.0, 0.0]).unwrap()
        );
    }

    #[test]
    fn frame_operator_is_psd() {
        let mut rng = SplitMix64::new(37);
        let x =
            FrameSequence::new(4, (0..6).map(|_| rng.complex_vector(4)).collect()).unwrap();
        let s = frame_operator(&x).unwrap();
        let e = crate::eigen::hermitian_eigen(&s, crate::eigen::KTOL).unwrap();
        assert!(e.min() >= -1e-10 * s.frobenius_norm().max(1.0));
    }

    #[test]
    fn apply_operator_examples() {
        let b = standard_basis(4).unwrap();
        let id = ComplexMatrix::identity(4).unwrap();
        assert_eq!(apply_operator_to_sequence(&id, &b).unwrap(), b);

        let zero = ComplexMatrix::zeros(4, 4).unwrap();
        let z = apply_operator_to_sequence(&zero, &b).unwrap();
        for v in z.vectors() {
            assert!(v.iter().all(|e| e.re == 0.0 && e.im == 0.0));
        }

        // left shift: e1 ↦ 0, e_i ↦ e_{i−1}
        let mut left = ComplexMatrix::zeros(4, 4).unwrap();
        for i in 1..4 {
            left.set(i - 1, i, c(1.0, 0.0));
        }
        let shifted = apply_operator_to_sequence(&left, &b).unwrap();
        assert!(shifted.vectors()[0].iter().all(|e| e.norm() == 0.0));
        assert_eq!(shifted.vectors()[1], basis_vector(4, 0));
        assert_eq!(shifted.vectors()[2], basis_vector(4, 1));
        assert_eq!(shifted.vectors()[3], basis_vector(4, 2));
    }

    #[test]
    fn swap_identity_is_exact() {
        let mut rng = SplitMix64::new(41);
        for _ in 0..10 {
            let p = random_pair(&mut rng, 4, 5);
            let s_xy = biframe_operator(&p).unwrap();
            let s_yx = biframe_operator(&p.swapped()).unwrap();
            assert_eq!(s_yx, s_xy.adjoint());
        }
    }

    #[test]
    fn sum_expansion_identity() {
        let mut rng = SplitMix64::new(43);
        let n = 3;
        let m = 4;
        let x = FrameSequence::new(n, (0..m).map(|_| rng.complex_vector(n)).collect()).unwrap();
        let y = FrameSequence::new(n, (0..m).map(|_| rng.complex_vector(n)).collect()).unwrap();
        let z = FrameSequence::new(n, (0..m).map(|_| rng.complex_vector(n)).collect()).unwrap();
        let lhs = biframe_operator(
            &BiframePair::new(z.add(&x).unwrap(), y.add(&z).unwrap()).unwrap(),
        )
        .unwrap();
        let zy = biframe_operator(&BiframePair::new(z.clone(), y.clone()).unwrap()).unwrap();
        let zz = biframe_operator(&BiframePair::new(z.clone(), z.clone()).unwrap()).unwrap();
        let xy = biframe_operator(&BiframePair::new(x.clone(), y.clone()).unwrap()).unwrap();
        let xz = biframe_operator(&BiframePair::new(x, z).unwrap()).unwrap();
        let rhs = zy.add(&zz).unwrap().add(&xy).unwrap().add(&xz).unwrap();
        let scale = rhs.frobenius_norm().max(1.0);
        assert!(lhs.sub(&rhs).unwrap().frobenius_norm() <= 1e-10 * scale);
    }

    #[test]
    fn conjugation_of_pair_form() {
        let mut rng = SplitMix64::new(47);
        let p = random_pair(&mut rng, 3, 5);
        for _ in 0..10 {
            let v = rng.complex_vector(3);
            let fwd = pair_form(&p, &v).unwrap();
            let bwd = pair_form(&p.swapped(), &v).unwrap();
            assert!((bwd - fwd.conj()).norm() <= 1e-10 * (1.0 + fwd.norm()));
        }
    }

    #[test]
    fn transfer_identity() {
        let mut rng = SplitMix64::new(53);
        let p = random_pair(&mut rng, 4, 6);
        let mut t = ComplexMatrix::zeros(4, 4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                t.set(i, j, rng.complex_gaussian());
            }
        }
        let tp = apply_operator_to_pair(&t, &p).unwrap();
        let lhs = biframe_operator(&tp).unwrap();
        let s = biframe_operator(&p).unwrap();
        let rhs = t.mul(&s).unwrap().mul(&t.adjoint()).unwrap();
        let scale = rhs.frobenius_norm().max(1.0);
        assert!(lhs.sub(&rhs).unwrap().frobenius_norm() <= 1e-10 * scale);
    }
}
