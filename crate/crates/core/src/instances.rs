//! Deterministic instance gallery and seeded random families.
//!
//! Gallery instances reproduce documented matrices with exact integer or
//! rational entries. Random families are pure functions of (family,
//! parameters, seed): the SplitMix64 stream and a fixed traversal order make
//! them entrywise identical across runs and platforms.

use num_complex::Complex64;

use crate::certify::KBiframeCertificate;
use crate::error::{Error, Result};
use crate::frame::{basis_vector, BiframePair, FrameSequence};
use crate::matrix::{vec_norm, ComplexMatrix, MAX_DIM};
use crate::rng::SplitMix64;

/// Where an instance came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    PaperGallery,
    RandomFamily,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::PaperGallery => "paper_gallery",
            Provenance::RandomFamily => "random_family",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper_gallery" => Some(Provenance::PaperGallery),
            "random_family" => Some(Provenance::RandomFamily),
            _ => None,
        }
    }
}

/// A named certification problem: the pair, the operator K, and optional
/// extras used by individual auditors.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub pair: BiframePair,
    pub k: ComplexMatrix,
    /// Auxiliary operator for transfer/perturbation statements.
    pub t: Option<ComplexMatrix>,
    /// Operator list for product/linear-combination statements.
    pub factors: Option<Vec<ComplexMatrix>>,
    /// Scalars paired with `factors` for linear combinations.
    pub alphas: Option<Vec<Complex64>>,
    /// Third sequence for the sum statement.
    pub z: Option<FrameSequence>,
    /// Power for the positive-perturbation statement.
    pub power: Option<u32>,
    /// Externally claimed (A, B) bounds to cross-check, where documented.
    pub claimed_bounds: Option<(f64, f64)>,
    pub provenance: Provenance,
    pub seed: Option<u64>,
    pub truncation_dim: Option<usize>,
}

impl Instance {
    pub fn dim(&self) -> usize {
        self.pair.dim()
    }
}

/// Gallery identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GalleryName {
    /// 4-dimensional pair with bounds claimed (1, 3) in the source material.
    ExC4,
    /// Truncation of the tight pair xᵢ = i·eᵢ, yᵢ = eᵢ/i with K = I.
    Parseval,
    /// Truncated shift pair: K the right shift, T the left shift.
    Shift,
    /// 4-dimensional pair whose biframe operator diag(2,1,1,0) is singular.
    ExSSingular,
    /// Rank-one instance refuting the positive-perturbation statement.
    PerturbationCounterexample,
}

impl GalleryName {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "ex_c4" => Some(Self::ExC4),
            "parseval" => Some(Self::Parseval),
            "shift" => Some(Self::Shift),
            "ex_s_singular" => Some(Self::ExSSingular),
            "perturbation_counterexample" => Some(Self::PerturbationCounterexample),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ExC4 => "ex_c4",
            Self::Parseval => "parseval",
            Self::Shift => "shift",
            Self::ExSSingular => "ex_s_singular",
            Self::PerturbationCounterexample => "perturbation_counterexample",
        }
    }

    pub const ALL: [GalleryName; 5] = [
        Self::ExC4,
        Self::Parseval,
        Self::Shift,
        Self::ExSSingular,
        Self::PerturbationCounterexample,
    ];
}

/// Random family identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Spanning X with yᵢ = cᵢ·xᵢ, cᵢ ∈ [0.5, 2]: positive definite H.
    Rescale,
    /// yᵢ = C·xᵢ with C PSD sharing the eigenbasis of the frame operator.
    Controlled,
    /// Deliberately non-Hermitian cross terms (negative-control instances).
    Skew,
}

impl Family {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "rescale" => Some(Self::Rescale),
            "controlled" => Some(Self::Controlled),
            "skew" => Some(Self::Skew),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Rescale => "rescale",
            Self::Controlled => "controlled",
            Self::Skew => "skew",
        }
    }
}

fn scaled_basis(n: usize, i: usize, f: f64) -> Vec<Complex64> {
    basis_vector(n, i).iter().map(|z| z.scale(f)).collect()
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Left shift on ℂⁿ: e₁ ↦ 0, eᵢ ↦ eᵢ₋₁.
pub fn left_shift(n: usize) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::zeros(n, n)?;
    for i in 1..n {
        m.set(i - 1, i, re(1.0));
    }
    Ok(m)
}

/// Right shift on ℂⁿ: eᵢ ↦ eᵢ₊₁, the last basis vector truncated to 0.
pub fn right_shift(n: usize) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::zeros(n, n)?;
    for i in 0..n - 1 {
        m.set(i + 1, i, re(1.0));
    }
    Ok(m)
}

/// Build a documented gallery instance. `n` selects the truncation
/// dimension for the families derived from infinite sequences and is
/// ignored by the fixed 4- and 2-dimensional instances.
pub fn gallery(name: GalleryName, n: usize) -> Result<Instance> {
    match name {
        GalleryName::ExC4 => {
            let x = FrameSequence::new(
                4,
                vec![
                    basis_vector(4, 0),
                    basis_vector(4, 0),
                    scaled_basis(4, 1, 2.0),
                    scaled_basis(4, 2, 3.0),
                ],
            )?;
            let y = FrameSequence::new(
                4,
                vec![
                    basis_vector(4, 0),
                    basis_vector(4, 0),
                    basis_vector(4, 1),
                    basis_vector(4, 2),
                ],
            )?;
            // K: e1 ↦ e1, e2 ↦ e1, e3 ↦ 2e2, e4 ↦ 3e3 (columns are images).
            let k = ComplexMatrix::from_rows(&[
                vec![re(1.0), re(1.0), re(0.0), re(0.0)],
                vec![re(0.0), re(0.0), re(2.0), re(0.0)],
                vec![re(0.0), re(0.0), re(0.0), re(3.0)],
                vec![re(0.0), re(0.0), re(0.0), re(0.0)],
            ])?;
            Ok(Instance {
                name: name.as_str().to_string(),
                pair: BiframePair::new(x, y)?,
                k,
                t: None,
                factors: None,
                alphas: None,
                z: None,
                power: None,
                claimed_bounds: Some((1.0, 3.0)),
                provenance: Provenance::PaperGallery,
                seed: None,
                truncation_dim: None,
            })
        }
        GalleryName::Parseval => {
            check_truncation(n)?;
            let x = FrameSequence::new(
                n,
                (0..n).map(|i| scaled_basis(n, i, (i + 1) as f64)).collect(),
            )?;
            let y = FrameSequence::new(
                n,
                (0..n)
                    .map(|i| scaled_basis(n, i, 1.0 / (i + 1) as f64))
                    .collect(),
            )?;
            Ok(Instance {
                name: name.as_str().to_string(),
                pair: BiframePair::new(x, y)?,
                k: ComplexMatrix::identity(n)?,
                t: None,
                factors: None,
                alphas: None,
                z: None,
                power: None,
                claimed_bounds: Some((1.0, 1.0)),
                provenance: Provenance::PaperGallery,
                seed: None,
                truncation_dim: Some(n),
            })
        }
        GalleryName::Shift => {
            check_truncation(n)?;
            let k = right_shift(n)?;
            let t = left_shift(n)?;
            // X = {K eᵢ / 2}, Y = {2 K eᵢ}: a tight pair for the shift.
            let x = FrameSequence::new(
                n,
                (0..n).map(|i| k.apply(&scaled_basis(n, i, 0.5)).unwrap()).collect(),
            )?;
            let y = FrameSequence::new(
                n,
                (0..n).map(|i| k.apply(&scaled_basis(n, i, 2.0)).unwrap()).collect(),
            )?;
            Ok(Instance {
                name: name.as_str().to_string(),
                pair: BiframePair::new(x, y)?,
                k,
                t: Some(t),
                factors: None,
                alphas: None,
                z: None,
                power: None,
                claimed_bounds: None,
                provenance: Provenance::PaperGallery,
                seed: None,
                truncation_dim: Some(n),
            })
        }
        GalleryName::ExSSingular => {
            let x = FrameSequence::new(
                4,
                vec![
                    basis_vector(4, 0),
                    basis_vector(4, 0),
                    scaled_basis(4, 1, 2.0),
                    scaled_basis(4, 2, 3.0),
                ],
            )?;
            let y = FrameSequence::new(
                4,
                vec![
                    basis_vector(4, 0),
                    basis_vector(4, 0),
                    scaled_basis(4, 1, 0.5),
                    scaled_basis(4, 2, 1.0 / 3.0),
                ],
            )?;
            // K: e1 ↦ e1, e2 ↦ e1, e3 ↦ e2, e4 ↦ e3.
            let k = ComplexMatrix::from_rows(&[
                vec![re(1.0), re(1.0), re(0.0), re(0.0)],
                vec![re(0.0), re(0.0), re(1.0), re(0.0)],
                vec![re(0.0), re(0.0), re(0.0), re(1.0)],
                vec![re(0.0), re(0.0), re(0.0), re(0.0)],
            ])?;
            Ok(Instance {
                name: name.as_str().to_string(),
                pair: BiframePair::new(x, y)?,
                k,
                t: None,
                factors: None,
                alphas: None,
                z: None,
                power: None,
                claimed_bounds: None,
                provenance: Provenance::PaperGallery,
                seed: None,
                truncation_dim: None,
            })
        }
        GalleryName::PerturbationCounterexample => {
            // X = Y = {e1} in ℂ², K = e1·e1*, T = (e1+e2)(e1+e2)*.
            let x = FrameSequence::new(2, vec![basis_vector(2, 0)])?;
            let pair = BiframePair::new(x.clone(), x)?;
            let k = ComplexMatrix::from_real_diag(&[1.0, 0.0])?;
            let t = ComplexMatrix::from_rows(&[
                vec![re(1.0), re(1.0)],
                vec![re(1.0), re(1.0)],
            ])?;
            Ok(Instance {
                name: name.as_str().to_string(),
                pair,
                k,
                t: Some(t),
                factors: None,
                alphas: None,
                z: None,
                power: Some(1),
                claimed_bounds: None,
                provenance: Provenance::PaperGallery,
                seed: None,
                truncation_dim: None,
            })
        }
    }
}

fn check_truncation(n: usize) -> Result<()> {
    if !(2..=MAX_DIM).contains(&n) {
        return Err(Error::BadParameters(format!(
            "truncation dimension must be in 2..={MAX_DIM}, got {n}"
        )));
    }
    Ok(())
}

/// Random matrix with independent standard-complex-Gaussian entries.
fn gaussian_matrix(rng: &mut SplitMix64, rows: usize, cols: usize) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::zeros(rows, cols)?;
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.complex_gaussian());
        }
    }
    Ok(m)
}

/// Haar-like random unitary via twice-iterated Gram–Schmidt on a Gaussian
/// matrix. Unitary to kernel accuracy.
pub fn random_unitary(n: usize, seed: u64) -> Result<ComplexMatrix> {
    check_n(n)?;
    let mut rng = SplitMix64::derive(seed, 0x51);
    let mut u = ComplexMatrix::zeros(n, n)?;
    for j in 0..n {
        'retry: loop {
            let mut col = rng.complex_vector(n);
            for _pass in 0..2 {
                for prev in 0..j {
                    let p = u.column(prev);
                    let proj = crate::matrix::inner(&col, &p);
                    for r in 0..n {
                        let cur = col[r];
                        col[r] = cur - proj * p[r];
                    }
                }
            }
            let norm = vec_norm(&col);
            if norm > 1e-6 {
                for r in 0..n {
                    u.set(r, j, col[r] / norm);
                }
                break 'retry;
            }
        }
    }
    Ok(u)
}

/// Operator with exactly `rank` nonzero singular values, all in [0.5, 2].
pub fn random_operator(n: usize, rank: usize, seed: u64) -> Result<ComplexMatrix> {
    check_n(n)?;
    if rank > n {
        return Err(Error::BadParameters(format!(
            "rank {rank} exceeds dimension {n}"
        )));
    }
    let u = random_unitary(n, seed ^ 0xA5A5_A5A5)?;
    let v = random_unitary(n, seed ^ 0x5A5A_5A5A)?;
    let mut rng = SplitMix64::derive(seed, 0x52);
    let mut m = ComplexMatrix::zeros(n, n)?;
    for j in 0..rank {
        let sigma = rng.uniform(0.5, 2.0);
        let uc = u.column(j);
        let vc = v.column(j);
        for r in 0..n {
            for c in 0..n {
                let cur = m.get(r, c);
                m.set(r, c, cur + (uc[r] * vc[c].conj()).scale(sigma));
            }
        }
    }
    Ok(m)
}

/// Hermitian PSD matrix with eigenvalues in [0, 2].
pub fn random_psd(n: usize, seed: u64) -> Result<ComplexMatrix> {
    check_n(n)?;
    let v = random_unitary(n, seed ^ 0x0F0F_0F0F)?;
    let mut rng = SplitMix64::derive(seed, 0x53);
    let mut m = ComplexMatrix::zeros(n, n)?;
    for j in 0..n {
        let lambda = rng.uniform(0.0, 2.0);
        let col = v.column(j);
        for r in 0..n {
            for c in 0..n {
                let cur = m.get(r, c);
                m.set(r, c, cur + (col[r] * col[c].conj()).scale(lambda));
            }
        }
    }
    // exact Hermitian symmetry
    Ok(m.add(&m.adjoint())?.scale_re(0.5))
}

/// Pair of commuting operators sharing a random eigenbasis. Eigenvalues are
/// complex with modulus in [0.5, 2].
pub fn random_commuting_pair(n: usize, seed: u64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_n(n)?;
    let v = random_unitary(n, seed ^ 0x3C3C_3C3C)?;
    let mut rng = SplitMix64::derive(seed, 0x54);
    let spectral = |rng: &mut SplitMix64, v: &ComplexMatrix| -> Result<ComplexMatrix> {
        let mut m = ComplexMatrix::zeros(n, n)?;
        for j in 0..n {
            let d = rng.unit_phase().scale(rng.uniform(0.5, 2.0));
            let col = v.column(j);
            for r in 0..n {
                for c in 0..n {
                    let cur = m.get(r, c);
                    m.set(r, c, cur + d * col[r] * col[c].conj());
                }
            }
        }
        Ok(m)
    };
    let t = spectral(&mut rng, &v)?;
    let k = spectral(&mut rng, &v)?;
    Ok((t, k))
}

/// Commuting pair where the first operator is unitary (shared eigenbasis,
/// unimodular eigenvalues). Used by the co-isometry transfer trials.
pub fn random_commuting_unitary_pair(
    n: usize,
    seed: u64,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_n(n)?;
    let v = random_unitary(n, seed ^ 0x7E7E_7E7E)?;
    let mut rng = SplitMix64::derive(seed, 0x55);
    let mut t = ComplexMatrix::zeros(n, n)?;
    let mut k = ComplexMatrix::zeros(n, n)?;
    for j in 0..n {
        let phase = rng.unit_phase();
        let dk = rng.unit_phase().scale(rng.uniform(0.5, 2.0));
        let col = v.column(j);
        for r in 0..n {
            for c in 0..n {
                let outer = col[r] * col[c].conj();
                let tc = t.get(r, c);
                t.set(r, c, tc + phase * outer);
                let kc = k.get(r, c);
                k.set(r, c, kc + dk * outer);
            }
        }
    }
    Ok((t, k))
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::BadParameters(format!(
            "dimension must be in 1..={MAX_DIM}, got {n}"
        )));
    }
    Ok(())
}

/// Seeded random biframe instance of the requested family.
///
/// `rescale` and `controlled` guarantee a positive definite Hermitian part
/// (hence a biframe, and a K-biframe for every K); `skew` guarantees a
/// Hermitian residual above the default tolerance.
pub fn random_biframe(n: usize, m: usize, family: Family, seed: u64) -> Result<Instance> {
    check_n(n)?;
    if m < n {
        return Err(Error::BadParameters(format!(
            "spanning families need at least n vectors: m = {m}, n = {n}"
        )));
    }
    let mut attempt = 0u64;
    loop {
        let result = try_random_biframe(n, m, family, seed, attempt)?;
        if let Some(instance) = result {
            return Ok(instance);
        }
        attempt += 1;
        if attempt > 64 {
            return Err(Error::BadParameters(format!(
                "could not generate a valid `{}` instance for n={n}, m={m}, seed={seed}",
                family.as_str()
            )));
        }
    }
}

fn try_random_biframe(
    n: usize,
    m: usize,
    family: Family,
    seed: u64,
    attempt: u64,
) -> Result<Option<Instance>> {
    let mut rng = SplitMix64::derive(seed, 0x60 + attempt);
    let x_mat = gaussian_matrix(&mut rng, n, m)?;
    // spanning check on the synthesis matrix
    let rank = crate::svd::numerical_rank(&x_mat, crate::svd::default_rtol(n, m))?;
    if rank < n {
        return Ok(None);
    }
    // condition guard: keeps downstream bound amplifications moderate
    let d = crate::svd::svd(&x_mat)?;
    if d.sigma_min() < 0.05 * d.sigma_max() {
        return Ok(None);
    }
    let xs: Vec<Vec<Complex64>> = (0..m).map(|j| x_mat.column(j)).collect();
    let x = FrameSequence::new(n, xs.clone())?;

    let y = match family {
        Family::Rescale => {
            let vecs = xs
                .iter()
                .map(|v| {
                    let c = rng.uniform(0.5, 2.0);
                    v.iter().map(|z| z.scale(c)).collect()
                })
                .collect();
            FrameSequence::new(n, vecs)?
        }
        Family::Controlled => {
            // C = f(S_X): PSD with the same eigenbasis as the frame operator,
            // so the biframe operator C·S_X stays Hermitian.
            let s_x = crate::frame::frame_operator(&x)?;
            let e = crate::eigen::hermitian_eigen(&s_x, crate::eigen::KTOL)?;
            let mut c_op = ComplexMatrix::zeros(n, n)?;
            for j in 0..n {
                let lambda = rng.uniform(0.5, 2.0);
                let col = e.eigenvectors.column(j);
                for r in 0..n {
                    for cc in 0..n {
                        let cur = c_op.get(r, cc);
                        c_op.set(r, cc, cur + (col[r] * col[cc].conj()).scale(lambda));
                    }
                }
            }
            crate::frame::apply_operator_to_sequence(&c_op, &x)?
        }
        Family::Skew => {
            // Y = W·X with W deliberately non-normal relative to S_X.
            let w = gaussian_matrix(&mut rng, n, n)?;
            crate::frame::apply_operator_to_sequence(&w, &x)?
        }
    };

    let pair = BiframePair::new(x, y)?;
    // family postconditions
    let s = crate::frame::biframe_operator(&pair)?;
    let defect = s.hermitian_defect();
    match family {
        Family::Rescale | Family::Controlled => {
            if defect > 1e-12 {
                return Ok(None);
            }
        }
        Family::Skew => {
            if defect <= 1e-6 {
                return Ok(None);
            }
        }
    }

    Ok(Some(Instance {
        name: format!("{}_n{}_m{}_s{}", family.as_str(), n, m, seed),
        pair,
        k: ComplexMatrix::identity(n)?,
        t: None,
        factors: None,
        alphas: None,
        z: None,
        power: None,
        claimed_bounds: None,
        provenance: Provenance::RandomFamily,
        seed: Some(seed),
        truncation_dim: None,
    }))
}

/// Certify a gallery or random instance against its own K.
pub fn certify_instance(instance: &Instance) -> Result<KBiframeCertificate> {
    crate::certify::certify_k_biframe(
        &instance.pair,
        &instance.k,
        crate::certify::Tolerances::default(),
    )
}
