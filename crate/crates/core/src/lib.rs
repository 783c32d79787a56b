//! Certification toolkit for K-biframes in finite-dimensional complex
//! Hilbert spaces.
//!
//! The crate decides frame / K-frame / biframe / K-biframe status for pairs
//! of finite vector sequences, computes optimal frame bounds by operator
//! inequalities, runs Douglas-style range-inclusion checks, and audits a
//! catalogue of structural statements about biframe transfers, producing
//! counterexample witnesses when a claimed bound fails.
//!
//! Everything is dense, deterministic and desk-scale: matrices are capped at
//! 256×256, all randomness flows from explicit seeds, and repeated runs
//! produce byte-identical reports.

// Index loops are the clearest way to write the dense kernels; iterator
// rewrites obscure the row/column structure.
#![allow(clippy::needless_range_loop)]

pub mod audit;
pub mod certify;
pub mod error;
pub mod frame;
pub mod instances;
pub mod io;
pub mod matrix;
pub mod operator;
pub mod rng;
pub mod suite;

mod eigen;
mod svd;

pub use error::{Error, Result};
pub use matrix::{adjoint, ComplexMatrix, MAX_DIM};

// The numeric kernel: eigendecomposition, SVD and their derived operations.
pub use eigen::{hermitian_eigen, min_eig_hermitian, EigenDecomposition, KTOL};
pub use svd::{
    default_rtol, numerical_rank, pseudo_inverse, psd_sqrt, psd_sqrt_default, range_basis,
    spectral_norm, svd, SvdDecomposition,
};

pub use frame::{
    apply_operator_to_pair, apply_operator_to_sequence, basis_vector, biframe_operator,
    frame_operator, hermitian_part, pair_form, standard_basis, BiframePair, FrameSequence,
};
pub use certify::{
    certify_biframe, certify_k_biframe, certify_k_frame, optimal_lower_bound,
    optimal_upper_bound, Bound, BoundProblem, KBiframeCertificate, Tolerances,
};
pub use operator::{
    commutation_residual, douglas_check, injectivity_constant, is_coisometry,
    pseudo_inverse_verify, restrict_to_range, DouglasReport,
};
pub use audit::{AuditReport, StatementId, Witness};
pub use instances::{gallery, random_biframe, Family, GalleryName, Instance, Provenance};
