//! Module invariants at full scale: kernel reconstruction batteries,
//! operator-lab agreement properties, certifier covariances, audit report
//! invariants, and proptest round-trips.

use num_complex::Complex64;
use proptest::prelude::*;

use kbiframe::certify::{certify_k_biframe, Bound, Tolerances};
use kbiframe::frame::{biframe_operator, pair_form, BiframePair, FrameSequence};
use kbiframe::instances::{random_biframe, random_operator, Family};
use kbiframe::operator::douglas_check;
use kbiframe::rng::SplitMix64;
use kbiframe::suite::run_check;
use kbiframe::{
    default_rtol, hermitian_eigen, numerical_rank, pseudo_inverse, spectral_norm, svd,
    ComplexMatrix, KTOL,
};

fn random_general(rng: &mut SplitMix64, rows: usize, cols: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols).unwrap();
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.complex_gaussian());
        }
    }
    m
}

fn random_hermitian(rng: &mut SplitMix64, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n).unwrap();
    for i in 0..n {
        m.set(i, i, Complex64::new(rng.uniform(-2.0, 2.0), 0.0));
        for j in i + 1..n {
            let z = rng.complex_gaussian();
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    m
}

/// Eigen + SVD reconstruction on 1000 random matrices up to n = 16.
#[test]
fn kernel_reconstruction_battery_1000() {
    let mut rng = SplitMix64::new(0xE16E);
    for trial in 0..1000usize {
        let n = rng.uniform_usize(1, 16);
        if trial % 2 == 0 {
            let h = random_hermitian(&mut rng, n);
            let e = hermitian_eigen(&h, KTOL).unwrap();
            let hv = h.mul(&e.eigenvectors).unwrap();
            let mut resid = 0.0f64;
            for r in 0..n {
                for c in 0..n {
                    let d = hv.get(r, c) - e.eigenvectors.get(r, c).scale(e.eigenvalues[c]);
                    resid += d.norm_sqr();
                }
            }
            let scale = h.frobenius_norm().max(1.0);
            assert!(
                resid.sqrt() <= KTOL * scale,
                "eigen residual {} at trial {trial}",
                resid.sqrt()
            );
        } else {
            let cols = rng.uniform_usize(1, 16);
            let m = random_general(&mut rng, n, cols);
            let d = svd(&m).unwrap();
            let mut approx = ComplexMatrix::zeros(n, cols).unwrap();
            for j in 0..d.singulars.len() {
                for r in 0..n {
                    for c in 0..cols {
                        let add = d.left.get(r, j) * d.right.get(c, j).conj();
                        let cur = approx.get(r, c);
                        approx.set(r, c, cur + add.scale(d.singulars[j]));
                    }
                }
            }
            let resid = m.sub(&approx).unwrap().frobenius_norm();
            assert!(
                resid <= KTOL * d.sigma_max().max(1.0),
                "svd residual {resid} at trial {trial}"
            );
        }
    }
}

/// pinv(pinv(M)) ≈ M within 1e-8 for random matrices up to n = 8.
#[test]
fn pinv_involution_battery() {
    let res = run_check("kernel_pinv_involution", 0xA1, 200).unwrap();
    assert_eq!(res.failures, 0, "worst residual {}", res.worst);
}

#[test]
fn psd_sqrt_battery() {
    let res = run_check("kernel_psd_sqrt", 0xA2, 200).unwrap();
    assert_eq!(res.failures, 0, "worst residual {}", res.worst);
}

#[test]
fn frame_identity_battery() {
    let res = run_check("frame_identities", 0xA3, 200).unwrap();
    assert_eq!(res.failures, 0);
}

/// When inclusion holds: λ_min ≤ ‖T₂⁺·T₁‖ + 1e−6 and the factor residual
/// stays below 1e−9.
#[test]
fn majorization_constant_matches_norm_bound() {
    let mut rng = SplitMix64::new(0xB4);
    for _ in 0..60 {
        let n = rng.uniform_usize(2, 6);
        let t2 = random_general(&mut rng, n, n);
        let t1 = t2.mul(&random_general(&mut rng, n, n)).unwrap();
        let rtol = default_rtol(n, n);
        let rep = douglas_check(&t1, &t2, rtol).unwrap();
        assert!(rep.range_included);
        let u = rep.factor_u.as_ref().unwrap();
        let norm_u = spectral_norm(u).unwrap();
        let lambda = rep.lambda_min.unwrap();
        assert!(
            lambda <= norm_u + 1e-6,
            "lambda {lambda} exceeds ‖U‖ {norm_u}"
        );
        let res = spectral_norm(&t2.mul(u).unwrap().sub(&t1).unwrap()).unwrap();
        assert!(res <= 1e-9, "factor residual {res}");
    }
}

/// A positive injectivity constant forces full numerical rank.
#[test]
fn injectivity_implies_full_rank() {
    let mut rng = SplitMix64::new(0xB5);
    for _ in 0..60 {
        let n = rng.uniform_usize(2, 6);
        let rank = rng.uniform_usize(1, n);
        let t = random_operator(n, rank, rng.next_u64()).unwrap();
        let c = kbiframe::injectivity_constant(&t).unwrap();
        let rtol = default_rtol(n, n);
        if c > rtol {
            assert_eq!(numerical_rank(&t, rtol).unwrap(), n);
        } else {
            assert!(rank < n, "rank-{rank} operator reported injective");
        }
    }
}

/// Certifier covariances at battery scale.
#[test]
fn certifier_invariant_batteries() {
    for (name, trials) in [
        ("definition_equivalence", 100),
        ("scaling_covariance", 100),
        ("range_shrink_monotonicity", 100),
    ] {
        let res = run_check(name, 0xC6, trials).unwrap();
        assert_eq!(res.failures, 0, "{name} failed {} times", res.failures);
    }
}

/// For every auditor with a validated claim, the claimed lower bound never
/// exceeds the certified optimum by more than the bisection slack, and the
/// claimed upper bound is never below it.
#[test]
fn claimed_bounds_dominated_by_optimal() {
    let tols = Tolerances::default();
    let mut rng = SplitMix64::new(0xD7);
    for _ in 0..40 {
        let n = rng.uniform_usize(2, 5);
        let m = n + rng.uniform_usize(1, 3);
        let inst = random_biframe(n, m, Family::Rescale, rng.next_u64()).unwrap();
        let k = random_operator(n, rng.uniform_usize(1, n), rng.next_u64()).unwrap();
        let raw = random_general(&mut rng, n, n);
        let k_prom = raw.scale_re(1.5 / spectral_norm(&raw).unwrap());
        let rep = kbiframe::audit::audit_norm_promotion(&inst.pair, &k_prom, tols).unwrap();
        if rep.hypotheses_ok && rep.claim_valid {
            let cert = certify_k_biframe(&inst.pair, &k_prom, tols).unwrap();
            if let (Some(Bound::Finite(ca)), Bound::Finite(a)) = (rep.claimed_a, cert.a_opt) {
                assert!(ca <= a + 2.0 * tols.bis_tol, "claimed {ca} > optimal {a}");
            }
            if let Some(cb) = rep.claimed_b {
                assert!(cb >= cert.b_opt - 2.0 * tols.bis_tol);
            }
        }
        // and the same for the product auditor against its combined operator
        let factors = vec![k.clone(), random_operator(n, n, rng.next_u64()).unwrap()];
        let rep = kbiframe::audit::audit_product(&inst.pair, &factors, tols).unwrap();
        if rep.hypotheses_ok && rep.claim_valid {
            let m_op = factors[0].mul(&factors[1]).unwrap();
            let cert = certify_k_biframe(&inst.pair, &m_op, tols).unwrap();
            if let (Some(Bound::Finite(ca)), Bound::Finite(a)) = (rep.claimed_a, cert.a_opt) {
                assert!(ca <= a + 2.0 * tols.bis_tol, "claimed {ca} > optimal {a}");
            }
        }
    }
}

/// Reports are deterministic: equal instance, seed and tolerances produce
/// byte-identical serialized reports.
#[test]
fn audit_reports_are_deterministic() {
    let tols = Tolerances::default();
    let inst = random_biframe(4, 6, Family::Rescale, 99).unwrap();
    let k = random_operator(4, 3, 100).unwrap();
    let a = kbiframe::audit::audit_operator_inequality(&inst.pair, &k, tols, 42, 50).unwrap();
    let b = kbiframe::audit::audit_operator_inequality(&inst.pair, &k, tols, 42, 50).unwrap();
    let digest = kbiframe::io::instance_digest(&inst);
    assert_eq!(
        kbiframe::io::audit_to_json(&digest, tols, &a),
        kbiframe::io::audit_to_json(&digest, tols, &b)
    );
}

/// Auditors never throw on hypothesis failure; the report comes back whole.
#[test]
fn hypothesis_failure_reports_are_complete() {
    let tols = Tolerances::default();
    // skew instance fails every biframe hypothesis
    let inst = random_biframe(4, 6, Family::Skew, 7).unwrap();
    let k = random_operator(4, 2, 8).unwrap();
    let t = random_operator(4, 2, 9).unwrap();

    let sum =
        kbiframe::audit::audit_sum(&inst.pair.x, &inst.pair.y, &inst.pair.x, &k, tols).unwrap();
    assert!(!sum.hypotheses_ok);
    assert!(sum.claim_valid);
    assert!(!sum.hypotheses.is_empty());

    let rt = kbiframe::audit::audit_range_transfer(&inst.pair, &k, &t, tols).unwrap();
    assert!(!rt.hypotheses_ok);
    assert!(rt.certificate.is_some());

    let co = kbiframe::audit::audit_coisometry_transfer(&inst.pair, &k, &t, tols).unwrap();
    assert!(!co.hypotheses_ok);
    assert!(co.claim_valid);
}

// ── proptest invariants ─────────────────────────────────────────────

fn small_complex() -> impl Strategy<Value = Complex64> {
    (
        prop::num::f64::NORMAL.prop_map(|x| x % 100.0),
        prop::num::f64::NORMAL.prop_map(|x| x % 100.0),
    )
        .prop_map(|(re, im)| Complex64::new(re, im))
}

fn small_matrix() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..5, 1usize..5)
        .prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(small_complex(), c), r)
        })
        .prop_map(|rows| ComplexMatrix::from_rows(&rows).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_is_involution(m in small_matrix()) {
        prop_assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn canonical_float_round_trips(bits in any::<u64>()) {
        let v = f64::from_bits(bits);
        prop_assume!(v.is_finite());
        let s = kbiframe::io::canonical_float(v);
        let back: f64 = s.parse().unwrap();
        let want = if v == 0.0 { 0.0f64 } else { v };
        prop_assert_eq!(back.to_bits(), want.to_bits());
    }

    #[test]
    fn pair_form_conjugates_under_swap(
        seed in any::<u64>(),
        n in 1usize..5,
        m in 0usize..6,
    ) {
        let mut rng = SplitMix64::new(seed);
        let x = FrameSequence::new(n, (0..m).map(|_| rng.complex_vector(n)).collect()).unwrap();
        let y = FrameSequence::new(n, (0..m).map(|_| rng.complex_vector(n)).collect()).unwrap();
        let pair = BiframePair::new(x, y).unwrap();
        let v = rng.complex_vector(n);
        let fwd = pair_form(&pair, &v).unwrap();
        let bwd = pair_form(&pair.swapped(), &v).unwrap();
        prop_assert!((bwd - fwd.conj()).norm() <= 1e-9 * (1.0 + fwd.norm()));
    }

    #[test]
    fn pinv_shapes_and_penrose_identity(seed in any::<u64>(), r in 1usize..5, c in 1usize..5) {
        let mut rng = SplitMix64::new(seed);
        let m = {
            let mut mm = ComplexMatrix::zeros(r, c).unwrap();
            for i in 0..r {
                for j in 0..c {
                    mm.set(i, j, rng.complex_gaussian());
                }
            }
            mm
        };
        let p = pseudo_inverse(&m, default_rtol(r, c)).unwrap();
        prop_assert_eq!(p.rows(), c);
        prop_assert_eq!(p.cols(), r);
        // M·M⁺·M = M
        let back = m.mul(&p).unwrap().mul(&m).unwrap();
        let resid = back.sub(&m).unwrap().frobenius_norm();
        prop_assert!(resid <= 1e-9 * m.frobenius_norm().max(1.0));
    }

    #[test]
    fn instance_json_round_trips(seed in any::<u64>(), n in 1usize..5) {
        let m = n + 2;
        let inst = random_biframe(n, m, Family::Rescale, seed).unwrap();
        let json = kbiframe::io::instance_to_json(&inst);
        let back = kbiframe::io::parse_instance(&json).unwrap();
        prop_assert_eq!(kbiframe::io::instance_to_json(&back), json);
    }
}

/// Sanity identity: biframe certification of a pair equals
/// K-biframe certification against the identity operator.
#[test]
fn biframe_equals_k_biframe_with_identity() {
    let tols = Tolerances::default();
    let mut rng = SplitMix64::new(0xF8);
    for _ in 0..10 {
        let n = rng.uniform_usize(2, 5);
        let inst = random_biframe(n, n + 2, Family::Rescale, rng.next_u64()).unwrap();
        let via_biframe = kbiframe::certify_biframe(&inst.pair, tols).unwrap();
        let id = ComplexMatrix::identity(n).unwrap();
        let via_k = certify_k_biframe(&inst.pair, &id, tols).unwrap();
        assert_eq!(via_biframe.is_k_biframe, via_k.is_k_biframe);
        assert!(via_biframe.a_opt.approx_eq(&via_k.a_opt, 1e-12));
    }
}

/// Gallery instances and random families reproduce entrywise across calls.
#[test]
fn generation_is_reproducible() {
    use kbiframe::instances::{gallery, GalleryName};
    for name in GalleryName::ALL {
        let a = gallery(name, 8).unwrap();
        let b = gallery(name, 8).unwrap();
        assert_eq!(a.pair, b.pair);
        assert_eq!(a.k, b.k);
    }
    for family in [Family::Rescale, Family::Controlled, Family::Skew] {
        let a = random_biframe(4, 6, family, 1234).unwrap();
        let b = random_biframe(4, 6, family, 1234).unwrap();
        assert_eq!(a.pair, b.pair);
    }
}

/// Certification is a pure function of immutable inputs: concurrent
/// workers over shared instances agree with the sequential result.
#[test]
fn concurrent_certification_is_consistent() {
    let tols = Tolerances::default();
    let inst = std::sync::Arc::new(random_biframe(4, 6, Family::Rescale, 314).unwrap());
    let k = std::sync::Arc::new(random_operator(4, 3, 315).unwrap());
    let reference = certify_k_biframe(&inst.pair, &k, tols).unwrap();
    let handles: Vec<_> = (0..8)
        .map(|_| {
            let inst = std::sync::Arc::clone(&inst);
            let k = std::sync::Arc::clone(&k);
            std::thread::spawn(move || certify_k_biframe(&inst.pair, &k, tols).unwrap())
        })
        .collect();
    for h in handles {
        let cert = h.join().unwrap();
        assert_eq!(cert.is_k_biframe, reference.is_k_biframe);
        assert!(cert.a_opt.approx_eq(&reference.a_opt, 0.0));
        assert_eq!(cert.b_opt.to_bits(), reference.b_opt.to_bits());
    }
}

/// Empty-sequence degenerate behavior: zero operators, zero form.
#[test]
fn empty_sequences_yield_zero_operators() {
    let x = FrameSequence::new(3, vec![]).unwrap();
    let pair = BiframePair::new(x.clone(), x).unwrap();
    let s = biframe_operator(&pair).unwrap();
    assert_eq!(s, ComplexMatrix::zeros(3, 3).unwrap());
    let v = vec![Complex64::new(1.0, 0.0); 3];
    assert_eq!(pair_form(&pair, &v).unwrap(), Complex64::new(0.0, 0.0));
}
