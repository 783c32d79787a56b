//! Acceptance suite: the toolkit's exit criteria, one test per criterion,
//! each with its stated tolerance and runtime budget. Every test prints a
//! single PASS line on success (visible with `--nocapture`).

use std::time::Instant;

use kbiframe::certify::{certify_biframe, certify_k_biframe, Bound, Tolerances};
use kbiframe::frame::{apply_operator_to_pair, biframe_operator, hermitian_part};
use kbiframe::instances::{gallery, GalleryName};
use kbiframe::operator::{douglas_check, restrict_to_range};
use kbiframe::suite::run_check;
use kbiframe::{default_rtol, hermitian_eigen, ComplexMatrix, KTOL};

fn tols() -> Tolerances {
    Tolerances::default()
}

/// Criterion 1: the 4-dimensional gallery pair certifies as a K-biframe
/// with b_opt = 3 (±1e−9) and a_opt = 1/3 (±1e−8); the externally claimed
/// lower bound 1 is flagged invalid with PSD margin −6. Under 0.1 s.
#[test]
fn acceptance_01_c4_example() {
    let start = Instant::now();
    let inst = gallery(GalleryName::ExC4, 4).unwrap();
    let cert = certify_k_biframe(&inst.pair, &inst.k, tols()).unwrap();
    assert!(cert.is_k_biframe);
    assert!((cert.b_opt - 3.0).abs() <= 1e-9, "b_opt = {}", cert.b_opt);
    let a = cert.a_opt.finite().expect("finite lower bound");
    assert!((a - 1.0 / 3.0).abs() <= 1e-8, "a_opt = {a}");

    // the claimed A = 1 fails: min eig(H − K K*) = −6
    let (claimed_a, _) = inst.claimed_bounds.unwrap();
    assert_eq!(claimed_a, 1.0);
    let h = hermitian_part(&biframe_operator(&inst.pair).unwrap()).unwrap();
    let g = inst.k.mul(&inst.k.adjoint()).unwrap();
    let margin = hermitian_eigen(&h.sub(&g.scale_re(claimed_a)).unwrap(), KTOL)
        .unwrap()
        .min();
    assert!((margin - (-6.0)).abs() <= 1e-9, "margin = {margin}");
    assert!(margin < -tols().herm_tol, "claimed bound must be flagged invalid");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 0.1, "took {elapsed:?}");
    println!("ACCEPTANCE 1: PASS — c4 example certified, a_opt=1/3, b_opt=3, claimed A=1 refuted (margin −6) in {elapsed:?}");
}

/// Criterion 2: the singular-operator example reproduces diag(2,1,1,0)
/// exactly, fails plain-biframe certification, and restricts invertibly to
/// R(K) with σ_min = 1 (±1e−9).
#[test]
fn acceptance_02_singular_example() {
    let inst = gallery(GalleryName::ExSSingular, 4).unwrap();
    let s = biframe_operator(&inst.pair).unwrap();
    let expected = ComplexMatrix::from_real_diag(&[2.0, 1.0, 1.0, 0.0]).unwrap();
    assert_eq!(s, expected, "operator must be exactly diag(2,1,1,0)");

    let cert = certify_biframe(&inst.pair, tols()).unwrap();
    assert!(!cert.is_k_biframe, "singular operator is not a plain biframe");

    let (_, sigma_min) = restrict_to_range(&s, &inst.k, default_rtol(4, 4)).unwrap();
    assert!((sigma_min - 1.0).abs() <= 1e-9, "sigma_min = {sigma_min}");
    println!("ACCEPTANCE 2: PASS — singular example exact, biframe refused, restricted sigma_min = 1");
}

/// Criterion 3: the truncated tight pair certifies Parseval with
/// a_opt = b_opt = 1 within 1e−10 at n = 4, 8, 16.
#[test]
fn acceptance_03_parseval_truncations() {
    for n in [4usize, 8, 16] {
        let inst = gallery(GalleryName::Parseval, n).unwrap();
        let cert = certify_k_biframe(&inst.pair, &inst.k, tols()).unwrap();
        assert!(cert.is_parseval, "n = {n}");
        let a = cert.a_opt.finite().unwrap();
        assert!((a - 1.0).abs() <= 1e-10, "n = {n}, a_opt = {a}");
        assert!((cert.b_opt - 1.0).abs() <= 1e-10, "n = {n}, b_opt = {}", cert.b_opt);
    }
    println!("ACCEPTANCE 3: PASS — Parseval truncations n=4,8,16 at unit bounds within 1e-10");
}

/// Criterion 4: left/right shift ranges are not nested; the witness
/// direction overlaps e₁.
#[test]
fn acceptance_04_shift_example() {
    for n in [4usize, 8] {
        let inst = gallery(GalleryName::Shift, n).unwrap();
        let left = inst.t.as_ref().unwrap();
        let rep = douglas_check(left, &inst.k, default_rtol(n, n)).unwrap();
        assert!(!rep.range_included, "n = {n}");
        let w = rep.witness.expect("witness expected");
        assert!(
            w[0].norm() > 0.9,
            "witness must overlap e1, |w_1| = {}",
            w[0].norm()
        );
    }
    println!("ACCEPTANCE 4: PASS — shift pair excluded with witness along e1 at n=4,8");
}

/// Criterion 5: 200 seeded Douglas trials, n ≤ 6, all ranks — the three
/// equivalence predicates agree pairwise; included cases factor to 1e−9
/// with PSD margin ≥ −1e−9. Under 5 s.
#[test]
fn acceptance_05_douglas_equivalence() {
    let start = Instant::now();
    let res = run_check("douglas_equivalence", 0xD06, 200).unwrap();
    assert_eq!(res.trials, 200);
    assert_eq!(res.failures, 0, "worst = {}", res.worst);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("ACCEPTANCE 5: PASS — douglas equivalence, 200 trials, 0 failures in {elapsed:?}");
}

/// Criterion 6: 200 seeded trials per bound-formula statement; every trial
/// with satisfied hypotheses validates the claimed bounds. Under 30 s.
#[test]
fn acceptance_06_bound_formula_audits() {
    let start = Instant::now();
    for name in [
        "audit_linear_combination",
        "audit_product",
        "audit_norm_promotion",
        "audit_range_transfer",
        "audit_commuting_transfer",
        "audit_coisometry_transfer",
        "audit_sum",
    ] {
        let res = run_check(name, 0xD07, 200).unwrap();
        assert_eq!(res.trials, 200, "{name}");
        assert_eq!(res.failures, 0, "{name}: {} failures", res.failures);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("ACCEPTANCE 6: PASS — 7 bound-formula audits x 200 trials, 0 failures in {elapsed:?}");
}

/// Criterion 7: 100 swap trials — certificates of (X,Y) and (Y,X) agree on
/// both optimal bounds within 2·bis_tol.
#[test]
fn acceptance_07_swap_symmetry() {
    let res = run_check("swap_symmetry", 0xD08, 100).unwrap();
    assert_eq!(res.trials, 100);
    assert_eq!(res.failures, 0);
    println!("ACCEPTANCE 7: PASS — swap symmetry, 100 trials, 0 failures");
}

/// Criterion 8: 100 bisection-soundness trials — the PSD test passes just
/// below the certified optimum and fails just above it.
#[test]
fn acceptance_08_bisection_soundness() {
    let res = run_check("bisection_soundness", 0xD09, 100).unwrap();
    assert_eq!(res.trials, 100);
    assert_eq!(res.failures, 0);
    println!("ACCEPTANCE 8: PASS — bisection soundness, 100 trials, 0 failures");
}

/// Criterion 9: the documented perturbation counterexample refutes both the
/// intermediate step and the conclusion; the witness re-evaluates with
/// margin ≥ 0.5.
#[test]
fn acceptance_09_perturbation_counterexample() {
    let inst = gallery(GalleryName::PerturbationCounterexample, 2).unwrap();
    let rep = kbiframe::audit::audit_positive_perturbation(
        &inst.pair,
        &inst.k,
        inst.t.as_ref().unwrap(),
        inst.power.unwrap(),
        tols(),
    )
    .unwrap();
    assert!(rep.hypotheses_ok);
    assert_eq!(rep.intermediate_valid, Some(false), "proof step must be refuted");
    assert!(!rep.claim_valid, "conclusion must be refuted");
    let w = rep.witness.as_ref().expect("witness expected");
    assert!(w.violation_margin.unwrap() >= 0.5);

    // independent re-evaluation through the perturbed pair's form
    let one_plus = ComplexMatrix::identity(2)
        .unwrap()
        .add(inst.t.as_ref().unwrap())
        .unwrap();
    let new_pair = apply_operator_to_pair(&one_plus, &inst.pair).unwrap();
    let claimed = match rep.claimed_a.unwrap() {
        Bound::Finite(a) => a,
        Bound::Unbounded => panic!("expected finite claim"),
    };
    let margin = kbiframe::audit::reevaluate_lower_witness(
        &new_pair,
        &inst.k,
        w.vector.as_ref().unwrap(),
        claimed,
    )
    .unwrap();
    assert!(margin >= 0.5, "re-evaluated margin = {margin}");
    println!(
        "ACCEPTANCE 9: PASS — perturbation counterexample refuted (witness margin {margin:.3})"
    );
}

/// Criterion 10: 100 trials of the invertibility-on-range bound
/// κ = a_opt·‖K⁺‖⁻² on sampled unit vectors of R(K).
#[test]
fn acceptance_10_invertibility_on_range() {
    let res = run_check("audit_invertibility_on_range", 0xD0A, 100).unwrap();
    assert_eq!(res.trials, 100);
    assert_eq!(res.failures, 0);
    println!("ACCEPTANCE 10: PASS — invertibility-on-range bound, 100 trials, 0 failures");
}

/// Criterion 11: 100 square-root factorization trials — certified instances
/// factor with residual ≤ 1e−8, non-certified instances agree with the
/// certificate.
#[test]
fn acceptance_11_sqrt_factorization() {
    let res = run_check("audit_sqrt_factorization", 0xD0B, 100).unwrap();
    assert_eq!(res.trials, 100);
    assert_eq!(res.failures, 0);
    println!("ACCEPTANCE 11: PASS — sqrt factorization round trip, 100 trials, 0 failures");
}

/// Criterion 12: the CLI battery run `random-suite --seed 7 --trials 50` is
/// byte-identical across two invocations, passes, and finishes under 60 s.
#[test]
fn acceptance_12_suite_determinism() {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_kbiframe");
    let run = || {
        std::process::Command::new(bin)
            .args(["random-suite", "--seed", "7", "--trials", "50"])
            .output()
            .expect("binary runs")
    };
    let first = run();
    let second = run();
    assert!(first.status.success(), "suite must pass");
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout, "summaries must be byte-identical");
    assert!(!first.stdout.is_empty());
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!("ACCEPTANCE 12: PASS — random-suite deterministic and green in {elapsed:?}");
}
