//! C ABI for the kbiframe toolkit.
//!
//! The surface is handle-based: instances and certificates are opaque
//! pointers created and freed through paired functions, results cross the
//! boundary either as scalars or as canonical JSON strings (freed with
//! [`kbf_string_free`]). Every fallible call returns a [`KbfStatus`]; the
//! detailed message for the most recent failure on the current thread is
//! available through [`kbf_last_error_message`].
//!
//! The matching C header is generated into `include/kbiframe.h` at build
//! time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use kbiframe::certify::{certify_biframe, certify_k_biframe, certify_k_frame, Tolerances};
use kbiframe::instances::{gallery, random_biframe, Family, GalleryName, Instance};
use kbiframe::io;
use kbiframe::{Error, KBiframeCertificate, StatementId};

/// Status codes shared across the ABI.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KbfStatus {
    KbfOk = 0,
    KbfErrNullArgument = 1,
    KbfErrUtf8 = 2,
    KbfErrParse = 3,
    KbfErrSchema = 4,
    KbfErrDimension = 5,
    KbfErrNumeric = 6,
    KbfErrBadArgument = 7,
    KbfErrUnknownName = 8,
    KbfErrIo = 9,
}

/// Which certification variant to run.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KbfCertifyMode {
    /// The pair against the instance operator K.
    KbfModeKBiframe = 0,
    /// The sequence X against K (pair (X, X)).
    KbfModeKFrame = 1,
    /// The pair against the identity.
    KbfModeBiframe = 2,
}

/// Opaque instance handle.
pub struct KbfInstance(Instance);

/// Opaque certificate handle.
pub struct KbfCertificate(KBiframeCertificate);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> KbfStatus {
    match err {
        Error::DimensionMismatch(_) | Error::DimensionLimit(_) => KbfStatus::KbfErrDimension,
        Error::NotHermitian { .. }
        | Error::NotPsd { .. }
        | Error::NoConvergence { .. }
        | Error::NonFiniteEntry { .. } => KbfStatus::KbfErrNumeric,
        Error::BadParameters(_) => KbfStatus::KbfErrBadArgument,
        Error::UnknownName(_) => KbfStatus::KbfErrUnknownName,
        Error::Parse { .. } => KbfStatus::KbfErrParse,
        Error::Schema { .. } => KbfStatus::KbfErrSchema,
        Error::Io { .. } => KbfStatus::KbfErrIo,
    }
}

fn fail(err: Error) -> KbfStatus {
    let status = status_of(&err);
    set_error(&err.to_string());
    status
}

/// Message describing the most recent error on this thread. The pointer
/// stays valid until the next failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn kbf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Free a string returned by this library. Accepts null.
///
/// # Safety
/// `s` must be a pointer previously returned by a `kbf_*` function that
/// documents `kbf_string_free` as its deallocator, and not freed before.
#[no_mangle]
pub unsafe extern "C" fn kbf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, KbfStatus> {
    if ptr.is_null() {
        set_error(&format!("{what} must not be null"));
        return Err(KbfStatus::KbfErrNullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        KbfStatus::KbfErrUtf8
    })
}

fn to_cstring(s: String) -> *mut c_char {
    CString::new(s.replace('\0', "")).map_or(ptr::null_mut(), CString::into_raw)
}

fn tolerances(herm_tol: f64, bis_tol: f64) -> Tolerances {
    let mut tols = Tolerances::default();
    if herm_tol > 0.0 && herm_tol.is_finite() {
        tols.herm_tol = herm_tol;
    }
    if bis_tol > 0.0 && bis_tol.is_finite() {
        tols.bis_tol = bis_tol;
    }
    tols
}

/// Parse an instance from its canonical JSON form.
///
/// # Safety
/// `json` must be a valid NUL-terminated C string; `out` must be a valid
/// pointer to a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn kbf_instance_from_json(
    json: *const c_char,
    out: *mut *mut KbfInstance,
) -> KbfStatus {
    if out.is_null() {
        set_error("out must not be null");
        return KbfStatus::KbfErrNullArgument;
    }
    let text = match read_str(json, "json") {
        Ok(t) => t,
        Err(status) => return status,
    };
    match io::parse_instance(text) {
        Ok(inst) => {
            *out = Box::into_raw(Box::new(KbfInstance(inst)));
            KbfStatus::KbfOk
        }
        Err(e) => fail(e),
    }
}

/// Build a documented gallery instance by name
/// (`ex_c4`, `parseval`, `shift`, `ex_s_singular`,
/// `perturbation_counterexample`); `n` is the truncation dimension where
/// the family has one.
///
/// # Safety
/// `name` must be a valid NUL-terminated C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kbf_instance_gallery(
    name: *const c_char,
    n: usize,
    out: *mut *mut KbfInstance,
) -> KbfStatus {
    if out.is_null() {
        set_error("out must not be null");
        return KbfStatus::KbfErrNullArgument;
    }
    let name_str = match read_str(name, "name") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let Some(gname) = GalleryName::parse(name_str) else {
        set_error(&format!("unknown gallery name `{name_str}`"));
        return KbfStatus::KbfErrUnknownName;
    };
    match gallery(gname, n) {
        Ok(inst) => {
            *out = Box::into_raw(Box::new(KbfInstance(inst)));
            KbfStatus::KbfOk
        }
        Err(e) => fail(e),
    }
}

/// Build a seeded random instance of the named family
/// (`rescale`, `controlled`, `skew`).
///
/// # Safety
/// `family` must be a valid NUL-terminated C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kbf_instance_random(
    family: *const c_char,
    n: usize,
    m: usize,
    seed: u64,
    out: *mut *mut KbfInstance,
) -> KbfStatus {
    if out.is_null() {
        set_error("out must not be null");
        return KbfStatus::KbfErrNullArgument;
    }
    let family_str = match read_str(family, "family") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let Some(fam) = Family::parse(family_str) else {
        set_error(&format!("unknown family `{family_str}`"));
        return KbfStatus::KbfErrUnknownName;
    };
    match random_biframe(n, m, fam, seed) {
        Ok(inst) => {
            *out = Box::into_raw(Box::new(KbfInstance(inst)));
            KbfStatus::KbfOk
        }
        Err(e) => fail(e),
    }
}

/// Canonical JSON of the instance. Free with `kbf_string_free`.
///
/// # Safety
/// `inst` must be a live handle from this library (or null, yielding null).
#[no_mangle]
pub unsafe extern "C" fn kbf_instance_to_json(inst: *const KbfInstance) -> *mut c_char {
    match inst.as_ref() {
        Some(handle) => to_cstring(io::instance_to_json(&handle.0)),
        None => ptr::null_mut(),
    }
}

/// SHA-256 digest (hex) of the canonicalized instance. Free with
/// `kbf_string_free`.
///
/// # Safety
/// `inst` must be a live handle from this library (or null, yielding null).
#[no_mangle]
pub unsafe extern "C" fn kbf_instance_digest(inst: *const KbfInstance) -> *mut c_char {
    match inst.as_ref() {
        Some(handle) => to_cstring(io::instance_digest(&handle.0)),
        None => ptr::null_mut(),
    }
}

/// Ambient dimension of the instance; 0 for null.
///
/// # Safety
/// `inst` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn kbf_instance_dim(inst: *const KbfInstance) -> usize {
    inst.as_ref().map_or(0, |handle| handle.0.dim())
}

/// Destroy an instance handle. Accepts null.
///
/// # Safety
/// `inst` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kbf_instance_free(inst: *mut KbfInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Certify the instance. Non-positive tolerances select the defaults
/// (herm_tol 1e-8, bis_tol 1e-9).
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kbf_certify(
    inst: *const KbfInstance,
    mode: KbfCertifyMode,
    herm_tol: f64,
    bis_tol: f64,
    out: *mut *mut KbfCertificate,
) -> KbfStatus {
    if out.is_null() {
        set_error("out must not be null");
        return KbfStatus::KbfErrNullArgument;
    }
    let Some(handle) = inst.as_ref() else {
        set_error("instance must not be null");
        return KbfStatus::KbfErrNullArgument;
    };
    let tols = tolerances(herm_tol, bis_tol);
    let result = match mode {
        KbfCertifyMode::KbfModeKBiframe => certify_k_biframe(&handle.0.pair, &handle.0.k, tols),
        KbfCertifyMode::KbfModeKFrame => certify_k_frame(&handle.0.pair.x, &handle.0.k, tols),
        KbfCertifyMode::KbfModeBiframe => certify_biframe(&handle.0.pair, tols),
    };
    match result {
        Ok(cert) => {
            *out = Box::into_raw(Box::new(KbfCertificate(cert)));
            KbfStatus::KbfOk
        }
        Err(e) => fail(e),
    }
}

/// 1 when the certificate affirms the K-biframe property, else 0.
///
/// # Safety
/// `cert` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn kbf_certificate_is_k_biframe(cert: *const KbfCertificate) -> i32 {
    cert.as_ref().map_or(0, |c| c.0.is_k_biframe as i32)
}

/// 1 when the pair certifies tight.
///
/// # Safety
/// `cert` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn kbf_certificate_is_tight(cert: *const KbfCertificate) -> i32 {
    cert.as_ref().map_or(0, |c| c.0.is_tight as i32)
}

/// 1 when the pair certifies Parseval.
///
/// # Safety
/// `cert` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn kbf_certificate_is_parseval(cert: *const KbfCertificate) -> i32 {
    cert.as_ref().map_or(0, |c| c.0.is_parseval as i32)
}

/// Optimal lower bound. Returns 1 and writes the finite value, or 0 when
/// the bound is the Unbounded sentinel (K = 0) or the handle is null.
///
/// # Safety
/// `cert` must be a live handle or null; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn kbf_certificate_lower_bound(
    cert: *const KbfCertificate,
    out: *mut f64,
) -> i32 {
    let Some(c) = cert.as_ref() else { return 0 };
    match c.0.a_opt.finite() {
        Some(a) => {
            if !out.is_null() {
                *out = a;
            }
            1
        }
        None => 0,
    }
}

/// Optimal upper bound b_opt; NaN for null.
///
/// # Safety
/// `cert` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn kbf_certificate_upper_bound(cert: *const KbfCertificate) -> f64 {
    cert.as_ref().map_or(f64::NAN, |c| c.0.b_opt)
}

/// Hermitian residual of the certified pair's biframe operator.
///
/// # Safety
/// `cert` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn kbf_certificate_hermitian_residual(cert: *const KbfCertificate) -> f64 {
    cert.as_ref().map_or(f64::NAN, |c| c.0.hermitian_residual)
}

/// Canonical certificate JSON, tied to the instance digest. Free with
/// `kbf_string_free`.
///
/// # Safety
/// Both handles must be live handles from this library (or null -> null).
#[no_mangle]
pub unsafe extern "C" fn kbf_certificate_to_json(
    cert: *const KbfCertificate,
    inst: *const KbfInstance,
) -> *mut c_char {
    let (Some(c), Some(i)) = (cert.as_ref(), inst.as_ref()) else {
        return ptr::null_mut();
    };
    let digest = io::instance_digest(&i.0);
    to_cstring(io::certificate_to_json(&digest, c.0.tolerances, &c.0, None))
}

/// Destroy a certificate handle. Accepts null.
///
/// # Safety
/// `cert` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kbf_certificate_free(cert: *mut KbfCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Audit one statement against the instance. On success writes the report
/// JSON (free with `kbf_string_free`) and the claim verdict (1 valid,
/// 0 refuted).
///
/// # Safety
/// `inst` must be live; `statement` a valid C string; `out_json` and
/// `out_claim_valid` writable or null.
#[no_mangle]
pub unsafe extern "C" fn kbf_audit(
    inst: *const KbfInstance,
    statement: *const c_char,
    seed: u64,
    trials: usize,
    herm_tol: f64,
    bis_tol: f64,
    out_json: *mut *mut c_char,
    out_claim_valid: *mut i32,
) -> KbfStatus {
    let Some(handle) = inst.as_ref() else {
        set_error("instance must not be null");
        return KbfStatus::KbfErrNullArgument;
    };
    let statement_str = match read_str(statement, "statement") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let Some(id) = StatementId::parse(statement_str) else {
        set_error(&format!("unknown statement `{statement_str}`"));
        return KbfStatus::KbfErrUnknownName;
    };
    let tols = tolerances(herm_tol, bis_tol);
    let inst_ref = &handle.0;
    let need_t = || -> Result<&kbiframe::ComplexMatrix, Error> {
        inst_ref.t.as_ref().ok_or_else(|| {
            Error::BadParameters(format!("statement `{statement_str}` needs a `t` operator"))
        })
    };
    let report = (|| -> Result<kbiframe::AuditReport, Error> {
        use kbiframe::audit as a;
        let pair = &inst_ref.pair;
        let k = &inst_ref.k;
        match id {
            StatementId::Swap => a::audit_swap(pair, k, tols),
            StatementId::Sum => {
                let z = inst_ref.z.clone().unwrap_or_else(|| pair.x.clone());
                a::audit_sum(&pair.x, &pair.y, &z, k, tols)
            }
            StatementId::LinearCombination => {
                let factors = inst_ref.factors.clone().ok_or_else(|| {
                    Error::BadParameters("linear_combination needs `factors`".to_string())
                })?;
                let alphas = inst_ref.alphas.clone().unwrap_or_else(|| {
                    vec![num_complex::Complex64::new(1.0, 0.0); factors.len()]
                });
                if alphas.len() != factors.len() {
                    return Err(Error::BadParameters(
                        "`alphas` and `factors` must have equal length".to_string(),
                    ));
                }
                let terms: Vec<_> = alphas.into_iter().zip(factors).collect();
                a::audit_linear_combination(pair, &terms, tols)
            }
            StatementId::Product => {
                let factors = inst_ref
                    .factors
                    .clone()
                    .ok_or_else(|| Error::BadParameters("product needs `factors`".to_string()))?;
                a::audit_product(pair, &factors, tols)
            }
            StatementId::NormPromotion => a::audit_norm_promotion(pair, k, tols),
            StatementId::OperatorInequality => {
                a::audit_operator_inequality(pair, k, tols, seed, trials)
            }
            StatementId::SqrtFactorization => a::audit_sqrt_factorization(pair, k, tols),
            StatementId::RangeTransfer => a::audit_range_transfer(pair, k, need_t()?, tols),
            StatementId::PositivePerturbation => a::audit_positive_perturbation(
                pair,
                k,
                need_t()?,
                inst_ref.power.unwrap_or(1),
                tols,
            ),
            StatementId::InvertibilityOnRange => {
                a::audit_invertibility_on_range(pair, k, tols, seed, trials)
            }
            StatementId::SurjectivityNecessity => {
                a::audit_surjectivity_necessity(pair, k, need_t()?, tols)
            }
            StatementId::CommutingTransfer => {
                a::audit_commuting_transfer(pair, k, need_t()?, tols, seed, trials)
            }
            StatementId::TwoSidedInvertibility => {
                a::audit_two_sided_invertibility(pair, k, need_t()?, tols)
            }
            StatementId::CoisometryTransfer => {
                a::audit_coisometry_transfer(pair, k, need_t()?, tols)
            }
        }
    })();
    match report {
        Ok(rep) => {
            if !out_claim_valid.is_null() {
                *out_claim_valid = rep.claim_valid as i32;
            }
            if !out_json.is_null() {
                let digest = io::instance_digest(inst_ref);
                *out_json = to_cstring(io::audit_to_json(&digest, tols, &rep));
            }
            KbfStatus::KbfOk
        }
        Err(e) => fail(e),
    }
}

/// Douglas range-inclusion check of two square matrices given as matrix
/// documents (`{"schema_version":"1","matrix":[[[re,im],...],...]}`). On
/// success writes the report JSON and the inclusion verdict.
///
/// # Safety
/// `t1_json` and `t2_json` must be valid C strings; out parameters
/// writable or null.
#[no_mangle]
pub unsafe extern "C" fn kbf_douglas(
    t1_json: *const c_char,
    t2_json: *const c_char,
    out_json: *mut *mut c_char,
    out_included: *mut i32,
) -> KbfStatus {
    let t1_text = match read_str(t1_json, "t1_json") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let t2_text = match read_str(t2_json, "t2_json") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let result = (|| -> Result<(kbiframe::DouglasReport, String), Error> {
        let t1 = io::parse_matrix_file(t1_text)?;
        let t2 = io::parse_matrix_file(t2_text)?;
        let n = t1.rows().max(t1.cols());
        let rep = kbiframe::douglas_check(&t1, &t2, kbiframe::default_rtol(n, n))?;
        let digest = io::matrix_pair_digest(&t1, &t2);
        Ok((rep, digest))
    })();
    match result {
        Ok((rep, digest)) => {
            if !out_included.is_null() {
                *out_included = rep.range_included as i32;
            }
            if !out_json.is_null() {
                *out_json = to_cstring(io::douglas_to_json(&digest, &rep));
            }
            KbfStatus::KbfOk
        }
        Err(e) => fail(e),
    }
}

/// Run the seeded property battery. Writes the summary JSON and the
/// overall verdict (1 when every check passed).
///
/// # Safety
/// Out parameters must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn kbf_run_suite(
    seed: u64,
    trials: usize,
    out_json: *mut *mut c_char,
    out_all_pass: *mut i32,
) -> KbfStatus {
    match kbiframe::suite::run_suite(seed, trials) {
        Ok(summary) => {
            if !out_all_pass.is_null() {
                *out_all_pass = summary.all_pass as i32;
            }
            if !out_json.is_null() {
                *out_json = to_cstring(summary.to_json());
            }
            KbfStatus::KbfOk
        }
        Err(e) => fail(e),
    }
}
