//! JSON instance and certificate files.
//!
//! Emission is canonical: fixed key order (declaration order below), floats
//! always printed with 17 significant digits in scientific form, no
//! insignificant whitespace variation. Equal inputs therefore produce
//! byte-identical documents, and the certificate's input digest (SHA-256 of
//! the canonicalized instance) ties every report to the exact data it was
//! computed from.
//!
//! Complex scalars are `[re, im]` two-element arrays throughout.

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::audit::AuditReport;
use crate::certify::{Bound, KBiframeCertificate, Tolerances};
use crate::error::{Error, Result};
use crate::frame::{BiframePair, FrameSequence};
use crate::instances::{Instance, Provenance};
use crate::matrix::ComplexMatrix;
use crate::operator::DouglasReport;

pub const SCHEMA_VERSION: &str = "1";

// ── canonical writer ────────────────────────────────────────────────

/// Minimal JSON builder with canonical float formatting.
pub struct JsonWriter {
    buf: String,
    needs_comma: Vec<bool>,
}

impl JsonWriter {
    pub fn new() -> Self {
        Self {
            buf: String::new(),
            needs_comma: vec![false],
        }
    }

    pub fn finish(self) -> String {
        self.buf
    }

    fn pre_value(&mut self) {
        if let Some(last) = self.needs_comma.last_mut() {
            if *last {
                self.buf.push(',');
            }
            *last = true;
        }
    }

    pub fn begin_object(&mut self) {
        self.pre_value();
        self.buf.push('{');
        self.needs_comma.push(false);
    }

    pub fn end_object(&mut self) {
        self.buf.push('}');
        self.needs_comma.pop();
    }

    pub fn begin_array(&mut self) {
        self.pre_value();
        self.buf.push('[');
        self.needs_comma.push(false);
    }

    pub fn end_array(&mut self) {
        self.buf.push(']');
        self.needs_comma.pop();
    }

    pub fn key(&mut self, k: &str) {
        if let Some(last) = self.needs_comma.last_mut() {
            if *last {
                self.buf.push(',');
            }
            *last = false;
        }
        self.buf.push('"');
        self.buf.push_str(k);
        self.buf.push_str("\":");
    }

    pub fn string(&mut self, s: &str) {
        self.pre_value();
        self.buf.push('"');
        for ch in s.chars() {
            match ch {
                '"' => self.buf.push_str("\\\""),
                '\\' => self.buf.push_str("\\\\"),
                '\n' => self.buf.push_str("\\n"),
                '\t' => self.buf.push_str("\\t"),
                '\r' => self.buf.push_str("\\r"),
                c if (c as u32) < 0x20 => {
                    self.buf.push_str(&format!("\\u{:04x}", c as u32));
                }
                c => self.buf.push(c),
            }
        }
        self.buf.push('"');
    }

    pub fn bool(&mut self, b: bool) {
        self.pre_value();
        self.buf.push_str(if b { "true" } else { "false" });
    }

    pub fn null(&mut self) {
        self.pre_value();
        self.buf.push_str("null");
    }

    pub fn uint(&mut self, v: u64) {
        self.pre_value();
        self.buf.push_str(&v.to_string());
    }

    /// Finite floats only; 17 significant digits, lossless for f64.
    pub fn float(&mut self, v: f64) {
        self.pre_value();
        self.buf.push_str(&canonical_float(v));
    }

    pub fn complex(&mut self, z: Complex64) {
        self.begin_array();
        self.float(z.re);
        self.float(z.im);
        self.end_array();
    }

    pub fn complex_vector(&mut self, v: &[Complex64]) {
        self.begin_array();
        for z in v {
            self.complex(*z);
        }
        self.end_array();
    }

    pub fn matrix(&mut self, m: &ComplexMatrix) {
        self.begin_array();
        for i in 0..m.rows() {
            self.begin_array();
            for j in 0..m.cols() {
                self.complex(m.get(i, j));
            }
            self.end_array();
        }
        self.end_array();
    }

    /// Optional lower bound: finite value or the string sentinel.
    pub fn bound(&mut self, b: Bound) {
        match b {
            Bound::Finite(a) => self.float(a),
            Bound::Unbounded => self.string("unbounded"),
        }
    }
}

impl Default for JsonWriter {
    fn default() -> Self {
        Self::new()
    }
}

/// Fixed decimal form with 17 significant digits; negative zero is
/// normalized so equal values print identically.
pub fn canonical_float(v: f64) -> String {
    debug_assert!(v.is_finite(), "non-finite value reached the writer");
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

// ── instance files ──────────────────────────────────────────────────

/// Canonical JSON for an instance. Field order is fixed; optional fields
/// are omitted when absent.
pub fn instance_to_json(inst: &Instance) -> String {
    let mut w = JsonWriter::new();
    w.begin_object();
    w.key("schema_version");
    w.string(SCHEMA_VERSION);
    w.key("name");
    w.string(&inst.name);
    w.key("provenance");
    w.string(inst.provenance.as_str());
    w.key("dim");
    w.uint(inst.dim() as u64);
    w.key("x_vectors");
    vectors_json(&mut w, inst.pair.x.vectors());
    w.key("y_vectors");
    vectors_json(&mut w, inst.pair.y.vectors());
    w.key("k");
    w.matrix(&inst.k);
    if let Some(t) = &inst.t {
        w.key("t");
        w.matrix(t);
    }
    if let Some(factors) = &inst.factors {
        w.key("factors");
        w.begin_array();
        for f in factors {
            w.matrix(f);
        }
        w.end_array();
    }
    if let Some(alphas) = &inst.alphas {
        w.key("alphas");
        w.complex_vector(alphas);
    }
    if let Some(z) = &inst.z {
        w.key("z_vectors");
        vectors_json(&mut w, z.vectors());
    }
    if let Some(p) = inst.power {
        w.key("power");
        w.uint(p as u64);
    }
    if let Some((a, b)) = inst.claimed_bounds {
        w.key("claimed_bounds");
        w.begin_array();
        w.float(a);
        w.float(b);
        w.end_array();
    }
    if let Some(td) = inst.truncation_dim {
        w.key("truncation_dim");
        w.uint(td as u64);
    }
    if let Some(seed) = inst.seed {
        w.key("seed");
        w.uint(seed);
    }
    w.end_object();
    w.finish()
}

fn vectors_json(w: &mut JsonWriter, vectors: &[Vec<Complex64>]) {
    w.begin_array();
    for v in vectors {
        w.complex_vector(v);
    }
    w.end_array();
}

/// SHA-256 hex digest of the canonicalized instance.
pub fn instance_digest(inst: &Instance) -> String {
    let json = instance_to_json(inst);
    let mut hasher = Sha256::new();
    hasher.update(json.as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// Digest tying a Douglas report to its two canonicalized matrix inputs.
pub fn matrix_pair_digest(t1: &ComplexMatrix, t2: &ComplexMatrix) -> String {
    let mut hasher = Sha256::new();
    hasher.update(matrix_file_to_json(t1).as_bytes());
    hasher.update(b"\n");
    hasher.update(matrix_file_to_json(t2).as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn save_instance(inst: &Instance, path: &str) -> Result<()> {
    write_file(path, &instance_to_json(inst))
}

pub fn load_instance(path: &str) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_string(),
        source: e,
    })?;
    parse_instance(&text)
}

/// Parse an instance document, with schema errors naming the failing field.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| schema_err("document", "expected a JSON object"))?;

    let version = field_str(obj, "schema_version")?;
    if version != SCHEMA_VERSION {
        return Err(schema_err(
            "schema_version",
            &format!("unsupported version `{version}`"),
        ));
    }
    let name = match obj.get("name") {
        Some(v) => v
            .as_str()
            .ok_or_else(|| schema_err("name", "expected a string"))?
            .to_string(),
        None => "instance".to_string(),
    };
    let provenance = match obj.get("provenance") {
        Some(v) => {
            let s = v
                .as_str()
                .ok_or_else(|| schema_err("provenance", "expected a string"))?;
            Provenance::parse(s)
                .ok_or_else(|| schema_err("provenance", &format!("unknown value `{s}`")))?
        }
        None => Provenance::RandomFamily,
    };
    let dim = obj
        .get("dim")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| schema_err("dim", "expected a non-negative integer"))? as usize;

    let x_vectors = parse_vectors(obj, "x_vectors", dim)?;
    let y_vectors = parse_vectors(obj, "y_vectors", dim)?;
    let k = parse_matrix(
        obj.get("k")
            .ok_or_else(|| schema_err("k", "missing required field"))?,
        "k",
    )?;
    if k.rows() != dim || k.cols() != dim {
        return Err(schema_err("k", "operator shape must match dim"));
    }

    let t = match obj.get("t") {
        Some(v) => Some(parse_matrix(v, "t")?),
        None => None,
    };
    let factors = match obj.get("factors") {
        Some(v) => {
            let arr = v
                .as_array()
                .ok_or_else(|| schema_err("factors", "expected an array"))?;
            let mut out = Vec::new();
            for (i, f) in arr.iter().enumerate() {
                out.push(parse_matrix(f, &format!("factors[{i}]"))?);
            }
            Some(out)
        }
        None => None,
    };
    let alphas = match obj.get("alphas") {
        Some(v) => {
            let arr = v
                .as_array()
                .ok_or_else(|| schema_err("alphas", "expected an array"))?;
            let mut out = Vec::new();
            for (i, a) in arr.iter().enumerate() {
                out.push(parse_complex(a, &format!("alphas[{i}]"))?);
            }
            Some(out)
        }
        None => None,
    };
    let z = match obj.get("z_vectors") {
        Some(_) => Some(FrameSequence::new(dim, parse_vectors(obj, "z_vectors", dim)?)?),
        None => None,
    };
    let power = match obj.get("power") {
        Some(v) => Some(
            v.as_u64()
                .ok_or_else(|| schema_err("power", "expected a non-negative integer"))?
                as u32,
        ),
        None => None,
    };
    let claimed_bounds = match obj.get("claimed_bounds") {
        Some(v) => {
            let arr = v
                .as_array()
                .ok_or_else(|| schema_err("claimed_bounds", "expected [a, b]"))?;
            if arr.len() != 2 {
                return Err(schema_err("claimed_bounds", "expected exactly two numbers"));
            }
            let a = arr[0]
                .as_f64()
                .ok_or_else(|| schema_err("claimed_bounds[0]", "expected a number"))?;
            let b = arr[1]
                .as_f64()
                .ok_or_else(|| schema_err("claimed_bounds[1]", "expected a number"))?;
            Some((a, b))
        }
        None => None,
    };
    let truncation_dim = obj
        .get("truncation_dim")
        .map(|v| {
            v.as_u64()
                .ok_or_else(|| schema_err("truncation_dim", "expected an integer"))
        })
        .transpose()?
        .map(|v| v as usize);
    let seed = obj
        .get("seed")
        .map(|v| v.as_u64().ok_or_else(|| schema_err("seed", "expected an integer")))
        .transpose()?;

    let pair = BiframePair::new(
        FrameSequence::new(dim, x_vectors)?,
        FrameSequence::new(dim, y_vectors)?,
    )?;
    Ok(Instance {
        name,
        pair,
        k,
        t,
        factors,
        alphas,
        z,
        power,
        claimed_bounds,
        provenance,
        seed,
        truncation_dim,
    })
}

fn schema_err(field: &str, message: &str) -> Error {
    Error::Schema {
        field: field.to_string(),
        message: message.to_string(),
    }
}

fn field_str<'a>(
    obj: &'a serde_json::Map<String, serde_json::Value>,
    key: &str,
) -> Result<&'a str> {
    obj.get(key)
        .and_then(serde_json::Value::as_str)
        .ok_or_else(|| schema_err(key, "expected a string"))
}

fn parse_vectors(
    obj: &serde_json::Map<String, serde_json::Value>,
    key: &str,
    dim: usize,
) -> Result<Vec<Vec<Complex64>>> {
    let arr = obj
        .get(key)
        .and_then(serde_json::Value::as_array)
        .ok_or_else(|| schema_err(key, "expected an array of vectors"))?;
    let mut out = Vec::with_capacity(arr.len());
    for (i, v) in arr.iter().enumerate() {
        let field = format!("{key}[{i}]");
        let entries = v
            .as_array()
            .ok_or_else(|| schema_err(&field, "expected an array"))?;
        if entries.len() != dim {
            return Err(schema_err(
                &field,
                &format!("expected {dim} entries, found {}", entries.len()),
            ));
        }
        let mut vec = Vec::with_capacity(dim);
        for (j, e) in entries.iter().enumerate() {
            vec.push(parse_complex(e, &format!("{field}[{j}]"))?);
        }
        out.push(vec);
    }
    Ok(out)
}

fn parse_matrix(value: &serde_json::Value, field: &str) -> Result<ComplexMatrix> {
    let rows = value
        .as_array()
        .ok_or_else(|| schema_err(field, "expected an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let rfield = format!("{field}[{i}]");
        let entries = row
            .as_array()
            .ok_or_else(|| schema_err(&rfield, "expected an array"))?;
        let mut r = Vec::with_capacity(entries.len());
        for (j, e) in entries.iter().enumerate() {
            r.push(parse_complex(e, &format!("{rfield}[{j}]"))?);
        }
        out.push(r);
    }
    ComplexMatrix::from_rows(&out)
}

fn parse_complex(value: &serde_json::Value, field: &str) -> Result<Complex64> {
    let pair = value
        .as_array()
        .ok_or_else(|| schema_err(field, "expected [re, im]"))?;
    if pair.len() != 2 {
        return Err(schema_err(field, "expected exactly two numbers"));
    }
    let re = pair[0]
        .as_f64()
        .ok_or_else(|| schema_err(field, "re is not a number"))?;
    let im = pair[1]
        .as_f64()
        .ok_or_else(|| schema_err(field, "im is not a number"))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(schema_err(field, "entries must be finite"));
    }
    Ok(Complex64::new(re, im))
}

/// Standalone matrix document, used by the douglas subcommand.
pub fn parse_matrix_file(text: &str) -> Result<ComplexMatrix> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| schema_err("document", "expected a JSON object"))?;
    let version = field_str(obj, "schema_version")?;
    if version != SCHEMA_VERSION {
        return Err(schema_err(
            "schema_version",
            &format!("unsupported version `{version}`"),
        ));
    }
    parse_matrix(
        obj.get("matrix")
            .ok_or_else(|| schema_err("matrix", "missing required field"))?,
        "matrix",
    )
}

pub fn load_matrix_file(path: &str) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_string(),
        source: e,
    })?;
    parse_matrix_file(&text)
}

pub fn matrix_file_to_json(m: &ComplexMatrix) -> String {
    let mut w = JsonWriter::new();
    w.begin_object();
    w.key("schema_version");
    w.string(SCHEMA_VERSION);
    w.key("matrix");
    w.matrix(m);
    w.end_object();
    w.finish()
}

// ── certificate and report files ────────────────────────────────────

fn tolerances_json(w: &mut JsonWriter, tols: Tolerances) {
    w.begin_object();
    w.key("herm_tol");
    w.float(tols.herm_tol);
    w.key("bis_tol");
    w.float(tols.bis_tol);
    w.key("ktol");
    w.float(crate::eigen::KTOL);
    w.end_object();
}

fn certificate_body(w: &mut JsonWriter, cert: &KBiframeCertificate) {
    w.begin_object();
    w.key("hermitian_residual");
    w.float(cert.hermitian_residual);
    w.key("psd_margin");
    w.float(cert.psd_margin);
    w.key("a_opt");
    w.bound(cert.a_opt);
    w.key("b_opt");
    w.float(cert.b_opt);
    w.key("is_k_biframe");
    w.bool(cert.is_k_biframe);
    w.key("is_tight");
    w.bool(cert.is_tight);
    w.key("is_parseval");
    w.bool(cert.is_parseval);
    w.key("witness_lower");
    match &cert.witness_lower {
        Some(v) => w.complex_vector(v),
        None => w.null(),
    }
    w.end_object();
}

/// Cross-check of externally claimed bounds against the certified data.
pub struct ClaimedBoundsCheck {
    pub claimed_a: f64,
    pub claimed_b: f64,
    pub a_valid: bool,
    pub b_valid: bool,
    pub a_psd_margin: f64,
}

/// Full certificate document for one instance.
pub fn certificate_to_json(
    digest: &str,
    tols: Tolerances,
    cert: &KBiframeCertificate,
    claimed: Option<&ClaimedBoundsCheck>,
) -> String {
    let mut w = JsonWriter::new();
    w.begin_object();
    w.key("schema_version");
    w.string(SCHEMA_VERSION);
    w.key("kind");
    w.string("certificate");
    w.key("input_digest");
    w.string(digest);
    w.key("tolerances");
    tolerances_json(&mut w, tols);
    w.key("certificate");
    certificate_body(&mut w, cert);
    w.key("claimed_check");
    match claimed {
        Some(c) => {
            w.begin_object();
            w.key("claimed_a");
            w.float(c.claimed_a);
            w.key("claimed_b");
            w.float(c.claimed_b);
            w.key("a_valid");
            w.bool(c.a_valid);
            w.key("b_valid");
            w.bool(c.b_valid);
            w.key("a_psd_margin");
            w.float(c.a_psd_margin);
            w.end_object();
        }
        None => w.null(),
    }
    w.end_object();
    w.finish()
}

fn douglas_body(w: &mut JsonWriter, rep: &DouglasReport) {
    w.begin_object();
    w.key("range_included");
    w.bool(rep.range_included);
    w.key("lambda_min");
    match rep.lambda_min {
        Some(l) => w.float(l),
        None => w.null(),
    }
    w.key("factor_u");
    match &rep.factor_u {
        Some(u) => w.matrix(u),
        None => w.null(),
    }
    w.key("residuals");
    w.begin_array();
    w.float(rep.residuals.0);
    w.float(rep.residuals.1);
    w.float(rep.residuals.2);
    w.end_array();
    w.key("witness");
    match &rep.witness {
        Some(v) => w.complex_vector(v),
        None => w.null(),
    }
    w.end_object();
}

pub fn douglas_to_json(digest: &str, rep: &DouglasReport) -> String {
    let mut w = JsonWriter::new();
    w.begin_object();
    w.key("schema_version");
    w.string(SCHEMA_VERSION);
    w.key("kind");
    w.string("douglas");
    w.key("input_digest");
    w.string(digest);
    w.key("report");
    douglas_body(&mut w, rep);
    w.end_object();
    w.finish()
}

pub fn audit_to_json(digest: &str, tols: Tolerances, rep: &AuditReport) -> String {
    let mut w = JsonWriter::new();
    w.begin_object();
    w.key("schema_version");
    w.string(SCHEMA_VERSION);
    w.key("kind");
    w.string("audit");
    w.key("input_digest");
    w.string(digest);
    w.key("tolerances");
    tolerances_json(&mut w, tols);
    w.key("statement");
    w.string(rep.statement.as_str());
    w.key("hypotheses_ok");
    w.bool(rep.hypotheses_ok);
    w.key("hypotheses");
    w.begin_array();
    for h in &rep.hypotheses {
        w.begin_object();
        w.key("name");
        w.string(&h.name);
        w.key("residual");
        w.float(if h.residual.is_finite() { h.residual } else { -1.0 });
        w.key("ok");
        w.bool(h.ok);
        w.end_object();
    }
    w.end_array();
    w.key("claimed_a");
    match rep.claimed_a {
        Some(b) => w.bound(b),
        None => w.null(),
    }
    w.key("claimed_b");
    match rep.claimed_b {
        Some(b) => w.float(b),
        None => w.null(),
    }
    w.key("claim_valid");
    w.bool(rep.claim_valid);
    w.key("intermediate_valid");
    match rep.intermediate_valid {
        Some(v) => w.bool(v),
        None => w.null(),
    }
    w.key("identity_residual");
    match rep.identity_residual {
        Some(v) => w.float(v),
        None => w.null(),
    }
    w.key("certificate");
    match &rep.certificate {
        Some(c) => certificate_body(&mut w, c),
        None => w.null(),
    }
    w.key("douglas");
    match &rep.douglas {
        Some(d) => douglas_body(&mut w, d),
        None => w.null(),
    }
    w.key("witness");
    match &rep.witness {
        Some(wit) => {
            w.begin_object();
            w.key("vector");
            match &wit.vector {
                Some(v) => w.complex_vector(v),
                None => w.null(),
            }
            w.key("violation_margin");
            match wit.violation_margin {
                Some(m) => w.float(m),
                None => w.null(),
            }
            w.key("description");
            w.string(&wit.description);
            w.end_object();
        }
        None => w.null(),
    }
    w.key("trials_run");
    w.uint(rep.trials_run as u64);
    w.key("notes");
    w.begin_array();
    for n in &rep.notes {
        w.string(n);
    }
    w.end_array();
    w.end_object();
    w.finish()
}

pub fn write_file(path: &str, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::Io {
        path: path.to_string(),
        source: e,
    })
}
