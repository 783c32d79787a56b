//! Command-line interface: certify instances, compute bounds, run Douglas
//! range-inclusion checks, audit statements, emit gallery instances and run
//! the seeded property battery.
//!
//! Stdout carries exactly one JSON document per invocation; everything else
//! goes to stderr. Exit codes: 0 success/affirmative, 2 negative verdict,
//! 1 usage or processing error.

use std::collections::HashMap;
use std::process::ExitCode;

use kbiframe::certify::{certify_biframe, certify_k_biframe, certify_k_frame, Tolerances};
use kbiframe::frame::{biframe_operator, hermitian_part};
use kbiframe::instances::{gallery, GalleryName, Instance};
use kbiframe::io::{
    self, audit_to_json, certificate_to_json, douglas_to_json, instance_digest,
    instance_to_json, ClaimedBoundsCheck,
};
use kbiframe::operator::douglas_check;
use kbiframe::suite::run_suite;
use kbiframe::{audit, ComplexMatrix, StatementId};

const USAGE: &str = "usage: kbiframe <command> [options]

commands:
  certify --in FILE [--k-frame|--biframe] [--herm-tol X] [--bis-tol X] [--out FILE]
      certify the instance; exit 0 when it is a K-biframe, 2 when it is not
  bounds --in FILE [--herm-tol X] [--bis-tol X]
      print the optimal bounds a_opt and b_opt
  douglas --t1 FILE --t2 FILE [--out FILE]
      range-inclusion report for two matrix files; exit 0 iff included
  audit --statement ID --in FILE [--seed N] [--trials N] [--out FILE]
      audit one statement; exit 0 iff the claim holds
  gallery --name NAME [--n N] [--out FILE]
      write a documented instance (ex_c4, parseval, shift, ex_s_singular,
      perturbation_counterexample)
  random-suite --seed N --trials N [--out FILE]
      run the seeded property battery; exit 0 iff all checks pass

environment:
  KBIFRAME_TOL   decimal override: herm_tol = value, bis_tol = value/10";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

type CliResult<T> = Result<T, String>;

fn run(args: &[String]) -> CliResult<ExitCode> {
    let Some(command) = args.first() else {
        return Err(format!("missing command\n{USAGE}"));
    };
    let flags = parse_flags(&args[1..])?;
    match command.as_str() {
        "certify" => cmd_certify(&flags),
        "bounds" => cmd_bounds(&flags),
        "douglas" => cmd_douglas(&flags),
        "audit" => cmd_audit(&flags),
        "gallery" => cmd_gallery(&flags),
        "random-suite" => cmd_random_suite(&flags),
        "help" | "--help" | "-h" => {
            eprintln!("{USAGE}");
            Ok(ExitCode::SUCCESS)
        }
        other => Err(format!("unknown command `{other}`\n{USAGE}")),
    }
}

struct Flags {
    values: HashMap<String, String>,
    switches: Vec<String>,
}

impl Flags {
    fn get(&self, name: &str) -> Option<&str> {
        self.values.get(name).map(String::as_str)
    }

    fn require(&self, name: &str) -> CliResult<&str> {
        self.get(name)
            .ok_or_else(|| format!("missing required option --{name}"))
    }

    fn has_switch(&self, name: &str) -> bool {
        self.switches.iter().any(|s| s == name)
    }

    fn parse_u64(&self, name: &str, default: u64) -> CliResult<u64> {
        match self.get(name) {
            Some(v) => v
                .parse::<u64>()
                .map_err(|_| format!("option --{name} expects an integer, got `{v}`")),
            None => Ok(default),
        }
    }

    fn parse_usize(&self, name: &str, default: usize) -> CliResult<usize> {
        Ok(self.parse_u64(name, default as u64)? as usize)
    }

    fn parse_f64(&self, name: &str) -> CliResult<Option<f64>> {
        match self.get(name) {
            Some(v) => {
                let x = v
                    .parse::<f64>()
                    .map_err(|_| format!("option --{name} expects a number, got `{v}`"))?;
                if !(x.is_finite() && x > 0.0) {
                    return Err(format!("option --{name} must be a positive number"));
                }
                Ok(Some(x))
            }
            None => Ok(None),
        }
    }
}

const SWITCHES: [&str; 2] = ["k-frame", "biframe"];

fn parse_flags(args: &[String]) -> CliResult<Flags> {
    let mut values = HashMap::new();
    let mut switches = Vec::new();
    let mut i = 0;
    while i < args.len() {
        let arg = &args[i];
        let Some(name) = arg.strip_prefix("--") else {
            return Err(format!("unexpected argument `{arg}`"));
        };
        if SWITCHES.contains(&name) {
            switches.push(name.to_string());
            i += 1;
            continue;
        }
        let value = args
            .get(i + 1)
            .ok_or_else(|| format!("option --{name} expects a value"))?;
        values.insert(name.to_string(), value.clone());
        i += 2;
    }
    Ok(Flags { values, switches })
}

fn tolerances(flags: &Flags) -> CliResult<Tolerances> {
    let mut tols = Tolerances::default();
    if let Ok(env_tol) = std::env::var("KBIFRAME_TOL") {
        let v = env_tol
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("KBIFRAME_TOL expects a decimal number, got `{env_tol}`"))?;
        if !(v.is_finite() && v > 0.0) {
            return Err("KBIFRAME_TOL must be a positive number".to_string());
        }
        tols.herm_tol = v;
        tols.bis_tol = v / 10.0;
    }
    if let Some(h) = flags.parse_f64("herm-tol")? {
        tols.herm_tol = h;
    }
    if let Some(b) = flags.parse_f64("bis-tol")? {
        tols.bis_tol = b;
    }
    Ok(tols)
}

fn emit(json: &str, out: Option<&str>) -> CliResult<()> {
    println!("{json}");
    if let Some(path) = out {
        io::write_file(path, json).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn load(flags: &Flags) -> CliResult<Instance> {
    let path = flags.require("in")?;
    io::load_instance(path).map_err(|e| e.to_string())
}

fn cmd_certify(flags: &Flags) -> CliResult<ExitCode> {
    let inst = load(flags)?;
    let tols = tolerances(flags)?;
    if flags.has_switch("k-frame") && flags.has_switch("biframe") {
        return Err("--k-frame and --biframe are mutually exclusive".to_string());
    }
    let cert = if flags.has_switch("k-frame") {
        certify_k_frame(&inst.pair.x, &inst.k, tols).map_err(|e| e.to_string())?
    } else if flags.has_switch("biframe") {
        certify_biframe(&inst.pair, tols).map_err(|e| e.to_string())?
    } else {
        certify_k_biframe(&inst.pair, &inst.k, tols).map_err(|e| e.to_string())?
    };

    // documented claimed bounds are cross-checked against K, not against
    // the --biframe / --k-frame variants
    let claimed = match inst.claimed_bounds {
        Some((a, b)) if !flags.has_switch("biframe") && !flags.has_switch("k-frame") => {
            Some(claimed_check(&inst, a, b, tols).map_err(|e| e.to_string())?)
        }
        _ => None,
    };
    let digest = instance_digest(&inst);
    let json = certificate_to_json(&digest, tols, &cert, claimed.as_ref());
    emit(&json, flags.get("out"))?;
    Ok(if cert.is_k_biframe {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn claimed_check(
    inst: &Instance,
    claimed_a: f64,
    claimed_b: f64,
    tols: Tolerances,
) -> kbiframe::Result<ClaimedBoundsCheck> {
    let s = biframe_operator(&inst.pair)?;
    let h = hermitian_part(&s)?;
    let g = inst.k.mul(&inst.k.adjoint())?;
    let shifted = h.sub(&g.scale_re(claimed_a))?;
    let margin = kbiframe::min_eig_hermitian(&shifted, kbiframe::KTOL)?;
    let scale = kbiframe::spectral_norm(&h)?;
    let b_opt = kbiframe::optimal_upper_bound(&h)?;
    Ok(ClaimedBoundsCheck {
        claimed_a,
        claimed_b,
        a_valid: margin >= -tols.herm_tol * scale.max(1.0),
        b_valid: claimed_b >= b_opt - 2.0 * tols.bis_tol,
        a_psd_margin: margin,
    })
}

fn cmd_bounds(flags: &Flags) -> CliResult<ExitCode> {
    let inst = load(flags)?;
    let tols = tolerances(flags)?;
    let cert = certify_k_biframe(&inst.pair, &inst.k, tols).map_err(|e| e.to_string())?;
    let mut w = io::JsonWriter::new();
    w.begin_object();
    w.key("a_opt");
    w.bound(cert.a_opt);
    w.key("b_opt");
    w.float(cert.b_opt);
    w.end_object();
    emit(&w.finish(), flags.get("out"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_douglas(flags: &Flags) -> CliResult<ExitCode> {
    let t1 = io::load_matrix_file(flags.require("t1")?).map_err(|e| e.to_string())?;
    let t2 = io::load_matrix_file(flags.require("t2")?).map_err(|e| e.to_string())?;
    let n = t1.rows().max(t1.cols());
    let rep =
        douglas_check(&t1, &t2, kbiframe::default_rtol(n, n)).map_err(|e| e.to_string())?;
    let digest = io::matrix_pair_digest(&t1, &t2);
    let json = douglas_to_json(&digest, &rep);
    emit(&json, flags.get("out"))?;
    Ok(if rep.range_included {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_audit(flags: &Flags) -> CliResult<ExitCode> {
    let inst = load(flags)?;
    let tols = tolerances(flags)?;
    let statement_name = flags.require("statement")?;
    let statement = StatementId::parse(statement_name)
        .ok_or_else(|| format!("unknown statement `{statement_name}`"))?;
    let seed = flags.parse_u64("seed", 0)?;
    let trials = flags.parse_usize("trials", 100)?;

    let need_t = || -> CliResult<&ComplexMatrix> {
        inst.t.as_ref().ok_or_else(|| {
            format!("statement `{statement_name}` needs a `t` operator in the instance file")
        })
    };

    let report = match statement {
        StatementId::Swap => audit::audit_swap(&inst.pair, &inst.k, tols),
        StatementId::Sum => {
            // Z defaults to X when the file carries no third sequence.
            let z = inst.z.clone().unwrap_or_else(|| inst.pair.x.clone());
            audit::audit_sum(&inst.pair.x, &inst.pair.y, &z, &inst.k, tols)
        }
        StatementId::LinearCombination => {
            let factors = inst.factors.clone().ok_or_else(|| {
                "statement `linear_combination` needs `factors` in the instance file".to_string()
            })?;
            let alphas = match &inst.alphas {
                Some(a) => {
                    if a.len() != factors.len() {
                        return Err("`alphas` and `factors` must have equal length".to_string());
                    }
                    a.clone()
                }
                None => vec![num_complex::Complex64::new(1.0, 0.0); factors.len()],
            };
            let terms: Vec<_> = alphas.into_iter().zip(factors).collect();
            audit::audit_linear_combination(&inst.pair, &terms, tols)
        }
        StatementId::Product => {
            let factors = inst.factors.clone().ok_or_else(|| {
                "statement `product` needs `factors` in the instance file".to_string()
            })?;
            audit::audit_product(&inst.pair, &factors, tols)
        }
        StatementId::NormPromotion => audit::audit_norm_promotion(&inst.pair, &inst.k, tols),
        StatementId::OperatorInequality => {
            audit::audit_operator_inequality(&inst.pair, &inst.k, tols, seed, trials)
        }
        StatementId::SqrtFactorization => audit::audit_sqrt_factorization(&inst.pair, &inst.k, tols),
        StatementId::RangeTransfer => {
            audit::audit_range_transfer(&inst.pair, &inst.k, need_t()?, tols)
        }
        StatementId::PositivePerturbation => audit::audit_positive_perturbation(
            &inst.pair,
            &inst.k,
            need_t()?,
            inst.power.unwrap_or(1),
            tols,
        ),
        StatementId::InvertibilityOnRange => {
            audit::audit_invertibility_on_range(&inst.pair, &inst.k, tols, seed, trials)
        }
        StatementId::SurjectivityNecessity => {
            audit::audit_surjectivity_necessity(&inst.pair, &inst.k, need_t()?, tols)
        }
        StatementId::CommutingTransfer => {
            audit::audit_commuting_transfer(&inst.pair, &inst.k, need_t()?, tols, seed, trials)
        }
        StatementId::TwoSidedInvertibility => {
            audit::audit_two_sided_invertibility(&inst.pair, &inst.k, need_t()?, tols)
        }
        StatementId::CoisometryTransfer => {
            audit::audit_coisometry_transfer(&inst.pair, &inst.k, need_t()?, tols)
        }
    }
    .map_err(|e| e.to_string())?;

    let digest = instance_digest(&inst);
    let json = audit_to_json(&digest, tols, &report);
    emit(&json, flags.get("out"))?;
    if let Some(w) = &report.witness {
        eprintln!("witness: {}", w.description);
    }
    Ok(if report.claim_valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_gallery(flags: &Flags) -> CliResult<ExitCode> {
    let name_str = flags.require("name")?;
    let name = GalleryName::parse(name_str)
        .ok_or_else(|| format!("unknown gallery name `{name_str}`"))?;
    let n = flags.parse_usize("n", 8)?;
    let inst = gallery(name, n).map_err(|e| e.to_string())?;
    let json = instance_to_json(&inst);
    emit(&json, flags.get("out"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_random_suite(flags: &Flags) -> CliResult<ExitCode> {
    let seed = flags.parse_u64("seed", 0)?;
    let trials = flags.parse_usize("trials", 50)?;
    let summary = run_suite(seed, trials).map_err(|e| e.to_string())?;
    // human-readable table on stderr, JSON document on stdout
    eprintln!(
        "{:<38} {:>7} {:>9} {:>13}",
        "check", "trials", "failures", "worst"
    );
    for c in &summary.checks {
        eprintln!(
            "{:<38} {:>7} {:>9} {:>13.3e}",
            c.name, c.trials, c.failures, c.worst
        );
    }
    eprintln!("overall: {}", if summary.all_pass { "PASS" } else { "FAIL" });
    let json = summary.to_json();
    emit(&json, flags.get("out"))?;
    Ok(if summary.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
