//! `hms`: compute theta values, compositions on both sides of the mirror,
//! functor images, and run the verification suites. JSON in, JSON out.
//!
//! Exit codes: 0 on success (all checks passing for `verify`), 1 when a
//! verification suite reports a failure, 2 on usage or input errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hms_cli::doc::{to_json_deterministic, MorphismDocument, ObjectDocument};
use hms_core::mirror::{
    phi_object, phi_section, verify_addition_formula, verify_all, verify_dimension_laws,
    verify_functoriality, verify_isogeny, verify_sections, verify_simple_example,
    verify_theta_identities, verify_torsion, SheafObject, VerificationReport,
};
use hms_core::numerics::{theta_eval_full, ThetaParams, TorusModulus};
use hms_core::sheaves::compose;
use hms_core::{Error, Rat, C64};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hms",
    version,
    about = "Homological mirror symmetry for elliptic curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate θ[a, z0](level·τ, freq·z) with a rigorous truncation bound.
    Theta(ThetaArgs),
    /// Compose two morphisms on one side of the mirror.
    Compose(ComposeArgs),
    /// Apply the mirror functor to an object or morphism document.
    Mirror(MirrorArgs),
    /// Run a verification suite and report pass/fail per check.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ThetaArgs {
    /// Torus parameter as "b,A" (B-field, area); Im τ = A > 0.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    tau: (f64, f64),
    /// Evaluation point "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: (f64, f64),
    /// Characteristic as "num,den".
    #[arg(long, value_parser = parse_rat, default_value = "0,1", allow_hyphen_values = true)]
    a: Rat,
    /// Translation z0 as "re,im".
    #[arg(long, value_parser = parse_complex, default_value = "0,0", allow_hyphen_values = true)]
    z0: (f64, f64),
    #[arg(long, default_value_t = 1)]
    level: u32,
    #[arg(long, default_value_t = 1)]
    freq: u32,
    #[arg(long)]
    tol: Option<f64>,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ComposeArgs {
    /// Which category: "a" (point sums, m2) or "b" (sections).
    #[arg(long)]
    side: Side,
    /// First morphism document (applied first).
    #[arg(long)]
    m1: PathBuf,
    /// Second morphism document.
    #[arg(long)]
    m2: PathBuf,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    tau: (f64, f64),
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    A,
    B,
}

#[derive(Args)]
struct MirrorArgs {
    /// Object or morphism document to map.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    tau: (f64, f64),
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: Suite,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    tau: (f64, f64),
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Theta,
    #[value(name = "simple-example")]
    SimpleExample,
    Functoriality,
    Serre,
    Isogeny,
    Torsion,
    Sections,
    All,
}

fn parse_complex(s: &str) -> Result<(f64, f64), String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected \"re,im\", got {s:?}"))?;
    Ok((
        re.trim()
            .parse()
            .map_err(|e| format!("bad real part: {e}"))?,
        im.trim()
            .parse()
            .map_err(|e| format!("bad imaginary part: {e}"))?,
    ))
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    let (n, d) = s
        .split_once(',')
        .ok_or_else(|| format!("expected \"num,den\", got {s:?}"))?;
    let den: i64 = d
        .trim()
        .parse()
        .map_err(|e| format!("bad denominator: {e}"))?;
    if den == 0 {
        return Err("denominator must be nonzero".into());
    }
    Ok(Rat::new(
        n.trim()
            .parse()
            .map_err(|e| format!("bad numerator: {e}"))?,
        den,
    ))
}

/// Default tolerance: 1e-12, overridable by HMS_TOL, overridable by --tol.
fn resolve_tol(cli_tol: Option<f64>) -> f64 {
    cli_tol
        .or_else(|| std::env::var("HMS_TOL").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(1e-12)
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: String,
}

fn error_code(e: &Error) -> &'static str {
    match e {
        Error::EndpointMismatch(_) => "ENDPOINT_MISMATCH",
        Error::NonTransversal(_) => "NON_TRANSVERSAL",
        Error::LevelMismatch(_, _) => "LEVEL_MISMATCH",
        Error::DegreeMismatch(_) => "DEGREE_MISMATCH",
        Error::IllConditioned { .. } => "ILL_CONDITIONED",
        Error::InvalidTolerance(_) => "INVALID_TOLERANCE",
        Error::NotCanonicalBasis(_) => "NOT_CANONICAL_BASIS",
        _ => "INVALID_INPUT",
    }
}

fn emit(out: &Option<PathBuf>, json: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, json).map_err(|e| format!("cannot write output: {e}")),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn fail_usage(out: &Option<PathBuf>, code: &str, message: String) -> ExitCode {
    let doc = ErrorDoc {
        error: ErrorBody { code, message },
    };
    let _ = emit(out, &to_json_deterministic(&doc));
    ExitCode::from(2)
}

#[derive(Serialize)]
struct ThetaOutput {
    value: [f64; 2],
    #[serde(rename = "truncation_M")]
    truncation_m: u64,
    tol: f64,
}

fn run_theta(args: ThetaArgs) -> ExitCode {
    let tol = resolve_tol(args.tol);
    let tau = match TorusModulus::new(args.tau.0, args.tau.1) {
        Ok(t) => t,
        Err(e) => return fail_usage(&args.out, "INVALID_INPUT", e.to_string()),
    };
    let params = match ThetaParams::new(args.a, args.level, args.freq) {
        Ok(p) => p.with_translation_complex(C64::new(args.z0.0, args.z0.1), &tau),
        Err(e) => return fail_usage(&args.out, "INVALID_INPUT", e.to_string()),
    };
    match theta_eval_full(&params, &tau, C64::new(args.z.0, args.z.1), tol) {
        Ok(eval) => {
            let out = ThetaOutput {
                value: [eval.value.re, eval.value.im],
                truncation_m: eval.truncation_m,
                tol,
            };
            match emit(&args.out, &to_json_deterministic(&out)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(m) => fail_usage(&None, "IO_ERROR", m),
            }
        }
        Err(e) => fail_usage(&args.out, error_code(&e), e.to_string()),
    }
}

fn read_morphism(path: &PathBuf) -> Result<MorphismDocument, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path:?}: {e}"))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {path:?}: {e}"))
}

fn run_compose(args: ComposeArgs) -> ExitCode {
    let tol = resolve_tol(args.tol).max(1e-14);
    let tau = match TorusModulus::new(args.tau.0, args.tau.1) {
        Ok(t) => t,
        Err(e) => return fail_usage(&args.out, "INVALID_INPUT", e.to_string()),
    };
    let (d1, d2) = match (read_morphism(&args.m1), read_morphism(&args.m2)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(m), _) | (_, Err(m)) => return fail_usage(&args.out, "INVALID_INPUT", m),
    };
    let result = match args.side {
        Side::A => {
            let (u1, u2) = match (d1.to_point_sum(), d2.to_point_sum()) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(m), _) | (_, Err(m)) => return fail_usage(&args.out, "INVALID_INPUT", m),
            };
            hms_core::fukaya::m2(&u1, &u2, &tau, tol).map(|u| MorphismDocument::from_point_sum(&u))
        }
        Side::B => {
            let (s1, s2) = match (d1.to_section(), d2.to_section()) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(m), _) | (_, Err(m)) => return fail_usage(&args.out, "INVALID_INPUT", m),
            };
            compose(&s1, &s2, &tau, tol.max(1e-10)).map(|s| MorphismDocument::from_section(&s))
        }
    };
    match result {
        Ok(doc) => match emit(&args.out, &to_json_deterministic(&doc)) {
            Ok(()) => ExitCode::SUCCESS,
            Err(m) => fail_usage(&None, "IO_ERROR", m),
        },
        Err(e) => fail_usage(&args.out, error_code(&e), e.to_string()),
    }
}

fn run_mirror(args: MirrorArgs) -> ExitCode {
    let tau = match TorusModulus::new(args.tau.0, args.tau.1) {
        Ok(t) => t,
        Err(e) => return fail_usage(&args.out, "INVALID_INPUT", e.to_string()),
    };
    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            return fail_usage(
                &args.out,
                "INVALID_INPUT",
                format!("cannot read input: {e}"),
            )
        }
    };

    // an object document maps to its mirror brane (tuple); a section
    // morphism maps to its weighted point sum
    let json = if let Ok(obj) = serde_json::from_str::<ObjectDocument>(&text) {
        let sheaf = if let Ok(b) = obj.to_bundle() {
            SheafObject::Bundle(b)
        } else if let Ok(t) = obj.to_torsion() {
            SheafObject::Torsion(t)
        } else {
            return fail_usage(
                &args.out,
                "INVALID_INPUT",
                "mirror images are computed for B-side objects (bundle or torsion)".into(),
            );
        };
        match phi_object(&sheaf) {
            Ok(tuple) => to_json_deterministic(&ObjectDocument::from_tuple(&tuple)),
            Err(e) => return fail_usage(&args.out, error_code(&e), e.to_string()),
        }
    } else if let Ok(morph) = serde_json::from_str::<MorphismDocument>(&text) {
        match morph.to_section() {
            Ok(s) => match phi_section(&s, &tau) {
                Ok(u) => to_json_deterministic(&MorphismDocument::from_point_sum(&u)),
                Err(e) => return fail_usage(&args.out, error_code(&e), e.to_string()),
            },
            Err(m) => return fail_usage(&args.out, "INVALID_INPUT", m),
        }
    } else {
        return fail_usage(
            &args.out,
            "INVALID_INPUT",
            "input is neither an object nor a morphism document".into(),
        );
    };
    match emit(&args.out, &json) {
        Ok(()) => ExitCode::SUCCESS,
        Err(m) => fail_usage(&None, "IO_ERROR", m),
    }
}

#[derive(Serialize)]
struct ReportDoc {
    check: String,
    cases: u64,
    max_abs_error: f64,
    tolerance: f64,
    pass: bool,
}

impl From<VerificationReport> for ReportDoc {
    fn from(r: VerificationReport) -> Self {
        ReportDoc {
            check: r.check,
            cases: r.cases,
            max_abs_error: r.max_abs_error,
            tolerance: r.tolerance,
            pass: r.pass,
        }
    }
}

fn run_verify(args: VerifyArgs) -> ExitCode {
    // an explicit tolerance (flag or HMS_TOL) is honored verbatim; otherwise
    // each suite runs at its own default
    let user_tol = args
        .tol
        .or_else(|| std::env::var("HMS_TOL").ok().and_then(|v| v.parse().ok()));
    let t = |d: f64| user_tol.unwrap_or(d);
    let tau = match TorusModulus::new(args.tau.0, args.tau.1) {
        Ok(t) => t,
        Err(e) => return fail_usage(&args.out, "INVALID_INPUT", e.to_string()),
    };
    let seed = args.seed;
    let results = match args.suite {
        Suite::Theta => {
            let mut v = verify_theta_identities(&tau, seed, 200, t(1e-10));
            v.extend(verify_addition_formula(&tau, seed, 20, t(1e-8)));
            v
        }
        Suite::SimpleExample => verify_simple_example(&tau, t(1e-10)),
        Suite::Functoriality => vec![verify_functoriality(&tau, seed, 50, t(1e-8))],
        Suite::Serre => verify_dimension_laws(&tau, seed, 100),
        Suite::Isogeny => verify_isogeny(&tau, seed, 20),
        Suite::Torsion => verify_torsion(&tau, seed, 30),
        Suite::Sections => vec![verify_sections(&tau, seed, 40, t(1e-10))],
        Suite::All => verify_all(&tau, seed, user_tol),
    };

    let mut reports = Vec::new();
    for r in results {
        match r {
            Ok(rep) => reports.push(ReportDoc::from(rep)),
            Err(e) => return fail_usage(&args.out, error_code(&e), e.to_string()),
        }
    }
    let all_pass = reports.iter().all(|r| r.pass);
    match emit(&args.out, &to_json_deterministic(&reports)) {
        Ok(()) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(m) => fail_usage(&None, "IO_ERROR", m),
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Theta(args) => run_theta(args),
        Command::Compose(args) => run_compose(args),
        Command::Mirror(args) => run_mirror(args),
        Command::Verify(args) => run_verify(args),
    }
}
