//! Command-line front end. Inputs are JSON documents; reports are JSON with
//! sorted keys, except `dh-estimate`, which writes CSV.

use std::io::Read;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::coadjoint::{
    build_root_system, full_packing_report, BallCertificate, CoadjointError, Family, Polytope,
    RootSystemOrbit, WeylElement,
};
use crate::dh::{dh_estimate, DhError, GridSpec};
use crate::json as j;
use crate::lattice::{IntMatrix, RationalVector};
use crate::local_model::{
    fiber_orbit_check, submersion_sampling, surjectivity_check, LocalModel, ModelError,
};
use crate::rep::{Presentation, RepError, SubtorusRep};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_DH_SAMPLES: usize = 100_000;
/// Largest coordinate count for which all supports are enumerated.
pub const MAX_SUPPORT_ENUMERATION: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("{0}")]
    Malformed(String),
    #[error("{message}")]
    Domain { code: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed(_) => 1,
            CliError::Domain { .. } => 2,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Malformed(_) => "malformed-input",
            CliError::Domain { code, .. } => code,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": {"code": self.code(), "message": self.to_string()}})
    }
}

fn malformed(msg: impl Into<String>) -> CliError {
    CliError::Malformed(msg.into())
}

fn domain(code: &'static str, e: impl ToString) -> CliError {
    CliError::Domain {
        code,
        message: e.to_string(),
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        let code = match &e {
            RepError::Ineffective => "ineffective",
            RepError::RankDeficient => "rank-deficient",
            RepError::DimensionMismatch { .. } => "dimension-mismatch",
            RepError::NotComplexityOne { .. } => "not-complexity-one",
            RepError::NotNonProper => "not-non-proper",
            RepError::ExactnessFailure { .. } => "exactness-failure",
            RepError::NotSurjective => "not-surjective",
            RepError::IndexOutOfRange { .. } => "index-out-of-range",
            RepError::CrossCheck { .. } => "cross-check-failure",
        };
        domain(code, e)
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        let code = match &e {
            ModelError::Rep(r) => return r.clone().into(),
            ModelError::Lattice(_) => "lattice-error",
            ModelError::DimensionMismatch { .. } => "dimension-mismatch",
            ModelError::InvalidAnnihilatorBasis { .. } => "invalid-annihilator-basis",
            ModelError::ProperMomentMap => "proper-moment-map",
            ModelError::NotInAnnihilator => "not-in-annihilator",
            ModelError::ExceptionalPoint { .. } => "exceptional-point",
            ModelError::TooLarge(_) => "too-large",
            ModelError::OutsideImage => "outside-image",
        };
        domain(code, e)
    }
}

impl From<DhError> for CliError {
    fn from(e: DhError) -> Self {
        let code = match &e {
            DhError::DegenerateGrid(_) => "degenerate-grid",
            DhError::TooFewSamples(_) => "too-few-samples",
            DhError::BadRadius(_) => "invalid-radius",
        };
        domain(code, e)
    }
}

impl From<CoadjointError> for CliError {
    fn from(e: CoadjointError) -> Self {
        let code = match &e {
            CoadjointError::InvalidRank { .. } => "invalid-rank",
            CoadjointError::DimensionMismatch { .. } => "dimension-mismatch",
            CoadjointError::NotFixedPoint => "not-fixed-point",
            CoadjointError::ComplexityNotOne(_) => "complexity-not-one",
            CoadjointError::ZeroNormal => "zero-normal",
            CoadjointError::TooLarge(_) => "too-large",
        };
        domain(code, e)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "cxone",
    version,
    about = "Complexity-one torus actions: local models, DH densities, coadjoint orbits"
)]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
    /// Read the input document from this file (default: standard input)
    #[arg(long, global = true)]
    pub input: Option<std::path::PathBuf>,
    /// Input document given inline
    #[arg(long, global = true, conflicts_with = "input")]
    pub json_inline: Option<String>,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo sample or trial count
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Numerical tolerance for sampled checks
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Weights, annihilator, onto/proper certificates and defining polynomial
    AnalyzeRep,
    /// Exponents of the defining polynomial
    DefiningPoly,
    /// Split into a surjective part and a toric part
    Split,
    /// Single orbit or infinitely many orbits per fiber
    ClassifyFiber,
    /// Exceptional orbits over all support patterns
    ExceptionalOrbits,
    /// Sampled checks of the trivializing map of a local model
    VerifyTrivialization,
    /// Duistermaat-Heckman density estimate (CSV)
    DhEstimate,
    /// Fixed points, isotropy weights and moment polytope
    CoadjointOrbit,
    /// Ball certificates and full packing search
    PackingCheck,
}

impl Command {
    pub fn from_name(name: &str) -> Option<Command> {
        use Command::*;
        Some(match name {
            "analyze-rep" => AnalyzeRep,
            "defining-poly" => DefiningPoly,
            "split" => Split,
            "classify-fiber" => ClassifyFiber,
            "exceptional-orbits" => ExceptionalOrbits,
            "verify-trivialization" => VerifyTrivialization,
            "dh-estimate" => DhEstimate,
            "coadjoint-orbit" => CoadjointOrbit,
            "packing-check" => PackingCheck,
            _ => return None,
        })
    }
}

/// Numeric settings shared by all subcommands.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Options {
    pub seed: u64,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name), runs the subcommand and renders
/// the report or error. Files named by `--output` are written here.
pub fn run<I, S>(argv: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => {
                    let err = malformed(
                        e.to_string()
                            .lines()
                            .next()
                            .unwrap_or("")
                            .trim_start_matches("error: ")
                            .to_string(),
                    );
                    Outcome {
                        code: 1,
                        stdout: j::to_pretty(&err.to_json()),
                        stderr: e.to_string(),
                    }
                }
            };
        }
    };
    let text = match read_input(&args, stdin) {
        Ok(t) => t,
        Err(e) => return failure(e),
    };
    let opts = Options {
        seed: args.seed,
        samples: args.samples,
        tol: args.tol,
    };
    match execute(args.command, &text, &opts) {
        Ok(report) => {
            if let Some(path) = &args.output {
                if let Err(e) = std::fs::write(path, &report.body) {
                    return failure(malformed(format!("cannot write {}: {e}", path.display())));
                }
                Outcome {
                    code: 0,
                    stdout: String::new(),
                    stderr: report.notes,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: report.body,
                    stderr: report.notes,
                }
            }
        }
        Err(e) => failure(e),
    }
}

fn failure(e: CliError) -> Outcome {
    Outcome {
        code: e.exit_code(),
        stdout: j::to_pretty(&e.to_json()),
        stderr: String::new(),
    }
}

fn read_input(args: &Args, stdin: &mut dyn Read) -> Result<String, CliError> {
    if let Some(s) = &args.json_inline {
        return Ok(s.clone());
    }
    if let Some(p) = &args.input {
        return std::fs::read_to_string(p)
            .map_err(|e| malformed(format!("cannot read {}: {e}", p.display())));
    }
    let mut s = String::new();
    stdin
        .read_to_string(&mut s)
        .map_err(|e| malformed(format!("cannot read standard input: {e}")))?;
    Ok(s)
}

/// Rendered report: `body` goes to standard output, `notes` to standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub body: String,
    pub notes: String,
}

impl Report {
    fn json(v: Value) -> Self {
        let mut v = v;
        round_floats(&mut v);
        Report {
            body: j::to_pretty(&v),
            notes: String::new(),
        }
    }
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => *v = j::float(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(m) => m.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Runs one subcommand on a JSON input document.
pub fn execute(cmd: Command, input: &str, opts: &Options) -> Result<Report, CliError> {
    let doc = parse_doc(input)?;
    match cmd {
        Command::AnalyzeRep => analyze_rep(&parse_rep(&doc)?).map(Report::json),
        Command::DefiningPoly => {
            let rep = parse_rep(&doc)?;
            let p = rep.defining_polynomial()?;
            Ok(Report::json(
                json!({"xi": j::bigints(&p.exponents), "onto": rep.is_onto()}),
            ))
        }
        Command::Split => split(&parse_rep(&doc)?).map(Report::json),
        Command::ClassifyFiber => {
            let fiber = if doc.get("d").is_some() {
                parse_model(&doc)?.classify_fiber()
            } else {
                let rep = parse_rep(&doc)?;
                if rep.is_proper() {
                    crate::local_model::FiberType::SingleOrbit
                } else {
                    crate::local_model::FiberType::InfinitelyManyOrbits
                }
            };
            Ok(Report::json(json!({"fiber": fiber})))
        }
        Command::ExceptionalOrbits => exceptional_orbits(&parse_rep(&doc)?).map(Report::json),
        Command::VerifyTrivialization => verify(&parse_model(&doc)?, opts).map(Report::json),
        Command::DhEstimate => dh(&doc, opts),
        Command::CoadjointOrbit => Ok(Report::json(orbit_json(&parse_orbit(&doc)?))),
        Command::PackingCheck => packing(&parse_orbit(&doc)?).map(Report::json),
    }
}

// ---- input parsing ----

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum PresentationKind {
    Image,
    Kernel,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RepInput {
    n: usize,
    presentation: PresentationKind,
    matrix: Vec<Vec<Value>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelInput {
    d: usize,
    rep: Value,
    alpha: Vec<Value>,
    h0_basis: Vec<Vec<Value>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitInput {
    family: Family,
    rank: usize,
    base_point: Vec<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridInput {
    lower: Vec<f64>,
    upper: Vec<f64>,
    bins: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DhInput {
    rep: Value,
    radius: f64,
    grid: GridInput,
}

fn from_value<T: for<'de> Deserialize<'de>>(v: &Value, what: &str) -> Result<T, CliError> {
    T::deserialize(v).map_err(|e| malformed(format!("{what}: {e}")))
}

fn int_matrix(rows: &[Vec<Value>], cols: usize, what: &str) -> Result<IntMatrix, CliError> {
    let parsed: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| j::parse_int(v).ok_or_else(|| malformed(format!("{what}: {v} is not an integer"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    IntMatrix::from_rows(cols, parsed)
        .ok_or_else(|| malformed(format!("{what}: every row must have {cols} entries")))
}

fn parse_doc(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| malformed(format!("invalid JSON: {e}")))
}

/// [`parse_rep`] on JSON text.
pub fn rep_from_json(text: &str) -> Result<SubtorusRep, CliError> {
    parse_rep(&parse_doc(text)?)
}

/// [`parse_orbit`] on JSON text.
pub fn orbit_from_json(text: &str) -> Result<RootSystemOrbit, CliError> {
    parse_orbit(&parse_doc(text)?)
}

pub fn parse_rep(v: &Value) -> Result<SubtorusRep, CliError> {
    let r: RepInput = from_value(v, "rep")?;
    let m = int_matrix(&r.matrix, r.n, "rep matrix")?;
    let p = match r.presentation {
        PresentationKind::Image => Presentation::Image(m),
        PresentationKind::Kernel => Presentation::Kernel(m),
    };
    Ok(SubtorusRep::new(r.n, p)?)
}

fn rationals(vals: &[Value], what: &str) -> Result<Vec<BigRational>, CliError> {
    vals.iter()
        .map(|v| j::parse_rat(v).ok_or_else(|| malformed(format!("{what}: {v} is not a rational"))))
        .collect()
}

pub fn parse_model(v: &Value) -> Result<LocalModel, CliError> {
    let m: ModelInput = from_value(v, "local model")?;
    let rep = parse_rep(&m.rep)?;
    let alpha = RationalVector(rationals(&m.alpha, "alpha")?);
    let h0 = int_matrix(&m.h0_basis, m.d, "h0_basis")?;
    Ok(LocalModel::new(m.d, rep, alpha, h0)?)
}

pub fn parse_orbit(v: &Value) -> Result<RootSystemOrbit, CliError> {
    let o: OrbitInput = from_value(v, "coadjoint orbit")?;
    let system = build_root_system(o.family, o.rank)?;
    let x = rationals(&o.base_point, "base_point")?;
    Ok(RootSystemOrbit::new(system, x)?)
}

// ---- reports ----

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(m.row_vecs().iter().map(|r| j::bigints(r)).collect())
}

fn rep_summary(rep: &SubtorusRep) -> Value {
    json!({"n": rep.n(), "h": rep.h(), "weights": matrix_json(rep.weights())})
}

fn error_json(e: CliError) -> Value {
    json!({"code": e.code(), "message": e.to_string()})
}

fn analyze_rep(rep: &SubtorusRep) -> Result<Value, CliError> {
    let cert = |c: crate::lattice::ConeFeasibility| {
        json!({
            "status": c.status,
            "regime": c.regime,
            "witness": j::rationals(&c.witness.0),
            "verified": c.verify(rep.weights()),
        })
    };
    let poly = match rep.defining_polynomial() {
        Ok(p) => json!({"xi": j::bigints(&p.exponents)}),
        Err(e) => json!({"error": error_json(e.into())}),
    };
    Ok(json!({
        "n": rep.n(),
        "h": rep.h(),
        "presentation": match rep.presentation() { Presentation::Image(_) => "image", Presentation::Kernel(_) => "kernel" },
        "weights": matrix_json(rep.weights()),
        "annihilator": matrix_json(rep.annihilator()),
        "connected": rep.is_connected(),
        "complexity_one": rep.n() == rep.h() + 1,
        "onto": rep.is_onto(),
        "proper": rep.is_proper(),
        "onto_certificate": cert(rep.onto_certificate()),
        "nonproper_certificate": cert(rep.nonproper_certificate()),
        "defining_polynomial": poly,
    }))
}

fn split(rep: &SubtorusRep) -> Result<Value, CliError> {
    let s = rep.split()?;
    Ok(json!({
        "permutation": s.permutation,
        "xi": j::bigints(&s.polynomial.exponents),
        "h_prime": s.h_prime(),
        "h_double_prime": s.h_double_prime(),
        "surjective": {
            "n": s.surjective.n(),
            "h": s.surjective.h(),
            "weights": matrix_json(s.surjective.weights()),
            "onto": s.surjective.is_onto(),
        },
        "toric": rep_summary(&s.toric),
        "annihilator": matrix_json(&s.reassembled_annihilator()),
    }))
}

fn exceptional_orbits(rep: &SubtorusRep) -> Result<Value, CliError> {
    let poly = rep.defining_polynomial()?;
    // a non-onto rep is handled through its surjective factor
    let (target, coords) = if poly.is_positive() {
        (rep.clone(), (0..rep.n()).collect::<Vec<_>>())
    } else {
        let s = rep.split()?;
        let coords = s.permutation[..s.surjective.n()].to_vec();
        (s.surjective, coords)
    };
    let n = target.n();
    if n > MAX_SUPPORT_ENUMERATION {
        return Err(domain(
            "too-large",
            format!("{n} coordinates exceed the enumeration limit of {MAX_SUPPORT_ENUMERATION}"),
        ));
    }
    let mut orbits = Vec::new();
    let mut exceptional = Vec::new();
    for mask in 0u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let exc = target.is_exceptional_orbit(&support)?;
        let stab = target.stabilizer(&support)?;
        let original: Vec<usize> = support.iter().map(|&i| coords[i]).collect();
        if exc {
            exceptional.push(original.clone());
        }
        orbits.push(json!({
            "support": original,
            "exceptional": exc,
            "stabilizer": {
                "dimension": stab.dimension,
                "component_group": j::bigints(&stab.component_group),
                "trivial": stab.is_trivial,
            },
        }));
    }
    Ok(json!({
        "xi": j::bigints(&poly.exponents),
        "onto": poly.is_positive(),
        "coordinates": coords,
        "orbits": orbits,
        "exceptional_supports": exceptional,
    }))
}

fn verify(model: &LocalModel, opts: &Options) -> Result<Value, CliError> {
    let tol = opts.tol.unwrap_or(DEFAULT_TOL);
    let trials = opts.samples.unwrap_or(DEFAULT_TRIALS);
    let fiber = fiber_orbit_check(model, trials, opts.seed, tol)?;
    let surj = surjectivity_check(model, trials, opts.seed, tol)?;
    let poly = model.defining_polynomial()?;
    let sub = if poly.is_positive() {
        let s = submersion_sampling(model, trials, opts.seed, 1e-9)?;
        serde_json::to_value(&s).expect("serializable")
    } else {
        Value::Null
    };
    let passed = fiber.passes == fiber.trials
        && surj.successes == surj.targets
        && (sub.is_null() || (sub["rank_failures"] == 0 && sub["witness_failures"] == 0));
    Ok(json!({
        "xi": j::bigints(&poly.exponents),
        "fiber_check": serde_json::to_value(&fiber).expect("serializable"),
        "surjectivity": serde_json::to_value(&surj).expect("serializable"),
        "submersion": sub,
        "passed": passed,
    }))
}

fn dh(doc: &Value, opts: &Options) -> Result<Report, CliError> {
    let input: DhInput = from_value(doc, "dh-estimate")?;
    let rep = parse_rep(&input.rep)?;
    let grid = GridSpec::new(input.grid.lower, input.grid.upper, input.grid.bins)?;
    let samples = opts.samples.unwrap_or(DEFAULT_DH_SAMPLES);
    let est = dh_estimate(&rep, input.radius, &grid, samples, opts.seed)?;
    let meta = json!({
        "truncation": "polydisc",
        "radius": j::float(est.radius),
        "samples": est.samples,
        "seed": est.seed,
        "out_of_range": est.out_of_range,
        "polydisc_volume": j::float(est.polydisc_volume),
    });
    Ok(Report {
        body: est.to_csv(),
        notes: serde_json::to_string(&meta).expect("serializable") + "\n",
    })
}

fn point_json(p: &[BigRational]) -> Value {
    j::rationals(p)
}

fn ints_json(v: &[i64]) -> Value {
    Value::Array(v.iter().map(|x| Value::from(*x)).collect())
}

fn polytope_json(p: &Polytope) -> Value {
    let hs = |h: &crate::coadjoint::HalfSpace| json!({"normal": j::bigints(&h.normal), "offset": j::rational(&h.offset)});
    json!({
        "dim": p.dim,
        "vertices": p.vertices.iter().map(|v| point_json(v)).collect::<Vec<_>>(),
        "facets": p.facets.iter().map(hs).collect::<Vec<_>>(),
        "equations": p.equations.iter().map(hs).collect::<Vec<_>>(),
    })
}

fn orbit_json(o: &RootSystemOrbit) -> Value {
    let family = match o.system.family {
        Family::B => "B",
        Family::D => "D",
    };
    let weights: Vec<Value> = o
        .fixed_points
        .iter()
        .zip(&o.weights)
        .map(|(p, w)| json!({"point": point_json(p), "weights": w.iter().map(|x| ints_json(x)).collect::<Vec<_>>()}))
        .collect();
    json!({
        "family": family,
        "rank": o.rank(),
        "base_point": point_json(&o.base_point),
        "roots": o.system.roots.iter().map(|r| ints_json(r)).collect::<Vec<_>>(),
        "weyl_group_order": o.system.weyl_group_order().to_string().parse::<u64>().map(Value::from).unwrap_or_else(|_| Value::String(o.system.weyl_group_order().to_string())),
        "fixed_points": o.fixed_points.iter().map(|p| point_json(p)).collect::<Vec<_>>(),
        "isotropy_weights": weights,
        "weight_count": o.weight_count(),
        "complexity": o.complexity(),
        "polytope": polytope_json(&o.moment_polytope()),
    })
}

fn certificate_json(c: &BallCertificate) -> Value {
    json!({
        "point": point_json(&c.point),
        "normal": j::bigints(&c.normal),
        "side": c.side,
        "differences_span_codim_one": c.differences_span_codim_one,
        "unique_fixed_point_on_side": c.unique_fixed_point_on_side,
        "valid": c.valid,
    })
}

fn weyl_json(w: &WeylElement) -> Value {
    json!({"permutation": w.perm, "signs": w.signs, "flips": w.flips()})
}

/// Packing report for an already-built orbit, rendered like `packing-check`.
pub fn render_packing(o: &RootSystemOrbit) -> Result<String, CliError> {
    packing(o).map(|v| Report::json(v).body)
}

fn packing(o: &RootSystemOrbit) -> Result<Value, CliError> {
    let r = full_packing_report(o)?;
    let mut out: Map<String, Value> = match orbit_json(o) {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    out.insert(
        "certificates".into(),
        Value::Array(r.certificates().iter().map(certificate_json).collect()),
    );
    out.insert(
        "valid_certificates".into(),
        Value::Array(r.valid_certificates.iter().map(certificate_json).collect()),
    );
    out.insert(
        "candidate_normals".into(),
        Value::Array(r.candidate_normals.iter().map(|n| j::bigints(n)).collect()),
    );
    out.insert("packing_found".into(), Value::Bool(r.packing_found()));
    out.insert(
        "weyl_element".into(),
        r.packings
            .first()
            .map_or(Value::Null, |p| weyl_json(&p.weyl_element)),
    );
    out.insert(
        "packings".into(),
        Value::Array(
            r.packings
                .iter()
                .map(|p| {
                    json!({
                        "first": certificate_json(&p.first),
                        "second": certificate_json(&p.second),
                        "weyl_element": weyl_json(&p.weyl_element),
                        "complement_in_hyperplane": p.complement_in_hyperplane,
                    })
                })
                .collect(),
        ),
    );
    out.insert("note".into(), r.note.map_or(Value::Null, Value::String));
    Ok(Value::Object(out))
}
