use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use csa_core::algebra::{AlgElem, Algebra};
use csa_core::becher::{self, PairRoute, QuadExt, SplittingSequence, SymplecticOrSplit};
use csa_core::certificate as cert;
use csa_core::involution::{classify_first_kind, plus_minus_split, Involution};
use csa_core::quaternion::{self, ConicSearch, QuaternionParams, Recognition};
use csa_core::serial;
use csa_core::splitting::{self, SplitBudget, SplittingOutcome};
use csa_core::wedderburn::{full_decompose, CornerStatus, ProbeStrategy};
use csa_core::{Error, Field};

#[derive(Parser)]
#[command(name = "csa", version, about = "Exact computations with central simple algebras")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Opts {
    /// Write the certificate (or generated algebra) to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for random probes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random elements tried when looking for zero divisors.
    #[arg(long, global = true, default_value_t = 64)]
    probe_budget: usize,
    /// Largest coordinate tried in conic point searches over Q.
    #[arg(long, global = true, default_value_t = 100)]
    height_bound: u64,
    /// Maximum number of tower splits during splitting.
    #[arg(long, global = true, default_value_t = 16)]
    max_branches: usize,
    /// Base field for scalar arguments: Q, F_p, or p.
    #[arg(long, global = true, default_value = "Q")]
    field: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide central simplicity by the rank of the sandwich map.
    Check { algebra: PathBuf },
    /// Decompose as M_q(corner), probing the corner for zero divisors.
    Decompose { algebra: PathBuf },
    /// Find a tower over which the algebra becomes a full matrix algebra.
    Split { algebra: PathBuf },
    /// Reduced characteristic polynomial, trace and norm of an element.
    Cprd {
        algebra: PathBuf,
        /// Coordinates: a JSON array, a comma-separated list, or a JSON file.
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// Conjugator of an automorphism given as a matrix file.
    Sn { algebra: PathBuf, map: PathBuf },
    /// Re-check a certificate produced by another command.
    Verify { certificate: PathBuf },
    /// Quaternion algebras: construction, conic splitting, recognition.
    #[command(subcommand)]
    Quat(QuatCmd),
    /// Involutions of the first kind.
    #[command(subcommand)]
    Inv(InvCmd),
    /// Corestriction over a quadratic extension and splitting sequences.
    #[command(subcommand)]
    Becher(BecherCmd),
}

#[derive(Subcommand)]
enum QuatCmd {
    /// Structure constants of h(a, b).
    Make {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Split h(a, b) from a point on a x² + b y² = z².
    Split {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Identify a 4-dimensional central algebra with some h(a, b).
    Recognize { algebra: PathBuf },
}

#[derive(Subcommand)]
enum InvCmd {
    /// Orthogonal or symplectic type of an involution given as a matrix file.
    Classify { algebra: PathBuf, map: PathBuf },
    /// A symplectic involution, or a zero divisor, from an anti-automorphism.
    Symplectic { algebra: PathBuf, map: PathBuf },
}

#[derive(Args)]
struct CorestrictArgs {
    /// Non-square g with δ² = g.
    #[arg(allow_hyphen_values = true)]
    g: String,
    #[arg(allow_hyphen_values = true)]
    a: String,
    #[arg(allow_hyphen_values = true)]
    b: String,
    #[arg(allow_hyphen_values = true)]
    c: String,
    #[arg(allow_hyphen_values = true)]
    d: String,
}

#[derive(Subcommand)]
enum BecherCmd {
    /// Corestriction of h_K(a + bδ, c + dδ) for K = F[δ], δ² = g.
    Corestrict(CorestrictArgs),
    /// The corestriction as a tensor product of two quaternion algebras.
    Pair(CorestrictArgs),
    /// Whether the first splitting sequence is smaller in the multiset order.
    Msless {
        /// Comma-separated entries, each at least 2.
        s: String,
        t: String,
    },
}

/// Exit status 2: an honest partial answer.
struct Partial;

type Outcome = Result<Option<Partial>, Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(Partial)) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    serial::parse_json(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

/// Reads an algebra file, or the `algebra` entry of a certificate.
fn load_algebra(path: &Path) -> Result<Algebra, Error> {
    let v = read_json(path)?;
    match (v.get("table"), v.get("algebra")) {
        (Some(_), _) => serial::algebra_from_json(&v),
        (None, Some(a)) => serial::algebra_from_json(a),
        _ => Err(Error::Invalid(format!("{}: not an algebra file", path.display()))),
    }
}

fn load_map(a: &Algebra, path: &Path) -> Result<csa_core::algebra::LinMap, Error> {
    let v = read_json(path)?;
    let m = v.get("map").or_else(|| v.get("sigma")).or_else(|| v.get("matrix")).unwrap_or(&v);
    serial::linmap_from_json(a.field(), m)
}

fn parse_field(s: &str) -> Result<Field, Error> {
    let t = s.trim();
    if t == "Q" || t == "QQ" {
        return Ok(Field::rationals());
    }
    let p = t.trim_start_matches("F_").trim_start_matches('F');
    match p.parse::<u64>() {
        Ok(p) => Field::prime(p),
        Err(_) => Err(Error::Invalid(format!("unknown field {s:?}; use Q, F_p or p"))),
    }
}

fn parse_element(a: &Algebra, s: &str) -> Result<AlgElem, Error> {
    let t = s.trim();
    let v = if t.starts_with('[') {
        serial::parse_json(t)?
    } else if Path::new(t).is_file() {
        read_json(Path::new(t))?
    } else {
        Value::Array(t.split(',').map(|c| Value::String(c.trim().to_string())).collect())
    };
    serial::alg_elem_from_json(a, &v)
}

fn emit(opts: &Opts, v: &Value) -> Result<(), Error> {
    if let Some(path) = &opts.out {
        fs::write(path, serial::to_pretty(v)).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn strategy(opts: &Opts) -> ProbeStrategy {
    ProbeStrategy { random_budget: opts.probe_budget, seed: opts.seed, ..ProbeStrategy::default() }
}

fn params(opts: &Opts, a: &str, b: &str) -> Result<QuaternionParams, Error> {
    let k = parse_field(&opts.field)?;
    QuaternionParams::new(&k, k.parse_scalar(a)?, k.parse_scalar(b)?)
}

fn run(cli: &Cli) -> Outcome {
    let opts = &cli.opts;
    match &cli.cmd {
        Cmd::Check { algebra } => {
            let a = load_algebra(algebra)?;
            let c = a.central_simple_check()?;
            let verdict = if c.is_central_simple() { "yes" } else { "no" };
            println!("central simple: {verdict} (rank {}/{})", c.rank(), a.dim() * a.dim());
            emit(opts, &cert::central_simplicity(&a, &c))?;
            Ok(None)
        }
        Cmd::Decompose { algebra } => {
            let a = load_algebra(algebra)?;
            let r = full_decompose(&a, &strategy(opts))?;
            let status = match r.status {
                CornerStatus::Trivial => "trivial",
                CornerStatus::DivisionCertified => "division algebra (exhaustive search)",
                CornerStatus::DivisionRelativeToProbes => "no zero divisor found by the probes",
                CornerStatus::NotExamined => "not examined",
            };
            println!("q = {}", r.decomposition.q());
            println!("corner dimension: {} ({status})", r.corner.dim());
            emit(opts, &cert::decomposition(&a, &r))?;
            Ok(matches!(r.status, CornerStatus::DivisionRelativeToProbes | CornerStatus::NotExamined).then_some(Partial))
        }
        Cmd::Split { algebra } => {
            let a = load_algebra(algebra)?;
            let budget = SplitBudget { max_branches: opts.max_branches, ..SplitBudget::default() };
            match splitting::splitting_algebra(&a, budget)? {
                SplittingOutcome::Complete(c) => {
                    println!("tower: {}", c.tower);
                    println!("q = {}", c.q);
                    println!("tower splits: {}", c.history.len());
                    emit(opts, &cert::splitting(&a, &c))?;
                    Ok(None)
                }
                SplittingOutcome::BudgetExhausted { partial, reason } => {
                    println!("budget exhausted: {reason}");
                    println!("tower: {}", partial.tower);
                    println!("q = {} so far", partial.q);
                    Ok(Some(Partial))
                }
            }
        }
        Cmd::Cprd { algebra, element } => {
            let a = load_algebra(algebra)?;
            let k = a.field();
            let x = parse_element(&a, element)?;
            let d = splitting::reduced_char_poly(&a, &x)?;
            println!("Cprd = {}", d.poly.display(k, "X"));
            println!("trd = {}", k.format(&d.trd));
            println!("nrd = {}", k.format(&d.nrd));
            emit(opts, &cert::reduced_char(&a, &d))?;
            Ok(None)
        }
        Cmd::Sn { algebra, map } => {
            let a = load_algebra(algebra)?;
            let sigma = load_map(&a, map)?;
            let w = a.skolem_noether(&sigma)?;
            println!("conjugator: {}", a.format_elem(&w.conjugator));
            println!("inverse: {}", a.format_elem(&w.inverse));
            emit(opts, &cert::skolem_noether(&a, &sigma, &w))?;
            Ok(None)
        }
        Cmd::Verify { certificate } => {
            let v = read_json(certificate)?;
            println!("ok: {}", cert::verify(&v)?);
            Ok(None)
        }
        Cmd::Quat(q) => run_quat(opts, q),
        Cmd::Inv(i) => run_inv(opts, i),
        Cmd::Becher(b) => run_becher(opts, b),
    }
}

fn run_quat(opts: &Opts, cmd: &QuatCmd) -> Outcome {
    match cmd {
        QuatCmd::Make { a, b } => {
            let p = params(opts, a, b)?;
            let h = quaternion::make_quaternion(&p)?;
            let v = cert::quaternion(&p, &h);
            if opts.out.is_some() {
                emit(opts, &v)?;
                println!("h({a}, {b}) over {} written", p.field());
            } else {
                print!("{}", serial::to_pretty(&v));
            }
            Ok(None)
        }
        QuatCmd::Split { a, b } => {
            let p = params(opts, a, b)?;
            let k = p.field().clone();
            match quaternion::conic_point(&p, opts.height_bound) {
                ConicSearch::Point(pt) => {
                    let d = quaternion::split_from_conic(&p, &pt)?;
                    println!("point: ({}, {}, {})", k.format(&pt.x), k.format(&pt.y), k.format(&pt.z));
                    println!("q = {}", d.q());
                    emit(opts, &cert::quaternion_split(&p, &pt, &d))?;
                    Ok(None)
                }
                ConicSearch::ProvablyNone => {
                    println!("no point: a and b are both negative, so h({a}, {b}) is a division algebra");
                    Ok(None)
                }
                ConicSearch::NotFoundWithinBound => {
                    println!("no point with coordinates up to {}", opts.height_bound);
                    Ok(Some(Partial))
                }
            }
        }
        QuatCmd::Recognize { algebra } => {
            let a = load_algebra(algebra)?;
            let k = a.field();
            match quaternion::recognize_quaternion(&a)? {
                Recognition::Quaternion { params, basis, .. } => {
                    println!("h({}, {})", k.format(params.a()), k.format(params.b()));
                    println!("i = {}", a.format_elem(&basis[1]));
                    println!("j = {}", a.format_elem(&basis[2]));
                    emit(opts, &cert::quaternion_recognition(&a, &params, &basis))?;
                    Ok(None)
                }
                Recognition::ZeroDivisor(z) => {
                    println!("zero divisor: {}", a.format_elem(&z));
                    Ok(None)
                }
            }
        }
    }
}

fn run_inv(opts: &Opts, cmd: &InvCmd) -> Outcome {
    match cmd {
        InvCmd::Classify { algebra, map } => {
            let a = load_algebra(algebra)?;
            let j = Involution::new(&a, load_map(&a, map)?)?;
            let kind = classify_first_kind(&j)?;
            let (plus, minus) = plus_minus_split(&j)?;
            println!("{} (dim A+ = {}, dim A- = {})", format!("{kind:?}").to_lowercase(), plus.len(), minus.len());
            emit(opts, &cert::involution(&j, kind, plus.len()))?;
            Ok(None)
        }
        InvCmd::Symplectic { algebra, map } => {
            let a = load_algebra(algebra)?;
            let k = a.field();
            match becher::symplectic_or_split(&a, &load_map(&a, map)?)? {
                SymplecticOrSplit::Symplectic(j) => {
                    let plus = plus_minus_split(&j)?.0.len();
                    println!("symplectic involution (dim A+ = {plus})");
                    emit(opts, &cert::involution(&j, classify_first_kind(&j)?, plus))?;
                    Ok(None)
                }
                SymplecticOrSplit::ZeroDivisor(z) => {
                    println!("zero divisor: {}", a.format_elem(&z));
                    Ok(None)
                }
                SymplecticOrSplit::ObstructionNonSquare(t) => {
                    println!("obstruction: {} is not a square", k.format(&t));
                    Ok(Some(Partial))
                }
            }
        }
    }
}

fn corestrict(opts: &Opts, c: &CorestrictArgs) -> Result<becher::Corestriction, Error> {
    let k = parse_field(&opts.field)?;
    let s = |x: &str| k.parse_scalar(x);
    let qe = QuadExt::new(&k, s(&c.g)?)?;
    becher::corestriction(&qe, s(&c.a)?, s(&c.b)?, s(&c.c)?, s(&c.d)?)
}

fn parse_sequence(s: &str) -> Result<SplittingSequence, Error> {
    let entries = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Invalid(format!("bad sequence entry {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    SplittingSequence::new(entries)
}

fn run_becher(opts: &Opts, cmd: &BecherCmd) -> Outcome {
    match cmd {
        BecherCmd::Corestrict(c) => {
            let cr = corestrict(opts, c)?;
            let t = &cr.t.algebra;
            let f = t.field();
            let sq = |x: &AlgElem| t.as_scalar(&t.mul(x, x)).map_or("?".into(), |s| f.format(&s));
            println!("T: dimension {}, central simple", cr.t.dim());
            println!("x^2 = {}", sq(&cr.x));
            println!("y^2 = {}", sq(&cr.y));
            emit(opts, &cert::corestriction(&cr, None))?;
            Ok(None)
        }
        BecherCmd::Pair(c) => {
            let cr = corestrict(opts, c)?;
            let pair = becher::quaternion_pair(&cr)?;
            let f = cr.qe.base();
            let h = |p: &QuaternionParams| format!("h({}, {})", f.format(p.a()), f.format(p.b()));
            println!("T = {} ⊗ {}", h(&pair.q1), h(&pair.q2));
            if let PairRoute::ZeroDivisor(_) = pair.route {
                println!("first factor split off through a square-zero element");
            }
            emit(opts, &cert::corestriction(&cr, Some(&pair)))?;
            Ok(None)
        }
        BecherCmd::Msless { s, t } => {
            println!("{}", becher::splitting_sequence_less(&parse_sequence(s)?, &parse_sequence(t)?));
            Ok(None)
        }
    }
}
