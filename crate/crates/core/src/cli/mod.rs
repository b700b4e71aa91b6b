//! The `roabp-pit` command line: one JSON object per line on stdout,
//! exit 0 for nonzero/success, 1 for zero/failure, 2 for errors.

pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::acceptance;
use crate::algebra::{FieldElem, MatPoly, PolyRing, PrimeField, UniPoly};
use crate::concentration::{
    certify_family, commutative_blackbox_pit, concentrated_points, concentration_target, default_max_weight,
    is_l_concentrated, search_isolating, weight_shift, ShiftFamily, WeightAssignment,
};
use crate::error::{precondition, Error, Result};
use crate::known_order::{
    conjecture_probe, degree_bound, hitting_set_for_order, hitting_set_truncated, run_points, Verdict,
};
use crate::nisan::pdm;
use crate::roabp::{random_commutative, random_roabp_with, random_set_multilinear, DEFAULT_TERM_CAP};

pub use format::{parse, serialize, Instance};

/// Prime used by randomized subcommands when neither `--prime` nor
/// `ROABP_PIT_PRIME` is given.
pub const FALLBACK_PRIME: u64 = 1_000_003;

/// Seed used by `selftest` and the acceptance target when none is given.
pub const DEFAULT_SELFTEST_SEED: u64 = 20240607;

#[derive(Debug, Parser)]
#[command(
    name = "roabp-pit",
    version,
    about = "Hitting sets and identity tests for read-once oblivious ABPs"
)]
pub struct Cli {
    /// Seed for randomized subcommands; chosen and reported when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Prime modulus; overrides instance headers, values are reduced mod it.
    #[arg(long, global = true)]
    pub prime: Option<u64>,

    /// Default prime for subcommands that pick one themselves.
    #[arg(long, global = true, env = "ROABP_PIT_PRIME", hide_env_values = true)]
    pub default_prime: Option<u64>,

    /// Cap on the number of terms a full expansion may produce.
    #[arg(long, global = true, env = "ROABP_PIT_MAX_TERMS", default_value_t = DEFAULT_TERM_CAP)]
    pub max_terms: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Roabp,
    Commutative,
    Setml,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an instance at a point.
    Eval {
        file: PathBuf,
        /// Comma-separated coordinates.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Vec<i64>,
    },
    /// Expand an instance into a sparse polynomial.
    Expand { file: PathBuf },
    /// Rank of the coefficient matrix of a bivariate instance.
    Rank { file: PathBuf },
    /// Known-order blackbox PIT with the recursive-map hitting set.
    PitKnownOrder { file: PathBuf },
    /// Write the known-order hitting set for (n, d, w).
    GenHittingSet {
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(short = 'd', long)]
        d: usize,
        #[arg(short = 'w', long)]
        w: usize,
        /// 1-based variable order; identity when absent.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Write points here, one per line, instead of into the report.
        #[arg(long)]
        points_out: Option<PathBuf>,
    },
    /// Blackbox PIT for commutative ROABPs via low-support concentration.
    PitCommutative {
        file: PathBuf,
        /// Coefficient algebra dimension; w^2 by default.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Check whether the coefficient polynomial is l-concentrated.
    CheckConcentration {
        file: PathBuf,
        /// Support threshold; ceil(log2(k + 1)) by default.
        #[arg(long)]
        ell: Option<usize>,
        /// Shift x_i by t^(weights[i]) before checking.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u64>>,
    },
    /// Search for a basis-isolating weight assignment.
    SearchIsolating {
        file: PathBuf,
        /// Largest weight tried per variable; n(d+1) by default.
        #[arg(long)]
        max_weight: Option<u64>,
    },
    /// Probe x_i -> (t + i - 1)^r for r = 1..r_max.
    ProbeConjecture {
        /// Instance to probe; random instances are used when absent.
        file: Option<PathBuf>,
        #[arg(short = 'n', long, default_value_t = 4)]
        n: usize,
        #[arg(short = 'd', long, default_value_t = 2)]
        d: usize,
        #[arg(short = 'w', long, default_value_t = 2)]
        w: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Defaults to n * d * w.
        #[arg(long)]
        r_max: Option<usize>,
    },
    /// Run the acceptance suite.
    Selftest,
    /// Write a random instance.
    Generate {
        #[arg(long, value_enum, default_value_t = Kind::Roabp)]
        kind: Kind,
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(short = 'd', long, default_value_t = 1)]
        d: usize,
        /// Width, or the number of summands for setml.
        #[arg(short = 'w', long)]
        w: usize,
        /// Reject instances computing the zero polynomial (roabp kind).
        #[arg(long)]
        nonzero: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eval { .. } => "eval",
            Command::Expand { .. } => "expand",
            Command::Rank { .. } => "rank",
            Command::PitKnownOrder { .. } => "pit-known-order",
            Command::GenHittingSet { .. } => "gen-hitting-set",
            Command::PitCommutative { .. } => "pit-commutative",
            Command::CheckConcentration { .. } => "check-concentration",
            Command::SearchIsolating { .. } => "search-isolating",
            Command::ProbeConjecture { .. } => "probe-conjecture",
            Command::Selftest => "selftest",
            Command::Generate { .. } => "generate",
        }
    }
}

/// One report line plus the exit code it implies.
struct Report {
    lines: Vec<Value>,
    warnings: Vec<String>,
    /// Text written verbatim to stdout after the JSON lines.
    raw: Option<String>,
    code: i32,
}

impl Report {
    fn one(line: Value, code: i32) -> Self {
        Report {
            lines: vec![line],
            warnings: Vec::new(),
            raw: None,
            code,
        }
    }
}

fn exit_for(v: Verdict) -> i32 {
    match v {
        Verdict::Nonzero => 0,
        Verdict::Zero => 1,
    }
}

fn values(v: &[FieldElem]) -> Vec<u64> {
    v.iter().map(|x| x.value()).collect()
}

fn with_witness(mut line: Value, witness: Option<&[FieldElem]>) -> Value {
    if let Some(w) = witness {
        line["witness"] = json!(values(w));
    }
    line
}

fn load(path: &Path, prime: Option<u64>) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse(&text, prime)
}

fn file_params(path: &Path, inst: &Instance) -> Value {
    json!({
        "file": path.display().to_string(),
        "kind": inst.kind(),
        "prime": inst.field().modulus(),
        "n": inst.nvars(),
        "d": inst.degree(),
        "w": inst.width(),
    })
}

/// The coefficient polynomial used by the concentration subcommands and its
/// coefficient dimension `k`.
fn coefficient_poly(inst: &Instance, cap: usize) -> Result<MatPoly<PrimeField>> {
    match inst {
        Instance::Roabp(a) => a.program().expand(cap),
        Instance::Commutative(a) => a.matrix_polynomial(cap),
        Instance::Setml(c) => Ok(c.coefficient_polynomial()),
    }
}

fn lift(d: &MatPoly<PrimeField>) -> MatPoly<PolyRing> {
    let f = *d.ring();
    d.map_ring(PolyRing::new(f), |&c| UniPoly::constant(f, c))
}

struct Ctx {
    seed: Option<u64>,
    prime: Option<u64>,
    default_prime: Option<u64>,
    max_terms: usize,
}

impl Ctx {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or_else(|| rand::thread_rng().gen())
    }

    fn random_prime(&self) -> Result<PrimeField> {
        PrimeField::new(self.prime.or(self.default_prime).unwrap_or(FALLBACK_PRIME))
    }
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<Report> {
    let op = cmd.name();
    match cmd {
        Command::Eval { file, point } => {
            let inst = load(file, ctx.prime)?;
            let f = inst.field();
            let pt: Vec<FieldElem> = point.iter().map(|&v| f.from_i64(v)).collect();
            let value = inst.eval(&pt)?;
            let mut params = file_params(file, &inst);
            params["point"] = json!(values(&pt));
            let verdict = if value.is_zero() {
                Verdict::Zero
            } else {
                Verdict::Nonzero
            };
            Ok(Report::one(
                json!({"op": op, "params": params, "verdict": verdict.as_str(), "value": value.value()}),
                exit_for(verdict),
            ))
        }
        Command::Expand { file } => {
            let inst = load(file, ctx.prime)?;
            let poly = inst.expand(ctx.max_terms)?;
            let verdict = if poly.is_zero() {
                Verdict::Zero
            } else {
                Verdict::Nonzero
            };
            Ok(Report::one(
                json!({
                    "op": op,
                    "params": file_params(file, &inst),
                    "verdict": verdict.as_str(),
                    "terms": poly.len(),
                    "polynomial": poly.to_string(),
                }),
                exit_for(verdict),
            ))
        }
        Command::Rank { file } => {
            let inst = load(file, ctx.prime)?;
            if inst.nvars() != 2 {
                return Err(precondition(format!(
                    "rank needs a bivariate instance, got n = {}",
                    inst.nvars()
                )));
            }
            let m = pdm(&inst.expand(ctx.max_terms)?, inst.degree())?;
            let rank = m.rank();
            let verdict = if rank == 0 { Verdict::Zero } else { Verdict::Nonzero };
            Ok(Report::one(
                json!({
                    "op": op,
                    "params": file_params(file, &inst),
                    "verdict": verdict.as_str(),
                    "rank": rank,
                    "rank_within_width": rank <= inst.width(),
                }),
                exit_for(verdict),
            ))
        }
        Command::PitKnownOrder { file } => {
            let inst = load(file, ctx.prime)?;
            let a = inst.to_roabp()?;
            let (n, d, w) = (a.nvars(), a.degree(), a.width());
            let bound = degree_bound(n, d, w);
            let f = a.field();
            let mut warnings = Vec::new();
            let hs = if BigUint::from(f.modulus()) > bound {
                hitting_set_for_order(f, a.order(), d, w)?
            } else {
                warnings.push(format!(
                    "characteristic precondition violated: p = {} but the hitting set needs p > {bound}; \
                     using {} points, a zero verdict is not conclusive",
                    f.modulus(),
                    bound.clone().min(BigUint::from(f.modulus() - 1)) + 1u32
                ));
                hitting_set_truncated(f, a.order(), d, w)?
            };
            let out = run_points(&hs.points, |x| a.eval(x).expect("point length matches"));
            let mut params = file_params(file, &inst);
            params["degree_bound"] = json!(bound.to_string());
            let mut line = json!({
                "op": op,
                "params": params,
                "verdict": out.verdict.as_str(),
                "points": hs.len(),
                "evaluations": out.evaluations,
                "truncated": hs.meta.truncated,
            });
            if let Some(wn) = warnings.first() {
                line["warning"] = json!(wn);
            }
            let line = with_witness(line, out.witness.as_deref());
            Ok(Report {
                lines: vec![line],
                warnings,
                raw: None,
                code: exit_for(out.verdict),
            })
        }
        Command::GenHittingSet {
            n,
            d,
            w,
            order,
            points_out,
        } => {
            let bound = degree_bound(*n, *d, *w);
            let f = match ctx.prime.or(ctx.default_prime) {
                Some(p) => PrimeField::new(p)?,
                None => PrimeField::smallest_above(&bound)?,
            };
            let order: Vec<usize> = match order {
                Some(o) => o
                    .iter()
                    .map(|&v| v.checked_sub(1).ok_or_else(|| precondition("order is 1-based")))
                    .collect::<Result<_>>()?,
                None => (0..*n).collect(),
            };
            if order.len() != *n {
                return Err(precondition(format!(
                    "order lists {} variables, expected {n}",
                    order.len()
                )));
            }
            let hs = hitting_set_for_order(f, &order, *d, *w)?;
            let mut line = json!({
                "op": op,
                "params": {
                    "n": n, "d": d, "w": w, "prime": f.modulus(),
                    "order": order.iter().map(|v| v + 1).collect::<Vec<_>>(),
                },
                "verdict": "ok",
                "degree_bound": bound.to_string(),
                "count": hs.len(),
            });
            match points_out {
                Some(path) => {
                    let mut text = String::new();
                    for p in &hs.points {
                        text.push_str(&values(p).iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
                        text.push('\n');
                    }
                    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    line["points_out"] = json!(path.display().to_string());
                }
                None => {
                    line["points"] = json!(hs.points.iter().map(|p| values(p)).collect::<Vec<_>>());
                }
            }
            Ok(Report::one(line, 0))
        }
        Command::PitCommutative { file, k } => {
            let inst = load(file, ctx.prime)?;
            let commutative = match &inst {
                Instance::Commutative(a) => a.is_commutative(),
                Instance::Roabp(a) => a.is_commutative(),
                Instance::Setml(_) => true,
            };
            if !commutative {
                return Err(precondition("instance layers do not commute"));
            }
            let f = inst.field();
            let (n, d, w) = (inst.nvars(), inst.degree(), inst.width());
            // The diagonal algebra of a set-multilinear circuit has dimension k, not k^2.
            let k = match &inst {
                Instance::Setml(c) => k.or(Some(c.k())),
                _ => *k,
            };
            let family = ShiftFamily::standard(f, n, d)?;
            let (plan, hs) = concentrated_points(&family, n, d, w, k)?;
            let out = commutative_blackbox_pit(|x| inst.eval(x).expect("point length matches"), &family, n, d, w, k)?;
            let mut params = file_params(file, &inst);
            params["k"] = json!(plan.k);
            params["ell"] = json!(plan.ell);
            params["t_degree"] = json!(plan.t_degree);
            let line = json!({
                "op": op,
                "params": params,
                "verdict": out.verdict.as_str(),
                "points": hs.len().to_string(),
                "evaluations": out.evaluations,
            });
            Ok(Report::one(
                with_witness(line, out.witness.as_deref()),
                exit_for(out.verdict),
            ))
        }
        Command::CheckConcentration { file, ell, weights } => {
            let inst = load(file, ctx.prime)?;
            let d = coefficient_poly(&inst, ctx.max_terms)?;
            let k = d.coeff_dim();
            let ell = ell.unwrap_or_else(|| concentration_target(k));
            let mut params = file_params(&file.clone(), &inst);
            params["k"] = json!(k);
            params["ell"] = json!(ell);
            let concentrated = match weights {
                Some(ws) => {
                    if ws.len() != inst.nvars() {
                        return Err(precondition(format!(
                            "{} weights for {} variables",
                            ws.len(),
                            inst.nvars()
                        )));
                    }
                    params["weights"] = json!(ws);
                    let shift = weight_shift(inst.field(), &WeightAssignment::new(ws.clone()));
                    is_l_concentrated(&lift(&d).shift(shift.entries())?, ell)
                }
                None => is_l_concentrated(&d, ell),
            };
            let mut line = json!({
                "op": op,
                "params": params,
                "verdict": if concentrated { "concentrated" } else { "not-concentrated" },
            });
            if weights.is_none() {
                let family = ShiftFamily::standard(inst.field(), inst.nvars(), inst.degree())?;
                line["standard_family_member"] = json!(certify_family(&d, &family, ell)?);
            }
            Ok(Report::one(line, if concentrated { 0 } else { 1 }))
        }
        Command::SearchIsolating { file, max_weight } => {
            let inst = load(file, ctx.prime)?;
            let d = coefficient_poly(&inst, ctx.max_terms)?;
            let max = max_weight.unwrap_or_else(|| default_max_weight(inst.nvars(), inst.degree()));
            let mut params = file_params(file, &inst);
            params["max_weight"] = json!(max);
            let found = search_isolating(&d, max);
            let mut line = json!({
                "op": op,
                "params": params,
                "verdict": if found.is_some() { "found" } else { "none" },
            });
            if let Some(w) = &found {
                line["weights"] = json!(w.weights());
            }
            Ok(Report::one(line, if found.is_some() { 0 } else { 1 }))
        }
        Command::ProbeConjecture {
            file,
            n,
            d,
            w,
            count,
            r_max,
        } => match file {
            Some(path) => {
                let inst = load(path, ctx.prime)?;
                let a = inst.to_roabp()?;
                let r_max = r_max.unwrap_or(a.nvars() * a.degree() * a.width());
                let report = conjecture_probe(&a, r_max)?;
                let mut params = file_params(path, &inst);
                params["r_max"] = json!(r_max);
                let rounds: Vec<Value> = report
                    .rounds
                    .iter()
                    .map(|r| json!({"r": r.r, "nonzero": r.nonzero, "witness": r.witness.map(|x| x.value())}))
                    .collect();
                let line = json!({
                    "op": op,
                    "params": params,
                    "verdict": if report.candidate_counterexample { "candidate-counterexample" } else { "ok" },
                    "instance_nonzero": report.instance_nonzero,
                    "rounds": rounds,
                });
                Ok(Report::one(line, 0))
            }
            None => {
                let seed = ctx.seed();
                let f = ctx.random_prime()?;
                let r_max = r_max.unwrap_or(n * d * w);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut candidates = Vec::new();
                for i in 0..*count {
                    let a = random_roabp_with(f, *n, *d, *w, true, &mut rng);
                    if conjecture_probe(&a, r_max)?.candidate_counterexample {
                        candidates.push(i);
                    }
                }
                let line = json!({
                    "op": op,
                    "params": {"seed": seed, "prime": f.modulus(), "n": n, "d": d, "w": w, "count": count, "r_max": r_max},
                    "verdict": if candidates.is_empty() { "ok" } else { "candidate-counterexample" },
                    "all_r_zero": candidates.len(),
                    "candidates": candidates,
                });
                Ok(Report::one(line, 0))
            }
        },
        Command::Selftest => {
            let seed = ctx.seed.unwrap_or(DEFAULT_SELFTEST_SEED);
            let results = acceptance::run_all(seed);
            let mut lines: Vec<Value> = results
                .iter()
                .map(|r| {
                    json!({
                        "op": op,
                        "params": {"seed": seed, "criterion": r.id, "name": r.name},
                        "verdict": if r.passed { "pass" } else { "fail" },
                        "detail": r.detail,
                        "seconds": r.seconds,
                    })
                })
                .collect();
            let failed = results.iter().filter(|r| !r.passed).count();
            lines.push(json!({
                "op": op,
                "params": {"seed": seed},
                "verdict": if failed == 0 { "pass" } else { "fail" },
                "passed": results.len() - failed,
                "total": results.len(),
            }));
            Ok(Report {
                lines,
                warnings: Vec::new(),
                raw: None,
                code: if failed == 0 { 0 } else { 1 },
            })
        }
        Command::Generate {
            kind,
            n,
            d,
            w,
            nonzero,
            out,
        } => {
            let seed = ctx.seed();
            let f = ctx.random_prime()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if *n == 0 || *w == 0 {
                return Err(precondition("n and w must be at least 1"));
            }
            let inst = match kind {
                Kind::Roabp => Instance::Roabp(random_roabp_with(f, *n, *d, *w, *nonzero, &mut rng)),
                Kind::Commutative => Instance::Commutative(random_commutative(f, *n, *d, *w, &mut rng)?),
                Kind::Setml => Instance::Setml(random_set_multilinear(
                    f,
                    (0..*n).map(|v| vec![v]).collect(),
                    *w,
                    &mut rng,
                )?),
            };
            let text = serialize(&inst);
            let params =
                json!({"seed": seed, "kind": inst.kind(), "prime": f.modulus(), "n": n, "d": inst.degree(), "w": w});
            match out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    let mut params = params;
                    params["out"] = json!(path.display().to_string());
                    Ok(Report::one(json!({"op": op, "params": params, "verdict": "ok"}), 0))
                }
                None => Ok(Report {
                    lines: Vec::new(),
                    warnings: vec![format!("generated with seed {seed}")],
                    raw: Some(text),
                    code: 0,
                }),
            }
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let ctx = Ctx {
        seed: cli.seed,
        prime: cli.prime,
        default_prime: cli.default_prime,
        max_terms: cli.max_terms,
    };
    let op = cli.command.name();
    match dispatch(&cli.command, &ctx) {
        Ok(report) => {
            for w in &report.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            for line in &report.lines {
                let _ = writeln!(out, "{line}");
            }
            if let Some(raw) = &report.raw {
                let _ = write!(out, "{raw}");
            }
            report.code
        }
        Err(e) => {
            let _ = writeln!(out, "{}", json!({"op": op, "verdict": "error", "error": e.to_string()}));
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
