//! Command-line front end for `splitcount-core`.
//!
//! [`run_cli`] does all the work and returns the process exit code, so the
//! binary is a thin wrapper and tests can drive the tool in-process.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use splitcount_core::classtype::canonical_operator;
use splitcount_core::flagrec::{brute_flag_count, Concrete, Symbolic};
use splitcount_core::lattice::{brute_invariant_flags, PhiEngine};
use splitcount_core::qpoly::sweep_identities;
use splitcount_core::splitting::{brute_sigma, kappa, sigma_at, sigma_poly, toeplitz_count};
use splitcount_core::verify::verify_sweep;
use splitcount_core::{ClassType, Error, Field, FlagCounter, FlagTuple, QPoly, Ratio, ScaleLimit, SigmaQuery};

/// Environment variable holding the default brute-force work cap.
pub const SCALE_LIMIT_VAR: &str = "SPLITCOUNT_SCALE_LIMIT";

/// Default cap for `verify`, whose largest cases exceed the general one.
pub const VERIFY_SCALE_LIMIT: ScaleLimit = ScaleLimit(1_000_000_000);

#[derive(Parser, Debug)]
#[command(name = "splitcount", version, about = "Exact counts of splitting subspaces over finite fields")]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Cap on brute-force enumeration work (overrides SPLITCOUNT_SCALE_LIMIT).
    #[arg(long, global = true)]
    scale_limit: Option<u128>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of m-dimensional splitting subspaces at a given q.
    Sigma {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Method::Symbolic)]
        method: Method,
    },
    /// Number of splitting subspaces as a polynomial in q.
    SigmaPoly {
        #[command(flatten)]
        shape: Shape,
    },
    /// Size of the flag set labeled by a tuple.
    Flags {
        #[arg(long = "type")]
        tau: String,
        /// Tuple "a11,a12;a21,a22;...".
        #[arg(long)]
        tuple: String,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, value_enum, default_value_t = Method::Symbolic)]
        method: Method,
    },
    /// Number of flags of invariant subspaces with the given dimensions.
    Invariants {
        #[arg(long = "type")]
        tau: String,
        /// Weakly decreasing dimensions "a1,a2,...".
        #[arg(long)]
        dims: String,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, value_enum, default_value_t = Method::Symbolic)]
        method: Method,
    },
    /// Check the q-binomial identities on all small parameters.
    Identities {
        /// Largest parameter value.
        #[arg(long, default_value_t = 6)]
        max: i64,
    },
    /// Probability that m random vectors generate a full Krylov space.
    Kappa {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        q: u64,
    },
    /// Number of invertible block-shifted matrices.
    Toeplitz {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = Method::Symbolic)]
        method: Method,
    },
    /// Compare symbolic and brute-force counts over a range of types.
    Verify {
        #[arg(long, default_value_t = 4)]
        max_size: u32,
        #[arg(long, default_value_t = 3)]
        max_q: u64,
    },
}

#[derive(Args, Debug)]
struct Shape {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    d: u32,
    /// Class type "DEG:P1,P2,...;DEG:...".
    #[arg(long = "type")]
    tau: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    /// Polynomial recursion (the formula, for `toeplitz`).
    Symbolic,
    /// Integer recursion over a concrete operator.
    Concrete,
    /// Exhaustive enumeration.
    Brute,
}

/// Echo of the request in JSON output.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, rename = "type", skip_serializing_if = "Option::is_none")]
    pub tau: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuple: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<u64>,
}

/// A computed value; big integers travel as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Value {
    /// Ascending coefficients.
    Poly(Vec<String>),
    Int(String),
    Rational([String; 2]),
}

impl Value {
    pub fn from_poly(p: &QPoly) -> Value {
        Value::Poly(p.coeffs().iter().map(ToString::to_string).collect())
    }

    pub fn from_int(n: impl ToString) -> Value {
        Value::Int(n.to_string())
    }

    pub fn from_ratio(r: &Ratio) -> Value {
        Value::Rational([r.numer().to_string(), r.denom().to_string()])
    }

    /// Parses the polynomial coefficients back.
    pub fn to_poly(&self) -> Option<QPoly> {
        match self {
            Value::Poly(c) => {
                let coeffs = c.iter().map(|s| s.parse::<BigInt>().ok()).collect::<Option<Vec<_>>>()?;
                Some(QPoly::from_coeffs(coeffs))
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Output {
    pub query: Query,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
}

/// Outcome of a command: the value to print plus the exit code.
struct Report {
    output: Output,
    text: String,
    ok: bool,
}

fn exit_code(e: &Error) -> i32 {
    if e.is_infeasible() {
        3
    } else {
        2
    }
}

fn env_limit() -> Result<Option<ScaleLimit>, Error> {
    match std::env::var(SCALE_LIMIT_VAR) {
        Ok(s) => s
            .trim()
            .parse::<u128>()
            .map(|n| Some(ScaleLimit(n)))
            .map_err(|_| Error::Parse(format!("{SCALE_LIMIT_VAR}={s:?} is not an integer"))),
        Err(_) => Ok(None),
    }
}

fn parse_dims(text: &str) -> Result<Vec<u32>, Error> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad dimension {s:?}"))))
        .collect()
}

fn field_for(tau: &ClassType, q: u64) -> Result<(Field, splitcount_core::Matrix), Error> {
    let field = Field::with_order(q)?;
    let op = canonical_operator(tau, &field)?;
    Ok((field, op))
}

fn method_name(m: Method) -> String {
    match m {
        Method::Symbolic => "symbolic",
        Method::Concrete => "concrete",
        Method::Brute => "brute",
    }
    .to_string()
}

fn int_report(query: Query, n: &BigUint) -> Report {
    Report {
        text: n.to_string(),
        output: Output {
            query,
            result: Value::from_int(n),
            details: Vec::new(),
        },
        ok: true,
    }
}

fn poly_report(query: Query, p: &QPoly) -> Report {
    Report {
        text: p.to_string(),
        output: Output {
            query,
            result: Value::from_poly(p),
            details: Vec::new(),
        },
        ok: true,
    }
}

fn eval_nonneg(p: &QPoly, q: u64) -> BigUint {
    p.eval_u64(q).to_biguint().expect("counts are nonnegative")
}

fn execute(cli: &Cli) -> Result<Report, Error> {
    let explicit = match cli.scale_limit {
        Some(n) => Some(ScaleLimit(n)),
        None => env_limit()?,
    };
    let limit = explicit.unwrap_or(ScaleLimit::DEFAULT);
    match &cli.command {
        Command::Sigma { shape, q, method } => {
            let tau: ClassType = shape.tau.parse()?;
            let query = SigmaQuery::new(shape.m, shape.d, tau.clone())?;
            let n = match method {
                Method::Symbolic => sigma_at(&query, *q)?,
                Method::Concrete | Method::Brute => {
                    let (_, op) = field_for(&tau, *q)?;
                    brute_sigma(&op, shape.m, shape.d, limit)?
                }
            };
            let echo = Query {
                command: "sigma".into(),
                q: Some(*q),
                m: Some(shape.m),
                d: Some(shape.d),
                tau: Some(tau.to_string()),
                method: Some(method_name(*method)),
                ..Query::default()
            };
            Ok(int_report(echo, &n))
        }
        Command::SigmaPoly { shape } => {
            let tau: ClassType = shape.tau.parse()?;
            let p = sigma_poly(&SigmaQuery::new(shape.m, shape.d, tau.clone())?)?;
            let echo = Query {
                command: "sigma-poly".into(),
                m: Some(shape.m),
                d: Some(shape.d),
                tau: Some(tau.to_string()),
                ..Query::default()
            };
            Ok(poly_report(echo, &p))
        }
        Command::Flags { tau, tuple, q, method } => {
            let tau: ClassType = tau.parse()?;
            let t = FlagTuple::parse(tuple, tau.size())?;
            let echo = Query {
                command: "flags".into(),
                q: *q,
                tau: Some(tau.to_string()),
                tuple: Some(t.to_string()),
                method: Some(method_name(*method)),
                ..Query::default()
            };
            match (method, q) {
                (Method::Symbolic, None) => {
                    let p = FlagCounter::new(Symbolic::new(tau)).count(&t)?;
                    Ok(poly_report(echo, &p))
                }
                (Method::Symbolic, Some(q)) => {
                    // validates q against the type before evaluating
                    field_for(&tau, *q)?;
                    let p = FlagCounter::new(Symbolic::new(tau)).count(&t)?;
                    Ok(int_report(echo, &eval_nonneg(&p, *q)))
                }
                (Method::Concrete, Some(q)) => {
                    let (_, op) = field_for(&tau, *q)?;
                    let v = FlagCounter::new(Concrete::new(op, limit)?).count(&t)?;
                    Ok(int_report(echo, &v.to_biguint().expect("counts are nonnegative")))
                }
                (Method::Brute, Some(q)) => {
                    let (_, op) = field_for(&tau, *q)?;
                    Ok(int_report(echo, &brute_flag_count(&op, &t, limit)?))
                }
                (_, None) => Err(Error::InvalidParams("--q is required for this method".into())),
            }
        }
        Command::Invariants { tau, dims, q, method } => {
            let tau: ClassType = tau.parse()?;
            let dims = parse_dims(dims)?;
            let echo = Query {
                command: "invariants".into(),
                q: *q,
                tau: Some(tau.to_string()),
                dims: Some(dims.clone()),
                method: Some(method_name(*method)),
                ..Query::default()
            };
            match (method, q) {
                (Method::Symbolic, None) => Ok(poly_report(echo, &PhiEngine::new().phi(&tau, &dims)?)),
                (Method::Symbolic, Some(q)) => {
                    field_for(&tau, *q)?;
                    let p = PhiEngine::new().phi(&tau, &dims)?;
                    Ok(int_report(echo, &eval_nonneg(&p, *q)))
                }
                (_, Some(q)) => {
                    let (_, op) = field_for(&tau, *q)?;
                    Ok(int_report(echo, &brute_invariant_flags(&op, &dims, limit)?))
                }
                (_, None) => Err(Error::InvalidParams("--q is required for this method".into())),
            }
        }
        Command::Identities { max } => {
            if *max < 0 {
                return Err(Error::InvalidParams("--max must be nonnegative".into()));
            }
            let sweeps = sweep_identities(*max)?;
            let total: usize = sweeps.iter().map(|s| s.checked).sum();
            let mut details = Vec::new();
            let mut ok = true;
            for s in &sweeps {
                details.push(format!("{}: {} checked, {} failed", s.identity.name(), s.checked, s.failures.len()));
                for f in &s.failures {
                    ok = false;
                    details.push(format!("{} fails at {f:?}", s.identity.name()));
                }
            }
            let text = details.join("\n");
            Ok(Report {
                output: Output {
                    query: Query {
                        command: "identities".into(),
                        max: Some(*max as u64),
                        ..Query::default()
                    },
                    result: Value::from_int(total),
                    details,
                },
                text,
                ok,
            })
        }
        Command::Kappa { shape, q } => {
            let tau: ClassType = shape.tau.parse()?;
            let r = kappa(&SigmaQuery::new(shape.m, shape.d, tau.clone())?, *q)?;
            Ok(Report {
                text: r.to_string(),
                output: Output {
                    query: Query {
                        command: "kappa".into(),
                        q: Some(*q),
                        m: Some(shape.m),
                        d: Some(shape.d),
                        tau: Some(tau.to_string()),
                        ..Query::default()
                    },
                    result: Value::from_ratio(&r),
                    details: Vec::new(),
                },
                ok: true,
            })
        }
        Command::Toeplitz { q, m, d, method } => {
            let brute = *method != Method::Symbolic;
            let n = toeplitz_count(*q, *m, *d, brute, limit)?;
            let echo = Query {
                command: "toeplitz".into(),
                q: Some(*q),
                m: Some(*m),
                d: Some(*d),
                method: Some(method_name(*method)),
                ..Query::default()
            };
            Ok(int_report(echo, &n))
        }
        Command::Verify { max_size, max_q } => {
            let report = verify_sweep(*max_size, *max_q, explicit.unwrap_or(VERIFY_SCALE_LIMIT))?;
            let details: Vec<String> = report.mismatches.iter().map(ToString::to_string).collect();
            let mut text = format!("{} checks, {} mismatches", report.checks, report.mismatches.len());
            for line in &details {
                text.push('\n');
                text.push_str(line);
            }
            Ok(Report {
                output: Output {
                    query: Query {
                        command: "verify".into(),
                        q: Some(*max_q),
                        max: Some(*max_size as u64),
                        ..Query::default()
                    },
                    result: Value::from_int(report.checks),
                    details,
                },
                text,
                ok: report.passed(),
            })
        }
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code: 0 on success, 2 on invalid input, 3 when the request is
/// infeasible (field too small, size mismatch, enumeration too large) and
/// 1 when a verification sweep finds a mismatch.
pub fn run_cli<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let printed = if cli.json {
                serde_json::to_string(&report.output).expect("output serializes")
            } else {
                report.text
            };
            let _ = writeln!(out, "{printed}");
            if report.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
