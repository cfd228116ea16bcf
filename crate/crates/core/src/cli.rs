//! The `probvar` command-line front end.
//!
//! Every subcommand writes one JSON document to stdout; diagnostics go to
//! stderr. Exit codes: 0 success, 1 invalid input, 2 solver non-convergence,
//! 3 property failure.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::conditional::{cond_expectation, total_probability_terms, verify_properties};
use crate::lp::RandomVariable;
use crate::sigma::Partition;
use crate::space::{Event, ProbabilitySpace};
use crate::suites::{run_suite, Suite, SuiteConfig};
use crate::variational::{EnergyProblem, Method, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_PROPERTY_FAILURE: i32 = 3;

/// Environment variable supplying the default `check --seed`.
pub const SEED_ENV: &str = "PROBVAR_SEED";

/// Problem description read by `total-prob`, `cond-exp` and `minimize`.
///
/// Outcome indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub partition: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<f64>>,
}

/// A validated [`ProblemFile`].
#[derive(Debug, Clone)]
pub struct Problem {
    pub space: ProbabilitySpace,
    pub partition: Partition,
    pub event: Option<Event>,
    pub target: Option<RandomVariable>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("malformed problem file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid problem: {0}")]
    Invalid(#[from] crate::Error),
    #[error("{0}")]
    Usage(String),
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn validate(&self) -> Result<Problem, CliError> {
        if self.event.is_some() && self.target.is_some() {
            return Err(CliError::Usage(
                "`event` and `target` are mutually exclusive".into(),
            ));
        }
        let space = match &self.labels {
            Some(labels) => ProbabilitySpace::with_labels(self.weights.clone(), labels.clone())?,
            None => ProbabilitySpace::new(self.weights.clone())?,
        };
        let partition = Partition::from_indices(&space, &self.partition)?;
        let event = self
            .event
            .as_ref()
            .map(|e| space.event(e.iter().copied()))
            .transpose()?;
        let target = self
            .target
            .as_ref()
            .map(|t| {
                let x = RandomVariable::new(t.clone())?;
                space.check_variable(&x)?;
                Ok::<_, crate::Error>(x)
            })
            .transpose()?;
        Ok(Problem {
            space,
            partition,
            event,
            target,
        })
    }
}

impl Problem {
    /// The variable to condition: `1_A` for an event, or the explicit target.
    pub fn target_variable(&self) -> Result<RandomVariable, CliError> {
        match (&self.event, &self.target) {
            (Some(e), None) => Ok(self.space.indicator(e)?),
            (None, Some(t)) => Ok(t.clone()),
            _ => Err(CliError::Usage(
                "this command needs exactly one of `event` or `target`".into(),
            )),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "probvar",
    version,
    about = "Conditional expectation on finite probability spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Both sides of the law of total probability for the file's event.
    TotalProb {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Closed-form conditional expectation with a property audit.
    CondExp {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Minimize the energy functional over measurable variables.
    Minimize {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value = "exact", value_parser = ["exact", "gd", "preconditioned"])]
        method: String,
        /// Stop once the largest reduced-gradient component is at most this.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_iters: usize,
        /// Fixed step for `gd`; defaults to 1 / max P(Bⱼ).
        #[arg(long)]
        step: Option<f64>,
        /// Record (energy, gradient norm) after every iteration.
        #[arg(long)]
        trace: bool,
    },
    /// Run a seeded randomized property suite.
    Check {
        #[arg(long, value_parser = ["holder", "clarkson", "monotonicity", "sigma", "dirichlet"])]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Defaults to $PROBVAR_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Fix the exponent instead of cycling through 1.25, 1.5, 2, 3, 4.
        #[arg(long)]
        p: Option<f64>,
    },
}

/// Runs the CLI on `args` (including the program name) against the process's
/// stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Like [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(cli.command, err) {
        Ok((doc, code)) => {
            let _ = writeln!(out, "{}", to_json(&doc));
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn execute(command: Command, err: &mut dyn Write) -> Result<(Value, i32), CliError> {
    match command {
        Command::TotalProb { input } => {
            let problem = ProblemFile::load(&input)?.validate()?;
            let event = problem
                .event
                .as_ref()
                .ok_or_else(|| CliError::Usage("total-prob needs an `event`".into()))?;
            let terms = total_probability_terms(&problem.space, event, &problem.partition)?;
            let total: f64 = terms.iter().map(|t| t.cond_prob * t.p_block).sum();
            Ok((
                json!({
                    "p_event": problem.space.prob(event)?,
                    "total_probability": total,
                    "per_block": terms,
                }),
                EXIT_OK,
            ))
        }
        Command::CondExp { input } => {
            let problem = ProblemFile::load(&input)?.validate()?;
            let x = problem.target_variable()?;
            let xi = cond_expectation(&problem.space, &x, &problem.partition)?;
            let report =
                verify_properties(&problem.space, &x, &problem.partition, &xi.as_variable)?;
            if !report.complete {
                let _ = writeln!(
                    err,
                    "warning: too many blocks to enumerate; only blocks were audited"
                );
            }
            let code = if report.passed() {
                EXIT_OK
            } else {
                EXIT_PROPERTY_FAILURE
            };
            Ok((
                json!({
                    "coefficients": xi.coefficients,
                    "verified": {
                        "measurable": report.measurable,
                        "integrable": report.integrable,
                        "property_iii_max_violation": report.property_iii_max_violation,
                    },
                }),
                code,
            ))
        }
        Command::Minimize {
            input,
            method,
            tol,
            max_iters,
            step,
            trace,
        } => {
            let problem = ProblemFile::load(&input)?.validate()?;
            let target = problem.target_variable()?;
            let closed = cond_expectation(&problem.space, &target, &problem.partition)?;
            let energy = EnergyProblem::new(problem.space, problem.partition, target)?;
            let config = SolverConfig {
                method: method.parse::<Method>()?,
                step,
                tol,
                max_iters,
                record_trace: trace,
            };
            let result = energy.minimize(&config)?;
            for w in &result.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let diff = result
                .coefficients
                .iter()
                .zip(&closed.coefficients)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            let mut doc = serde_json::to_value(&result)?;
            doc["closed_form_max_abs_diff"] = json!(diff);
            let code = if result.converged {
                EXIT_OK
            } else {
                let _ = writeln!(
                    err,
                    "solver stopped after {} iterations with gradient norm {:e}",
                    result.iterations, result.grad_inf_norm
                );
                EXIT_NOT_CONVERGED
            };
            Ok((doc, code))
        }
        Command::Check {
            suite,
            trials,
            seed,
            p,
        } => {
            let suite: Suite = suite.parse()?;
            let seed = match seed {
                Some(s) => s,
                None => match std::env::var(SEED_ENV) {
                    Ok(v) => v
                        .trim()
                        .parse()
                        .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v} is not a u64")))?,
                    Err(_) => 0,
                },
            };
            let report = run_suite(suite, &SuiteConfig { trials, seed, p })?;
            let code = if report.passed() {
                EXIT_OK
            } else {
                EXIT_PROPERTY_FAILURE
            };
            Ok((serde_json::to_value(&report)?, code))
        }
    }
}

/// Serializes `doc` with sorted keys and floats at 17 significant digits.
pub fn to_json(doc: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, G17Formatter);
    doc.serialize(&mut ser)
        .expect("serializing a Value cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

struct G17Formatter;

impl serde_json::ser::Formatter for G17Formatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_g17(value).as_bytes())
    }
}

/// `value` with 17 significant digits in the style of C's `%.17g`.
pub fn format_g17(value: f64) -> String {
    if value == 0.0 {
        return "0".into();
    }
    let sci = format!("{value:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (16 - exp) as usize;
    trim_fraction(&format!("{value:.decimals$}")).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
