//! Seeded randomized property suites.
//!
//! Each suite runs `trials` independent trials; trial `i` draws everything from
//! [`trial_rng(seed, i)`](crate::random::trial_rng). A trial evaluates some
//! `lhs ≤ rhs` and reports `slack = rhs − lhs`. For identities `lhs` is the
//! observed deviation and `rhs` the tolerance.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::conditional::total_probability;
use crate::error::{Error, Result};
use crate::lp::{clarkson_check, holder_check, norm_monotonicity_check, InequalityReport};
use crate::random::{random_event, random_instance, random_variable, trial_rng, Shape};
use crate::sigma::SigmaAlgebra;
use crate::variational::{EnergyProblem, SolverConfig};
use crate::IDENTITY_TOL;

/// Exponents cycled through when no `p` is fixed.
pub const P_GRID: [f64; 5] = [1.25, 1.5, 2.0, 3.0, 4.0];

/// Agreement required between gradient descent and the closed form.
pub const GD_TOL: f64 = 1e-8;

/// Largest block count drawn by the σ-algebra suite.
pub const SIGMA_MAX_BLOCKS: usize = 12;

/// Random member pairs checked for closure per σ-algebra trial.
const CLOSURE_PAIRS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Holder,
    Clarkson,
    Monotonicity,
    Sigma,
    Dirichlet,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Holder,
        Suite::Clarkson,
        Suite::Monotonicity,
        Suite::Sigma,
        Suite::Dirichlet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Holder => "holder",
            Suite::Clarkson => "clarkson",
            Suite::Monotonicity => "monotonicity",
            Suite::Sigma => "sigma",
            Suite::Dirichlet => "dirichlet",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::BadConfig(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub trials: u64,
    pub seed: u64,
    /// Fixed exponent; `None` cycles through [`P_GRID`].
    pub p: Option<f64>,
}

/// Result of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub slack: f64,
    pub holds: bool,
    pub detail: Value,
}

impl Trial {
    fn from_report(report: &InequalityReport, extra: Value) -> Self {
        let mut detail = json!({
            "inequality": report.name,
            "lhs": report.lhs,
            "rhs": report.rhs,
            "slack": report.slack,
        });
        merge(&mut detail, extra);
        Self {
            slack: report.slack,
            holds: report.holds,
            detail,
        }
    }
}

fn merge(into: &mut Value, extra: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, extra) {
        a.extend(b);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub trials: u64,
    pub failures: u64,
    pub worst_slack: f64,
    pub first_failure: Option<Value>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn validate(suite: Suite, config: &SuiteConfig) -> Result<()> {
    if config.trials == 0 {
        return Err(Error::BadConfig("trials must be positive".into()));
    }
    if let Some(p) = config.p {
        let ok = match suite {
            Suite::Holder | Suite::Clarkson | Suite::Monotonicity => p.is_finite() && p > 1.0,
            Suite::Sigma | Suite::Dirichlet => true,
        };
        if !ok {
            return Err(Error::BadExponent(format!(
                "suite {suite} needs a finite p > 1, got {p}"
            )));
        }
    }
    Ok(())
}

/// Runs one trial of `suite`.
pub fn run_trial(suite: Suite, config: &SuiteConfig, trial: u64) -> Result<Trial> {
    let mut rng = trial_rng(config.seed, trial);
    let p = config
        .p
        .unwrap_or(P_GRID[(trial % P_GRID.len() as u64) as usize]);
    match suite {
        Suite::Holder => {
            let inst = random_instance(&mut rng, Shape::default());
            let y = random_variable(&mut rng, inst.space.n());
            let report = holder_check(&inst.space, &inst.variable, &y, p)?;
            Ok(Trial::from_report(
                &report,
                json!({ "trial": trial, "p": p, "n": inst.space.n() }),
            ))
        }
        Suite::Clarkson => {
            let inst = random_instance(&mut rng, Shape::default());
            let y = random_variable(&mut rng, inst.space.n());
            let report = clarkson_check(&inst.space, &inst.variable, &y, p)?;
            let mut trial = Trial::from_report(
                &report,
                json!({ "trial": trial, "p": p, "n": inst.space.n() }),
            );
            // p = 2 is the parallelogram identity
            if p == 2.0 {
                trial.holds = report.slack.abs() <= IDENTITY_TOL;
            }
            Ok(trial)
        }
        Suite::Monotonicity => {
            let inst = random_instance(&mut rng, Shape::default());
            let (r, s) = match config.p {
                Some(s) => (1.0 + (s - 1.0) * rand::Rng::random::<f64>(&mut rng), s),
                None => {
                    let r = 1.0 + 3.0 * rand::Rng::random::<f64>(&mut rng);
                    (r, r + p)
                }
            };
            if r >= s {
                // r landed on s; compare against 1 instead
                let report = norm_monotonicity_check(&inst.space, &inst.variable, 1.0, s)?;
                return Ok(Trial::from_report(
                    &report,
                    json!({ "trial": trial, "r": 1.0, "s": s }),
                ));
            }
            let report = norm_monotonicity_check(&inst.space, &inst.variable, r, s)?;
            Ok(Trial::from_report(
                &report,
                json!({ "trial": trial, "r": r, "s": s }),
            ))
        }
        Suite::Sigma => sigma_trial(&mut rng, trial),
        Suite::Dirichlet => dirichlet_trial(&mut rng, trial),
    }
}

fn sigma_trial(rng: &mut rand_chacha::ChaCha8Rng, trial: u64) -> Result<Trial> {
    use rand::Rng;

    let shape = Shape {
        max_blocks: SIGMA_MAX_BLOCKS,
        ..Shape::default()
    }
    .with_nulls(0.2);
    let inst = random_instance(rng, shape);
    let n_blocks = inst.partition.len();
    let sigma = SigmaAlgebra::generate(inst.partition.clone());
    let members = sigma.members().expect("N ≤ 12 is enumerated");
    let mut problems = Vec::new();

    if members.len() != 1 << n_blocks {
        problems.push(format!("{} members for N = {n_blocks}", members.len()));
    }
    let empty = inst.space.empty_event();
    let full = inst.space.full_event();
    if sigma.contains_by_search(&empty) != Some(true)
        || sigma.contains_by_search(&full) != Some(true)
    {
        problems.push("∅ or Ω missing".into());
    }
    for _ in 0..CLOSURE_PAIRS {
        let e = &members[rng.random_range(0..members.len())];
        let f = &members[rng.random_range(0..members.len())];
        if !sigma.contains(&e.complement())? || !sigma.contains(&e.union(f)?)? {
            problems.push(format!("not closed at {e} / {f}"));
            break;
        }
    }
    let probe = random_event(rng, inst.space.n());
    if sigma.contains(&probe)? != sigma.contains_by_search(&probe).unwrap_or(false) {
        problems.push(format!(
            "membership criterion disagrees with search on {probe}"
        ));
    }

    let deviation = (total_probability(&inst.space, &inst.event, &inst.partition)?
        - inst.space.prob(&inst.event)?)
    .abs();
    let slack = IDENTITY_TOL - deviation;
    Ok(Trial {
        slack,
        holds: problems.is_empty() && slack >= 0.0,
        detail: json!({
            "trial": trial,
            "n": inst.space.n(),
            "blocks": n_blocks,
            "total_probability_deviation": deviation,
            "problems": problems,
        }),
    })
}

fn dirichlet_trial(rng: &mut rand_chacha::ChaCha8Rng, trial: u64) -> Result<Trial> {
    let inst = random_instance(rng, Shape::default());
    let closed: Vec<f64> = inst
        .partition
        .blocks()
        .iter()
        .map(|b| inst.space.cond_prob(&inst.event, b))
        .collect::<Result<_>>()?;
    let problem =
        EnergyProblem::for_event(inst.space.clone(), inst.partition.clone(), &inst.event)?;
    let exact = problem.minimize(&SolverConfig::exact())?;
    let gd = problem.minimize(&SolverConfig::gradient_descent())?;
    let max_diff = |a: &[f64]| {
        a.iter()
            .zip(&closed)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    };
    let exact_diff = max_diff(&exact.coefficients);
    let gd_diff = max_diff(&gd.coefficients);
    let slack = GD_TOL - gd_diff;
    Ok(Trial {
        slack,
        holds: slack >= 0.0 && exact_diff <= IDENTITY_TOL && gd.converged,
        detail: json!({
            "trial": trial,
            "n": inst.space.n(),
            "blocks": inst.partition.len(),
            "exact_max_abs_diff": exact_diff,
            "gd_max_abs_diff": gd_diff,
            "gd_converged": gd.converged,
            "gd_iterations": gd.iterations,
        }),
    })
}

/// Runs `config.trials` trials of `suite` in order.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteReport> {
    validate(suite, config)?;
    let mut failures = 0;
    let mut worst_slack = f64::INFINITY;
    let mut first_failure = None;
    for trial in 0..config.trials {
        let outcome = run_trial(suite, config, trial)?;
        worst_slack = worst_slack.min(outcome.slack);
        if !outcome.holds {
            failures += 1;
            first_failure.get_or_insert(outcome.detail);
        }
    }
    Ok(SuiteReport {
        trials: config.trials,
        failures,
        worst_slack,
        first_failure,
    })
}
