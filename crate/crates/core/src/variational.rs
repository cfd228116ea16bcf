//! The energy functional `J(X) = ½E(X²) − E(X·T)` over variables measurable
//! with respect to a partition σ-algebra, its Gateaux derivatives, and two
//! minimizers.
//!
//! By Dirichlet's principle the unique minimizer of `J` over `σ(B)`-measurable
//! variables is `E(T | σ(B))`. Measurable variables are exactly the
//! combinations `Σ αⱼ 1_{Bⱼ}`, so the search runs over the coefficient vector
//! `α ∈ ℝ^N`. Since the blocks are disjoint the reduced Hessian is
//! `diag(P(B₁), .., P(B_N))` and the reduced gradient is
//! `gⱼ = αⱼ P(Bⱼ) − E(T·1_{Bⱼ})`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{conjugate_exponent, RandomVariable};
use crate::sigma::{Partition, SigmaAlgebra};
use crate::space::{Event, ProbabilitySpace};

/// Block-probability spread above which plain gradient descent is flagged as
/// ill-conditioned.
pub const CONDITION_WARNING: f64 = 1e6;

/// Which space the energy is posed on. On a finite space every `L^p` holds the
/// same variables, so this only records which representation claim applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "space", rename_all = "snake_case")]
pub enum NormSetting {
    /// `J` on `L²`, represented through the inner product.
    L2,
    /// `J_q` on `L^q`, `q` conjugate to `p ∈ (1, 2)`.
    Lq { p: f64, q: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyProblem {
    space: ProbabilitySpace,
    partition: Partition,
    sigma: SigmaAlgebra,
    target: RandomVariable,
    setting: NormSetting,
}

impl EnergyProblem {
    pub fn new(
        space: ProbabilitySpace,
        partition: Partition,
        target: RandomVariable,
    ) -> Result<Self> {
        space.check_variable(&target)?;
        if partition.n() != space.n() {
            return Err(Error::SpaceMismatch {
                left: space.n(),
                right: partition.n(),
            });
        }
        let sigma = SigmaAlgebra::generate_lazy(partition.clone());
        Ok(Self {
            space,
            partition,
            sigma,
            target,
            setting: NormSetting::L2,
        })
    }

    /// The problem whose minimizer is `E(1_A | σ(B)) = Σⱼ P(A | Bⱼ) 1_{Bⱼ}`.
    pub fn for_event(space: ProbabilitySpace, partition: Partition, a: &Event) -> Result<Self> {
        let target = space.indicator(a)?;
        Self::new(space, partition, target)
    }

    /// Poses the problem as `J_q` on `L^q` with `q` conjugate to `p ∈ (1, 2)`.
    pub fn with_dual_exponent(mut self, p: f64) -> Result<Self> {
        if !(p > 1.0 && p < 2.0) {
            return Err(Error::BadExponent(format!(
                "the L^q setting needs p in (1, 2), got {p}"
            )));
        }
        self.setting = NormSetting::Lq {
            p,
            q: conjugate_exponent(p)?,
        };
        Ok(self)
    }

    pub fn space(&self) -> &ProbabilitySpace {
        &self.space
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn target(&self) -> &RandomVariable {
        &self.target
    }

    pub fn setting(&self) -> NormSetting {
        self.setting
    }

    /// `J(X) = ½E(X²) − E(X·T)`. Also evaluates `J_q`; only the domain differs.
    pub fn energy(&self, x: &RandomVariable) -> Result<f64> {
        Ok(0.5 * self.space.inner_product(x, x)? - self.space.inner_product(x, &self.target)?)
    }

    /// `J′(X)Y = E(X·Y) − E(T·Y)`.
    pub fn gateaux_first(&self, x: &RandomVariable, y: &RandomVariable) -> Result<f64> {
        Ok(self.space.inner_product(x, y)? - self.space.inner_product(&self.target, y)?)
    }

    /// `J″(X)(Y, Z) = E(Y·Z)`, independent of `X`.
    pub fn gateaux_second(&self, y: &RandomVariable, z: &RandomVariable) -> Result<f64> {
        self.space.inner_product(y, z)
    }

    /// Compares `J′(X)Y` with the central difference
    /// `(J(X + hY) − J(X − hY)) / 2h`.
    pub fn fd_check(&self, x: &RandomVariable, y: &RandomVariable, h: f64) -> Result<FdCheck> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::BadStep(h));
        }
        let analytic = self.gateaux_first(x, y)?;
        let forward = self.energy(&x.axpy(h, y)?)?;
        let backward = self.energy(&x.axpy(-h, y)?)?;
        let numeric = (forward - backward) / (2.0 * h);
        let scale = analytic.abs().max(numeric.abs());
        let relative_error = if scale == 0.0 {
            0.0
        } else {
            (analytic - numeric).abs() / scale
        };
        Ok(FdCheck {
            analytic,
            numeric,
            relative_error,
        })
    }

    /// `E(T·1_{Bⱼ})` for every block.
    pub fn block_moments(&self) -> Vec<f64> {
        self.partition
            .blocks()
            .iter()
            .map(|b| {
                self.space
                    .integral_over(&self.target, b)
                    .expect("problem is bound to one space")
            })
            .collect()
    }

    fn check_coeffs(&self, alpha: &[f64]) -> Result<()> {
        if alpha.len() != self.partition.len() {
            return Err(Error::LengthMismatch {
                expected: self.partition.len(),
                found: alpha.len(),
            });
        }
        Ok(())
    }

    /// Gradient of `α ↦ J(Σ αⱼ 1_{Bⱼ})`: `gⱼ = αⱼ P(Bⱼ) − E(T·1_{Bⱼ})`.
    pub fn coefficient_gradient(&self, alpha: &[f64]) -> Result<Vec<f64>> {
        self.check_coeffs(alpha)?;
        Ok(gradient(
            alpha,
            self.partition.block_probs(),
            &self.block_moments(),
        ))
    }

    /// `J(Σ αⱼ 1_{Bⱼ}) = Σⱼ (½ αⱼ² P(Bⱼ) − αⱼ E(T·1_{Bⱼ}))`.
    pub fn coefficient_energy(&self, alpha: &[f64]) -> Result<f64> {
        self.check_coeffs(alpha)?;
        Ok(reduced_energy(
            alpha,
            self.partition.block_probs(),
            &self.block_moments(),
        ))
    }

    /// `maxⱼ |J′(X) 1_{Bⱼ}|`. Vanishes exactly at the minimizer.
    pub fn critical_residual(&self, x: &RandomVariable) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for b in self.partition.blocks() {
            let direction = self.space.indicator(b)?;
            worst = worst.max(self.gateaux_first(x, &direction)?.abs());
        }
        Ok(worst)
    }

    /// Minimizes `J` over `σ(B)`-measurable variables.
    ///
    /// Hitting `max_iters` is not an error: the result comes back with
    /// `converged == false`.
    pub fn minimize(&self, config: &SolverConfig) -> Result<SolverResult> {
        config.validate()?;
        let probs = self.partition.block_probs();
        let moments = self.block_moments();
        let mut warnings = Vec::new();
        let max_p = probs.iter().cloned().fold(f64::MIN, f64::max);
        let min_p = probs.iter().cloned().fold(f64::MAX, f64::min);
        let spread = max_p / min_p;
        if spread > CONDITION_WARNING && config.method == Method::GradientDescent {
            warnings.push(format!(
                "block probabilities span a ratio of {spread:.3e}; gradient descent will need many iterations"
            ));
        }

        let mut trace = config.record_trace.then(Vec::new);
        let (alpha, iterations, converged) = match config.method {
            Method::Exact => {
                let alpha: Vec<f64> = moments.iter().zip(probs).map(|(c, p)| c / p).collect();
                if let Some(trace) = trace.as_mut() {
                    let g = gradient(&alpha, probs, &moments);
                    trace.push((reduced_energy(&alpha, probs, &moments), inf_norm(&g)));
                }
                (alpha, 0, true)
            }
            Method::GradientDescent | Method::Preconditioned => {
                let steps: Vec<f64> = match (config.method, config.step) {
                    (Method::Preconditioned, _) => probs.iter().map(|p| 1.0 / p).collect(),
                    (_, Some(step)) => vec![step; probs.len()],
                    (_, None) => vec![1.0 / max_p; probs.len()],
                };
                descend(probs, &moments, &steps, config, trace.as_mut())
            }
        };

        let variable = self.sigma.variable(&alpha)?;
        let grad = gradient(&alpha, probs, &moments);
        let grad_inf_norm = inf_norm(&grad);
        let energy = self.energy(&variable)?;
        Ok(SolverResult {
            method: config.method,
            coefficients: alpha,
            energy,
            grad_inf_norm,
            iterations,
            converged: converged && grad_inf_norm <= config.tol,
            trace,
            warnings,
        })
    }
}

fn gradient(alpha: &[f64], probs: &[f64], moments: &[f64]) -> Vec<f64> {
    alpha
        .iter()
        .zip(probs)
        .zip(moments)
        .map(|((a, p), c)| a * p - c)
        .collect()
}

fn reduced_energy(alpha: &[f64], probs: &[f64], moments: &[f64]) -> f64 {
    alpha
        .iter()
        .zip(probs)
        .zip(moments)
        .map(|((a, p), c)| a * (0.5 * a * p - c))
        .sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `J(α − s⊙g) − J(α) = −Σⱼ sⱼ gⱼ² (1 − ½ sⱼ P(Bⱼ))`, exact for the quadratic.
fn step_change(g: &[f64], steps: &[f64], probs: &[f64]) -> f64 {
    g.iter()
        .zip(steps)
        .zip(probs)
        .map(|((gj, s), p)| -s * gj * gj * (1.0 - 0.5 * s * p))
        .sum()
}

/// `α ← α − step ⊙ g(α)` from `α = 0` until `‖g‖_∞ ≤ tol`.
///
/// Trace energies accumulate the per-step changes from `J(0) = 0` rather than
/// re-evaluating `J`, so near the minimum they are not swamped by rounding in
/// the two terms of `J`.
fn descend(
    probs: &[f64],
    moments: &[f64],
    steps: &[f64],
    config: &SolverConfig,
    mut trace: Option<&mut Vec<(f64, f64)>>,
) -> (Vec<f64>, usize, bool) {
    let mut alpha = vec![0.0; probs.len()];
    let mut iterations = 0;
    let mut energy = 0.0;
    loop {
        let g = gradient(&alpha, probs, moments);
        let g_norm = inf_norm(&g);
        if let Some(trace) = trace.as_deref_mut() {
            trace.push((energy, g_norm));
        }
        if g_norm <= config.tol {
            return (alpha, iterations, true);
        }
        if iterations >= config.max_iters {
            return (alpha, iterations, false);
        }
        let next: Vec<f64> = alpha
            .iter()
            .zip(&g)
            .zip(steps)
            .map(|((a, gj), s)| a - s * gj)
            .collect();
        // a diverging iteration stops at the last finite iterate
        if next.iter().any(|a| !a.is_finite()) {
            return (alpha, iterations, false);
        }
        energy += step_change(&g, steps, probs);
        alpha = next;
        iterations += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    /// Solve the diagonal normal equations directly.
    #[serde(rename = "exact")]
    Exact,
    /// Fixed-step gradient descent.
    #[serde(rename = "gd")]
    GradientDescent,
    /// Gradient descent with per-block step `1/P(Bⱼ)`.
    #[serde(rename = "preconditioned")]
    Preconditioned,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::GradientDescent => "gd",
            Method::Preconditioned => "preconditioned",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "gd" | "gradient_descent" => Ok(Method::GradientDescent),
            "preconditioned" => Ok(Method::Preconditioned),
            other => Err(Error::BadConfig(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    /// Fixed step for gradient descent; `None` picks `1 / maxⱼ P(Bⱼ)`.
    pub step: Option<f64>,
    /// Threshold on `‖g‖_∞`.
    pub tol: f64,
    pub max_iters: usize,
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::GradientDescent,
            step: None,
            tol: 1e-10,
            max_iters: 1_000_000,
            record_trace: false,
        }
    }
}

impl SolverConfig {
    pub fn exact() -> Self {
        Self {
            method: Method::Exact,
            ..Self::default()
        }
    }

    pub fn gradient_descent() -> Self {
        Self::default()
    }

    pub fn preconditioned() -> Self {
        Self {
            method: Method::Preconditioned,
            ..Self::default()
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::BadConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if let Some(step) = self.step {
            if !(step > 0.0 && step.is_finite()) {
                return Err(Error::BadConfig(format!(
                    "step must be positive, got {step}"
                )));
            }
        }
        if self.max_iters == 0 {
            return Err(Error::BadConfig("max_iters must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverResult {
    pub method: Method,
    pub coefficients: Vec<f64>,
    pub energy: f64,
    pub grad_inf_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `(energy, ‖g‖_∞)` before each step, when requested.
    pub trace: Option<Vec<(f64, f64)>>,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

/// Analytic and central-difference directional derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdCheck {
    pub analytic: f64,
    pub numeric: f64,
    /// `|analytic − numeric| / max(|analytic|, |numeric|)`, zero when both vanish.
    pub relative_error: f64,
}
