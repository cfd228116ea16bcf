//! Random variables, expectation, `L^p` norms, and inequality checkers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{Event, ProbabilitySpace};

/// Slack below this is reported as a violation.
pub const SLACK_TOL: f64 = -1e-12;

/// A real value per outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomVariable {
    values: Vec<f64>,
}

impl RandomVariable {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index, value });
        }
        Ok(Self { values })
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self { values: vec![c; n] }
    }

    pub fn zeros(n: usize) -> Self {
        Self::constant(n, 0.0)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two variables on the same space.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::SpaceMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product `X·Y`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map(|v| a * v)
    }

    /// `self + a·other`.
    pub fn axpy(&self, a: f64, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x + a * y)
    }

    /// Equality up to `tol` on the outcomes of positive weight; null outcomes
    /// are ignored.
    pub fn eq_almost_surely(
        &self,
        other: &Self,
        space: &ProbabilitySpace,
        tol: f64,
    ) -> Result<bool> {
        space.check_variable(self)?;
        space.check_variable(other)?;
        Ok(space
            .support()
            .all(|i| (self.values[i] - other.values[i]).abs() <= tol))
    }
}

/// An exponent `p ∈ [1, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PNorm(f64);

impl PNorm {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::BadExponent(format!(
                "p = {p} must be a finite real ≥ 1"
            )));
        }
        Ok(Self(p))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// `|v|^p`. Integer exponents multiply directly, others go through the log.
pub fn abs_pow(v: f64, p: f64) -> f64 {
    let a = v.abs();
    if a == 0.0 {
        return if p == 0.0 { 1.0 } else { 0.0 };
    }
    if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
        a.powi(p as i32)
    } else {
        (p * a.ln()).exp()
    }
}

impl ProbabilitySpace {
    pub(crate) fn check_variable(&self, x: &RandomVariable) -> Result<()> {
        if x.n() != self.n() {
            return Err(Error::SpaceMismatch {
                left: self.n(),
                right: x.n(),
            });
        }
        Ok(())
    }

    /// The indicator `1_e`.
    pub fn indicator(&self, e: &Event) -> Result<RandomVariable> {
        self.check_event(e)?;
        Ok(RandomVariable {
            values: (0..self.n())
                .map(|i| if e.contains(i) { 1.0 } else { 0.0 })
                .collect(),
        })
    }

    /// The simple variable `Σⱼ coeffs[j]·1_{events[j]}`.
    pub fn simple_combination(&self, coeffs: &[f64], events: &[Event]) -> Result<RandomVariable> {
        if coeffs.len() != events.len() {
            return Err(Error::LengthMismatch {
                expected: events.len(),
                found: coeffs.len(),
            });
        }
        let mut values = vec![0.0; self.n()];
        for (&c, e) in coeffs.iter().zip(events) {
            self.check_event(e)?;
            for i in e.iter() {
                values[i] += c;
            }
        }
        RandomVariable::new(values)
    }

    /// `E(X) = Σᵢ X(ωᵢ)·P({ωᵢ})`.
    pub fn expectation(&self, x: &RandomVariable) -> Result<f64> {
        self.check_variable(x)?;
        Ok(x.values
            .iter()
            .zip(self.weights())
            .map(|(v, w)| v * w)
            .sum())
    }

    /// `∫_B X dP`.
    pub fn integral_over(&self, x: &RandomVariable, b: &Event) -> Result<f64> {
        self.check_variable(x)?;
        self.check_event(b)?;
        Ok(b.iter()
            .fold(0.0, |acc, i| acc + x.values[i] * self.weight(i)))
    }

    /// `E(|X|^p)`.
    pub fn abs_moment(&self, x: &RandomVariable, p: f64) -> Result<f64> {
        self.check_variable(x)?;
        Ok(x.values
            .iter()
            .zip(self.weights())
            .map(|(&v, &w)| abs_pow(v, p) * w)
            .sum())
    }

    /// `‖X‖_p = E(|X|^p)^{1/p}`.
    pub fn lp_norm(&self, x: &RandomVariable, p: PNorm) -> Result<f64> {
        let p = p.get();
        let m = self.abs_moment(x, p)?;
        Ok(if p == 1.0 { m } else { m.powf(1.0 / p) })
    }

    /// `⟨X, Y⟩₂ = E(X·Y)`.
    pub fn inner_product(&self, x: &RandomVariable, y: &RandomVariable) -> Result<f64> {
        self.check_variable(x)?;
        self.check_variable(y)?;
        Ok(x.values
            .iter()
            .zip(&y.values)
            .zip(self.weights())
            .map(|((a, b), w)| a * b * w)
            .sum())
    }
}

/// `q = p / (p − 1)`, so that `1/p + 1/q = 1`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::BadExponent(format!(
            "conjugate exponent needs finite p > 1, got {p}"
        )));
    }
    Ok(p / (p - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    Holder,
    NormMonotonicity,
    ClarksonFirst,
    ClarksonSecond,
}

/// Outcome of evaluating an inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: Inequality,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

impl InequalityReport {
    pub fn new(name: Inequality, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            name,
            lhs,
            rhs,
            slack,
            holds: slack >= SLACK_TOL,
        }
    }
}

/// Hölder–Riesz: `‖X·Y‖₁ ≤ ‖X‖_p ‖Y‖_q` with `q` conjugate to `p`.
pub fn holder_check(
    space: &ProbabilitySpace,
    x: &RandomVariable,
    y: &RandomVariable,
    p: f64,
) -> Result<InequalityReport> {
    let q = conjugate_exponent(p)?;
    let lhs = space.lp_norm(&x.mul(y)?, PNorm(1.0))?;
    let rhs = space.lp_norm(x, PNorm(p))? * space.lp_norm(y, PNorm(q))?;
    Ok(InequalityReport::new(Inequality::Holder, lhs, rhs))
}

/// `‖X‖_r ≤ ‖X‖_s` for `1 ≤ r < s` on a probability space.
pub fn norm_monotonicity_check(
    space: &ProbabilitySpace,
    x: &RandomVariable,
    r: f64,
    s: f64,
) -> Result<InequalityReport> {
    let r = PNorm::new(r)?;
    let s = PNorm::new(s)?;
    if r >= s {
        return Err(Error::BadExponent(format!(
            "monotonicity needs r < s, got r = {}, s = {}",
            r.get(),
            s.get()
        )));
    }
    Ok(InequalityReport::new(
        Inequality::NormMonotonicity,
        space.lp_norm(x, r)?,
        space.lp_norm(x, s)?,
    ))
}

fn half_sum_and_difference(
    x: &RandomVariable,
    y: &RandomVariable,
) -> Result<(RandomVariable, RandomVariable)> {
    Ok((
        x.zip_with(y, |a, b| 0.5 * (a + b))?,
        x.zip_with(y, |a, b| 0.5 * (a - b))?,
    ))
}

/// First Clarkson inequality, `p ∈ (1, 2]`:
///
/// `‖(X+Y)/2‖_p^{q} + ‖(X−Y)/2‖_p^{q} ≤ (½‖X‖_p^p + ½‖Y‖_p^p)^{1/(p−1)}`, `q = p/(p−1)`.
pub fn clarkson_first(
    space: &ProbabilitySpace,
    x: &RandomVariable,
    y: &RandomVariable,
    p: f64,
) -> Result<InequalityReport> {
    let q = conjugate_exponent(p)?;
    if p > 2.0 {
        return Err(Error::BadExponent(format!(
            "first Clarkson inequality needs p in (1, 2], got {p}"
        )));
    }
    let (half_sum, half_diff) = half_sum_and_difference(x, y)?;
    // ‖Z‖_p^q = E(|Z|^p)^{q/p}
    let lhs =
        space.abs_moment(&half_sum, p)?.powf(q / p) + space.abs_moment(&half_diff, p)?.powf(q / p);
    let mean = 0.5 * space.abs_moment(x, p)? + 0.5 * space.abs_moment(y, p)?;
    let rhs = mean.powf(1.0 / (p - 1.0));
    Ok(InequalityReport::new(Inequality::ClarksonFirst, lhs, rhs))
}

/// Second Clarkson inequality, `p ∈ [2, ∞)`:
///
/// `‖(X+Y)/2‖_p^p + ‖(X−Y)/2‖_p^p ≤ ½(‖X‖_p^p + ‖Y‖_p^p)`.
pub fn clarkson_second(
    space: &ProbabilitySpace,
    x: &RandomVariable,
    y: &RandomVariable,
    p: f64,
) -> Result<InequalityReport> {
    if !(p.is_finite() && p >= 2.0) {
        return Err(Error::BadExponent(format!(
            "second Clarkson inequality needs finite p ≥ 2, got {p}"
        )));
    }
    let (half_sum, half_diff) = half_sum_and_difference(x, y)?;
    let lhs = space.abs_moment(&half_sum, p)? + space.abs_moment(&half_diff, p)?;
    let rhs = 0.5 * (space.abs_moment(x, p)? + space.abs_moment(y, p)?);
    Ok(InequalityReport::new(Inequality::ClarksonSecond, lhs, rhs))
}

/// The Clarkson inequality that applies to `p`: the first one on `(1, 2]`, the
/// second one above 2. At `p = 2` both are the parallelogram identity.
pub fn clarkson_check(
    space: &ProbabilitySpace,
    x: &RandomVariable,
    y: &RandomVariable,
    p: f64,
) -> Result<InequalityReport> {
    if p.is_finite() && p > 2.0 {
        clarkson_second(space, x, y, p)
    } else {
        clarkson_first(space, x, y, p)
    }
}

/// Modulus of uniform convexity of `L^p` obtained from the Clarkson
/// inequalities: `1 − (1 − (ε/2)^r)^{1/r}` with `r = p` for `p ≥ 2` and `r = q`
/// (the conjugate exponent) for `p ∈ (1, 2)`.
pub fn uniform_convexity_delta(p: f64, eps: f64) -> Result<f64> {
    let q = conjugate_exponent(p)?;
    if !(eps > 0.0 && eps <= 2.0) {
        return Err(Error::BadEpsilon(eps));
    }
    let r = if p >= 2.0 { p } else { q };
    // 1 − (1 − t)^{1/r}, kept accurate for tiny t
    let t = (eps / 2.0).powf(r);
    if t >= 1.0 {
        return Ok(1.0);
    }
    Ok(-((-t).ln_1p() / r).exp_m1())
}
