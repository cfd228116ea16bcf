//! Closed-form conditional expectation given a partition σ-algebra, and the law
//! of total probability.

use serde::Serialize;

use crate::error::Result;
use crate::lp::{PNorm, RandomVariable};
use crate::sigma::{Partition, SigmaAlgebra};
use crate::space::{Event, ProbabilitySpace};
use crate::IDENTITY_TOL;

/// `E(X | σ(B)) = Σⱼ αⱼ 1_{Bⱼ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalExpectation {
    pub partition: Partition,
    pub coefficients: Vec<f64>,
    pub as_variable: RandomVariable,
}

/// `αⱼ = E(X·1_{Bⱼ}) / P(Bⱼ)`. For `X = 1_A` this is `P(A | Bⱼ)`.
pub fn cond_expectation(
    space: &ProbabilitySpace,
    x: &RandomVariable,
    partition: &Partition,
) -> Result<ConditionalExpectation> {
    space.check_variable(x)?;
    partition.check_variable(x)?;
    let coefficients = partition
        .blocks()
        .iter()
        .zip(partition.block_probs())
        .map(|(b, &pb)| Ok(space.integral_over(x, b)? / pb))
        .collect::<Result<Vec<_>>>()?;
    let as_variable = space.simple_combination(&coefficients, partition.blocks())?;
    Ok(ConditionalExpectation {
        partition: partition.clone(),
        coefficients,
        as_variable,
    })
}

/// Which defining properties of a conditional expectation a candidate `ξ`
/// satisfies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    /// (i) `ξ` is constant on every block.
    pub measurable: bool,
    /// (ii) `E(|ξ|) < ∞`.
    pub integrable: bool,
    /// (iii) `max_B |∫_B X dP − ∫_B ξ dP|` over the members checked.
    pub property_iii_max_violation: f64,
    /// A member attaining the maximum violation.
    #[serde(skip)]
    pub worst_member: Option<Event>,
    pub members_checked: u64,
    /// `false` when the σ-algebra was too large to enumerate and only the
    /// blocks themselves were checked.
    pub complete: bool,
}

impl PropertyReport {
    pub fn property_iii_holds(&self) -> bool {
        self.property_iii_max_violation <= IDENTITY_TOL
    }

    pub fn passed(&self) -> bool {
        self.measurable && self.integrable && self.property_iii_holds()
    }
}

/// Audits `xi` against the definition of `E(x | σ(partition))`: measurability,
/// integrability, and `∫_B x dP = ∫_B ξ dP` for every member `B` of the
/// generated σ-algebra, each integral computed directly over `B`.
///
/// With more than [`ENUMERATION_LIMIT`](crate::sigma::ENUMERATION_LIMIT) blocks
/// only the blocks are checked and the report is marked incomplete.
pub fn verify_properties(
    space: &ProbabilitySpace,
    x: &RandomVariable,
    partition: &Partition,
    xi: &RandomVariable,
) -> Result<PropertyReport> {
    space.check_variable(x)?;
    space.check_variable(xi)?;
    partition.check_variable(x)?;
    let sigma = SigmaAlgebra::generate(partition.clone());
    let measurable = sigma.is_measurable(xi)?;
    let integrable = space.lp_norm(xi, PNorm::new(1.0)?)?.is_finite();

    let mut worst = 0.0;
    let mut worst_member = None;
    let mut checked = 0u64;
    let mut audit = |b: &Event| -> Result<()> {
        let violation = (space.integral_over(x, b)? - space.integral_over(xi, b)?).abs();
        checked += 1;
        if violation > worst || (violation.is_nan() && !worst.is_nan()) {
            worst = violation;
            worst_member = Some(b.clone());
        }
        Ok(())
    };
    let complete = match sigma.members() {
        Some(members) => {
            for b in members {
                audit(b)?;
            }
            true
        }
        None => {
            for b in partition.blocks() {
                audit(b)?;
            }
            false
        }
    };
    Ok(PropertyReport {
        measurable,
        integrable,
        property_iii_max_violation: worst,
        worst_member,
        members_checked: checked,
        complete,
    })
}

/// One block's contribution to the law of total probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockTerm {
    pub p_block: f64,
    pub cond_prob: f64,
}

/// The terms `(P(Bⱼ), P(A | Bⱼ))` for every block.
pub fn total_probability_terms(
    space: &ProbabilitySpace,
    a: &Event,
    partition: &Partition,
) -> Result<Vec<BlockTerm>> {
    partition.check_event(a)?;
    partition
        .blocks()
        .iter()
        .zip(partition.block_probs())
        .map(|(b, &p_block)| {
            Ok(BlockTerm {
                p_block,
                cond_prob: space.cond_prob(a, b)?,
            })
        })
        .collect()
}

/// `Σⱼ P(A | Bⱼ)·P(Bⱼ)`, which equals `P(A)`.
pub fn total_probability(
    space: &ProbabilitySpace,
    a: &Event,
    partition: &Partition,
) -> Result<f64> {
    Ok(total_probability_terms(space, a, partition)?
        .iter()
        .map(|t| t.cond_prob * t.p_block)
        .sum())
}

/// `|E(E(X | G)) − E(X)|`.
pub fn tower_check(
    space: &ProbabilitySpace,
    x: &RandomVariable,
    partition: &Partition,
) -> Result<f64> {
    let xi = cond_expectation(space, x, partition)?;
    Ok((space.expectation(&xi.as_variable)? - space.expectation(x)?).abs())
}
