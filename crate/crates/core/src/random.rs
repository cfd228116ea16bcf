//! Seeded generators for random spaces, partitions, events and variables.
//!
//! Every trial of a randomized suite draws from its own ChaCha stream selected
//! by `(seed, trial)`, so trials are independent and reproducible in any order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lp::RandomVariable;
use crate::sigma::Partition;
use crate::space::{Event, ProbabilitySpace};

/// Range of the values drawn for random variables.
pub const VALUE_BOUND: f64 = 2.0;

/// The generator for trial `trial` under base seed `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Bounds on the size of generated instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shape {
    pub max_outcomes: usize,
    pub max_blocks: usize,
    /// Probability that an outcome gets weight zero. Every block keeps at
    /// least one outcome of positive weight.
    pub null_rate: f64,
}

impl Default for Shape {
    fn default() -> Self {
        Self {
            max_outcomes: 64,
            max_blocks: 16,
            null_rate: 0.0,
        }
    }
}

impl Shape {
    pub fn with_nulls(mut self, rate: f64) -> Self {
        self.null_rate = rate;
        self
    }
}

/// A random space with a partition, an event and a variable on it.
#[derive(Debug, Clone)]
pub struct Instance {
    pub space: ProbabilitySpace,
    pub partition: Partition,
    pub event: Event,
    pub variable: RandomVariable,
}

/// Splits a shuffled `0..n` into `blocks` chunks whose sizes differ by at most
/// one.
pub fn random_blocks<R: Rng>(rng: &mut R, n: usize, blocks: usize) -> Vec<Vec<usize>> {
    assert!(blocks >= 1 && blocks <= n, "need 1 ≤ blocks ≤ n");
    let mut outcomes: Vec<usize> = (0..n).collect();
    outcomes.shuffle(rng);
    let base = n / blocks;
    let extra = n % blocks;
    let mut out = Vec::with_capacity(blocks);
    let mut start = 0;
    for j in 0..blocks {
        let len = base + usize::from(j < extra);
        let mut block = outcomes[start..start + len].to_vec();
        block.sort_unstable();
        out.push(block);
        start += len;
    }
    out
}

/// Weights uniform in `[1, 2]` before normalization; with a positive
/// `null_rate` some outcomes get weight zero, but never a whole block.
pub fn random_weights<R: Rng>(rng: &mut R, blocks: &[Vec<usize>], null_rate: f64) -> Vec<f64> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut weights = vec![0.0; n];
    for block in blocks {
        let keep = block[rng.random_range(0..block.len())];
        for &i in block {
            let null = i != keep && null_rate > 0.0 && rng.random_bool(null_rate);
            weights[i] = if null {
                0.0
            } else {
                rng.random_range(1.0..=2.0)
            };
        }
    }
    let sum: f64 = weights.iter().sum();
    weights.iter().map(|w| w / sum).collect()
}

pub fn random_event<R: Rng>(rng: &mut R, n: usize) -> Event {
    Event::from_indices(n, (0..n).filter(|_| rng.random_bool(0.5))).expect("indices below n")
}

/// Values uniform in `[−2, 2]`.
pub fn random_values<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random_range(-VALUE_BOUND..=VALUE_BOUND))
        .collect()
}

pub fn random_variable<R: Rng>(rng: &mut R, n: usize) -> RandomVariable {
    RandomVariable::new(random_values(rng, n)).expect("finite values")
}

/// A space of `n` outcomes with a partition into `blocks` blocks.
pub fn random_space_and_partition<R: Rng>(
    rng: &mut R,
    n: usize,
    blocks: usize,
    null_rate: f64,
) -> (ProbabilitySpace, Partition) {
    let block_indices = random_blocks(rng, n, blocks);
    let weights = random_weights(rng, &block_indices, null_rate);
    let space = ProbabilitySpace::new(weights).expect("normalized weights");
    let partition = Partition::from_indices(&space, &block_indices).expect("valid partition");
    (space, partition)
}

/// Draws `n ∈ [1, max_outcomes]`, `N ∈ [1, min(max_blocks, n)]`, then the
/// space, partition, a fair-coin event and a variable with values in `[−2, 2]`.
pub fn random_instance<R: Rng>(rng: &mut R, shape: Shape) -> Instance {
    let n = rng.random_range(1..=shape.max_outcomes.max(1));
    let blocks = rng.random_range(1..=shape.max_blocks.clamp(1, n));
    let (space, partition) = random_space_and_partition(rng, n, blocks, shape.null_rate);
    let event = random_event(rng, n);
    let variable = random_variable(rng, n);
    Instance {
        space,
        partition,
        event,
        variable,
    }
}
