//! Partitions of `Ω` and the σ-algebras they generate.
//!
//! A partition `B₁..B_N` generates the σ-algebra of all unions `∪_{t∈τ} B_t`,
//! `τ ⊆ {1..N}`. Member `τ` is addressed by the bitmask whose bit `t` is set
//! iff block `t` belongs to the union, so there are exactly `2^N` members and
//! membership of an arbitrary event reduces to checking that it meets every
//! block either fully or not at all.

use crate::error::{Error, Result};
use crate::lp::RandomVariable;
use crate::space::{Event, ProbabilitySpace};

/// Largest block count for which the member list is materialized.
pub const ENUMERATION_LIMIT: usize = 20;

/// Disjoint cover of `Ω` by blocks of positive probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    blocks: Vec<Event>,
    block_probs: Vec<f64>,
    support: Event,
}

impl Partition {
    /// Validates `blocks` against `space`. Block order is kept and defines
    /// coefficient indexing everywhere downstream.
    pub fn new(space: &ProbabilitySpace, blocks: Vec<Event>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::EmptyPartition);
        }
        let n = space.n();
        let mut seen = Event::empty(n);
        for b in &blocks {
            space.check_event(b)?;
            if let Some(outcome) = seen.intersect(b)?.iter().next() {
                return Err(Error::NotDisjoint { outcome });
            }
            seen = seen.union(b)?;
        }
        if let Some(outcome) = seen.complement().iter().next() {
            return Err(Error::NotCovering { outcome });
        }
        let mut block_probs = Vec::with_capacity(blocks.len());
        for (block, b) in blocks.iter().enumerate() {
            let p = space.prob(b)?;
            if p <= 0.0 {
                return Err(Error::ZeroMassBlock { block });
            }
            block_probs.push(p);
        }
        let support = space.event(space.support())?;
        Ok(Self {
            blocks,
            block_probs,
            support,
        })
    }

    /// Convenience constructor from lists of outcome indices.
    pub fn from_indices(space: &ProbabilitySpace, blocks: &[Vec<usize>]) -> Result<Self> {
        let events = blocks
            .iter()
            .map(|b| space.event(b.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, events)
    }

    /// The one-block partition `{Ω}`.
    pub fn trivial(space: &ProbabilitySpace) -> Self {
        Self::new(space, vec![space.full_event()]).expect("Ω always has mass 1")
    }

    /// The partition into singletons of positive mass. Null outcomes are
    /// attached to the first block.
    pub fn discrete(space: &ProbabilitySpace) -> Result<Self> {
        let support: Vec<usize> = space.support().collect();
        let nulls: Vec<usize> = (0..space.n()).filter(|&i| space.weight(i) == 0.0).collect();
        let mut blocks: Vec<Vec<usize>> = support.iter().map(|&i| vec![i]).collect();
        blocks[0].extend(nulls);
        Self::from_indices(space, &blocks)
    }

    pub fn n(&self) -> usize {
        self.support.n()
    }

    /// Number of blocks `N`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Event] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> &Event {
        &self.blocks[j]
    }

    /// Cached `P(Bⱼ)`.
    pub fn block_probs(&self) -> &[f64] {
        &self.block_probs
    }

    /// Outcomes of positive weight in the space the partition was built on.
    pub fn support(&self) -> &Event {
        &self.support
    }

    /// Index of the block containing `outcome`.
    pub fn block_of(&self, outcome: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(outcome))
    }

    pub(crate) fn check_event(&self, e: &Event) -> Result<()> {
        if e.n() != self.n() {
            return Err(Error::SpaceMismatch {
                left: self.n(),
                right: e.n(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_variable(&self, x: &RandomVariable) -> Result<()> {
        if x.n() != self.n() {
            return Err(Error::SpaceMismatch {
                left: self.n(),
                right: x.n(),
            });
        }
        Ok(())
    }

    /// The union of the blocks selected by the bits of `mask`.
    pub fn union_of_mask(&self, mask: u64) -> Event {
        let mut e = Event::empty(self.n());
        for (t, b) in self.blocks.iter().enumerate().take(64) {
            if mask >> t & 1 == 1 {
                e = e.union(b).expect("blocks share the space");
            }
        }
        e
    }
}

/// The σ-algebra `σ(B)` generated by a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaAlgebra {
    partition: Partition,
    enumerated: Option<Vec<Event>>,
}

impl SigmaAlgebra {
    /// Builds `σ(B)`; the `2^N` members are materialized when
    /// `N ≤ ENUMERATION_LIMIT`, with member `k` equal to `union_of_mask(k)`.
    pub fn generate(partition: Partition) -> Self {
        let enumerated = (partition.len() <= ENUMERATION_LIMIT).then(|| {
            let count = 1u64 << partition.len();
            let n = partition.n();
            let mut members: Vec<Event> = Vec::with_capacity(count as usize);
            members.push(Event::empty(n));
            // member k = member (k without its top bit) ∪ block(top bit)
            for k in 1..count {
                let top = 63 - k.leading_zeros() as usize;
                let rest = &members[(k & !(1 << top)) as usize];
                let e = rest.union(partition.block(top)).expect("same space");
                members.push(e);
            }
            members
        });
        Self {
            partition,
            enumerated,
        }
    }

    /// Builds `σ(B)` without materializing its members.
    pub fn generate_lazy(partition: Partition) -> Self {
        Self {
            partition,
            enumerated: None,
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Number of members, `2^N`; `None` when it does not fit in a `u128`.
    pub fn member_count(&self) -> Option<u128> {
        1u128.checked_shl(self.partition.len() as u32)
    }

    /// Materialized members, present when `N ≤ ENUMERATION_LIMIT`.
    pub fn members(&self) -> Option<&[Event]> {
        self.enumerated.as_deref()
    }

    /// Whether `e` is a union of blocks: every block is met fully or not at all.
    pub fn contains(&self, e: &Event) -> Result<bool> {
        self.partition.check_event(e)?;
        for b in self.partition.blocks() {
            let meet = e.intersect(b)?;
            if !(meet.is_empty() || meet == *b) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership by linear search through the materialized members.
    pub fn contains_by_search(&self, e: &Event) -> Option<bool> {
        self.enumerated.as_ref().map(|m| m.iter().any(|f| f == e))
    }

    /// Whether `x` is constant on each block, comparing only outcomes of
    /// positive weight with exact equality.
    pub fn is_measurable(&self, x: &RandomVariable) -> Result<bool> {
        self.is_measurable_within(x, 0.0)
    }

    /// Like [`is_measurable`](Self::is_measurable) but accepts a spread of
    /// `tol` inside each block.
    pub fn is_measurable_within(&self, x: &RandomVariable, tol: f64) -> Result<bool> {
        self.partition.check_variable(x)?;
        Ok(self.first_non_constant_block(x, tol).is_none())
    }

    fn first_non_constant_block(&self, x: &RandomVariable, tol: f64) -> Option<usize> {
        let support = self.partition.support();
        let values = x.values();
        self.partition.blocks().iter().position(|b| {
            let mut visible = b.iter().filter(|&i| support.contains(i)).map(|i| values[i]);
            match visible.next() {
                Some(first) => visible.any(|v| (v - first).abs() > tol),
                None => false,
            }
        })
    }

    /// The coefficients `αⱼ` with `x = Σ αⱼ 1_{Bⱼ}` almost surely.
    pub fn coefficients(&self, x: &RandomVariable) -> Result<Vec<f64>> {
        self.partition.check_variable(x)?;
        if let Some(block) = self.first_non_constant_block(x, 0.0) {
            return Err(Error::NotMeasurable { block });
        }
        let support = self.partition.support();
        Ok(self
            .partition
            .blocks()
            .iter()
            .map(|b| {
                let i = b
                    .iter()
                    .find(|&i| support.contains(i))
                    .expect("every block has positive mass");
                x.values()[i]
            })
            .collect())
    }

    /// `Σ αⱼ 1_{Bⱼ}`.
    pub fn variable(&self, coeffs: &[f64]) -> Result<RandomVariable> {
        if coeffs.len() != self.partition.len() {
            return Err(Error::LengthMismatch {
                expected: self.partition.len(),
                found: coeffs.len(),
            });
        }
        let mut values = vec![0.0; self.partition.n()];
        for (b, &c) in self.partition.blocks().iter().zip(coeffs) {
            for i in b.iter() {
                values[i] = c;
            }
        }
        RandomVariable::new(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn die6() -> (ProbabilitySpace, Partition) {
        let s = ProbabilitySpace::uniform(6).unwrap();
        let p = Partition::from_indices(&s, &[vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        (s, p)
    }

    fn skew() -> (ProbabilitySpace, Partition) {
        let s = ProbabilitySpace::new(vec![0.5, 0.3, 0.2]).unwrap();
        let p = Partition::from_indices(&s, &[vec![0], vec![1, 2]]).unwrap();
        (s, p)
    }

    #[test]
    fn partition_validation() {
        let (s, p) = die6();
        for &bp in p.block_probs() {
            assert!((bp - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(
            Partition::from_indices(&s, &[vec![0, 1], vec![1, 2]]),
            Err(Error::NotDisjoint { outcome: 1 })
        );
        assert_eq!(
            Partition::from_indices(&s, &[vec![0, 1], vec![2, 3]]),
            Err(Error::NotCovering { outcome: 4 })
        );
        assert_eq!(Partition::new(&s, vec![]), Err(Error::EmptyPartition));
        let t = Partition::trivial(&s);
        assert_eq!(t.len(), 1);
        assert_eq!(t.block_probs(), &[1.0]);

        let z = ProbabilitySpace::new(vec![0.5, 0.0, 0.5]).unwrap();
        assert_eq!(
            Partition::from_indices(&z, &[vec![0], vec![1], vec![2]]),
            Err(Error::ZeroMassBlock { block: 1 })
        );
        // a null outcome inside a block with mass is fine
        assert!(Partition::from_indices(&z, &[vec![0, 1], vec![2]]).is_ok());
        assert_eq!(Partition::discrete(&z).unwrap().len(), 2);
    }

    #[test]
    fn generated_members() {
        let (s, p) = die6();
        let sigma = SigmaAlgebra::generate(p);
        let members = sigma.members().unwrap();
        assert_eq!(members.len(), 8);
        assert_eq!(sigma.member_count(), Some(8));
        assert!(members.contains(&s.empty_event()));
        assert!(members.contains(&s.full_event()));
        for (k, m) in members.iter().enumerate() {
            assert_eq!(*m, sigma.partition().union_of_mask(k as u64));
        }

        let sigma = SigmaAlgebra::generate(Partition::trivial(&s));
        assert_eq!(sigma.members().unwrap(), &[s.empty_event(), s.full_event()]);

        let (k, kp) = skew();
        let sigma = SigmaAlgebra::generate(kp);
        let expected = vec![
            k.empty_event(),
            k.event([0]).unwrap(),
            k.event([1, 2]).unwrap(),
            k.full_event(),
        ];
        assert_eq!(sigma.members().unwrap(), expected.as_slice());
    }

    #[test]
    fn large_partitions_are_not_materialized() {
        let s = ProbabilitySpace::uniform(25).unwrap();
        let p = Partition::discrete(&s).unwrap();
        let sigma = SigmaAlgebra::generate(p);
        assert!(sigma.members().is_none());
        assert_eq!(sigma.member_count(), Some(1 << 25));
        assert!(sigma.contains(&s.event([3, 7, 24]).unwrap()).unwrap());
    }

    #[test]
    fn membership() {
        let (s, p) = die6();
        let sigma = SigmaAlgebra::generate(p);
        let b1_b3 = s.event([0, 1, 4, 5]).unwrap();
        assert!(sigma.contains(&b1_b3).unwrap());
        assert!(!sigma.contains(&s.event([1, 3, 5]).unwrap()).unwrap());
        assert!(sigma.contains(&s.empty_event()).unwrap());
        assert!(sigma.contains(&Event::empty(3)).is_err());
        assert_eq!(sigma.contains_by_search(&b1_b3), Some(true));
    }

    #[test]
    fn measurability() {
        let (s, p) = die6();
        let sigma = SigmaAlgebra::generate(p);
        assert!(sigma
            .is_measurable(&RandomVariable::constant(6, 0.5))
            .unwrap());
        let id = RandomVariable::new((1..=6).map(f64::from).collect()).unwrap();
        assert!(!sigma.is_measurable(&id).unwrap());
        assert_eq!(
            sigma.coefficients(&id),
            Err(Error::NotMeasurable { block: 0 })
        );

        let (_, kp) = skew();
        let sigma_k = SigmaAlgebra::generate(kp);
        let xi = RandomVariable::new(vec![1.0, 0.6, 0.6]).unwrap();
        assert!(sigma_k.is_measurable(&xi).unwrap());
        assert_eq!(sigma_k.coefficients(&xi).unwrap(), vec![1.0, 0.6]);
        assert_eq!(
            sigma_k.coefficients(&RandomVariable::zeros(3)).unwrap(),
            vec![0.0, 0.0]
        );

        let ib2 = s.indicator(&s.event([2, 3]).unwrap()).unwrap();
        assert_eq!(sigma.coefficients(&ib2).unwrap(), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn null_outcomes_are_ignored() {
        let z = ProbabilitySpace::new(vec![0.4, 0.0, 0.6]).unwrap();
        let sigma =
            SigmaAlgebra::generate(Partition::from_indices(&z, &[vec![0, 1], vec![2]]).unwrap());
        let x = RandomVariable::new(vec![2.0, 99.0, -1.0]).unwrap();
        assert!(sigma.is_measurable(&x).unwrap());
        assert_eq!(sigma.coefficients(&x).unwrap(), vec![2.0, -1.0]);
    }

    #[test]
    fn tolerant_measurability() {
        let (_, kp) = skew();
        let sigma = SigmaAlgebra::generate(kp);
        let x = RandomVariable::new(vec![1.0, 0.6, 0.6 + 1e-13]).unwrap();
        assert!(!sigma.is_measurable(&x).unwrap());
        assert!(sigma.is_measurable_within(&x, 1e-12).unwrap());
    }

    #[test]
    fn coefficient_round_trip() {
        let (_, p) = die6();
        let sigma = SigmaAlgebra::generate(p);
        let alpha = [0.1, -2.5, 7.0];
        let x = sigma.variable(&alpha).unwrap();
        assert_eq!(sigma.coefficients(&x).unwrap(), alpha);
        assert!(sigma.variable(&[1.0]).is_err());
    }
}
