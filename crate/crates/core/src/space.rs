//! Finite probability spaces and their events.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest distance from 1 a weight sum may have before it is rejected.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// A finite outcome set `Ω = {0, .., n-1}` with a probability measure given by
/// one weight per outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilitySpace {
    weights: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl ProbabilitySpace {
    /// Validates `weights` and renormalizes them so they sum to one.
    ///
    /// Sums within [`NORMALIZATION_TOL`] of 1 are divided out; anything further
    /// away is rejected with [`Error::NotNormalized`].
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty);
        }
        for (index, &weight) in weights.iter().enumerate() {
            if !weight.is_finite() {
                return Err(Error::NonFiniteWeight { index, weight });
            }
            if weight < 0.0 {
                return Err(Error::NegativeWeight { index, weight });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { sum });
        }
        let weights = weights.into_iter().map(|w| w / sum).collect();
        Ok(Self {
            weights,
            labels: None,
        })
    }

    pub fn with_labels(weights: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: weights.len(),
                found: labels.len(),
            });
        }
        let mut space = Self::new(weights)?;
        space.labels = Some(labels);
        Ok(space)
    }

    /// Uniform measure on `n` outcomes.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        Self::new(vec![1.0 / n as f64; n])
    }

    /// Number of outcomes.
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, outcome: usize) -> f64 {
        self.weights[outcome]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of an outcome: its label if present, `ω{i+1}` otherwise.
    pub fn label(&self, outcome: usize) -> String {
        match &self.labels {
            Some(labels) => labels[outcome].clone(),
            None => format!("ω{}", outcome + 1),
        }
    }

    /// Outcomes that carry positive mass.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(i, _)| i)
    }

    pub fn event<I: IntoIterator<Item = usize>>(&self, members: I) -> Result<Event> {
        Event::from_indices(self.n(), members)
    }

    pub fn empty_event(&self) -> Event {
        Event::empty(self.n())
    }

    /// The sure event `Ω`.
    pub fn full_event(&self) -> Event {
        Event::full(self.n())
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

    /// `P(e)`, the sum of member weights. `P(Ω)` is exactly 1.
    pub fn prob(&self, e: &Event) -> Result<f64> {
        self.check_event(e)?;
        if e.is_full() {
            return Ok(1.0);
        }
        Ok(e.iter().fold(0.0, |acc, i| acc + self.weights[i]))
    }

    pub fn complement(&self, e: &Event) -> Result<Event> {
        self.check_event(e)?;
        Ok(e.complement())
    }

    /// `P(a | b) = P(a ∩ b) / P(b)`.
    pub fn cond_prob(&self, a: &Event, b: &Event) -> Result<f64> {
        self.check_event(a)?;
        self.check_event(b)?;
        if b.is_full() {
            return self.prob(a);
        }
        let pb = self.prob(b)?;
        if pb <= 0.0 {
            return Err(Error::ZeroConditioningEvent);
        }
        Ok(self.prob(&a.intersect(b)?)? / pb)
    }
}

/// A subset of the outcomes of a space with `n` outcomes, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Event {
    n: usize,
    words: SmallVec<[u64; 1]>,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl Event {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            words: SmallVec::from_elem(0, word_count(n)),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut e = Self::empty(n);
        for w in e.words.iter_mut() {
            *w = u64::MAX;
        }
        e.trim();
        e
    }

    /// Builds an event from outcome indices; duplicates are ignored.
    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Result<Self> {
        let mut e = Self::empty(n);
        for index in members {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, n });
            }
            e.words[index / 64] |= 1 << (index % 64);
        }
        Ok(e)
    }

    // Clears the unused high bits of the last word.
    fn trim(&mut self) {
        let rem = self.n % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Size of the ambient outcome set.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, outcome: usize) -> bool {
        outcome < self.n && self.words[outcome / 64] >> (outcome % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    /// Member indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn complement(&self) -> Event {
        let mut e = Self {
            n: self.n,
            words: self.words.iter().map(|w| !w).collect(),
        };
        e.trim();
        e
    }

    fn check_same(&self, other: &Event) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SpaceMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Event, op: impl Fn(u64, u64) -> u64) -> Result<Event> {
        self.check_same(other)?;
        Ok(Event {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }

    pub fn union(&self, other: &Event) -> Result<Event> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersect(&self, other: &Event) -> Result<Event> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Event) -> Result<Event> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &Event) -> Result<bool> {
        self.check_same(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & !b == 0))
    }

    pub fn is_disjoint(&self, other: &Event) -> Result<bool> {
        self.check_same(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & b == 0))
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "ω{}", i + 1)?;
        }
        write!(f, "}}")
    }
}
