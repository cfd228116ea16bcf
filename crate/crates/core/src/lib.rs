//! Conditional expectation on finite probability spaces.
//!
//! A finite space `(Ω, F, P)` is a weight vector over outcomes. A sub-σ-algebra is
//! generated by a partition of `Ω` into blocks of positive mass, and the
//! conditional expectation of a random variable given that σ-algebra is computed
//! two independent ways:
//!
//! * the closed form `αⱼ = E(X·1_{Bⱼ}) / P(Bⱼ)` ([`conditional::cond_expectation`]);
//! * the unique minimizer of the energy `J(Y) = ½E(Y²) − E(Y·X)` over measurable
//!   `Y` ([`variational::EnergyProblem::minimize`]).
//!
//! The [`lp`] module carries the `L^p` machinery (norms, inner product) together
//! with executable checkers for Hölder, Clarkson and norm monotonicity, and
//! [`suites`] runs seeded randomized property suites over all of it.
//!
//! ```
//! use probvar::{ProbabilitySpace, Partition, conditional};
//!
//! let space = ProbabilitySpace::new(vec![0.5, 0.3, 0.2]).unwrap();
//! let blocks = vec![space.event([0]).unwrap(), space.event([1, 2]).unwrap()];
//! let partition = Partition::new(&space, blocks).unwrap();
//! let a = space.event([0, 1]).unwrap();
//!
//! let p = conditional::total_probability(&space, &a, &partition).unwrap();
//! assert!((p - 0.8).abs() < 1e-12);
//! ```

pub mod cli;
pub mod conditional;
mod error;
pub mod lp;
pub mod random;
pub mod sigma;
pub mod space;
pub mod suites;
pub mod variational;

pub use conditional::{ConditionalExpectation, PropertyReport};
pub use error::{Error, Result};
pub use lp::{InequalityReport, PNorm, RandomVariable};
pub use sigma::{Partition, SigmaAlgebra};
pub use space::{Event, ProbabilitySpace};
pub use variational::{EnergyProblem, Method, SolverConfig, SolverResult};

/// Absolute tolerance used by every identity check in the crate.
pub const IDENTITY_TOL: f64 = 1e-12;
