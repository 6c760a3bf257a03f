//! Multivariate Binomial and Poisson distributions of dependent events.
//!
//! A finite set of events `𝔛` is described by its eventological
//! distribution `{p(X), X ⊆ 𝔛}`: the probability that exactly the events of
//! `X` occur. Repeating the experiment `n` times and counting how often each
//! event occurs gives the multivariate Binomial law ([`BinomialMv`]); its
//! rare-event limit with intensities `λ(X)` is the multivariate Poisson law
//! ([`PoissonMv`]). Both probabilities are sums over the lattice of terrace
//! counts with fixed event marginals ([`lattice`]).
//!
//! ```
//! use eventodist::{BinomialMv, EventSet, EventologicalDistribution};
//!
//! let events = EventSet::new(["x", "y"]).unwrap();
//! // p(∅), p({x}), p({y}), p({x,y}) in mask order.
//! let dist = EventologicalDistribution::new(events, vec![0.4, 0.2, 0.3, 0.1]).unwrap();
//! let law = BinomialMv::new(dist, 2).unwrap();
//! let p = law.pmf(&[1, 1]).unwrap();
//! assert!((p - 0.2).abs() < 1e-15);
//! ```
//!
//! Every probability-side type is generic over [`Real`]; use
//! `num_rational::BigRational` for exact arithmetic.

pub mod binomial;
pub mod cli;
pub mod error;
pub mod events;
pub mod json;
pub mod lattice;
pub mod output;
pub mod poisson;
pub mod real;
pub mod sampler;

pub use binomial::BinomialMv;
pub use error::{Error, Result};
pub use events::{
    CountVector, EventSet, EventologicalDistribution, PoissonIntensities, SubsetMask,
    TerraceCountVector,
};
pub use lattice::ConstraintSystem;
pub use poisson::{approximate_binomial_pmf, convergence_report, ConvergenceRow, PoissonMv};
pub use real::Real;
pub use sampler::{
    accumulate, sample_bernoulli_scheme, sample_poisson, sample_terrace_counts,
    EmpiricalDistribution, RandomStream,
};
