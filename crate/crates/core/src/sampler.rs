//! Seeded random variates for both laws and frequency tables for Monte Carlo
//! checks.
//!
//! Randomness comes from ChaCha20 ([`rand_chacha::ChaCha20Rng`]). A seed
//! `s` and stream id `k` map to `ChaCha20Rng::seed_from_u64(s)` followed by
//! `set_stream(k)`; the single-seed entry points use stream `0`. Uniforms
//! are `(next_u64() >> 11) · 2^-53`, in `[0, 1)`.
//!
//! Terrace outcomes are drawn by inverse CDF over the canonical mask order.
//! Poisson variates use sequential inversion for `λ < 10` and the PTRS
//! transformed-rejection method (Hörmann, 1993) for `λ ≥ 10`.

use std::collections::BTreeMap;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use statrs::function::factorial::ln_factorial;

use crate::binomial::BinomialMv;
use crate::events::{CountVector, SubsetMask, TerraceCountVector};
use crate::poisson::PoissonMv;
use crate::real::Real;

/// Intensity at which [`RandomStream::poisson`] switches from inversion to
/// PTRS.
pub const POISSON_INVERSION_LIMIT: f64 = 10.0;

/// Deterministic uniform source.
#[derive(Clone, Debug)]
pub struct RandomStream {
    rng: ChaCha20Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Independent stream `stream` under the same seed, for parallel use.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Poisson variate with mean `lambda`.
    pub fn poisson(&mut self, lambda: f64) -> u64 {
        if lambda <= 0.0 {
            0
        } else if lambda < POISSON_INVERSION_LIMIT {
            self.poisson_inversion(lambda)
        } else {
            self.poisson_ptrs(lambda)
        }
    }

    fn poisson_inversion(&mut self, lambda: f64) -> u64 {
        let u = self.uniform();
        let mut k = 0u64;
        let mut p = (-lambda).exp();
        let mut cdf = p;
        while u >= cdf {
            k += 1;
            p *= lambda / k as f64;
            let next = cdf + p;
            if next == cdf {
                // Rounding exhausted the tail.
                break;
            }
            cdf = next;
        }
        k
    }

    fn poisson_ptrs(&mut self, lambda: f64) -> u64 {
        let slam = lambda.sqrt();
        let loglam = lambda.ln();
        let b = 0.931 + 2.53 * slam;
        let a = -0.059 + 0.02483 * b;
        let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        let vr = 0.9277 - 3.6224 / (b - 2.0);
        loop {
            let u = self.uniform() - 0.5;
            let v = self.uniform();
            let us = 0.5 - u.abs();
            let k = ((2.0 * a / us + b) * u + lambda + 0.43).floor();
            if us >= 0.07 && v <= vr {
                return k as u64;
            }
            if k < 0.0 || (us < 0.013 && v > us) {
                continue;
            }
            let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
            let rhs = -lambda + k * loglam - ln_factorial(k as u64);
            if lhs <= rhs {
                return k as u64;
            }
        }
    }
}

/// Draws from the multivariate Bernoulli scheme of a [`BinomialMv`].
#[derive(Clone, Debug)]
pub struct BernoulliSampler {
    cumulative: Vec<f64>,
    trials: u64,
    events: usize,
    stream: RandomStream,
}

impl BernoulliSampler {
    pub fn new<T: Real>(spec: &BinomialMv<T>, stream: RandomStream) -> Self {
        let mut running = 0.0;
        let cumulative = spec
            .distribution()
            .probabilities()
            .iter()
            .map(|p| {
                running += p.to_f64();
                running
            })
            .collect();
        Self {
            cumulative,
            trials: spec.trials(),
            events: spec.event_count(),
            stream,
        }
    }

    /// Terrace of one trial.
    pub fn draw_terrace(&mut self) -> SubsetMask {
        let total = *self.cumulative.last().expect("at least two subsets");
        let u = self.stream.uniform() * total;
        let idx = self.cumulative.partition_point(|&c| c <= u);
        // Guards against `u` landing on the rounded top of the table.
        idx.min(self.cumulative.len() - 1)
    }

    /// `n_x` = number of trials whose terrace contains `x`.
    pub fn sample_counts(&mut self) -> CountVector {
        let mut counts = vec![0u64; self.events];
        for _ in 0..self.trials {
            let terrace = self.draw_terrace();
            for (i, c) in counts.iter_mut().enumerate() {
                if terrace & (1 << i) != 0 {
                    *c += 1;
                }
            }
        }
        CountVector(counts)
    }

    /// Number of trials landing in each terrace, `n(∅)` included.
    pub fn sample_terraces(&mut self) -> TerraceCountVector {
        let mut counts = vec![0u64; self.cumulative.len()];
        for _ in 0..self.trials {
            counts[self.draw_terrace()] += 1;
        }
        TerraceCountVector::from_dense(counts, true)
    }
}

/// Draws from a [`PoissonMv`] as sums of independent per-terrace Poisson
/// counts `K(X) ~ Poisson(λ(X))`.
#[derive(Clone, Debug)]
pub struct PoissonSampler {
    lambda: Vec<f64>,
    events: usize,
    stream: RandomStream,
}

impl PoissonSampler {
    pub fn new(spec: &PoissonMv, stream: RandomStream) -> Self {
        Self {
            lambda: spec.intensities().as_dense().to_vec(),
            events: spec.event_count(),
            stream,
        }
    }

    pub fn sample(&mut self) -> CountVector {
        let mut counts = vec![0u64; self.events];
        for (mask, &lambda) in self.lambda.iter().enumerate().skip(1) {
            let k = self.stream.poisson(lambda);
            if k == 0 {
                continue;
            }
            for (i, c) in counts.iter_mut().enumerate() {
                if mask & (1 << i) != 0 {
                    *c += k;
                }
            }
        }
        CountVector(counts)
    }
}

/// One replication of the Bernoulli scheme from `seed`.
pub fn sample_bernoulli_scheme<T: Real>(spec: &BinomialMv<T>, seed: u64) -> CountVector {
    BernoulliSampler::new(spec, RandomStream::new(seed)).sample_counts()
}

/// Terrace counts of the same trial stream as [`sample_bernoulli_scheme`].
pub fn sample_terrace_counts<T: Real>(spec: &BinomialMv<T>, seed: u64) -> TerraceCountVector {
    BernoulliSampler::new(spec, RandomStream::new(seed)).sample_terraces()
}

/// One Poisson draw from `seed`.
pub fn sample_poisson(spec: &PoissonMv, seed: u64) -> CountVector {
    PoissonSampler::new(spec, RandomStream::new(seed)).sample()
}

/// Exact frequency table of observed values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalDistribution<K: Ord = CountVector> {
    counts: BTreeMap<K, u64>,
    total: u64,
}

impl<K: Ord> Default for EmpiricalDistribution<K> {
    fn default() -> Self {
        Self {
            counts: BTreeMap::new(),
            total: 0,
        }
    }
}

impl<K: Ord> EmpiricalDistribution<K> {
    pub fn add(&mut self, value: K) {
        *self.counts.entry(value).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn merge(&mut self, other: Self) {
        for (k, c) in other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
        self.total += other.total;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, value: &K) -> u64 {
        self.counts.get(value).copied().unwrap_or(0)
    }

    /// Relative frequency; zero for an empty table.
    pub fn frequency(&self, value: &K) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(value) as f64 / self.total as f64
        }
    }

    /// Observed values in ascending order with their counts.
    pub fn iter(&self) -> impl Iterator<Item = (&K, u64)> {
        self.counts.iter().map(|(k, &c)| (k, c))
    }
}

impl<K: Ord> FromIterator<K> for EmpiricalDistribution<K> {
    fn from_iter<I: IntoIterator<Item = K>>(iter: I) -> Self {
        let mut out = Self::default();
        for v in iter {
            out.add(v);
        }
        out
    }
}

/// Frequency table of a stream of samples.
pub fn accumulate<K: Ord>(samples: impl IntoIterator<Item = K>) -> EmpiricalDistribution<K> {
    samples.into_iter().collect()
}
