//! Multivariate Binomial law of the counts `ξ_x = Σ_i 1_{x^(i)}` over `n`
//! independent trials, each landing in one terrace-event drawn from an
//! [`EventologicalDistribution`].
//!
//! `P(ξ = n̂)` is the sum of `2^N`-variate multinomial probabilities over
//! all terrace-count vectors whose event marginals equal `n̂`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::events::{EventologicalDistribution, TerraceCountVector};
use crate::lattice::{frechet_bounds, ConstraintSystem};
use crate::real::{Accumulator, Real};
use statrs::function::factorial::ln_factorial;

/// Parameters `(n, {p(X)})` of a multivariate Binomial law.
#[derive(Clone, Debug, PartialEq)]
pub struct BinomialMv<T: Real = f64> {
    dist: EventologicalDistribution<T>,
    trials: u64,
}

impl<T: Real> BinomialMv<T> {
    pub fn new(dist: EventologicalDistribution<T>, trials: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidArgument(
                "trial count must be at least 1".into(),
            ));
        }
        Ok(Self { dist, trials })
    }

    pub fn distribution(&self) -> &EventologicalDistribution<T> {
        &self.dist
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn event_count(&self) -> usize {
        self.dist.events().len()
    }

    fn check_dim(&self, at: &[u64]) -> Result<()> {
        if at.len() != self.event_count() {
            return Err(Error::InvalidArgument(format!(
                "count vector has {} entries, event set has {}",
                at.len(),
                self.event_count()
            )));
        }
        Ok(())
    }

    /// Probability `m_ň = n!/Π n(X)! · Π p(X)^{n(X)}` of a full terrace-count
    /// vector, `n(∅)` included.
    pub fn multinomial_pmf(&self, terraces: &TerraceCountVector) -> Result<T> {
        if terraces.event_count() != self.event_count() || terraces.empty().is_none() {
            return Err(Error::InvalidArgument(
                "terrace counts must cover every subset including the empty set".into(),
            ));
        }
        let dense = terraces.as_dense();
        let total: u64 = dense.iter().sum();
        if total != self.trials {
            return Err(Error::InvalidArgument(format!(
                "terrace counts sum to {total}, expected {}",
                self.trials
            )));
        }
        Ok(self.dense_term(dense))
    }

    fn dense_term(&self, dense: &[u64]) -> T {
        let parts: Vec<(u64, &T)> = dense
            .iter()
            .zip(self.dist.probabilities())
            .map(|(&k, p)| (k, p))
            .collect();
        T::multinomial(self.trials, &parts)
    }

    fn constraints(&self, at: &[u64]) -> Result<ConstraintSystem> {
        let p = self.dist.probabilities();
        Ok(ConstraintSystem::new(at, Some(self.trials))?.with_support(|m| !p[m].is_zero()))
    }

    /// `P(ξ = n̂)`, zero when some `n_x > n`. Uses a closed form when one
    /// applies (partition, one event, two events) and the lattice sum
    /// otherwise.
    pub fn pmf(&self, at: &[u64]) -> Result<T> {
        self.check_dim(at)?;
        if self.dist.is_partition() {
            return self.pmf_partition(at);
        }
        match self.event_count() {
            1 => self.pmf_univariate(at),
            2 => self.pmf_bivariate(at),
            _ => self.pmf_lattice(at),
        }
    }

    /// Lattice sum over every consistent terrace-count vector, no shortcuts.
    pub fn pmf_lattice(&self, at: &[u64]) -> Result<T> {
        self.check_dim(at)?;
        let mut acc = T::Accumulator::default();
        self.constraints(at)?
            .for_each(|dense| acc.add(self.dense_term(dense)));
        Ok(acc.total())
    }

    /// Classical `C(n, k) p_x^k (1 - p_x)^{n-k}`.
    pub fn pmf_univariate(&self, at: &[u64]) -> Result<T> {
        self.check_dim(at)?;
        if self.event_count() != 1 {
            return Err(Error::InvalidArgument("univariate form needs N = 1".into()));
        }
        let k = at[0];
        if k > self.trials {
            return Ok(T::zero());
        }
        let px = self.dist.marginal_by_index(0);
        let qx = T::one() - px.clone();
        Ok(T::multinomial(
            self.trials,
            &[(k, &px), (self.trials - k, &qx)],
        ))
    }

    /// Single sum over `n(xy)` within the Fréchet bounds.
    pub fn pmf_bivariate(&self, at: &[u64]) -> Result<T> {
        self.check_dim(at)?;
        if self.event_count() != 2 {
            return Err(Error::InvalidArgument("bivariate form needs N = 2".into()));
        }
        let n = self.trials;
        let (nx, ny) = (at[0], at[1]);
        let Some((lo, hi)) = frechet_bounds(nx, ny, n) else {
            return Ok(T::zero());
        };
        let mut acc = T::Accumulator::default();
        for nxy in lo..=hi {
            let dense = [n + nxy - nx - ny, nx - nxy, ny - nxy, nxy];
            acc.add(self.dense_term(&dense));
        }
        Ok(acc.total())
    }

    /// Multinomial formula `n!/Π n_x! · Π p_x^{n_x}` on the simplex
    /// `Σ n_x = n`, zero elsewhere. Valid when the events partition the
    /// sample space.
    pub fn pmf_partition(&self, at: &[u64]) -> Result<T> {
        self.check_dim(at)?;
        if !self.dist.is_partition() {
            return Err(Error::InvalidArgument(
                "multinomial form needs a partition (mass on singletons only)".into(),
            ));
        }
        if at.iter().sum::<u64>() != self.trials {
            return Ok(T::zero());
        }
        let p = self.dist.probabilities();
        let parts: Vec<(u64, &T)> = at
            .iter()
            .enumerate()
            .map(|(i, &k)| (k, &p[1 << i]))
            .collect();
        Ok(T::multinomial(self.trials, &parts))
    }

    /// Two-event PMF written through the multicovariations:
    /// `p(∅)^n τ(x)^{n_x} τ(y)^{n_y} Σ 𝒞_n^{n(xy)}(n̂) τ(x,y)^{n(xy)}`.
    pub fn pmf_bivariate_multicov(&self, at: &[u64]) -> Result<T> {
        self.check_dim(at)?;
        let events = self.dist.events();
        if events.len() != 2 {
            return Err(Error::InvalidArgument(
                "multicovariation form needs N = 2".into(),
            ));
        }
        let (x, y) = (events.labels()[0].as_str(), events.labels()[1].as_str());
        let tau_x = self.dist.multicovariation(&[x])?;
        let tau_y = self.dist.multicovariation(&[y])?;
        let tau_xy = self.dist.multicovariation(&[x, y])?;
        let n = self.trials;
        let (nx, ny) = (at[0], at[1]);
        let Some((lo, hi)) = frechet_bounds(nx, ny, n) else {
            return Ok(T::zero());
        };
        let one = T::one();
        let mut acc = T::Accumulator::default();
        for nxy in lo..=hi {
            let coefficient = T::multinomial(
                n,
                &[
                    (n + nxy - nx - ny, &one),
                    (nx - nxy, &one),
                    (ny - nxy, &one),
                    (nxy, &one),
                ],
            );
            acc.add(coefficient * tau_xy.powu(nxy));
        }
        Ok(self.dist.p_empty().powu(n) * tau_x.powu(nx) * tau_y.powu(ny) * acc.total())
    }

    /// `(n p_x)`.
    pub fn mean_vector(&self) -> Vec<T> {
        let n = T::from_count(self.trials);
        (0..self.event_count())
            .map(|i| n.clone() * self.dist.marginal_by_index(i))
            .collect()
    }

    /// `n` times the indicator covariance matrix: `n p_x(1 - p_x)` on the
    /// diagonal and `n (P(x ∩ y) - p_x p_y)` off it.
    pub fn covariance_matrix(&self) -> DMatrix<T> {
        let n = T::from_count(self.trials);
        let k = self.event_count();
        DMatrix::from_fn(k, k, |i, j| n.clone() * self.dist.covariance_by_index(i, j))
    }

    /// Every cell of the box `[0, n]^N` with its probability, last event
    /// varying fastest.
    pub fn table(&self) -> Result<Vec<(Vec<u64>, T)>> {
        box_cells(&vec![self.trials; self.event_count()])
            .map(|cell| {
                let p = self.pmf(&cell)?;
                Ok((cell, p))
            })
            .collect()
    }
}

impl BinomialMv<f64> {
    /// Natural log of [`BinomialMv::pmf`], `-∞` for impossible counts.
    /// Each lattice term is kept in log space and combined with a running
    /// log-sum-exp.
    pub fn log_pmf(&self, at: &[u64]) -> Result<f64> {
        self.check_dim(at)?;
        let p = self.dist.probabilities();
        let ln_p: Vec<f64> = p.iter().map(|v| v.ln()).collect();
        let ln_n = ln_factorial(self.trials);
        let mut acc = LogSumExp::default();
        self.constraints(at)?.for_each(|dense| {
            let mut term = ln_n;
            for (mask, &k) in dense.iter().enumerate() {
                if k > 0 {
                    term += k as f64 * ln_p[mask] - ln_factorial(k);
                }
            }
            acc.add(term);
        });
        Ok(acc.value())
    }

    /// Covariance of the centred, normalized counts `(ξ_x - n p_x)/σ_x`:
    /// `n` times the indicator correlation matrix.
    pub fn standardized_covariance_matrix(&self) -> Result<DMatrix<f64>> {
        let k = self.event_count();
        let n = self.trials as f64;
        let mut out = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                out[(i, j)] = n * self.dist.correlation_by_index(i, j)?;
            }
        }
        Ok(out)
    }
}

/// Streaming `log Σ exp(t_i)`.
#[derive(Debug, Clone, Copy)]
struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }
}

impl LogSumExp {
    fn add(&mut self, term: f64) {
        if term == f64::NEG_INFINITY {
            return;
        }
        if term > self.max {
            self.scaled = self.scaled * (self.max - term).exp() + 1.0;
            self.max = term;
        } else {
            self.scaled += (term - self.max).exp();
        }
    }

    fn value(self) -> f64 {
        if self.scaled == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

/// Cells of `[0, bounds_0] × … × [0, bounds_{N-1}]` in odometer order.
pub fn box_cells(bounds: &[u64]) -> impl Iterator<Item = Vec<u64>> + '_ {
    let mut next = Some(vec![0u64; bounds.len()]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        for i in (0..succ.len()).rev() {
            if succ[i] < bounds[i] {
                succ[i] += 1;
                next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    })
}
