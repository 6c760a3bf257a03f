//! Multivariate Poisson law with terrace intensities `λ(X)`, its moments,
//! the Poisson approximation of the multivariate Binomial law and a
//! convergence sweep comparing the two.

use nalgebra::DMatrix;
use statrs::function::factorial::{factorial, ln_factorial};

use crate::binomial::{box_cells, BinomialMv};
use crate::error::{Error, Result};
use crate::events::{EventologicalDistribution, PoissonIntensities};
use crate::lattice::ConstraintSystem;
use crate::real::{Accumulator, CompensatedSum};

/// Default total tail mass allowed outside a truncation box.
pub const DEFAULT_TAIL_MASS: f64 = 1e-12;

/// Parameters `{λ(X), X ≠ ∅}` of a multivariate Poisson law.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonMv {
    intensities: PoissonIntensities,
}

impl PoissonMv {
    pub fn new(intensities: PoissonIntensities) -> Self {
        Self { intensities }
    }

    pub fn intensities(&self) -> &PoissonIntensities {
        &self.intensities
    }

    pub fn event_count(&self) -> usize {
        self.intensities.events().len()
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

    /// `P(ξ = n̂) = e^{-λ} Σ_ň Π_{X≠∅} λ(X)^{n(X)} / n(X)!`.
    pub fn pmf(&self, at: &[u64]) -> Result<f64> {
        self.check_dim(at)?;
        if self.event_count() == 2 {
            self.pmf_bivariate(at)
        } else {
            self.pmf_lattice(at)
        }
    }

    /// General lattice sum.
    pub fn pmf_lattice(&self, at: &[u64]) -> Result<f64> {
        self.check_dim(at)?;
        let lambda = self.intensities.as_dense();
        let cs = ConstraintSystem::new(at, None)?.with_support(|m| m != 0 && lambda[m] > 0.0);
        let mut acc = CompensatedSum::default();
        cs.for_each(|dense| acc.add(term(dense, lambda)));
        Ok((-self.intensities.total()).exp() * acc.total())
    }

    /// Single sum over `n(xy) ∈ [0, min(n_x, n_y)]`.
    pub fn pmf_bivariate(&self, at: &[u64]) -> Result<f64> {
        self.check_dim(at)?;
        if self.event_count() != 2 {
            return Err(Error::InvalidArgument("bivariate form needs N = 2".into()));
        }
        let li = &self.intensities;
        let lambda = li.as_dense();
        let (nx, ny) = (at[0], at[1]);
        let mut acc = CompensatedSum::default();
        for nxy in 0..=nx.min(ny) {
            acc.add(term(&[0, nx - nxy, ny - nxy, nxy], lambda));
        }
        Ok((-li.total()).exp() * acc.total())
    }

    /// One-dimensional marginal `e^{-λ_x} λ_x^k / k!`.
    pub fn marginal_pmf(&self, x: &str, k: u64) -> Result<f64> {
        let lambda_x = self.intensities.lambda_marginal(x)?;
        Ok(poisson_pmf(lambda_x, k))
    }

    /// `(λ_x)`.
    pub fn mean_vector(&self) -> Vec<f64> {
        (0..self.event_count())
            .map(|i| self.intensities.marginal_by_index(i))
            .collect()
    }

    /// `λ_x` on the diagonal, `λ_{xy} = Σ_{X ⊇ {x,y}} λ(X)` off it.
    pub fn covariance_matrix(&self) -> DMatrix<f64> {
        let k = self.event_count();
        DMatrix::from_fn(k, k, |i, j| {
            self.intensities.superset_sum((1 << i) | (1 << j))
        })
    }

    /// Per-event box `K_x`: the smallest integer with
    /// `P(Poisson(λ_x) > K_x) < tail_mass / N`.
    pub fn truncation_box(&self, tail_mass: f64) -> Vec<u64> {
        let per_event = tail_mass / self.event_count() as f64;
        self.mean_vector()
            .into_iter()
            .map(|lambda_x| poisson_upper_quantile(lambda_x, per_event))
            .collect()
    }

    /// Every cell of `[0, bounds_0] × … ` with its probability.
    pub fn table(&self, bounds: &[u64]) -> Result<Vec<(Vec<u64>, f64)>> {
        self.check_dim(bounds)?;
        box_cells(bounds)
            .map(|cell| {
                let p = self.pmf(&cell)?;
                Ok((cell, p))
            })
            .collect()
    }
}

/// Largest count whose factorial is finite in `f64`.
const MAX_DIRECT_FACTORIAL: u64 = 170;

/// `Π_{X≠∅} λ(X)^{n(X)} / n(X)!`, as a direct product while every factor is
/// representable and through logarithms otherwise.
fn term(dense: &[u64], lambda: &[f64]) -> f64 {
    let mut product = 1.0;
    for (mask, &k) in dense.iter().enumerate().skip(1) {
        if k == 0 {
            continue;
        }
        if k > MAX_DIRECT_FACTORIAL {
            return log_term_from(dense, lambda);
        }
        let factor = lambda[mask].powi(k as i32) / factorial(k);
        if !factor.is_normal() {
            return log_term_from(dense, lambda);
        }
        product *= factor;
    }
    if product.is_normal() {
        product
    } else {
        log_term_from(dense, lambda)
    }
}

fn log_term_from(dense: &[u64], lambda: &[f64]) -> f64 {
    let ln_lambda: Vec<f64> = lambda.iter().map(|v| v.ln()).collect();
    log_term(dense, &ln_lambda).exp()
}

fn log_term(dense: &[u64], ln_lambda: &[f64]) -> f64 {
    dense
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &k)| k > 0)
        .map(|(mask, &k)| k as f64 * ln_lambda[mask] - ln_factorial(k))
        .sum()
}

/// `e^{-λ} λ^k / k!` with `0^0 = 1`.
pub fn poisson_pmf(lambda: f64, k: u64) -> f64 {
    if lambda == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if k <= MAX_DIRECT_FACTORIAL {
        let direct = (-lambda).exp() * lambda.powi(k as i32) / factorial(k);
        if direct.is_normal() {
            return direct;
        }
    }
    (k as f64 * lambda.ln() - lambda - ln_factorial(k)).exp()
}

fn poisson_upper_quantile(lambda: f64, tail: f64) -> u64 {
    let mut k = 0;
    let mut cdf = poisson_pmf(lambda, 0);
    while 1.0 - cdf >= tail {
        k += 1;
        cdf += poisson_pmf(lambda, k);
        if k as f64 > lambda + 40.0 * (lambda.sqrt() + 1.0) {
            // 1 - cdf is below the rounding floor of the running sum.
            break;
        }
    }
    k
}

/// Poisson approximation of `b_n̂` with `λ(X) := n p(X)`, summed over terrace
/// vectors that keep `Σ_{X≠∅} n(X) ≤ n`.
pub fn approximate_binomial_pmf(spec: &BinomialMv<f64>, at: &[u64]) -> Result<f64> {
    let d = spec.distribution();
    if at.len() != d.events().len() {
        return Err(Error::InvalidArgument(format!(
            "count vector has {} entries, event set has {}",
            at.len(),
            d.events().len()
        )));
    }
    let n = spec.trials() as f64;
    let p = d.probabilities();
    let ln_lambda: Vec<f64> = p.iter().map(|v| (n * v).ln()).collect();
    let rate: f64 = p[1..].iter().sum::<f64>() * n;
    let cs = ConstraintSystem::new(at, Some(spec.trials()))?.with_support(|m| m == 0 || p[m] > 0.0);
    let mut acc = CompensatedSum::default();
    cs.for_each(|dense| acc.add(log_term(dense, &ln_lambda).exp()));
    Ok((-rate).exp() * acc.total())
}

/// One line of a [`convergence_report`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub trials: u64,
    /// `sup |b_n̂ - π_n̂|` over the box `[0, K]^N`.
    pub sup_deviation: f64,
}

/// The Binomial law with `p(X) = λ(X)/n`, `p(∅) = 1 - Σ λ(X)/n`.
pub fn binomial_from_intensities(li: &PoissonIntensities, trials: u64) -> Result<BinomialMv<f64>> {
    let n = trials as f64;
    let mut p: Vec<f64> = li.as_dense().iter().map(|l| l / n).collect();
    let mass: f64 = p[1..].iter().sum();
    if trials == 0 || mass > 1.0 {
        return Err(Error::InfeasibleTrialCount(trials));
    }
    p[0] = 1.0 - mass;
    let dist = EventologicalDistribution::new(li.events().clone(), p)
        .map_err(|_| Error::InfeasibleTrialCount(trials))?;
    BinomialMv::new(dist, trials)
}

/// Exact sup-deviation between the Binomial law with `p(X) = λ(X)/n` and
/// the Poisson law with intensities `λ(X)`, for each `n`. Rows come back
/// sorted by ascending `n`.
pub fn convergence_report(
    li: &PoissonIntensities,
    trial_counts: &[u64],
    box_max: u64,
) -> Result<Vec<ConvergenceRow>> {
    let poisson = PoissonMv::new(li.clone());
    let bounds = vec![box_max; li.events().len()];
    let reference = poisson.table(&bounds)?;
    let mut trials: Vec<u64> = trial_counts.to_vec();
    trials.sort_unstable();
    trials.dedup();
    trials
        .into_iter()
        .map(|n| {
            let binomial = binomial_from_intensities(li, n)?;
            let mut sup = 0.0f64;
            for (cell, pi) in &reference {
                let b = binomial.pmf(cell)?;
                sup = sup.max((b - pi).abs());
            }
            Ok(ConvergenceRow {
                trials: n,
                sup_deviation: sup,
            })
        })
        .collect()
}
