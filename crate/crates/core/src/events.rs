//! Event sets, eventological distributions and Poisson intensities.
//!
//! Subsets of an [`EventSet`] are addressed by bitmask: bit `i` stands for the
//! `i`-th label in canonical (lexicographic) order, and mask `0` is the empty
//! set. Dense arrays of length `2^N` are indexed by that mask.

use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::real::{Accumulator, Real};

/// Default cap on the number of events; storage grows as `2^N`.
pub const DEFAULT_MAX_EVENTS: usize = 16;

/// Bitmask of a subset of an [`EventSet`].
pub type SubsetMask = usize;

/// Ordered finite set of event labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EventSet {
    labels: Vec<String>,
}

impl EventSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::with_max_events(labels, DEFAULT_MAX_EVENTS)
    }

    pub fn with_max_events<I, S>(labels: I, max_events: usize) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if let Some(bad) = labels.iter().find(|l| l.is_empty() || l.contains(',')) {
            return Err(Error::InvalidLabel(bad.clone()));
        }
        if labels.is_empty() || labels.len() > max_events || labels.len() >= usize::BITS as usize {
            return Err(Error::EventCount {
                got: labels.len(),
                max: max_events,
            });
        }
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].clone()));
        }
        Ok(Self { labels })
    }

    /// Number of events `N`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Labels in canonical order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `2^N`.
    pub fn subset_count(&self) -> usize {
        1 << self.labels.len()
    }

    /// Mask with every event set.
    pub fn full_mask(&self) -> SubsetMask {
        self.subset_count() - 1
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .map_err(|_| Error::LabelNotFound(label.to_string()))
    }

    pub fn mask_of<'a, I>(&self, labels: I) -> Result<SubsetMask>
    where
        I: IntoIterator<Item = &'a str>,
    {
        labels
            .into_iter()
            .try_fold(0, |mask, l| Ok(mask | (1 << self.index_of(l)?)))
    }

    /// Comma-joined labels in canonical order; `""` for the empty set.
    pub fn subset_key(&self, mask: SubsetMask) -> String {
        self.members(mask)
            .map(|i| self.labels[i].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Inverse of [`EventSet::subset_key`]. Labels may appear in any order
    /// but not twice.
    pub fn parse_subset_key(&self, key: &str) -> Result<SubsetMask> {
        if key.is_empty() {
            return Ok(0);
        }
        let mut mask = 0;
        for label in key.split(',') {
            let bit = 1 << self.index_of(label.trim())?;
            if mask & bit != 0 {
                return Err(Error::InvalidArgument(format!(
                    "label `{label}` repeated in subset key `{key}`"
                )));
            }
            mask |= bit;
        }
        Ok(mask)
    }

    /// Indices of the events contained in `mask`.
    pub fn members(&self, mask: SubsetMask) -> impl Iterator<Item = usize> {
        let n = self.labels.len();
        (0..n).filter(move |i| mask & (1 << i) != 0)
    }
}

impl fmt::Display for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(", "))
    }
}

/// Probabilities `p(X)` of every terrace-event `ter(X)`, `X ⊆ 𝔛`.
///
/// `ter(X)` is the outcome where exactly the events of `X` occur. The
/// vector is dense and indexed by [`SubsetMask`]; entry `0` is `p(∅)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EventologicalDistribution<T: Real = f64> {
    events: EventSet,
    p: Vec<T>,
}

impl<T: Real> EventologicalDistribution<T> {
    /// Validates non-negativity and normalization.
    pub fn new(events: EventSet, p: Vec<T>) -> Result<Self> {
        Self::check_shape(&events, &p)?;
        let sum = sum_of(p.iter().cloned());
        if !T::is_unit_sum(&sum) {
            return Err(Error::NotNormalized {
                sum: format!("{sum:?}"),
            });
        }
        Ok(Self { events, p })
    }

    /// Like [`EventologicalDistribution::new`] but divides by the total
    /// instead of requiring it to be one.
    pub fn renormalized(events: EventSet, mut p: Vec<T>) -> Result<Self> {
        Self::check_shape(&events, &p)?;
        let sum = sum_of(p.iter().cloned());
        if sum.is_zero() {
            return Err(Error::NotNormalized {
                sum: format!("{sum:?}"),
            });
        }
        for v in &mut p {
            *v = v.clone() / sum.clone();
        }
        Ok(Self { events, p })
    }

    /// Builds from `(subset labels, probability)` pairs; unlisted subsets
    /// get probability zero.
    pub fn from_terraces<'a, I>(events: EventSet, terraces: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a [&'a str], T)>,
    {
        let mut p = vec![T::zero(); events.subset_count()];
        for (labels, value) in terraces {
            let mask = events.mask_of(labels.iter().copied())?;
            p[mask] = p[mask].clone() + value;
        }
        Self::new(events, p)
    }

    fn check_shape(events: &EventSet, p: &[T]) -> Result<()> {
        if p.len() != events.subset_count() {
            return Err(Error::InvalidArgument(format!(
                "expected {} subset probabilities, got {}",
                events.subset_count(),
                p.len()
            )));
        }
        if let Some((mask, v)) = p
            .iter()
            .enumerate()
            .find(|(_, v)| v.is_negative() || v.to_f64().is_nan())
        {
            return Err(Error::InvalidValue {
                path: format!("p[{:?}]", events.subset_key(mask)),
                reason: format!("probability {v:?} is negative or not a number"),
            });
        }
        Ok(())
    }

    pub fn events(&self) -> &EventSet {
        &self.events
    }

    /// Dense vector of terrace probabilities.
    pub fn probabilities(&self) -> &[T] {
        &self.p
    }

    /// Terrace probability `p(X)`.
    pub fn p(&self, mask: SubsetMask) -> &T {
        &self.p[mask]
    }

    /// `p(∅)`.
    pub fn p_empty(&self) -> &T {
        &self.p[0]
    }

    /// Marginal probability `p_x = Σ_{X ∋ x} p(X)`.
    pub fn marginal_prob(&self, x: &str) -> Result<T> {
        Ok(self.marginal_by_index(self.events.index_of(x)?))
    }

    pub fn marginal_by_index(&self, i: usize) -> T {
        self.superset_sum(1 << i)
    }

    /// `P(∩_{x ∈ S} x) = Σ_{X ⊇ S} p(X)`.
    pub fn joint_prob(&self, subset: &[&str]) -> Result<T> {
        if subset.is_empty() {
            return Err(Error::InvalidArgument(
                "joint probability needs a nonempty subset".into(),
            ));
        }
        let mask = self.events.mask_of(subset.iter().copied())?;
        Ok(self.superset_sum(mask))
    }

    /// Sum of `p(X)` over all `X ⊇ mask`.
    pub fn superset_sum(&self, mask: SubsetMask) -> T {
        sum_of(
            self.p
                .iter()
                .enumerate()
                .filter(|(x, _)| x & mask == mask)
                .map(|(_, v)| v.clone()),
        )
    }

    /// Covariance of the indicators `1_x`, `1_y`; the variance when `x = y`.
    pub fn indicator_covariance(&self, x: &str, y: &str) -> Result<T> {
        let i = self.events.index_of(x)?;
        let j = self.events.index_of(y)?;
        Ok(self.covariance_by_index(i, j))
    }

    pub fn covariance_by_index(&self, i: usize, j: usize) -> T {
        let pi = self.marginal_by_index(i);
        if i == j {
            return pi.clone() * (T::one() - pi);
        }
        let pj = self.marginal_by_index(j);
        self.superset_sum((1 << i) | (1 << j)) - pi * pj
    }

    /// Correlation of the indicators `1_x`, `1_y`.
    pub fn indicator_correlation(&self, x: &str, y: &str) -> Result<f64> {
        let i = self.events.index_of(x)?;
        let j = self.events.index_of(y)?;
        self.correlation_by_index(i, j)
    }

    pub fn correlation_by_index(&self, i: usize, j: usize) -> Result<f64> {
        let si = self.sigma(i)?;
        let sj = self.sigma(j)?;
        if i == j {
            return Ok(1.0);
        }
        let rho = self.covariance_by_index(i, j).to_f64() / (si * sj);
        Ok(rho.clamp(-1.0, 1.0))
    }

    /// Standard deviation of `1_x`; errors on degenerate marginals.
    pub fn sigma(&self, i: usize) -> Result<f64> {
        let pi = self.marginal_by_index(i);
        if pi.is_zero() || pi.is_one() {
            return Err(Error::DegenerateEvent(self.events.labels()[i].clone()));
        }
        let var = (pi.clone() * (T::one() - pi)).to_f64();
        Ok(var.sqrt())
    }

    /// First- or second-degree multicovariation of terrace probabilities:
    /// `τ(x) = p(x)/p(∅)` for one label and
    /// `τ(x,y) = p(∅)p(xy)/(p(x)p(y))` for two.
    pub fn multicovariation(&self, args: &[&str]) -> Result<T> {
        let empty = self.p_empty().clone();
        if empty.is_zero() {
            return Err(Error::SingularDistribution("∅".into()));
        }
        match *args {
            [x] => {
                let mx = 1 << self.events.index_of(x)?;
                Ok(self.p[mx].clone() / empty)
            }
            [x, y] => {
                let mx = 1 << self.events.index_of(x)?;
                let my = 1 << self.events.index_of(y)?;
                if mx == my {
                    return Err(Error::InvalidArgument(
                        "second-degree multicovariation needs two distinct events".into(),
                    ));
                }
                for m in [mx, my] {
                    if self.p[m].is_zero() {
                        return Err(Error::SingularDistribution(self.events.subset_key(m)));
                    }
                }
                Ok(empty * self.p[mx | my].clone() / (self.p[mx].clone() * self.p[my].clone()))
            }
            _ => Err(Error::InvalidArgument(format!(
                "multicovariation takes one or two events, got {}",
                args.len()
            ))),
        }
    }

    /// Whether every nonempty terrace with positive mass is a singleton and
    /// `p(∅) = 0`, i.e. the events partition the sample space.
    pub fn is_partition(&self) -> bool {
        self.p
            .iter()
            .enumerate()
            .all(|(mask, v)| mask.count_ones() == 1 || v.is_zero())
    }

    /// Lossy conversion to the floating point mode.
    pub fn to_f64(&self) -> EventologicalDistribution<f64> {
        EventologicalDistribution {
            events: self.events.clone(),
            p: self.p.iter().map(Real::to_f64).collect(),
        }
    }
}

fn sum_of<T: Real>(values: impl Iterator<Item = T>) -> T {
    let mut acc = T::Accumulator::default();
    for v in values {
        acc.add(v);
    }
    acc.total()
}

/// Intensities `λ(X)` of the terrace-events `ter(X)`, `X ≠ ∅`.
///
/// Stored densely by [`SubsetMask`]; slot `0` is always zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonIntensities {
    events: EventSet,
    lambda: Vec<f64>,
}

impl PoissonIntensities {
    /// `lambda` has one entry per nonempty subset, in mask order `1..2^N`.
    pub fn new(events: EventSet, lambda: Vec<f64>) -> Result<Self> {
        if lambda.len() + 1 != events.subset_count() {
            return Err(Error::InvalidArgument(format!(
                "expected {} intensities, got {}",
                events.subset_count() - 1,
                lambda.len()
            )));
        }
        let mut dense = Vec::with_capacity(events.subset_count());
        dense.push(0.0);
        dense.extend(lambda);
        Self::from_dense(events, dense)
    }

    pub fn from_terraces<'a, I>(events: EventSet, terraces: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a [&'a str], f64)>,
    {
        let mut dense = vec![0.0; events.subset_count()];
        for (labels, value) in terraces {
            let mask = events.mask_of(labels.iter().copied())?;
            if mask == 0 {
                return Err(Error::InvalidArgument(
                    "the empty set carries no intensity".into(),
                ));
            }
            dense[mask] += value;
        }
        Self::from_dense(events, dense)
    }

    pub(crate) fn from_dense(events: EventSet, dense: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(dense.len(), events.subset_count());
        for (mask, v) in dense.iter().enumerate().skip(1) {
            if !(v.is_finite() && *v >= 0.0) {
                return Err(Error::InvalidValue {
                    path: format!("lambda[{:?}]", events.subset_key(mask)),
                    reason: format!("intensity {v} must be finite and nonnegative"),
                });
            }
        }
        if dense[0] != 0.0 {
            return Err(Error::InvalidArgument(
                "the empty set carries no intensity".into(),
            ));
        }
        let total: f64 = dense.iter().sum();
        if !total.is_finite() {
            return Err(Error::InvalidArgument("total intensity overflows".into()));
        }
        Ok(Self {
            events,
            lambda: dense,
        })
    }

    pub fn events(&self) -> &EventSet {
        &self.events
    }

    /// `λ(X)`; zero for the empty mask.
    pub fn lambda(&self, mask: SubsetMask) -> f64 {
        self.lambda[mask]
    }

    /// Dense intensities indexed by mask, slot `0` zero.
    pub fn as_dense(&self) -> &[f64] {
        &self.lambda
    }

    /// `λ = Σ_{X ≠ ∅} λ(X)`.
    pub fn total(&self) -> f64 {
        sum_of(self.lambda.iter().copied())
    }

    /// `λ_x = Σ_{X ∋ x} λ(X)`.
    pub fn lambda_marginal(&self, x: &str) -> Result<f64> {
        Ok(self.marginal_by_index(self.events.index_of(x)?))
    }

    pub fn marginal_by_index(&self, i: usize) -> f64 {
        self.superset_sum(1 << i)
    }

    /// `λ_{xy} = Σ_{X ⊇ {x,y}} λ(X)`.
    pub fn lambda_joint(&self, x: &str, y: &str) -> Result<f64> {
        let i = self.events.index_of(x)?;
        let j = self.events.index_of(y)?;
        if i == j {
            return Err(Error::InvalidArgument(
                "lambda_joint needs two distinct events; use lambda_marginal".into(),
            ));
        }
        Ok(self.superset_sum((1 << i) | (1 << j)))
    }

    pub fn superset_sum(&self, mask: SubsetMask) -> f64 {
        sum_of(
            self.lambda
                .iter()
                .enumerate()
                .filter(|(x, _)| x & mask == mask)
                .map(|(_, v)| *v),
        )
    }
}

/// Observed counts `n̂ = (n_x)` in canonical event order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CountVector(pub Vec<u64>);

impl CountVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn into_inner(self) -> Vec<u64> {
        self.0
    }
}

impl Deref for CountVector {
    type Target = [u64];

    fn deref(&self) -> &[u64] {
        &self.0
    }
}

impl From<Vec<u64>> for CountVector {
    fn from(v: Vec<u64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for CountVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Terrace counts `ň = (n(X))`, dense by [`SubsetMask`].
///
/// Slot `0` holds `n(∅)` when the vector comes from a capped (binomial)
/// context and is unused otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TerraceCountVector {
    counts: Vec<u64>,
    has_empty: bool,
}

impl TerraceCountVector {
    /// `counts` has length `2^N`; `counts[0]` is `n(∅)` when `has_empty`.
    pub fn from_dense(mut counts: Vec<u64>, has_empty: bool) -> Self {
        debug_assert!(counts.len().is_power_of_two());
        if !has_empty {
            counts[0] = 0;
        }
        Self { counts, has_empty }
    }

    /// `n(X)`.
    pub fn get(&self, mask: SubsetMask) -> u64 {
        self.counts[mask]
    }

    /// `n(∅)` when present.
    pub fn empty(&self) -> Option<u64> {
        self.has_empty.then(|| self.counts[0])
    }

    pub fn as_dense(&self) -> &[u64] {
        &self.counts
    }

    /// Number of events `N`.
    pub fn event_count(&self) -> usize {
        self.counts.len().trailing_zeros() as usize
    }

    /// `Σ_{X ≠ ∅} n(X)`.
    pub fn nonempty_total(&self) -> u64 {
        self.counts[1..].iter().sum()
    }

    /// `n_x = Σ_{X ∋ x} n(X)` for each event.
    pub fn marginals(&self) -> CountVector {
        CountVector(marginals_of(&self.counts))
    }
}

pub(crate) fn marginals_of(dense: &[u64]) -> Vec<u64> {
    let n = dense.len().trailing_zeros() as usize;
    (0..n)
        .map(|i| {
            dense
                .iter()
                .enumerate()
                .skip(1)
                .filter(|(mask, _)| mask & (1 << i) != 0)
                .map(|(_, c)| c)
                .sum()
        })
        .collect()
}
