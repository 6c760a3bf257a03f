//! Brute-force reference implementations and case generators shared by the
//! integration tests. Nothing here calls the lattice engine or the library's
//! factorial helpers.

#![allow(dead_code)]

use std::collections::BTreeSet;

use eventodist::{
    BinomialMv, EventSet, EventologicalDistribution, PoissonIntensities, PoissonMv, RandomStream,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub const OUTCOME_GUARD: u128 = 10_000_000;
pub const GRID_GUARD: u128 = 10_000_000;
pub const POISSON_ENTRY_GUARD: u64 = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TooLarge(pub String);

pub fn labels(n: usize) -> EventSet {
    EventSet::new(["x", "y", "z", "w", "v"].into_iter().take(n)).unwrap()
}

pub fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap()
}

/// Random distribution with integer weights in `[lo, hi]` per subset.
pub fn random_exact(
    stream: &mut RandomStream,
    n_events: usize,
    lo: u64,
    hi: u64,
) -> EventologicalDistribution<BigRational> {
    let size = 1 << n_events;
    loop {
        let w: Vec<u64> = (0..size)
            .map(|_| lo + stream.next_u64() % (hi - lo + 1))
            .collect();
        let total: u64 = w.iter().sum();
        if total == 0 {
            continue;
        }
        let p = w.iter().map(|&v| ratio(v as i64, total as i64)).collect();
        return EventologicalDistribution::new(labels(n_events), p).unwrap();
    }
}

pub fn random_float(
    stream: &mut RandomStream,
    n_events: usize,
    lo: u64,
    hi: u64,
) -> EventologicalDistribution<f64> {
    random_exact(stream, n_events, lo, hi).to_f64()
}

fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = 2;
    while k <= n {
        acc *= BigInt::from(k);
        k += 1;
    }
    acc
}

pub fn binomial_coefficient(n: u64, k: u64) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `C(n,k) p^k (1-p)^{n-k}` exactly.
pub fn classical_binomial(n: u64, p: &BigRational, k: u64) -> BigRational {
    if k > n {
        return BigRational::zero();
    }
    let q = BigRational::one() - p;
    let mut out = BigRational::from_integer(binomial_coefficient(n, k));
    for _ in 0..k {
        out *= p;
    }
    for _ in 0..n - k {
        out *= &q;
    }
    out
}

/// `n!/Π k_i! Π p_i^{k_i}` exactly.
pub fn classical_multinomial(counts: &[u64], probs: &[BigRational]) -> BigRational {
    let n: u64 = counts.iter().sum();
    let mut coefficient = factorial(n);
    let mut out = BigRational::one();
    for (&k, p) in counts.iter().zip(probs) {
        coefficient /= factorial(k);
        for _ in 0..k {
            out *= p;
        }
    }
    out * BigRational::from_integer(coefficient)
}

/// Enumerates every ordered sequence of `n` terrace outcomes and adds the
/// probability of those whose event counts equal `at`.
pub fn brute_binomial_pmf(
    spec: &BinomialMv<BigRational>,
    at: &[u64],
) -> Result<BigRational, TooLarge> {
    let d = spec.distribution();
    let n_events = d.events().len();
    let size = 1usize << n_events;
    let n = spec.trials();
    let sequences = (size as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if sequences > OUTCOME_GUARD {
        return Err(TooLarge(format!("{sequences} outcome sequences")));
    }
    let probs = d.probabilities();
    let mut digits = vec![0usize; n as usize];
    let mut total = BigRational::zero();
    loop {
        let mut counts = vec![0u64; n_events];
        let mut prob = BigRational::one();
        for &outcome in &digits {
            prob *= &probs[outcome];
            for (x, c) in counts.iter_mut().enumerate() {
                if (outcome >> x) & 1 == 1 {
                    *c += 1;
                }
            }
        }
        if counts == at {
            total += prob;
        }
        // Odometer step.
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(total);
            }
            digits[i] += 1;
            if digits[i] < size {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Full grid filter over candidate `n(X) ∈ [0, min_{x∈X} n_x]`. Solutions
/// are dense by mask; slot `0` is `n(∅)` when capped and zero otherwise.
pub fn brute_lattice_solutions(
    target: &[u64],
    cap: Option<u64>,
) -> Result<BTreeSet<Vec<u64>>, TooLarge> {
    let n_events = target.len();
    let size = 1usize << n_events;
    let bounds: Vec<u64> = (1..size)
        .map(|mask| {
            (0..n_events)
                .filter(|x| (mask >> x) & 1 == 1)
                .map(|x| target[x])
                .min()
                .unwrap()
        })
        .collect();
    let grid: u128 = bounds.iter().map(|&b| b as u128 + 1).product();
    if grid > GRID_GUARD {
        return Err(TooLarge(format!("{grid} grid points")));
    }
    let mut out = BTreeSet::new();
    let mut values = vec![0u64; size - 1];
    loop {
        let mut marginals = vec![0u64; n_events];
        for (j, &v) in values.iter().enumerate() {
            let mask = j + 1;
            for (x, m) in marginals.iter_mut().enumerate() {
                if (mask >> x) & 1 == 1 {
                    *m += v;
                }
            }
        }
        let total: u64 = values.iter().sum();
        let fits = cap.is_none_or(|c| total <= c);
        if marginals == target && fits {
            let mut dense = vec![cap.map_or(0, |c| c - total)];
            dense.extend_from_slice(&values);
            out.insert(dense);
        }
        let mut i = 0;
        loop {
            if i == values.len() {
                return Ok(out);
            }
            if values[i] < bounds[i] {
                values[i] += 1;
                break;
            }
            values[i] = 0;
            i += 1;
        }
    }
}

fn poisson_weight(lambda: f64, k: u64) -> f64 {
    let mut w = (-lambda).exp();
    for j in 1..=k {
        w *= lambda / j as f64;
    }
    w
}

/// Probability that independent `K(X) ~ Poisson(λ(X))` produce marginals
/// `at`, by direct summation over every candidate tuple.
pub fn brute_poisson_pmf(spec: &PoissonMv, at: &[u64]) -> Result<f64, TooLarge> {
    if let Some(&big) = at.iter().find(|&&v| v > POISSON_ENTRY_GUARD) {
        return Err(TooLarge(format!(
            "entry {big} exceeds {POISSON_ENTRY_GUARD}"
        )));
    }
    let li = spec.intensities();
    let size = li.events().subset_count();
    let mut total = 0.0;
    for dense in brute_lattice_solutions(at, None)? {
        let mut w = 1.0;
        for (mask, &k) in dense.iter().enumerate().take(size).skip(1) {
            w *= poisson_weight(li.lambda(mask), k);
        }
        total += w;
    }
    Ok(total)
}

pub fn random_intensities(
    stream: &mut RandomStream,
    n_events: usize,
    max: f64,
) -> PoissonIntensities {
    let size = 1 << n_events;
    let lambda: Vec<f64> = (1..size).map(|_| stream.uniform() * max).collect();
    PoissonIntensities::new(labels(n_events), lambda).unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

pub mod golden;
