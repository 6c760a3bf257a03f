//! Enumeration of terrace-count vectors with prescribed event marginals.
//!
//! Given targets `n_x` the engine yields every nonnegative integer vector
//! `(n(X), X ≠ ∅)` with `n_x = Σ_{X ∋ x} n(X)`, optionally subject to a cap
//! `Σ_{X ≠ ∅} n(X) ≤ n`, in which case the slack `n(∅)` is attached.
//!
//! Search is depth-first over the non-singleton subsets ordered by
//! descending cardinality (ties by ascending mask), each assigned from its
//! upper bound `min_{x ∈ X} residual_x` downwards. Singleton counts are then
//! forced by the residuals. Because `n(X) ≤ min_{x ∈ X} n_x` the search is
//! finite with or without a cap.

use crate::error::{Error, Result};
use crate::events::{marginals_of, SubsetMask, TerraceCountVector, DEFAULT_MAX_EVENTS};

/// Marginal constraints `n_x = Σ_{X ∋ x} n(X)` with an optional total cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    target: Vec<u64>,
    cap: Option<u64>,
    support: Vec<bool>,
}

impl ConstraintSystem {
    /// `target` lists `n_x` in canonical event order.
    pub fn new(target: &[u64], cap: Option<u64>) -> Result<Self> {
        if target.is_empty() || target.len() > DEFAULT_MAX_EVENTS {
            return Err(Error::EventCount {
                got: target.len(),
                max: DEFAULT_MAX_EVENTS,
            });
        }
        Ok(Self {
            target: target.to_vec(),
            cap,
            support: vec![true; 1 << target.len()],
        })
    }

    /// Restricts nonzero counts to the subsets accepted by `allowed`. Mask `0`
    /// controls `n(∅)` in the capped case: when it is excluded the total
    /// must equal the cap exactly.
    pub fn with_support(mut self, allowed: impl Fn(SubsetMask) -> bool) -> Self {
        for (mask, slot) in self.support.iter_mut().enumerate() {
            *slot = allowed(mask);
        }
        self
    }

    pub fn event_count(&self) -> usize {
        self.target.len()
    }

    pub fn target(&self) -> &[u64] {
        &self.target
    }

    pub fn cap(&self) -> Option<u64> {
        self.cap
    }

    /// Lazy stream of all solutions.
    pub fn enumerate(&self) -> Solutions<'_> {
        Solutions::new(self)
    }

    /// Calls `visit` with each solution as a dense slice indexed by mask.
    pub fn for_each(&self, mut visit: impl FnMut(&[u64])) {
        let mut it = self.enumerate();
        while let Some(dense) = it.next_dense() {
            visit(dense);
        }
    }

    /// Number of vectors [`ConstraintSystem::enumerate`] yields.
    pub fn solution_count(&self) -> u64 {
        let mut count = 0;
        self.for_each(|_| count += 1);
        count
    }

    fn is_infeasible(&self) -> bool {
        match self.cap {
            Some(cap) => self.target.iter().any(|&t| t > cap),
            None => false,
        }
    }
}

/// Depth-first solution stream for a [`ConstraintSystem`].
#[derive(Debug, Clone)]
pub struct Solutions<'a> {
    system: &'a ConstraintSystem,
    /// Non-singleton supported subsets in traversal order.
    order: Vec<SubsetMask>,
    /// Members of each subset in `order`.
    members: Vec<Vec<usize>>,
    values: Vec<u64>,
    residual: Vec<u64>,
    assigned: u64,
    depth: usize,
    state: State,
    out: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Descend,
    Advance,
    Done,
}

impl<'a> Solutions<'a> {
    fn new(system: &'a ConstraintSystem) -> Self {
        let n = system.event_count();
        let mut order: Vec<SubsetMask> = (1..1usize << n)
            .filter(|m| m.count_ones() >= 2 && system.support[*m])
            .collect();
        order.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
        let members = order
            .iter()
            .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
            .collect();
        Self {
            system,
            values: vec![0; order.len()],
            order,
            members,
            residual: system.target.clone(),
            assigned: 0,
            depth: 0,
            state: if system.is_infeasible() {
                State::Done
            } else {
                State::Descend
            },
            out: vec![0; 1 << n],
        }
    }

    /// Advances to the next solution and borrows it as a dense slice
    /// indexed by mask (slot `0` is `n(∅)` when capped, else zero).
    pub fn next_dense(&mut self) -> Option<&[u64]> {
        loop {
            match self.state {
                State::Done => return None,
                State::Descend => {
                    if self.depth == self.order.len() {
                        self.state = State::Advance;
                        if self.fill_leaf() {
                            self.debug_check();
                            return Some(&self.out);
                        }
                        continue;
                    }
                    let level = self.depth;
                    let hi = self.members[level]
                        .iter()
                        .map(|&i| self.residual[i])
                        .min()
                        .unwrap_or(0);
                    self.set(level, hi);
                    self.depth += 1;
                    if self.pruned() {
                        self.state = State::Advance;
                    }
                }
                State::Advance => {
                    if self.depth == 0 {
                        self.state = State::Done;
                        continue;
                    }
                    let level = self.depth - 1;
                    if self.values[level] > 0 {
                        let v = self.values[level] - 1;
                        self.set(level, v);
                        if !self.pruned() {
                            self.state = State::Descend;
                        }
                    } else {
                        self.depth -= 1;
                    }
                }
            }
        }
    }

    fn set(&mut self, level: usize, value: u64) {
        let old = self.values[level];
        for &i in &self.members[level] {
            self.residual[i] = self.residual[i] + old - value;
        }
        self.assigned = self.assigned + value - old;
        self.values[level] = value;
    }

    /// Admissible bound: the remaining subsets must contribute at least the
    /// largest residual marginal to the total.
    fn pruned(&self) -> bool {
        match self.system.cap {
            Some(cap) => {
                let max_residual = self.residual.iter().copied().max().unwrap_or(0);
                self.assigned + max_residual > cap
            }
            None => false,
        }
    }

    fn fill_leaf(&mut self) -> bool {
        let support = &self.system.support;
        self.out.iter_mut().for_each(|c| *c = 0);
        for (level, &mask) in self.order.iter().enumerate() {
            self.out[mask] = self.values[level];
        }
        let mut total = self.assigned;
        for (i, &r) in self.residual.iter().enumerate() {
            let mask = 1 << i;
            if r > 0 && !support[mask] {
                return false;
            }
            self.out[mask] = r;
            total += r;
        }
        if let Some(cap) = self.system.cap {
            if total > cap {
                return false;
            }
            let slack = cap - total;
            if slack > 0 && !support[0] {
                return false;
            }
            self.out[0] = slack;
        }
        true
    }

    fn debug_check(&self) {
        debug_assert_eq!(marginals_of(&self.out), self.system.target);
        if let Some(cap) = self.system.cap {
            debug_assert_eq!(self.out.iter().sum::<u64>(), cap);
        }
    }
}

impl Iterator for Solutions<'_> {
    type Item = TerraceCountVector;

    fn next(&mut self) -> Option<TerraceCountVector> {
        let capped = self.system.cap.is_some();
        self.next_dense()
            .map(|dense| TerraceCountVector::from_dense(dense.to_vec(), capped))
    }
}

/// Fréchet interval `[max(0, n_x + n_y - n), min(n_x, n_y)]` for `n(xy)`,
/// `None` when empty.
pub fn frechet_bounds(nx: u64, ny: u64, n: u64) -> Option<(u64, u64)> {
    let lo = (nx + ny).saturating_sub(n);
    let hi = nx.min(ny);
    (nx <= n && ny <= n && lo <= hi).then_some((lo, hi))
}
