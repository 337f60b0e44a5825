//! Materialized evaluations over the whole profile space, and the range
//! runner abstraction used to split profile-indexed work.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::game::{perceived, profile_from_index, AltruismVector, Evaluation, Game, Orientation};
use crate::rational::Rational;
use crate::Error;

/// Executes a function over contiguous sub-ranges of `0..len` and returns
/// the results in range order.
pub trait RangeRunner {
    fn run<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Range<usize>) -> T + Sync;
}

/// Runs everything as a single range on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl RangeRunner for Sequential {
    fn run<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Range<usize>) -> T + Sync,
    {
        vec![f(0..len)]
    }
}

/// Every profile's evaluation, indexed lexicographically.
#[derive(Clone, Debug)]
pub struct ValueTable {
    counts: Vec<usize>,
    strides: Vec<usize>,
    orientation: Orientation,
    evals: Vec<Evaluation>,
}

pub(crate) fn strides(counts: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; counts.len()];
    for i in (0..counts.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * counts[i + 1];
    }
    strides
}

/// Evaluations of the profiles with indices in `range`.
pub fn evaluate_range(game: &Game, range: Range<usize>) -> Vec<Evaluation> {
    range.map(|idx| game.evaluate(&profile_from_index(game.strategy_counts(), idx))).collect()
}

impl ValueTable {
    pub fn build(game: &Game) -> Result<Self, Error> {
        Self::build_with(game, &Sequential)
    }

    pub fn build_with<R: RangeRunner>(game: &Game, runner: &R) -> Result<Self, Error> {
        let total = game.ensure_within(game.profile_cap())? as usize;
        let chunks = runner.run(total, |range| evaluate_range(game, range));
        let evals: Vec<Evaluation> = chunks.into_iter().flatten().collect();
        Ok(ValueTable {
            counts: game.strategy_counts().to_vec(),
            strides: strides(game.strategy_counts()),
            orientation: game.orientation(),
            evals,
        })
    }

    pub fn len(&self) -> usize {
        self.evals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.evals.is_empty()
    }

    pub fn player_count(&self) -> usize {
        self.counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn get(&self, idx: usize) -> &Evaluation {
        &self.evals[idx]
    }

    pub fn social(&self, idx: usize) -> &Rational {
        &self.evals[idx].social
    }

    pub fn choices(&self, idx: usize) -> Vec<usize> {
        profile_from_index(&self.counts, idx)
    }

    /// Strategy of `player` in profile `idx`.
    pub fn choice(&self, idx: usize, player: usize) -> usize {
        (idx / self.strides[player]) % self.counts[player]
    }

    /// Index of `(t, s_{-i})` where `s` has index `idx`.
    pub fn deviation(&self, idx: usize, player: usize, t: usize) -> usize {
        let current = self.choice(idx, player);
        idx + t * self.strides[player] - current * self.strides[player]
    }

    pub fn perceived(&self, alpha: &AltruismVector, player: usize, idx: usize) -> Rational {
        let e = &self.evals[idx];
        perceived(&e.direct[player], &e.social, alpha.get(player))
    }
}
