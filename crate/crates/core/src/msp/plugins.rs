use alloc::vec::Vec;

use crate::matroid::RankOracle;

/// A secretary algorithm for a matroid known in advance. Elements arrive with
/// weights and arrival times in `[0, 1)`; decisions are irrevocable.
pub trait KnownAlgorithm {
    /// Resets state for a new run on `host`.
    fn init(&mut self, host: &dyn RankOracle);

    fn observe(&mut self, host: &dyn RankOracle, element: usize, weight: f64, time: f64) -> bool;

    /// True when the decisions do not depend on zero-weight arrivals, so a
    /// simulation may skip them entirely.
    fn zero_weight_blind(&self) -> bool {
        false
    }
}

const INV_E: f64 = 0.367_879_441_171_442_33;

/// The classical 1/e rule: watch until time 1/e, then take the first
/// non-loop beating everything seen so far.
#[derive(Clone, Debug, Default)]
pub struct DynkinSingleItem {
    threshold: f64,
    done: bool,
}

impl DynkinSingleItem {
    pub fn new() -> Self {
        Self::default()
    }
}

impl KnownAlgorithm for DynkinSingleItem {
    fn init(&mut self, _host: &dyn RankOracle) {
        *self = Self::default();
    }

    fn observe(&mut self, host: &dyn RankOracle, e: usize, w: f64, t: f64) -> bool {
        if t < INV_E {
            self.threshold = self.threshold.max(w);
            return false;
        }
        if self.done || w <= self.threshold || host.rank_of(&[e]) == 0 {
            return false;
        }
        self.done = true;
        true
    }

    fn zero_weight_blind(&self) -> bool {
        true
    }
}

/// Samples the first half of the stream (arrival time below 1/2), then
/// greedily accepts independent elements heavier than the heaviest sample.
#[derive(Clone, Debug, Default)]
pub struct SampleThresholdGreedy {
    threshold: f64,
    accepted: Vec<usize>,
}

impl SampleThresholdGreedy {
    pub fn new() -> Self {
        Self::default()
    }
}

impl KnownAlgorithm for SampleThresholdGreedy {
    fn init(&mut self, _host: &dyn RankOracle) {
        *self = Self::default();
    }

    fn observe(&mut self, host: &dyn RankOracle, e: usize, w: f64, t: f64) -> bool {
        if t < 0.5 {
            self.threshold = self.threshold.max(w);
            return false;
        }
        if w <= self.threshold {
            return false;
        }
        self.accepted.push(e);
        if host.rank_of(&self.accepted) == self.accepted.len() {
            true
        } else {
            self.accepted.pop();
            false
        }
    }

    fn zero_weight_blind(&self) -> bool {
        true
    }
}
