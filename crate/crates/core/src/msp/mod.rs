//! Matroid secretary simulation: known-matroid plug-ins, the reduction from
//! an online-revealed matroid to copies of a known host, flag accounting and
//! competitive-ratio experiments.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matroid::RankOracle;

mod bound;
mod experiment;
mod plugins;
mod reduction;

pub use bound::{flag_bound_value, flag_probability_bound, FlagBound};
pub use experiment::{
    run_experiment, run_trial, summarize, ExperimentConfig, Family, Mode, Plugin, Resolved,
    SimulationReport, TrialResult, WeightModel, DEFAULT_K_CAP,
};
pub use plugins::{DynkinSingleItem, KnownAlgorithm, SampleThresholdGreedy};
pub use reduction::{
    branch_probabilities, mostly_online_sample, offline_reduction_sample, run_full, run_sparse,
    HostEvent, ReductionOutcome, ReductionParams, ReductionSample,
};

/// Weights and arrival order over a matroid's ground set.
#[derive(Clone, Debug, PartialEq)]
pub struct MspInstance<M> {
    pub matroid: M,
    pub weights: Vec<f64>,
    pub order: Vec<usize>,
}

impl<M: RankOracle> MspInstance<M> {
    pub fn new(matroid: M, weights: Vec<f64>, order: Vec<usize>) -> Result<Self> {
        let n = matroid.len();
        if weights.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: weights.len() });
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidParameter(alloc::format!("weight {w} is not a finite non-negative number")));
        }
        let mut seen = alloc::vec![false; n];
        for &u in &order {
            if u >= n {
                return Err(Error::ElementOutOfRange { element: u, size: n });
            }
            if core::mem::replace(&mut seen[u], true) {
                return Err(Error::DuplicateArrival(u));
            }
        }
        if order.len() != n {
            return Err(Error::InvalidParameter("arrival order is not a permutation".into()));
        }
        Ok(MspInstance { matroid, weights, order })
    }
}

/// Maximum-weight independent set by the matroid greedy algorithm; ties in
/// weight go to the smaller id.
pub fn greedy_opt<M: RankOracle + ?Sized>(m: &M, weights: &[f64]) -> (Vec<usize>, f64) {
    let mut ids: Vec<usize> = (0..m.len()).filter(|&u| weights[u] > 0.0).collect();
    ids.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let mut chosen = Vec::new();
    let mut total = 0.0;
    for u in ids {
        chosen.push(u);
        if m.rank_of(&chosen) == chosen.len() {
            total += weights[u];
        } else {
            chosen.pop();
        }
    }
    (chosen, total)
}

/// Result of feeding a weighted stream to a known-matroid algorithm.
#[derive(Clone, Debug, PartialEq)]
pub struct KnownRun {
    pub accepted: Vec<usize>,
    pub weight: f64,
}

/// Feeds `(element, weight, time)` triples to `alg`, enforcing that the
/// accepted set stays independent in `host`.
pub fn run_known_msp(
    alg: &mut dyn KnownAlgorithm,
    host: &dyn RankOracle,
    stream: &[(usize, f64, f64)],
) -> Result<KnownRun> {
    alg.init(host);
    let mut run = KnownRun { accepted: Vec::new(), weight: 0.0 };
    for &(e, w, t) in stream {
        if alg.observe(host, e, w, t) {
            run.accepted.push(e);
            if host.rank_of(&run.accepted) != run.accepted.len() {
                return Err(Error::DependentAcceptance(e));
            }
            run.weight += w;
        }
    }
    Ok(run)
}
