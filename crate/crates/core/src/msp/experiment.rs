use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::{flag_bound_value, flag_probability_bound, greedy_opt, run_full, run_sparse, FlagBound};
use super::{DynkinSingleItem, KnownAlgorithm, ReductionOutcome, ReductionParams, SampleThresholdGreedy};
use crate::error::{Error, Result};
use crate::matroid::{gen, Copies, RankOracle, Uniform};
use crate::ome::{
    order_independent_binary_copies, order_independent_rank1, run_embedder, Host, HostOracle, OnlineEmbedder,
};
use crate::rng::trial_rng;

/// Copies per host element never exceed this, whatever the flag bound asks for.
pub const DEFAULT_K_CAP: usize = 10_000_000;
/// Full simulation materialises at most this many host copies.
const FULL_MODE_LIMIT: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `U_{n,1}` through the rank-1 embedding.
    Rank1,
    /// Random GF(2) column matroids through the binary embedding.
    Binary,
    /// The free matroid through the binary embedding.
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Plugin {
    Dynkin,
    ThresholdGreedy,
}

#[derive(Clone, Debug, PartialEq)]
pub enum WeightModel {
    /// I.i.d. uniform on `[0, 1)`.
    Uniform,
    /// I.i.d. exponential with mean 1.
    Exponential,
    /// The same weights every trial.
    Fixed(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Full,
    Sparse,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub family: Family,
    pub n: usize,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub plugin: Plugin,
    pub weights: WeightModel,
    /// Overrides for the reduction parameters; by default they come from the
    /// flag bound, with `k` clamped at `k_cap`.
    pub k: Option<usize>,
    pub d: Option<usize>,
    pub mode: Option<Mode>,
    pub k_cap: usize,
}

impl ExperimentConfig {
    pub fn new(family: Family, n: usize, epsilon: f64) -> Self {
        ExperimentConfig {
            family,
            n,
            epsilon,
            trials: 1000,
            seed: 0,
            plugin: Plugin::Dynkin,
            weights: WeightModel::Uniform,
            k: None,
            d: None,
            mode: None,
            k_cap: DEFAULT_K_CAP,
        }
    }

    /// Elements of the host before taking `k` copies.
    pub fn host_size(&self) -> usize {
        match self.family {
            Family::Rank1 => 2 * self.n,
            Family::Binary => (1 << binary_dim(self.n)) * self.n,
            Family::Free => (1usize << self.n) * self.n,
        }
    }

    pub fn resolve(&self) -> Result<Resolved> {
        if self.n == 0 || self.trials == 0 {
            return Err(Error::InvalidParameter("n and trials must be positive".into()));
        }
        if self.family == Family::Free && self.n > 16 {
            return Err(Error::DimensionTooLarge { dim: self.n, max: 16 });
        }
        if let WeightModel::Fixed(w) = &self.weights {
            if w.len() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, got: w.len() });
            }
        }
        let bound = flag_probability_bound(self.n, self.epsilon)?;
        let d = self.d.unwrap_or(bound.d);
        let k = match self.k {
            Some(k) => k,
            None if bound.k_min <= self.k_cap => bound.k_min,
            None => (self.k_cap / d).max(1) * d,
        };
        let params = ReductionParams::new(k, d)?;
        let bound_at_k = flag_bound_value(self.n, d, bound.delta, k);
        let mode = self.mode.unwrap_or(if self.host_size().saturating_mul(k) <= FULL_MODE_LIMIT {
            Mode::Full
        } else {
            Mode::Sparse
        });
        Ok(Resolved { params, bound, bound_at_k, certified: bound_at_k <= self.epsilon, mode })
    }
}

fn binary_dim(n: usize) -> usize {
    (n / 2).clamp(1, 12)
}

/// Parameters actually used by an experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Resolved {
    pub params: ReductionParams,
    pub bound: FlagBound,
    /// The flag bound at the `k` in use.
    pub bound_at_k: f64,
    /// Whether the bound at the `k` in use is at most `ε`.
    pub certified: bool,
    pub mode: Mode,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialResult {
    pub opt: f64,
    pub alg: f64,
    /// `alg / opt`; `None` when `opt = 0`.
    pub ratio: Option<f64>,
    pub flagged: bool,
}

fn plugin(p: Plugin) -> Box<dyn KnownAlgorithm> {
    match p {
        Plugin::Dynkin => Box::new(DynkinSingleItem::new()),
        Plugin::ThresholdGreedy => Box::new(SampleThresholdGreedy::new()),
    }
}

/// Embeds the instance with `emb`, then runs the reduction on `k` copies of
/// the embedder's host.
fn reduce<E: OnlineEmbedder>(
    mut emb: E,
    cfg: &ExperimentConfig,
    res: &Resolved,
    m: &dyn RankOracle,
    order: &[usize],
    weights: &[f64],
    rng: &mut impl Rng,
) -> Result<ReductionOutcome> {
    let rec = run_embedder(&mut emb, m, order)?;
    let host = emb.host();
    let images: Vec<usize> = rec
        .pairs
        .iter()
        .map(|(_, img)| host.index_of(img).expect("enumerable host"))
        .collect();
    let oracle = HostOracle::new(host).expect("enumerable host");
    let size = oracle.len();
    let copies = Copies::new(oracle, res.params.k);
    let mut alg = plugin(cfg.plugin);
    match res.mode {
        Mode::Full => run_full(alg.as_mut(), &copies, size, res.params, order, &images, weights, rng),
        Mode::Sparse => run_sparse(alg.as_mut(), &copies, size, res.params, order, &images, weights, rng),
    }
}

/// One trial, drawn from the stream `trial_rng(cfg.seed, t)`.
pub fn run_trial(cfg: &ExperimentConfig, res: &Resolved, t: u64) -> Result<TrialResult> {
    let mut rng = trial_rng(cfg.seed, t);
    let n = cfg.n;
    let m: Box<dyn RankOracle> = match cfg.family {
        Family::Rank1 => Box::new(Uniform::new(n, 1)),
        Family::Binary => Box::new(gen::random_gf2(n, binary_dim(n), &mut rng)),
        Family::Free => Box::new(Uniform::free(n)),
    };
    let weights: Vec<f64> = match &cfg.weights {
        WeightModel::Uniform => (0..n).map(|_| rng.random::<f64>()).collect(),
        WeightModel::Exponential => (0..n).map(|_| Exp1.sample(&mut rng)).collect(),
        WeightModel::Fixed(w) => w.clone(),
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let seed: u64 = rng.random();
    let out = match cfg.family {
        Family::Rank1 => reduce(order_independent_rank1(n, seed), cfg, res, &*m, &order, &weights, &mut rng)?,
        Family::Binary => {
            let emb = order_independent_binary_copies(binary_dim(n), n, seed);
            reduce(emb, cfg, res, &*m, &order, &weights, &mut rng)?
        }
        Family::Free => reduce(order_independent_binary_copies(n, n, seed), cfg, res, &*m, &order, &weights, &mut rng)?,
    };
    if m.rank_of(&out.accepted) != out.accepted.len() {
        return Err(Error::InvalidMatroid("mirrored acceptances are dependent in the source".into()));
    }
    let (_, opt) = greedy_opt(&*m, &weights);
    let ratio = (opt > 0.0).then(|| out.reward / opt);
    Ok(TrialResult { opt, alg: out.reward, ratio, flagged: out.flagged })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationReport {
    pub trials: Vec<TrialResult>,
    /// Mean of `alg / opt` over trials with `opt > 0`; flagged trials count 0.
    pub mean_ratio: f64,
    /// Half-width of a normal 95% interval for `mean_ratio`.
    pub ci_radius: f64,
    pub flag_rate: f64,
    /// Trials excluded because `opt = 0`.
    pub zero_opt: usize,
}

pub fn summarize(trials: Vec<TrialResult>) -> SimulationReport {
    let ratios: Vec<f64> = trials.iter().filter_map(|t| t.ratio).collect();
    let m = ratios.len() as f64;
    let mean = if ratios.is_empty() { 0.0 } else { ratios.iter().sum::<f64>() / m };
    let var = if ratios.len() < 2 { 0.0 } else { ratios.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (m - 1.0) };
    let flags = trials.iter().filter(|t| t.flagged).count();
    SimulationReport {
        mean_ratio: mean,
        ci_radius: if ratios.is_empty() { 0.0 } else { 1.96 * libm::sqrt(var / m) },
        flag_rate: flags as f64 / trials.len().max(1) as f64,
        zero_opt: trials.len() - ratios.len(),
        trials,
    }
}

/// Runs every trial sequentially.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(Resolved, SimulationReport)> {
    let res = cfg.resolve()?;
    let trials = (0..cfg.trials as u64).map(|t| run_trial(cfg, &res, t)).collect::<Result<Vec<_>>>()?;
    Ok((res, summarize(trials)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolve_clamps_k() {
        let cfg = ExperimentConfig::new(Family::Rank1, 10, 0.1);
        let res = cfg.resolve().unwrap();
        assert_eq!(res.params.d, 3000);
        assert_eq!(res.params.k, 9_999_000);
        assert!(!res.certified);
        assert_eq!(res.mode, Mode::Sparse);
    }

    #[test]
    fn zero_weights_are_excluded() {
        let mut cfg = ExperimentConfig::new(Family::Rank1, 3, 0.5);
        cfg.weights = WeightModel::Fixed(alloc::vec![0.0; 3]);
        cfg.trials = 20;
        let (_, rep) = run_experiment(&cfg).unwrap();
        assert_eq!(rep.zero_opt, 20);
        assert!(rep.trials.iter().all(|t| t.alg == 0.0));
    }

    #[test]
    fn single_weighted_element_ratio_is_success_rate() {
        let mut cfg = ExperimentConfig::new(Family::Rank1, 4, 0.5);
        cfg.weights = WeightModel::Fixed(alloc::vec![0.0, 1.0, 0.0, 0.0]);
        cfg.trials = 200;
        let (_, rep) = run_experiment(&cfg).unwrap();
        let wins = rep.trials.iter().filter(|t| t.alg == 1.0).count() as f64 / 200.0;
        assert!((rep.mean_ratio - wins).abs() < 1e-12);
    }

    #[test]
    fn full_and_sparse_agree_on_small_instances() {
        let mut cfg = ExperimentConfig::new(Family::Rank1, 3, 0.9);
        cfg.trials = 4000;
        cfg.k = Some(40);
        cfg.d = Some(10);
        cfg.mode = Some(Mode::Full);
        let (_, full) = run_experiment(&cfg).unwrap();
        cfg.mode = Some(Mode::Sparse);
        let (_, sparse) = run_experiment(&cfg).unwrap();
        assert!((full.mean_ratio - sparse.mean_ratio).abs() < 4.0 * (full.ci_radius + sparse.ci_radius) / 1.96);
        assert!((full.flag_rate - sparse.flag_rate).abs() < 0.04, "{} {}", full.flag_rate, sparse.flag_rate);
    }

    #[test]
    fn binary_and_free_families_run() {
        for family in [Family::Binary, Family::Free] {
            let mut cfg = ExperimentConfig::new(family, 4, 0.5);
            cfg.trials = 50;
            cfg.plugin = Plugin::ThresholdGreedy;
            cfg.weights = WeightModel::Exponential;
            let (_, rep) = run_experiment(&cfg).unwrap();
            assert!(rep.trials.iter().all(|t| t.ratio.is_none_or(|r| (0.0..=1.0 + 1e-12).contains(&r))));
        }
    }
}
