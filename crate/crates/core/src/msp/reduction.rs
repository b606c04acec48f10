use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::KnownAlgorithm;
use crate::error::{Error, Result};
use crate::matroid::RankOracle;

/// `k` copies of every host element, `d` intervals `[i/d, (i+1)/d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionParams {
    pub k: usize,
    pub d: usize,
}

impl ReductionParams {
    pub fn new(k: usize, d: usize) -> Result<Self> {
        if d == 0 || k == 0 || !k.is_multiple_of(d) {
            return Err(Error::InvalidParameter(alloc::format!("k={k} must be a positive multiple of d={d}")));
        }
        Ok(ReductionParams { k, d })
    }

    pub fn interval(&self, t: f64) -> usize {
        ((t * self.d as f64) as usize).min(self.d - 1)
    }

    fn per_interval(&self) -> usize {
        self.k / self.d
    }
}

/// One copy of a host element in the reduced stream.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HostEvent {
    pub v: usize,
    pub copy: usize,
    pub time: f64,
    /// Arrival index of the source element whose weight this copy carries.
    pub source: Option<usize>,
}

impl HostEvent {
    /// Id in the copy matroid `BigM_[k]`.
    pub fn id(&self, k: usize) -> usize {
        self.v * k + self.copy
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionSample {
    /// All `N·k` copies in time order; ties broken by `(v, copy)`.
    pub events: Vec<HostEvent>,
    /// Arrival time of each source element (empty for the offline sampler).
    pub arrival_times: Vec<f64>,
    pub flagged: bool,
}

fn check_images(images: &[usize], host_size: usize) -> Result<()> {
    let mut seen = vec![false; host_size];
    for &v in images {
        if v >= host_size {
            return Err(Error::ElementOutOfRange { element: v, size: host_size });
        }
        if core::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidParameter(alloc::format!("host element {v} is the image of two sources")));
        }
    }
    Ok(())
}

fn timestamps<R: Rng + ?Sized>(host_size: usize, k: usize, rng: &mut R) -> Vec<f64> {
    (0..host_size * k).map(|_| rng.random::<f64>()).collect()
}

fn sorted_events(times: &[f64], k: usize, tags: &[(usize, usize, usize)]) -> Vec<HostEvent> {
    let mut events: Vec<HostEvent> = times
        .iter()
        .enumerate()
        .map(|(id, &time)| HostEvent { v: id / k, copy: id % k, time, source: None })
        .collect();
    for &(s, v, j) in tags {
        events[v * k + j].source = Some(s);
    }
    events.sort_by(|a, b| a.time.total_cmp(&b.time).then((a.v, a.copy).cmp(&(b.v, b.copy))));
    events
}

/// The offline reduction: i.i.d. uniform timestamps for every copy, and the
/// weight of the `s`-th source element on a uniform copy of `images[s]`.
pub fn offline_reduction_sample<R: Rng + ?Sized>(
    host_size: usize,
    k: usize,
    images: &[usize],
    rng: &mut R,
) -> Result<ReductionSample> {
    check_images(images, host_size)?;
    let times = timestamps(host_size, k, rng);
    let tags: Vec<(usize, usize, usize)> =
        images.iter().enumerate().map(|(s, &v)| (s, v, rng.random_range(0..k))).collect();
    Ok(ReductionSample { events: sorted_events(&times, k, &tags), arrival_times: Vec::new(), flagged: false })
}

/// Distribution over intervals of the copy carrying a weight whose arrival
/// falls in interval `i`, given the per-interval copy counts of its host
/// element: interval `i` with probability `min(k/d, X_i)·d/k`, otherwise an
/// interval `i'` with probability proportional to `max(0, X_{i'} − k/d)`.
pub fn branch_probabilities(counts: &[usize], i: usize, params: ReductionParams) -> Vec<f64> {
    let q = params.per_interval();
    let stay = counts[i].min(q) as f64 / q as f64;
    let excess: Vec<usize> = counts.iter().map(|&x| x.saturating_sub(q)).collect();
    let total: usize = excess.iter().sum();
    let mut p: Vec<f64> = excess
        .iter()
        .map(|&b| if total == 0 { 0.0 } else { (1.0 - stay) * b as f64 / total as f64 })
        .collect();
    p[i] += stay;
    p
}

/// The mostly-online sampler. Source arrivals get sorted uniform times; the
/// flag is raised when two arrivals share an interval or when a weighted copy
/// has to come from another interval. The stream is completed either way, so
/// its law can be compared with [`offline_reduction_sample`].
pub fn mostly_online_sample<R: Rng + ?Sized>(
    host_size: usize,
    params: ReductionParams,
    images: &[usize],
    rng: &mut R,
) -> Result<ReductionSample> {
    check_images(images, host_size)?;
    let k = params.k;
    let times = timestamps(host_size, k, rng);
    let mut arrivals: Vec<f64> = (0..images.len()).map(|_| rng.random::<f64>()).collect();
    arrivals.sort_by(f64::total_cmp);
    let intervals: Vec<usize> = arrivals.iter().map(|&t| params.interval(t)).collect();
    let mut flagged = intervals.windows(2).any(|w| w[0] == w[1]);
    let mut tags = Vec::with_capacity(images.len());
    for (s, (&v, &i)) in images.iter().zip(&intervals).enumerate() {
        let copies = &times[v * k..(v + 1) * k];
        let mut counts = vec![0usize; params.d];
        for &t in copies {
            counts[params.interval(t)] += 1;
        }
        let q = params.per_interval();
        let stay = counts[i].min(q) as f64 / q as f64;
        let chosen = if rng.random::<f64>() < stay {
            i
        } else {
            flagged = true;
            let excess: Vec<usize> = counts.iter().map(|&x| x.saturating_sub(q)).collect();
            let mut r = rng.random_range(0..excess.iter().sum::<usize>());
            excess.iter().position(|&b| if r < b { true } else { r -= b; false }).expect("r below the total")
        };
        let members: Vec<usize> = (0..k).filter(|&j| params.interval(copies[j]) == chosen).collect();
        tags.push((s, v, members[rng.random_range(0..members.len())]));
    }
    Ok(ReductionSample { events: sorted_events(&times, k, &tags), arrival_times: arrivals, flagged })
}

/// What the reduction achieved on one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionOutcome {
    pub flagged: bool,
    /// Source elements accepted through their weighted copies, in acceptance order.
    pub accepted: Vec<usize>,
    /// Total weight of `accepted`; zero when flagged.
    pub reward: f64,
    /// Host events shown to the plug-in.
    pub emitted: usize,
}

/// Runs the reduction with every copy materialised. `order[s]` is the `s`-th
/// arriving source element and `images[s]` its host element; `host` is the
/// copy matroid with ids `v·k + copy`.
#[allow(clippy::too_many_arguments)]
pub fn run_full<R: Rng + ?Sized>(
    alg: &mut dyn KnownAlgorithm,
    host: &dyn RankOracle,
    host_size: usize,
    params: ReductionParams,
    order: &[usize],
    images: &[usize],
    weights: &[f64],
    rng: &mut R,
) -> Result<ReductionOutcome> {
    let sample = mostly_online_sample(host_size, params, images, rng)?;
    if sample.flagged {
        return Ok(ReductionOutcome { flagged: true, accepted: Vec::new(), reward: 0.0, emitted: 0 });
    }
    for e in &sample.events {
        if let Some(s) = e.source {
            // the copy is only fixed once its source has arrived
            let start = params.interval(sample.arrival_times[s]) as f64 / params.d as f64;
            debug_assert!(e.time >= start);
        }
    }
    let stream: Vec<(usize, f64, f64, Option<usize>)> = sample
        .events
        .iter()
        .map(|e| (e.id(params.k), e.source.map_or(0.0, |s| weights[order[s]]), e.time, e.source))
        .collect();
    feed(alg, host, order, weights, &stream)
}

/// Runs the reduction for a plug-in that ignores zero-weight arrivals: only
/// the weighted copies are generated. For each arrival, the number of copies
/// of its image in its interval is Binomial(k, 1/d); the weighted copy has a
/// uniform time inside the interval and a uniform copy index. Stops at the
/// first flag.
#[allow(clippy::too_many_arguments)]
pub fn run_sparse<R: Rng + ?Sized>(
    alg: &mut dyn KnownAlgorithm,
    host: &dyn RankOracle,
    host_size: usize,
    params: ReductionParams,
    order: &[usize],
    images: &[usize],
    weights: &[f64],
    rng: &mut R,
) -> Result<ReductionOutcome> {
    if !alg.zero_weight_blind() {
        return Err(Error::InvalidParameter("sparse simulation needs a plug-in blind to zero weights".into()));
    }
    check_images(images, host_size)?;
    let flagged = ReductionOutcome { flagged: true, accepted: Vec::new(), reward: 0.0, emitted: 0 };
    let mut arrivals: Vec<f64> = (0..images.len()).map(|_| rng.random::<f64>()).collect();
    arrivals.sort_by(f64::total_cmp);
    let binom = Binomial::new(params.k as u64, 1.0 / params.d as f64).expect("valid binomial");
    let q = params.per_interval() as f64;
    let mut stream = Vec::with_capacity(images.len());
    let mut last = None;
    for (s, (&v, &t)) in images.iter().zip(&arrivals).enumerate() {
        let i = params.interval(t);
        if last == Some(i) {
            return Ok(flagged);
        }
        last = Some(i);
        let x = binom.sample(rng) as f64;
        if rng.random::<f64>() >= x.min(q) / q {
            return Ok(flagged);
        }
        let time = (i as f64 + rng.random::<f64>()) / params.d as f64;
        let copy = rng.random_range(0..params.k);
        stream.push((v * params.k + copy, weights[order[s]], time, Some(s)));
    }
    feed(alg, host, order, weights, &stream)
}

fn feed(
    alg: &mut dyn KnownAlgorithm,
    host: &dyn RankOracle,
    order: &[usize],
    weights: &[f64],
    stream: &[(usize, f64, f64, Option<usize>)],
) -> Result<ReductionOutcome> {
    alg.init(host);
    let mut taken = Vec::new();
    let mut out = ReductionOutcome { flagged: false, accepted: Vec::new(), reward: 0.0, emitted: stream.len() };
    for &(id, w, t, source) in stream {
        if alg.observe(host, id, w, t) {
            taken.push(id);
            if host.rank_of(&taken) != taken.len() {
                return Err(Error::DependentAcceptance(id));
            }
            if let Some(s) = source {
                out.accepted.push(order[s]);
                out.reward += weights[order[s]];
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    #[test]
    fn params_validation() {
        assert!(ReductionParams::new(4, 2).is_ok());
        assert!(ReductionParams::new(5, 2).is_err());
        assert!(ReductionParams::new(4, 0).is_err());
        let p = ReductionParams::new(4, 4).unwrap();
        assert_eq!(p.interval(0.0), 0);
        assert_eq!(p.interval(0.2499), 0);
        assert_eq!(p.interval(0.25), 1);
        assert_eq!(p.interval(0.9999), 3);
    }

    #[test]
    fn every_copy_equally_likely_given_timestamps() {
        // for fixed copy times, P(copy j) = Σ_i (1/d) P(interval of j | i) / X_interval(j) = 1/k
        let params = ReductionParams::new(6, 3).unwrap();
        for counts in [[2usize, 2, 2], [6, 0, 0], [1, 4, 1], [0, 3, 3], [3, 2, 1]] {
            let mut per_interval = [0.0; 3];
            for i in 0..3 {
                let p = branch_probabilities(&counts, i, params);
                assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                for (acc, pi) in per_interval.iter_mut().zip(&p) {
                    *acc += pi / 3.0;
                }
            }
            for (c, p) in counts.iter().zip(&per_interval) {
                if *c > 0 {
                    assert!((p / *c as f64 - 1.0 / 6.0).abs() < 1e-12, "{counts:?}");
                } else {
                    assert_eq!(*p, 0.0);
                }
            }
        }
    }

    #[test]
    fn one_interval_flags_every_pair() {
        let params = ReductionParams::new(2, 1).unwrap();
        let mut rng = trial_rng(0, 0);
        for _ in 0..100 {
            assert!(mostly_online_sample(2, params, &[0, 1], &mut rng).unwrap().flagged);
        }
    }

    #[test]
    fn single_element_weighted_copy_is_uniform() {
        let mut rng = trial_rng(3, 0);
        let trials = 10_000;
        let first = (0..trials)
            .filter(|_| {
                let s = offline_reduction_sample(1, 2, &[0], &mut rng).unwrap();
                s.events.iter().find(|e| e.source.is_some()).unwrap().copy == 0
            })
            .count() as f64;
        let sd = (trials as f64 * 0.25).sqrt();
        assert!((first - trials as f64 / 2.0).abs() < 3.0 * sd);
    }

    #[test]
    fn offline_host_order_is_a_uniform_permutation() {
        // N·k = 6: 720 orders, each with probability 1/720
        let mut rng = trial_rng(5, 0);
        let trials = 360_000;
        let mut counts = alloc::collections::BTreeMap::new();
        for _ in 0..trials {
            let s = offline_reduction_sample(3, 2, &[], &mut rng).unwrap();
            let key: Vec<usize> = s.events.iter().map(|e| e.id(2)).collect();
            *counts.entry(key).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 720);
        let expect = trials as f64 / 720.0;
        let chi2: f64 = counts.values().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
        // 719 degrees of freedom: mean 719, sd ≈ 38
        assert!(chi2 < 719.0 + 5.0 * 38.0, "{chi2}");
    }

    #[test]
    fn rejects_non_injective_images() {
        let mut rng = trial_rng(0, 0);
        assert!(offline_reduction_sample(2, 2, &[1, 1], &mut rng).is_err());
    }
}
