//! The work behind each subcommand, returning the artifact as text.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ome_core::approx::{estimate_distortion, DistortionEstimate, FreeEmbed, SetSampler};
use ome_core::impossibility::{
    graphic_fixture, graphic_host_search, laminar_fixtures, laminar_host_search, rank3_extension_search,
    rank3_fixture, verify_graphic_fixture, verify_laminar_fixtures, verify_rank3_fixture, FixtureReport,
};
use ome_core::matroid::{check_axioms, AxiomReport, DEFAULT_EXHAUSTIVE_CAP};
use ome_core::msp::{run_trial, summarize, ExperimentConfig, Resolved, SimulationReport, TrialResult};
use ome_core::ome::{
    order_independent_binary, order_independent_binary_copies, run_embedder, verify_record, BinaryOmm, CopyLift,
    Host, LaminarOmm, OnlineEmbedder, Rank1Omm, Rank2Omm,
};
use ome_core::RankOracle;

use crate::CliError;

/// Axiom report for `m`, or `None` above the exhaustive cap.
pub fn check(m: &dyn RankOracle) -> Result<Option<AxiomReport>, CliError> {
    if m.len() > DEFAULT_EXHAUSTIVE_CAP {
        return Ok(None);
    }
    Ok(Some(check_axioms(m, DEFAULT_EXHAUSTIVE_CAP)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum EmbedClass {
    /// Binary OMM into F_2^dim.
    Binary,
    /// Copy lift of the binary OMM: an OME into (F_2^dim)_[copies].
    BinaryOme,
    Laminar,
    Rank1,
    Rank2,
    /// Random-basis embedding into the free matroid (never inflates rank).
    Free,
}

#[derive(Clone, Debug)]
pub struct EmbedOptions {
    pub class: EmbedClass,
    pub dim: Option<usize>,
    pub copies: Option<usize>,
    pub randomized: bool,
    pub seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Check {
    Morphism,
    Monomorphism,
    NoInflation,
}

/// The record text, plus whether the map was verified exhaustively.
pub struct Embedded {
    pub record: String,
    pub verified: bool,
}

fn embed_with<E: OnlineEmbedder>(mut emb: E, m: &dyn RankOracle, order: &[usize], check: Check) -> Result<Embedded, CliError> {
    let rec = run_embedder(&mut emb, m, order).map_err(|e| CliError::Alarm(format!("embedding failed: {e}")))?;
    let n = order.len();
    let verified = n <= DEFAULT_EXHAUSTIVE_CAP;
    if verified {
        let host = emb.host();
        let ok = match check {
            Check::NoInflation => (0u64..1 << n).all(|s| {
                let pos: Vec<usize> = ome_core::subset::bits(s).collect();
                let src: Vec<usize> = pos.iter().map(|&p| rec.pairs[p].0).collect();
                let img: Vec<_> = pos.iter().map(|&p| rec.pairs[p].1.clone()).collect();
                host.rank_of(&img) <= m.rank_of(&src)
            }),
            _ => {
                let r = verify_record(&rec, m, host, DEFAULT_EXHAUSTIVE_CAP)?;
                r.morphism && (check == Check::Morphism || r.injective)
            }
        };
        if !ok {
            return Err(CliError::Alarm(format!("map into {} failed its exhaustive check", host.describe())));
        }
    }
    Ok(Embedded { record: rec.to_string(), verified })
}

pub fn embed(m: &dyn RankOracle, order: &[usize], opts: &EmbedOptions) -> Result<Embedded, CliError> {
    let n = m.len();
    let dim = opts.dim.unwrap_or(n).max(1);
    let copies = opts.copies.unwrap_or(n).max(1);
    if opts.randomized && !matches!(opts.class, EmbedClass::Binary | EmbedClass::BinaryOme | EmbedClass::Rank1) {
        return Err(CliError::Usage("--randomized applies to binary, binary-ome and rank1".into()));
    }
    let seed = opts.seed;
    match (opts.class, opts.randomized) {
        (EmbedClass::Binary, false) => embed_with(BinaryOmm::new(dim).with_audit(true), m, order, Check::Morphism),
        (EmbedClass::Binary, true) => embed_with(order_independent_binary(dim, seed), m, order, Check::Morphism),
        (EmbedClass::BinaryOme, false) => {
            embed_with(CopyLift::new(BinaryOmm::new(dim).with_audit(true), copies), m, order, Check::Monomorphism)
        }
        (EmbedClass::BinaryOme, true) => {
            embed_with(order_independent_binary_copies(dim, copies, seed), m, order, Check::Monomorphism)
        }
        (EmbedClass::Rank1, false) => embed_with(Rank1Omm::new(), m, order, Check::Morphism),
        (EmbedClass::Rank1, true) => {
            embed_with(ome_core::ome::order_independent_rank1(copies, seed), m, order, Check::Monomorphism)
        }
        (EmbedClass::Rank2, _) => embed_with(Rank2Omm::new(n), m, order, Check::Morphism),
        (EmbedClass::Laminar, _) => {
            let omm = LaminarOmm::new(n, seed).map_err(|e| CliError::Usage(e.to_string()))?;
            embed_with(omm, m, order, Check::Morphism)
        }
        (EmbedClass::Free, _) => embed_with(FreeEmbed::new(dim, seed), m, order, Check::NoInflation),
    }
}

/// Runs every trial, split into contiguous shards over `threads` threads.
/// Trial `t` draws only from its own stream, so the output does not depend
/// on `threads`.
pub fn run_trials(cfg: &ExperimentConfig, res: &Resolved, threads: usize) -> Result<Vec<TrialResult>, CliError> {
    let total = cfg.trials as u64;
    let threads = threads.clamp(1, cfg.trials.max(1)) as u64;
    let shard = total.div_ceil(threads);
    let shards: Vec<Result<Vec<TrialResult>, ome_core::Error>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|i| {
                let range = i * shard..((i + 1) * shard).min(total);
                s.spawn(move || range.map(|t| run_trial(cfg, res, t)).collect())
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("trial thread panicked")).collect()
    });
    let mut out = Vec::with_capacity(cfg.trials);
    for shard in shards {
        out.extend(shard.map_err(|e| CliError::Alarm(format!("trial failed: {e}")))?);
    }
    Ok(out)
}

pub fn trials_csv(trials: &[TrialResult]) -> String {
    let mut out = String::from("trial,opt,alg,ratio,flagged\n");
    for (t, r) in trials.iter().enumerate() {
        let ratio = r.ratio.map(|x| x.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{t},{},{},{ratio},{}", r.opt, r.alg, u8::from(r.flagged));
    }
    out
}

pub fn simulation_summary(cfg: &ExperimentConfig, res: &Resolved, rep: &SimulationReport) -> String {
    format!(
        "family={:?} n={} epsilon={} trials={} plugin={:?} d={} k={} mode={:?}\n\
         flag bound at k: {:.6} ({}certified at epsilon)\n\
         mean ratio {:.6} +/- {:.6} (95%), flag rate {:.6}, trials with opt=0: {}\n",
        cfg.family,
        cfg.n,
        cfg.epsilon,
        cfg.trials,
        cfg.plugin,
        res.params.d,
        res.params.k,
        res.mode,
        res.bound_at_k,
        if res.certified { "" } else { "not " },
        rep.mean_ratio,
        rep.ci_radius,
        rep.flag_rate,
        rep.zero_opt,
    )
}

pub fn simulate(cfg: &ExperimentConfig, threads: usize) -> Result<(Resolved, SimulationReport), CliError> {
    let res = cfg.resolve().map_err(|e| CliError::Usage(e.to_string()))?;
    let trials = run_trials(cfg, &res, threads)?;
    Ok((res, summarize(trials)))
}

pub fn distortion<M: RankOracle>(
    m: &M,
    dim: usize,
    sampler: SetSampler,
    trials: usize,
    seed: u64,
) -> Result<DistortionEstimate, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets = sampler.sample(m, &mut rng);
    estimate_distortion(m, dim, &sets, trials, &mut rng).map_err(|e| match e {
        ome_core::Error::InvalidMatroid(msg) => CliError::Alarm(msg),
        other => CliError::Usage(other.to_string()),
    })
}

pub fn distortion_csv(est: &DistortionEstimate) -> String {
    let mut out = String::from("set_id,rank_M,mean_rank_Fr,lower_bound,beta_hat\n");
    for (i, s) in est.sets.iter().enumerate() {
        let beta = if s.rank_m == 0 { String::new() } else { s.beta().to_string() };
        let _ = writeln!(out, "{i},{},{},{},{beta}", s.rank_m, s.mean_rank, s.bound.checked());
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Which {
    Rank3,
    Graphic,
    Laminar,
}

fn fixture_lines(out: &mut String, name: &str, rep: &FixtureReport) {
    for c in &rep.checks {
        let verdict = if c.passed { "ok" } else { "FAILED" };
        let _ = writeln!(out, "fixture {name}: {verdict}: {}", c.claim);
    }
}

/// Text report of one impossibility search; `Err(Alarm)` carries the report
/// when a fixture check fails or a counterexample turns up.
pub fn impossible(which: Which, bound: Option<usize>, seed: u64) -> Result<String, CliError> {
    let mut out = String::new();
    let clean = match which {
        Which::Rank3 => {
            let f = rank3_fixture();
            let fixture = verify_rank3_fixture(&f);
            fixture_lines(&mut out, "rank3", &fixture);
            let r = rank3_extension_search(&f, 7, 3, bound.unwrap_or(100), seed)?;
            let _ = writeln!(
                out,
                "rank3 over GF({})^{}: {} satisfying pairs / {} examined over {} prefixes ({} degenerate prefixes skipped)\n\
                 candidates extending M1: {}, extending M2: {}; near misses {} (argument failures {})",
                r.field,
                r.dim,
                r.satisfying,
                r.pairs_examined,
                r.prefixes,
                r.degenerate_skipped,
                r.valid1_total,
                r.valid2_total,
                r.near_misses,
                r.argument_failures
            );
            fixture.ok() && r.no_counterexample()
        }
        Which::Graphic => {
            let fixture = verify_graphic_fixture(&graphic_fixture());
            fixture_lines(&mut out, "graphic", &fixture);
            let g = graphic_host_search(bound.unwrap_or(6))?;
            let _ = writeln!(
                out,
                "graphic hosts on {} vertices: {} simultaneous hosts / {} independent placements ({} tried)\n\
                 placements serving the left matroid: {} (without a shared endpoint: {}); serving the 4-cycle: {}",
                g.vertices,
                g.simultaneous,
                g.independent_placements,
                g.placements,
                g.left_extendable,
                g.shared_endpoint_violations,
                g.right_extendable
            );
            fixture.ok() && g.no_counterexample()
        }
        Which::Laminar => {
            let fixture = verify_laminar_fixtures(&laminar_fixtures());
            fixture_lines(&mut out, "laminar", &fixture);
            let ground = bound.unwrap_or(6);
            let l = laminar_host_search(ground, 6)?;
            let _ = writeln!(
                out,
                "laminar hosts on {} elements with at most {} sets: {} simultaneous / {} hosts ({} families, {} with a free prefix)\n\
                 hosts serving each fixture: {:?}",
                l.ground, l.max_family, l.simultaneous, l.hosts, l.families, l.prefix_valid, l.extendable
            );
            fixture.ok() && l.no_counterexample()
        }
    };
    out.push_str(if clean { "no counterexample within bounds\n" } else { "COUNTEREXAMPLE OR FIXTURE FAILURE\n" });
    if clean {
        Ok(out)
    } else {
        Err(CliError::Alarm(out))
    }
}
