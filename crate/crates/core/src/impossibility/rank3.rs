use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use super::Rank3Fixture;
use crate::error::{Error, Result};
use crate::gfp::{rank_in, GfpVector, PrimeField};
use crate::matroid::rank_table;

const MAX_CANDIDATES: usize = 1 << 16;

/// Outcome of the extension search for one prefix placement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PrefixResult {
    /// Host vectors that extend the prefix to a morphism of the first fixture.
    pub valid1: usize,
    pub valid2: usize,
    pub pairs_examined: u64,
    /// Pairs extending both fixtures at once.
    pub satisfying: u64,
    /// Pairs where the first image meets all three dependencies of the first
    /// fixture and the second meets the two shared dependencies.
    pub near_misses: u64,
    /// Near misses where the rank argument fails (`{E,F,G2}` independent or
    /// `rank{E,F,G1,G2} > 2`). Always zero for a correct host rank function.
    pub argument_failures: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank3Report {
    pub field: u64,
    pub dim: usize,
    pub prefixes: usize,
    /// Sampled prefixes rejected for not being in general position.
    pub degenerate_skipped: usize,
    pub pairs_examined: u64,
    pub satisfying: u64,
    pub near_misses: u64,
    pub argument_failures: u64,
    pub valid1_total: usize,
    pub valid2_total: usize,
}

impl Rank3Report {
    pub fn no_counterexample(&self) -> bool {
        self.satisfying == 0 && self.argument_failures == 0
    }
}

fn all_vectors(dim: usize, p: u64) -> Vec<GfpVector> {
    let total = (p as usize).pow(dim as u32);
    (0..total)
        .map(|mut i| {
            let mut v = Vec::with_capacity(dim);
            for _ in 0..dim {
                v.push((i % p as usize) as u64);
                i /= p as usize;
            }
            GfpVector(v)
        })
        .collect()
}

fn rank_of(field: &PrimeField, vs: &[&GfpVector]) -> usize {
    let cols: Vec<GfpVector> = vs.iter().map(|&v| v.clone()).collect();
    rank_in(field, &cols).expect("equal dimensions")
}

/// Whether every subset of the six prefix vectors has rank `min(|S|, 3)`.
fn general_position(field: &PrimeField, prefix: &[GfpVector]) -> bool {
    (1u32..64).all(|s| {
        let sel: Vec<&GfpVector> = (0..6).filter(|i| s >> i & 1 == 1).map(|i| &prefix[i]).collect();
        rank_of(field, &sel) == (s.count_ones() as usize).min(3)
    })
}

/// Checks every candidate image for the seventh element against both
/// fixtures, given images `prefix` for the first six.
pub fn examine_prefix(f: &Rank3Fixture, field: &PrimeField, dim: usize, prefix: &[GfpVector]) -> Result<PrefixResult> {
    if prefix.len() != 6 {
        return Err(Error::InvalidParameter(alloc::format!("prefix has {} vectors, expected 6", prefix.len())));
    }
    if let Some(bad) = prefix.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: bad.dim() });
    }
    let p = field.modulus();
    let count = (p as usize).checked_pow(dim as u32).filter(|&c| c <= MAX_CANDIDATES);
    let Some(_) = count else {
        return Err(Error::InvalidParameter(alloc::format!("GF({p})^{dim} is too large to enumerate")));
    };
    let t1 = rank_table(&f.m1);
    let t2 = rank_table(&f.m2);
    let cands = all_vectors(dim, p);
    let g = 6;
    let host_rank = |s: usize, x: &GfpVector| {
        let sel: Vec<&GfpVector> = (0..7).filter(|i| s >> i & 1 == 1).map(|i| if i == g { x } else { &prefix[i] }).collect();
        rank_of(field, &sel)
    };
    let with_g = |ids: &[usize]| ids.iter().fold(1usize << g, |acc, &i| acc | 1 << i);
    let (ab, cd, ef) = (with_g(&[0, 1]), with_g(&[2, 3]), with_g(&[4, 5]));

    let mut valid1 = Vec::with_capacity(cands.len());
    let mut valid2 = Vec::with_capacity(cands.len());
    let mut near1 = Vec::with_capacity(cands.len());
    let mut near2 = Vec::with_capacity(cands.len());
    for x in &cands {
        let ranks: Vec<usize> = (0..64).map(|s| host_rank(s | 1 << g, x)).collect();
        let r = |s: usize| ranks[s & 63];
        valid1.push((0..64).all(|s| r(s) == t1[s | 1 << g]));
        valid2.push((0..64).all(|s| r(s) == t2[s | 1 << g]));
        let shared = !x.is_zero() && r(ab) == 2 && r(cd) == 2;
        near2.push(shared);
        near1.push(shared && r(ef) == 2);
    }

    let mut out = PrefixResult {
        valid1: valid1.iter().filter(|&&b| b).count(),
        valid2: valid2.iter().filter(|&&b| b).count(),
        ..PrefixResult::default()
    };
    let (e, fv) = (&prefix[4], &prefix[5]);
    for (i, g1) in cands.iter().enumerate() {
        for (j, g2) in cands.iter().enumerate() {
            out.pairs_examined += 1;
            if valid1[i] && valid2[j] {
                out.satisfying += 1;
            }
            if near1[i] && near2[j] {
                out.near_misses += 1;
                let direct = rank_of(field, &[e, fv, g1, g2]);
                let chain = rank_of(field, &[e, fv, g1]) + rank_of(field, &[g1, g2]) - rank_of(field, &[g1]);
                let efg2 = rank_of(field, &[e, fv, g2]);
                if direct > 2 || chain > 2 || efg2 == 3 {
                    out.argument_failures += 1;
                }
            }
        }
    }
    Ok(out)
}

/// Samples `prefixes` general-position placements of `a..f` in `GF(p)^dim`
/// (inside a random 3-dimensional subspace when `dim > 3`) and runs
/// [`examine_prefix`] on each.
pub fn rank3_extension_search(f: &Rank3Fixture, p: u64, dim: usize, prefixes: usize, seed: u64) -> Result<Rank3Report> {
    let field = PrimeField::new(p)?;
    if dim < 3 {
        return Err(Error::InvalidParameter(alloc::format!("host dimension {dim} cannot hold a rank-3 prefix")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Rank3Report {
        field: p,
        dim,
        prefixes,
        degenerate_skipped: 0,
        pairs_examined: 0,
        satisfying: 0,
        near_misses: 0,
        argument_failures: 0,
        valid1_total: 0,
        valid2_total: 0,
    };
    let random = |rng: &mut ChaCha8Rng| GfpVector((0..dim).map(|_| rng.random_range(0..p)).collect());
    let mut done = 0;
    while done < prefixes {
        let frame: Vec<GfpVector> = (0..3).map(|_| random(&mut rng)).collect();
        let prefix: Vec<GfpVector> = (0..6)
            .map(|_| {
                let mut v = GfpVector::zero(dim);
                for b in &frame {
                    v.add_scaled(&field, rng.random_range(0..p), b);
                }
                v
            })
            .collect();
        if !general_position(&field, &prefix) {
            report.degenerate_skipped += 1;
            continue;
        }
        let r = examine_prefix(f, &field, dim, &prefix)?;
        report.pairs_examined += r.pairs_examined;
        report.satisfying += r.satisfying;
        report.near_misses += r.near_misses;
        report.argument_failures += r.argument_failures;
        report.valid1_total += r.valid1;
        report.valid2_total += r.valid2;
        done += 1;
    }
    Ok(report)
}
