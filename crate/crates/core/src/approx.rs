//! Approximate embeddings into the free matroid.
//!
//! A random ordered basis `b` of `F_2^n` induces `f_b(x)` = the smallest
//! index used when writing `x` in that basis. Composed with the binary online
//! morphism this gives an online map into `Fr_n` that never increases rank
//! and keeps a logarithmic fraction of it in expectation.

use alloc::vec::Vec;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gate::PrefixGatedOracle;
use crate::gf2::{random_invertible, solve_in_span, Gf2Matrix, Gf2Vector};
use crate::matroid::{rank_table, span, RankOracle};
use crate::ome::{run_embedder, BinaryOmm, FreeHost, OnlineEmbedder};
use crate::subset::SubsetMask;

/// `f_b(x)` for an ordered basis given as a list of vectors (indices from 0).
pub fn f_b(x: &Gf2Vector, basis: &[Gf2Vector]) -> Result<usize> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let used = solve_in_span(x, basis).ok_or(Error::InvalidParameter("basis does not span the vector".into()))?;
    Ok(used.into_iter().min().expect("nonzero vector uses some basis vector"))
}

/// `f_b` with the basis inverted once up front.
#[derive(Clone, Debug)]
pub struct BasisMap {
    basis: Gf2Matrix,
    inverse: Gf2Matrix,
}

impl BasisMap {
    /// The columns of `basis`, in order, are `b_0, b_1, ...`.
    pub fn new(basis: Gf2Matrix) -> Result<Self> {
        let inverse = basis
            .inverse()
            .ok_or(Error::InvalidParameter("basis matrix is singular".into()))?;
        Ok(BasisMap { basis, inverse })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self::new(random_invertible(n, rng)).expect("sampled matrix is invertible")
    }

    pub fn basis(&self) -> &Gf2Matrix {
        &self.basis
    }

    pub fn index(&self, x: &Gf2Vector) -> Result<usize> {
        self.inverse.mul_vec(x).lowest_set().ok_or(Error::ZeroVector)
    }
}

/// Online approximate embedding of loop-free binary matroids into `Fr_n`.
#[derive(Clone, Debug)]
pub struct FreeEmbed {
    omm: BinaryOmm,
    map: BasisMap,
    host: FreeHost,
    seed: Option<u64>,
}

impl FreeEmbed {
    /// Basis drawn uniformly from `GL(n, 2)` with the given seed.
    pub fn new(n: usize, seed: u64) -> Self {
        let map = BasisMap::random(n, &mut ChaCha8Rng::seed_from_u64(seed));
        FreeEmbed { seed: Some(seed), ..Self::with_basis(map) }
    }

    pub fn with_basis(map: BasisMap) -> Self {
        let n = map.basis.rows();
        FreeEmbed { omm: BinaryOmm::new(n), map, host: FreeHost { n }, seed: None }
    }
}

impl OnlineEmbedder for FreeEmbed {
    type Host = FreeHost;

    fn host(&self) -> &FreeHost {
        &self.host
    }

    fn step(&mut self, gate: &mut PrefixGatedOracle<'_>, x: usize) -> Result<usize> {
        let v = self.omm.step(gate, x)?;
        self.map.index(&v).map_err(|_| Error::Loop(x))
    }

    fn seed(&self) -> Option<u64> {
        self.seed
    }
}

/// Every element to the single element of `Fr_1`.
#[derive(Clone, Copy, Debug)]
pub struct TrivialEmbed {
    host: FreeHost,
}

impl TrivialEmbed {
    pub fn new() -> Self {
        TrivialEmbed { host: FreeHost { n: 1 } }
    }
}

impl Default for TrivialEmbed {
    fn default() -> Self {
        Self::new()
    }
}

impl OnlineEmbedder for TrivialEmbed {
    type Host = FreeHost;

    fn host(&self) -> &FreeHost {
        &self.host
    }

    fn step(&mut self, _gate: &mut PrefixGatedOracle<'_>, _x: usize) -> Result<usize> {
        Ok(0)
    }
}

/// Lower bounds on `E[rank f_b(S)]` for `rank(S) = r` in dimension `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankBound {
    /// `Σ_{j=1}^n (1 − (1 − 2^{−j})^r)`: expected number of distinct indices
    /// if the `r` basis-coordinates of `S` were i.i.d.
    pub surrogate: f64,
    /// `(1 − 1/e)·log2(max(r, 2)/2)`.
    pub closed_form: f64,
    /// `n / 2^{n/2}`, subtracted from the closed form when checking.
    pub slack: f64,
}

impl RankBound {
    pub fn checked(&self) -> f64 {
        self.closed_form - self.slack
    }
}

pub fn expected_rank_lower_bound(r: usize, n: usize) -> RankBound {
    let surrogate = (1..=n)
        .map(|j| 1.0 - libm::pow(1.0 - libm::exp2(-(j as f64)), r as f64))
        .sum();
    let closed_form = (1.0 - libm::exp(-1.0)) * libm::log2(r.max(2) as f64 / 2.0);
    let slack = n as f64 / libm::exp2(n as f64 / 2.0);
    RankBound { surrogate, closed_form, slack }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetKind {
    Full,
    RandomSubset,
    RandomFlat,
}

/// Which sets `estimate_distortion` looks at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SetSampler {
    pub full: bool,
    /// Subsets of a uniform size in `1..=len`, uniform given the size.
    pub random_subsets: usize,
    /// Spans of uniform subsets of a uniform size.
    pub random_flats: usize,
}

impl SetSampler {
    pub fn sample<M: RankOracle + ?Sized, R: Rng + ?Sized>(&self, m: &M, rng: &mut R) -> Vec<(SetKind, SubsetMask)> {
        let n = m.len();
        let mut out = Vec::new();
        if self.full {
            out.push((SetKind::Full, SubsetMask::full(n)));
        }
        if n == 0 {
            return out;
        }
        let draw = |rng: &mut R| {
            let size = rng.random_range(1..=n);
            SubsetMask::from_ids(n, (0..n).choose_multiple(rng, size)).expect("ids in range")
        };
        for _ in 0..self.random_subsets {
            out.push((SetKind::RandomSubset, draw(rng)));
        }
        for _ in 0..self.random_flats {
            let s = draw(rng);
            out.push((SetKind::RandomFlat, span(m, &s)));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SetEstimate {
    pub kind: SetKind,
    pub size: usize,
    pub rank_m: usize,
    pub mean_rank: f64,
    /// Standard error of `mean_rank`.
    pub std_error: f64,
    pub bound: RankBound,
}

impl SetEstimate {
    pub fn beta(&self) -> f64 {
        self.rank_m as f64 / self.mean_rank
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistortionEstimate {
    pub sets: Vec<SetEstimate>,
    /// Largest `rank_M(S) / mean rank` over the sampled sets of positive
    /// rank: an estimate over the sampler, not a worst case.
    pub beta_hat: f64,
}

/// Images of the source elements under the binary online morphism into
/// `F_2^dim`, streamed in id order.
pub fn binary_images<M: RankOracle>(m: &M, dim: usize) -> Result<Vec<Gf2Vector>> {
    let order: Vec<usize> = (0..m.len()).collect();
    let rec = run_embedder(&mut BinaryOmm::new(dim), m, &order)?;
    Ok(rec.pairs.into_iter().map(|(_, v)| v).collect())
}

/// Monte-Carlo mean of `rank_Fr(f_b(S))` over `trials` fresh bases for each
/// set. Fails if any sample has more distinct images than `rank_M(S)`.
pub fn estimate_distortion<M: RankOracle, R: Rng + ?Sized>(
    m: &M,
    dim: usize,
    sets: &[(SetKind, SubsetMask)],
    trials: usize,
    rng: &mut R,
) -> Result<DistortionEstimate> {
    let images = binary_images(m, dim)?;
    if let Some(u) = images.iter().position(|v| v.is_zero()) {
        return Err(Error::Loop(u));
    }
    let ranks: Vec<usize> = sets.iter().map(|(_, s)| m.rank(s)).collect();
    let members: Vec<Vec<usize>> = sets.iter().map(|(_, s)| s.to_vec()).collect();
    let mut sum = alloc::vec![0.0; sets.len()];
    let mut sum_sq = alloc::vec![0.0; sets.len()];
    let mut idx = alloc::vec![0usize; images.len()];
    for _ in 0..trials {
        let map = BasisMap::random(dim, rng);
        for (slot, v) in idx.iter_mut().zip(&images) {
            *slot = map.index(v)?;
        }
        for (s, ids) in members.iter().enumerate() {
            let got = distinct_indices(ids.iter().map(|&u| idx[u]), dim);
            if got > ranks[s] {
                return Err(Error::InvalidMatroid(alloc::format!(
                    "rank inflated on sampled set {s}: {got} images for rank {}",
                    ranks[s]
                )));
            }
            sum[s] += got as f64;
            sum_sq[s] += (got * got) as f64;
        }
    }
    let t = trials as f64;
    let rows: Vec<SetEstimate> = sets
        .iter()
        .enumerate()
        .map(|(s, (kind, set))| {
            let mean = sum[s] / t;
            let var = if trials > 1 { (sum_sq[s] - t * mean * mean).max(0.0) / (t - 1.0) } else { 0.0 };
            SetEstimate {
                kind: *kind,
                size: set.len(),
                rank_m: ranks[s],
                mean_rank: mean,
                std_error: libm::sqrt(var / t),
                bound: expected_rank_lower_bound(ranks[s], dim),
            }
        })
        .collect();
    let beta_hat = rows.iter().filter(|r| r.rank_m > 0).map(SetEstimate::beta).fold(1.0, f64::max);
    Ok(DistortionEstimate { sets: rows, beta_hat })
}

fn distinct_indices(idx: impl Iterator<Item = usize>, dim: usize) -> usize {
    let mut seen = alloc::vec![0u64; dim.div_ceil(64)];
    for i in idx {
        seen[i / 64] |= 1 << (i % 64);
    }
    seen.iter().map(|w| w.count_ones() as usize).sum()
}

/// Checks `|f_b(S)| <= rank_M(S)` for every subset `S` and each of `bases`
/// random bases; returns the number of (basis, subset) pairs checked.
pub fn check_no_inflation<M: RankOracle, R: Rng + ?Sized>(
    m: &M,
    dim: usize,
    bases: usize,
    rng: &mut R,
) -> Result<u64> {
    let n = m.len();
    if n > crate::matroid::DEFAULT_EXHAUSTIVE_CAP {
        return Err(Error::CapExceeded { what: "exhaustive inflation check", size: n, cap: crate::matroid::DEFAULT_EXHAUSTIVE_CAP });
    }
    let table = rank_table(m);
    let images = binary_images(m, dim)?;
    let mut checked = 0;
    let mut idx = alloc::vec![0usize; n];
    for _ in 0..bases {
        let map = BasisMap::random(dim, rng);
        for (u, (slot, v)) in idx.iter_mut().zip(&images).enumerate() {
            *slot = map.index(v).map_err(|_| Error::Loop(u))?;
        }
        for s in 0u64..1 << n {
            let got = distinct_indices(crate::subset::bits(s).map(|u| idx[u]), dim);
            if got > table[s as usize] {
                return Err(Error::InvalidMatroid(alloc::format!("rank inflated on subset {s:#b}")));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// All nonzero vectors of `F_2^n` as a column matroid.
pub fn complete_binary(n: usize) -> crate::matroid::LinearGf2 {
    let cols = (1u64..1 << n).map(|b| Gf2Vector::from_bits(n, b)).collect();
    crate::matroid::LinearGf2::new(n, cols).expect("uniform dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{gen, Graphic, Uniform};
    use crate::ome::verify_record;
    use crate::rng::trial_rng;
    use alloc::vec;

    fn e(n: usize, i: usize) -> Gf2Vector {
        Gf2Vector::unit(n, i)
    }

    #[test]
    fn f_b_examples() {
        let std: Vec<Gf2Vector> = (0..4).map(|i| e(4, i)).collect();
        assert_eq!(f_b(&e(4, 2), &std).unwrap(), 2);
        assert_eq!(f_b(&e(4, 0).xor(&e(4, 1)), &std).unwrap(), 0);
        assert_eq!(f_b(&Gf2Vector::zero(4), &std), Err(Error::ZeroVector));
        let mut rng = trial_rng(2, 0);
        for _ in 0..50 {
            let map = BasisMap::random(6, &mut rng);
            let cols = map.basis().columns().to_vec();
            for j in 0..6 {
                assert_eq!(f_b(&cols[j], &cols).unwrap(), j);
                assert_eq!(map.index(&cols[j]).unwrap(), j);
            }
            let x = Gf2Vector::random(6, &mut rng);
            if !x.is_zero() {
                assert_eq!(map.index(&x).unwrap(), f_b(&x, &cols).unwrap());
            }
        }
    }

    #[test]
    fn free_source_with_standard_basis() {
        let mut emb = FreeEmbed::with_basis(BasisMap::new(Gf2Matrix::identity(5)).unwrap());
        let rec = run_embedder(&mut emb, &Uniform::free(5), &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(rec.pairs.iter().map(|p| p.1).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn parallel_elements_share_an_image() {
        let m = Graphic::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let rec = run_embedder(&mut FreeEmbed::new(2, 3), &m, &[0, 1]).unwrap();
        assert_eq!(rec.pairs[0].1, rec.pairs[1].1);
    }

    #[test]
    fn loops_are_rejected() {
        let m = Uniform::new(1, 0);
        assert_eq!(run_embedder(&mut FreeEmbed::new(2, 0), &m, &[0]).unwrap_err(), Error::Loop(0));
    }

    #[test]
    fn bound_examples() {
        let b = expected_rank_lower_bound(4, 4);
        let first_four = 0.9375 + 0.68359375 + 0.41381836 + 0.22752380;
        assert!((b.surrogate - first_four).abs() < 1e-6, "{}", b.surrogate);
        assert!((b.closed_form - 0.632_120_558_8).abs() < 1e-9);
        assert!(expected_rank_lower_bound(1, 30).surrogate < 1.0);
        assert_eq!(expected_rank_lower_bound(2, 4).closed_form, 0.0);
    }

    #[test]
    fn singletons_have_mean_rank_one() {
        let m = complete_binary(4);
        let sets: Vec<(SetKind, SubsetMask)> =
            (0..m.len()).map(|u| (SetKind::RandomSubset, SubsetMask::from_ids(m.len(), [u]).unwrap())).collect();
        let est = estimate_distortion(&m, 4, &sets, 100, &mut trial_rng(0, 0)).unwrap();
        assert!(est.sets.iter().all(|s| s.mean_rank == 1.0));
        assert_eq!(est.beta_hat, 1.0);
    }

    #[test]
    fn trivial_embedding_has_distortion_rank() {
        let m = Uniform::new(5, 3);
        let mut emb = TrivialEmbed::new();
        let rec = run_embedder(&mut emb, &m, &[0, 1, 2, 3, 4]).unwrap();
        assert!(rec.pairs.iter().all(|p| p.1 == 0));
        let rep = verify_record(&rec, &m, emb.host(), 14).unwrap();
        assert!(!rep.morphism);
        // rank 3 set mapped to rank 1: distortion equals the rank of M
        assert_eq!(m.rank_of(&[0, 1, 2]), 3);
    }

    #[test]
    fn no_inflation_on_random_binary_matroids() {
        let mut rng = trial_rng(6, 0);
        for _ in 0..10 {
            let m = gen::random_gf2(8, 4, &mut rng);
            let cols: Vec<Gf2Vector> = m.columns().iter().copied().filter(|c| !c.is_zero()).collect();
            let m = crate::matroid::LinearGf2::new(4, cols).unwrap();
            assert!(check_no_inflation(&m, 4, 20, &mut rng).unwrap() > 0);
        }
    }

    #[test]
    fn sampler_flats_are_flats() {
        let m = complete_binary(3);
        let sampler = SetSampler { full: true, random_subsets: 5, random_flats: 5 };
        for (kind, s) in sampler.sample(&m, &mut trial_rng(1, 0)) {
            if kind == SetKind::RandomFlat {
                assert_eq!(span(&m, &s), s);
            }
        }
    }
}
