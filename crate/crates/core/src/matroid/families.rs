use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{distinct, RankOracle};
use crate::error::{Error, Result};
use crate::gf2::{gf2_rank, rank_words, Gf2Vector};
use crate::gfp::{rank_in, GfpVector, PrimeField};
use crate::subset::SubsetMask;

/// Largest ground set stored as a full rank table.
pub const MAX_EXPLICIT: usize = 14;

/// `U_{n,r}`: rank is `min(r, |S|)`. Covers the free matroid `U_{n,n}` and the
/// trivial matroid `U_{1,0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Uniform {
    n: usize,
    r: usize,
}

impl Uniform {
    pub fn new(n: usize, r: usize) -> Self {
        Uniform { n, r: r.min(n) }
    }

    pub fn free(n: usize) -> Self {
        Uniform { n, r: n }
    }

    pub fn trivial() -> Self {
        Uniform { n: 1, r: 0 }
    }

    pub fn rank_bound(&self) -> usize {
        self.r
    }
}

impl RankOracle for Uniform {
    fn len(&self) -> usize {
        self.n
    }
    fn rank_of(&self, elements: &[usize]) -> usize {
        distinct(elements).len().min(self.r)
    }
}

/// Column matroid of vectors over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearGf2 {
    dim: usize,
    cols: Vec<Gf2Vector>,
}

impl LinearGf2 {
    pub fn new(dim: usize, cols: Vec<Gf2Vector>) -> Result<Self> {
        if let Some(bad) = cols.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: bad.dim() });
        }
        Ok(LinearGf2 { dim, cols })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn columns(&self) -> &[Gf2Vector] {
        &self.cols
    }

    /// The complete binary matroid: every nonzero vector of `F_2^dim` (dim <= 20).
    pub fn complete(dim: usize) -> Self {
        assert!(dim <= 20);
        let cols = (1u64..1 << dim).map(|b| Gf2Vector::from_bits(dim, b)).collect();
        LinearGf2 { dim, cols }
    }
}

impl RankOracle for LinearGf2 {
    fn len(&self) -> usize {
        self.cols.len()
    }
    fn rank_of(&self, elements: &[usize]) -> usize {
        if self.dim <= 64 {
            rank_words(elements.iter().map(|&e| self.cols[e].low_word()))
        } else {
            let sel: Vec<Gf2Vector> = elements.iter().map(|&e| self.cols[e]).collect();
            gf2_rank(&sel).unwrap_or(0)
        }
    }
}

/// Column matroid of vectors over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearGfp {
    field: PrimeField,
    dim: usize,
    cols: Vec<GfpVector>,
}

impl LinearGfp {
    pub fn new(p: u64, dim: usize, cols: Vec<GfpVector>) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if let Some(bad) = cols.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: bad.dim() });
        }
        let cols = cols.into_iter().map(|c| GfpVector(c.0.iter().map(|&x| x % p).collect())).collect();
        Ok(LinearGfp { field, dim, cols })
    }

    pub fn modulus(&self) -> u64 {
        self.field.modulus()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn columns(&self) -> &[GfpVector] {
        &self.cols
    }
}

impl RankOracle for LinearGfp {
    fn len(&self) -> usize {
        self.cols.len()
    }
    fn rank_of(&self, elements: &[usize]) -> usize {
        let sel: Vec<GfpVector> = distinct(elements).into_iter().map(|e| self.cols[e].clone()).collect();
        rank_in(&self.field, &sel).unwrap_or(0)
    }
}

/// Cycle matroid of a multigraph; self-loops are rank-0 elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graphic {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graphic {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
            return Err(Error::InvalidMatroid(format!(
                "edge ({u},{v}) outside {vertices} vertices"
            )));
        }
        Ok(Graphic { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Incidence vectors `e_u + e_v` over GF(2).
    pub fn incidence_gf2(&self) -> LinearGf2 {
        let cols = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let mut x = Gf2Vector::zero(self.vertices);
                x.set(u, true);
                let b = x.get(v);
                x.set(v, !b);
                x
            })
            .collect();
        LinearGf2 { dim: self.vertices, cols }
    }
}

impl RankOracle for Graphic {
    fn len(&self) -> usize {
        self.edges.len()
    }
    fn rank_of(&self, elements: &[usize]) -> usize {
        let mut uf = UnionFind::new(self.vertices);
        distinct(elements)
            .into_iter()
            .filter(|&e| {
                let (u, v) = self.edges[e];
                uf.union(u, v)
            })
            .count()
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Laminar matroid: `I` is independent iff `|I ∩ A| <= c(A)` for every member
/// `A` of a laminar family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laminar {
    n: usize,
    family: Vec<(SubsetMask, usize)>,
}

impl Laminar {
    pub fn new(n: usize, family: Vec<(SubsetMask, usize)>) -> Result<Self> {
        for (i, (a, _)) in family.iter().enumerate() {
            if let Some(bad) = a.iter().find(|&e| e >= n) {
                return Err(Error::ElementOutOfRange { element: bad, size: n });
            }
            for (j, (b, _)) in family.iter().enumerate().skip(i + 1) {
                let crossing = !a.intersection(b).is_empty()
                    && !a.difference(b).is_empty()
                    && !b.difference(a).is_empty();
                if crossing {
                    return Err(Error::NotLaminar { first: i, second: j });
                }
            }
        }
        let family = family.into_iter().map(|(a, c)| (SubsetMask::from_ids(n, a.iter()).unwrap(), c)).collect();
        Ok(Laminar { n, family })
    }

    pub fn family(&self) -> &[(SubsetMask, usize)] {
        &self.family
    }
}

impl RankOracle for Laminar {
    fn len(&self) -> usize {
        self.n
    }
    fn rank_of(&self, elements: &[usize]) -> usize {
        // Greedy is exact for matroids.
        let mut used = vec![0usize; self.family.len()];
        let mut rank = 0;
        for e in distinct(elements) {
            let fits = self
                .family
                .iter()
                .zip(&used)
                .all(|((a, cap), &u)| !a.contains(e) || u < *cap);
            if fits {
                for ((a, _), u) in self.family.iter().zip(used.iter_mut()) {
                    if a.contains(e) {
                        *u += 1;
                    }
                }
                rank += 1;
            }
        }
        rank
    }
}

/// A matroid stored as its full rank table (at most [`MAX_EXPLICIT`] elements).
///
/// The table is not validated on construction; run
/// [`check_axioms`](super::check_axioms) on untrusted input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Explicit {
    n: usize,
    table: Vec<u8>,
}

impl Explicit {
    pub fn from_rank_table(n: usize, table: Vec<u8>) -> Result<Self> {
        if n > MAX_EXPLICIT {
            return Err(Error::CapExceeded { what: "explicit matroid", size: n, cap: MAX_EXPLICIT });
        }
        if table.len() != 1 << n {
            return Err(Error::InvalidMatroid(format!(
                "rank table has {} entries, expected {}",
                table.len(),
                1usize << n
            )));
        }
        Ok(Explicit { n, table })
    }

    /// Matroid whose bases (maximal independent sets) are `bases`.
    pub fn from_bases(n: usize, bases: &[SubsetMask]) -> Result<Self> {
        if n > MAX_EXPLICIT {
            return Err(Error::CapExceeded { what: "explicit matroid", size: n, cap: MAX_EXPLICIT });
        }
        if let Some(bad) = bases.iter().flat_map(|b| b.iter()).find(|&e| e >= n) {
            return Err(Error::ElementOutOfRange { element: bad, size: n });
        }
        let words: Vec<u64> = bases.iter().map(|b| b.low_bits()).collect();
        let table = (0u64..1 << n)
            .map(|s| words.iter().map(|b| (s & b).count_ones()).max().unwrap_or(0) as u8)
            .collect();
        Ok(Explicit { n, table })
    }

    pub fn from_oracle<M: RankOracle + ?Sized>(m: &M) -> Result<Self> {
        let n = m.len();
        if n > MAX_EXPLICIT {
            return Err(Error::CapExceeded { what: "explicit matroid", size: n, cap: MAX_EXPLICIT });
        }
        Ok(Explicit { n, table: super::rank_table(m).into_iter().map(|r| r as u8).collect() })
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn rank_bits(&self, bits: u64) -> usize {
        self.table[bits as usize] as usize
    }

    /// Maximal independent sets.
    pub fn bases(&self) -> Vec<SubsetMask> {
        let full = self.table[(1usize << self.n) - 1];
        (0u64..1 << self.n)
            .filter(|&s| s.count_ones() as u8 == full && self.table[s as usize] == full)
            .map(|s| SubsetMask::from_bits(self.n, s))
            .collect()
    }
}

impl RankOracle for Explicit {
    fn len(&self) -> usize {
        self.n
    }
    fn rank_of(&self, elements: &[usize]) -> usize {
        let bits = elements.iter().fold(0u64, |acc, &e| acc | 1 << e);
        self.table[bits as usize] as usize
    }
    fn rank(&self, s: &SubsetMask) -> usize {
        self.table[s.low_bits() as usize] as usize
    }
}
