//! Bit-packed linear algebra over GF(2).
//!
//! Vectors hold up to [`MAX_DIM`] coordinates inline; dimensions up to 64 take
//! single-word fast paths in elimination.

use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 512;
const WORDS: usize = MAX_DIM / 64;

/// A vector of `F_2^dim`; addition is XOR.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    dim: usize,
    words: [u64; WORDS],
}

impl Gf2Vector {
    /// Panics if `dim > MAX_DIM`; use [`Gf2Vector::try_zero`] to get an error instead.
    pub fn zero(dim: usize) -> Self {
        Self::try_zero(dim).expect("GF(2) dimension too large")
    }

    pub fn try_zero(dim: usize) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        Ok(Gf2Vector { dim, words: [0; WORDS] })
    }

    /// The standard basis vector with a single 1 in coordinate `i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.set(i, true);
        v
    }

    pub fn from_bits(dim: usize, bits: u64) -> Self {
        let mut v = Self::zero(dim);
        v.words[0] = bits & low_mask(dim.min(64));
        v
    }

    pub fn from_coords(coords: &[u8]) -> Self {
        let mut v = Self::zero(coords.len());
        for (i, &c) in coords.iter().enumerate() {
            v.set(i, c & 1 == 1);
        }
        v
    }

    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let mut v = Self::zero(dim);
        for w in 0..dim.div_ceil(64) {
            let hi = (dim - w * 64).min(64);
            v.words[w] = rng.random::<u64>() & low_mask(hi);
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.dim && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.dim, "coordinate {i} outside dimension {}", self.dim);
        if bit {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    /// Coordinates 0..64 packed in a word (higher coordinates dropped).
    pub fn low_word(&self) -> u64 {
        self.words[0]
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn lowest_set(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.nwords();
        for (a, b) in self.words[..n].iter_mut().zip(other.words[..n].iter()) {
            *a ^= b;
        }
    }

    pub fn xor(mut self, other: &Self) -> Self {
        self.xor_assign(other);
        self
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).filter(move |&i| self.get(i))
    }

    fn nwords(&self) -> usize {
        self.dim.div_ceil(64)
    }
}

impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({self})")
    }
}

fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn check_dims(cols: &[Gf2Vector]) -> Result<()> {
    if let Some(first) = cols.first() {
        if let Some(bad) = cols.iter().find(|c| c.dim != first.dim) {
            return Err(Error::DimensionMismatch { expected: first.dim, got: bad.dim });
        }
    }
    Ok(())
}

/// Incremental echelon basis keyed by the lowest set coordinate of each stored
/// vector. Each stored vector remembers which inputs it is the XOR of.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    pivots: Vec<Option<(Gf2Vector, Vec<u64>)>>,
    inserted: usize,
    rank: usize,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, pivots: (0..dim).map(|_| None).collect(), inserted: 0, rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduces `v` against the basis; returns the remainder and the input
    /// indices whose XOR was subtracted.
    pub fn reduce(&self, v: &Gf2Vector) -> (Gf2Vector, Vec<u64>) {
        let mut x = *v;
        let mut combo = Vec::new();
        while let Some(p) = x.lowest_set() {
            match &self.pivots[p] {
                Some((b, c)) => {
                    x.xor_assign(b);
                    xor_words(&mut combo, c);
                }
                None => break,
            }
        }
        (x, combo)
    }

    /// Adds `v` as input number `self.inserted`. Returns true if it raised the rank.
    pub fn insert(&mut self, v: &Gf2Vector) -> bool {
        assert_eq!(v.dim, self.dim);
        let idx = self.inserted;
        self.inserted += 1;
        let (x, mut combo) = self.reduce(v);
        match x.lowest_set() {
            None => false,
            Some(p) => {
                let mut own = Vec::new();
                set_word_bit(&mut own, idx);
                xor_words(&mut combo, &own);
                self.pivots[p] = Some((x, combo));
                self.rank += 1;
                true
            }
        }
    }

    pub fn contains(&self, v: &Gf2Vector) -> bool {
        self.reduce(v).0.is_zero()
    }
}

fn xor_words(acc: &mut Vec<u64>, other: &[u64]) {
    if acc.len() < other.len() {
        acc.resize(other.len(), 0);
    }
    for (a, b) in acc.iter_mut().zip(other) {
        *a ^= b;
    }
}

fn set_word_bit(acc: &mut Vec<u64>, i: usize) {
    if acc.len() <= i / 64 {
        acc.resize(i / 64 + 1, 0);
    }
    acc[i / 64] |= 1 << (i % 64);
}

/// Rank of a family of GF(2) vectors by Gaussian elimination.
pub fn gf2_rank(cols: &[Gf2Vector]) -> Result<usize> {
    check_dims(cols)?;
    let Some(first) = cols.first() else { return Ok(0) };
    if first.dim <= 64 {
        return Ok(rank_words(cols.iter().map(|c| c.words[0])));
    }
    let mut basis: Vec<Option<Gf2Vector>> = (0..first.dim).map(|_| None).collect();
    let mut rank = 0;
    for c in cols {
        let mut x = *c;
        while let Some(p) = x.lowest_set() {
            match &basis[p] {
                Some(b) => x.xor_assign(b),
                None => {
                    basis[p] = Some(x);
                    rank += 1;
                    break;
                }
            }
        }
    }
    Ok(rank)
}

/// Rank of single-word vectors (dimension at most 64).
pub fn rank_words<I: IntoIterator<Item = u64>>(cols: I) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for mut x in cols {
        while x != 0 {
            let p = x.trailing_zeros() as usize;
            if basis[p] == 0 {
                basis[p] = x;
                rank += 1;
                break;
            }
            x ^= basis[p];
        }
    }
    rank
}

/// Indices of `basis` whose XOR equals `target`, or `None` when `target` lies
/// outside the span. Dependent basis members are never used, so the answer is
/// unique whenever `basis` is independent.
pub fn solve_in_span(target: &Gf2Vector, basis: &[Gf2Vector]) -> Option<Vec<usize>> {
    if basis.iter().any(|b| b.dim != target.dim) {
        return None;
    }
    let mut eb = EchelonBasis::new(target.dim);
    for b in basis {
        eb.insert(b);
    }
    let (rem, combo) = eb.reduce(target);
    if !rem.is_zero() {
        return None;
    }
    Some(
        combo
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| crate::subset::bits(bits).map(move |b| w * 64 + b))
            .collect(),
    )
}

/// Dense matrix over GF(2), stored by columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: Vec<Gf2Vector>,
}

impl Gf2Matrix {
    pub fn from_columns(rows: usize, cols: Vec<Gf2Vector>) -> Result<Self> {
        if let Some(bad) = cols.iter().find(|c| c.dim != rows) {
            return Err(Error::DimensionMismatch { expected: rows, got: bad.dim });
        }
        Ok(Gf2Matrix { rows, cols })
    }

    pub fn identity(n: usize) -> Self {
        Gf2Matrix { rows: n, cols: (0..n).map(|i| Gf2Vector::unit(n, i)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[Gf2Vector] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.cols[c].get(r)
    }

    pub fn mul_vec(&self, x: &Gf2Vector) -> Gf2Vector {
        debug_assert_eq!(x.dim, self.cols.len());
        let mut out = Gf2Vector::zero(self.rows);
        for i in x.ones() {
            out.xor_assign(&self.cols[i]);
        }
        out
    }

    /// `self * other`.
    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        debug_assert_eq!(self.cols.len(), other.rows);
        Gf2Matrix { rows: self.rows, cols: other.cols.iter().map(|c| self.mul_vec(c)).collect() }
    }

    pub fn rank(&self) -> usize {
        gf2_rank(&self.cols).unwrap_or(0)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols.len() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Gf2Matrix> {
        let n = self.rows;
        if self.cols.len() != n {
            return None;
        }
        // Column j of the inverse is the combination of columns giving e_j.
        let mut inv = Vec::with_capacity(n);
        for j in 0..n {
            let combo = solve_in_span(&Gf2Vector::unit(n, j), &self.cols)?;
            let mut c = Gf2Vector::zero(n);
            for i in combo {
                c.set(i, true);
            }
            inv.push(c);
        }
        Some(Gf2Matrix { rows: n, cols: inv })
    }

    /// Bits of the matrix in column-major order (dimension at most 8).
    pub fn fingerprint(&self) -> u64 {
        let mut key = 0u64;
        for (j, c) in self.cols.iter().enumerate() {
            key |= c.low_word() << (j * self.rows);
        }
        key
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.cols.iter()).finish()
    }
}

/// Uniform sample from GL(n, 2) by rejection: random bit matrices are
/// invertible with probability above 0.288 for every `n`.
pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Gf2Matrix {
    assert!((1..=MAX_DIM).contains(&n), "dimension {n} outside 1..={MAX_DIM}");
    loop {
        let cols: Vec<Gf2Vector> = (0..n).map(|_| Gf2Vector::random(n, rng)).collect();
        if gf2_rank(&cols) == Ok(n) {
            return Gf2Matrix { rows: n, cols };
        }
    }
}

/// Extends an independent family to a basis of `F_2^dim` with standard vectors.
pub fn complete_basis(independent: &[Gf2Vector], dim: usize) -> Vec<Gf2Vector> {
    let mut eb = EchelonBasis::new(dim);
    let mut out = Vec::with_capacity(dim);
    for v in independent {
        if eb.insert(v) {
            out.push(*v);
        }
    }
    for i in 0..dim {
        let e = Gf2Vector::unit(dim, i);
        if eb.insert(&e) {
            out.push(e);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    fn e(dim: usize, i: usize) -> Gf2Vector {
        Gf2Vector::unit(dim, i)
    }

    // Independent oracle: row-reduce the transposed matrix with a plain
    // Vec<bool> representation and highest-index pivots.
    fn rank_by_rows(cols: &[Gf2Vector]) -> usize {
        if cols.is_empty() {
            return 0;
        }
        let dim = cols[0].dim();
        let mut m: Vec<Vec<bool>> = (0..dim).map(|r| cols.iter().map(|c| c.get(r)).collect()).collect();
        let ncols = cols.len();
        let mut rank = 0;
        for c in (0..ncols).rev() {
            let Some(p) = (rank..dim).find(|&r| m[r][c]) else { continue };
            m.swap(rank, p);
            for r in 0..dim {
                if r != rank && m[r][c] {
                    let pivot = m[rank].clone();
                    for (x, y) in m[r].iter_mut().zip(pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_examples() {
        let d = 4;
        assert_eq!(gf2_rank(&[e(d, 0), e(d, 1), e(d, 0).xor(&e(d, 1))]), Ok(2));
        assert_eq!(gf2_rank(&[]), Ok(0));
        assert!(matches!(gf2_rank(&[e(3, 0), e(4, 0)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rank_matches_row_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [8usize, 8, 8, 70, 130] {
            for _ in 0..50 {
                let cols: Vec<_> = (0..20).map(|_| Gf2Vector::random(dim, &mut rng)).collect();
                assert_eq!(gf2_rank(&cols).unwrap(), rank_by_rows(&cols));
            }
        }
    }

    #[test]
    fn solve_examples() {
        let d = 4;
        let basis = [e(d, 0), e(d, 1), e(d, 2)];
        assert_eq!(solve_in_span(&e(d, 0).xor(&e(d, 2)), &basis), Some(vec![0, 2]));
        assert_eq!(solve_in_span(&e(d, 3), &basis[..2]), None);
        assert_eq!(solve_in_span(&Gf2Vector::zero(d), &basis), Some(vec![]));
    }

    #[test]
    fn solve_round_trip_multiword() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [10usize, 64, 200] {
            for _ in 0..30 {
                let b = random_invertible(dim.min(40), &mut rng);
                let basis: Vec<_> = b.columns().to_vec();
                let pick: Vec<usize> = (0..basis.len()).filter(|_| rng.random::<bool>()).collect();
                let mut t = Gf2Vector::zero(basis[0].dim());
                for &i in &pick {
                    t.xor_assign(&basis[i]);
                }
                assert_eq!(solve_in_span(&t, &basis), Some(pick));
            }
        }
    }

    #[test]
    fn gl1_is_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert_eq!(random_invertible(1, &mut rng), Gf2Matrix::identity(1));
        }
    }

    #[test]
    fn random_invertible_has_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [1usize, 2, 5, 64, 65, 100] {
            let a = random_invertible(n, &mut rng);
            assert_eq!(a.rank(), n);
            let inv = a.inverse().unwrap();
            assert_eq!(a.mul(&inv), Gf2Matrix::identity(n));
        }
    }

    #[test]
    fn gl32_uniform() {
        // |GL(3,2)| = (8-1)(8-2)(8-4) = 168.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trials = 100_000usize;
        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for _ in 0..trials {
            *counts.entry(random_invertible(3, &mut rng).fingerprint()).or_default() += 1;
        }
        assert_eq!(counts.len(), 168);
        let p = 1.0 / 168.0;
        let mean = trials as f64 * p;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        for &c in counts.values() {
            assert!((c as f64 - mean).abs() <= 5.0 * sigma, "count {c} vs mean {mean}");
        }
    }

    #[test]
    fn complete_basis_spans() {
        let d = 6;
        let part = [e(d, 0).xor(&e(d, 1)), e(d, 1)];
        let full = complete_basis(&part, d);
        assert_eq!(full.len(), d);
        assert_eq!(gf2_rank(&full), Ok(d));
        assert_eq!(&full[..2], &part);
    }
}
