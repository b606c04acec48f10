use alloc::vec::Vec;

use super::RankOracle;
use crate::error::{Error, Result};

/// `left ⊕ right`; right's elements are numbered after left's.
#[derive(Clone, Debug)]
pub struct DirectSum<A, B> {
    left: A,
    right: B,
}

impl<A: RankOracle, B: RankOracle> DirectSum<A, B> {
    pub fn new(left: A, right: B) -> Self {
        DirectSum { left, right }
    }
}

impl<A: RankOracle, B: RankOracle> RankOracle for DirectSum<A, B> {
    fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }
    fn rank_of(&self, elements: &[usize]) -> usize {
        let cut = self.left.len();
        let (l, r): (Vec<usize>, Vec<usize>) = elements.iter().partition(|&&e| e < cut);
        let r: Vec<usize> = r.into_iter().map(|e| e - cut).collect();
        self.left.rank_of(&l) + self.right.rank_of(&r)
    }
}

/// `M_[k]`: `k` parallel copies of every element. Copy `j` of element `u` has
/// id `u * k + j`; rank is the base rank of the projection.
#[derive(Clone, Debug)]
pub struct Copies<M> {
    base: M,
    k: usize,
}

impl<M: RankOracle> Copies<M> {
    pub fn new(base: M, k: usize) -> Self {
        assert!(k >= 1, "need at least one copy");
        Copies { base, k }
    }

    pub fn copies(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> &M {
        &self.base
    }

    pub fn id(&self, element: usize, copy: usize) -> usize {
        element * self.k + copy
    }

    /// The projection `(u, j) -> u`.
    pub fn project(&self, id: usize) -> usize {
        id / self.k
    }
}

impl<M: RankOracle> RankOracle for Copies<M> {
    fn len(&self) -> usize {
        self.base.len() * self.k
    }
    fn rank_of(&self, elements: &[usize]) -> usize {
        let proj: Vec<usize> = elements.iter().map(|&e| e / self.k).collect();
        self.base.rank_of(&proj)
    }
}

/// `M|S`: element `i` of the restriction is `ids[i]` of the base.
#[derive(Clone, Debug)]
pub struct Restriction<M> {
    base: M,
    ids: Vec<usize>,
}

impl<M: RankOracle> Restriction<M> {
    pub fn new(base: M, ids: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = ids.iter().find(|&&e| e >= base.len()) {
            return Err(Error::ElementOutOfRange { element: bad, size: base.len() });
        }
        Ok(Restriction { base, ids })
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }
}

impl<M: RankOracle> RankOracle for Restriction<M> {
    fn len(&self) -> usize {
        self.ids.len()
    }
    fn rank_of(&self, elements: &[usize]) -> usize {
        let mapped: Vec<usize> = elements.iter().map(|&e| self.ids[e]).collect();
        self.base.rank_of(&mapped)
    }
}
