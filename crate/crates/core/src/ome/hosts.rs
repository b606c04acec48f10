use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::Host;
use crate::gf2::{gf2_rank, Gf2Vector};
use crate::gfp::{rank_in, GfpVector, PrimeField};
use crate::matroid::RankOracle;

fn distinct<T: Ord + Clone>(xs: &[T]) -> Vec<T> {
    let mut v = xs.to_vec();
    v.sort();
    v.dedup();
    v
}

/// The complete binary matroid `F_2^dim`, zero vector included as a loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gf2Space {
    pub dim: usize,
}

/// Dense indexing of `F_2^dim` is offered up to this dimension.
const ENUMERABLE_DIM: usize = 24;

impl Host for Gf2Space {
    type Element = Gf2Vector;

    fn rank_of(&self, elements: &[Gf2Vector]) -> usize {
        gf2_rank(elements).expect("host vectors share the dimension")
    }

    fn describe(&self) -> String {
        format!("gf2 dim={}", self.dim)
    }

    fn size(&self) -> Option<usize> {
        (self.dim <= ENUMERABLE_DIM).then(|| 1 << self.dim)
    }

    fn index_of(&self, e: &Gf2Vector) -> Option<usize> {
        (self.dim <= ENUMERABLE_DIM).then(|| e.low_word() as usize)
    }

    fn element_at(&self, i: usize) -> Option<Gf2Vector> {
        (self.dim <= ENUMERABLE_DIM && i < 1 << self.dim).then(|| Gf2Vector::from_bits(self.dim, i as u64))
    }
}

/// `GF(p)^dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GfpSpace {
    pub field: PrimeField,
    pub dim: usize,
}

impl Host for GfpSpace {
    type Element = GfpVector;

    fn rank_of(&self, elements: &[GfpVector]) -> usize {
        rank_in(&self.field, elements).expect("host vectors share the dimension")
    }

    fn describe(&self) -> String {
        format!("gfp p={} dim={}", self.field.modulus(), self.dim)
    }
}

/// `U_{1,1} ⊕ T`: element 0 is the loop, element 1 the non-loop.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rank1Host;

impl Host for Rank1Host {
    type Element = usize;

    fn rank_of(&self, elements: &[usize]) -> usize {
        elements.contains(&1) as usize
    }

    fn describe(&self) -> String {
        "rank1".into()
    }

    fn size(&self) -> Option<usize> {
        Some(2)
    }

    fn index_of(&self, e: &usize) -> Option<usize> {
        (*e < 2).then_some(*e)
    }

    fn element_at(&self, i: usize) -> Option<usize> {
        (i < 2).then_some(i)
    }
}

/// `U_{n,2} ⊕ T`: element 0 is the loop, `1..=n` the uniform part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rank2Host {
    pub n: usize,
}

impl Host for Rank2Host {
    type Element = usize;

    fn rank_of(&self, elements: &[usize]) -> usize {
        distinct(elements).iter().filter(|&&e| e != 0).count().min(2)
    }

    fn describe(&self) -> String {
        format!("rank2 n={}", self.n)
    }

    fn size(&self) -> Option<usize> {
        Some(self.n + 1)
    }

    fn index_of(&self, e: &usize) -> Option<usize> {
        (*e <= self.n).then_some(*e)
    }

    fn element_at(&self, i: usize) -> Option<usize> {
        (i <= self.n).then_some(i)
    }
}

/// The free matroid on `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeHost {
    pub n: usize,
}

impl Host for FreeHost {
    type Element = usize;

    fn rank_of(&self, elements: &[usize]) -> usize {
        distinct(elements).len()
    }

    fn describe(&self) -> String {
        format!("free n={}", self.n)
    }

    fn size(&self) -> Option<usize> {
        Some(self.n)
    }

    fn index_of(&self, e: &usize) -> Option<usize> {
        (*e < self.n).then_some(*e)
    }

    fn element_at(&self, i: usize) -> Option<usize> {
        (i < self.n).then_some(i)
    }
}

/// Copy `copy` of host element `base`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Copied<T> {
    pub base: T,
    pub copy: usize,
}

impl<T: fmt::Display> fmt::Display for Copied<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.base, self.copy)
    }
}

/// `H_[copies]`: every host element duplicated into parallel copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CopyHost<H> {
    pub inner: H,
    pub copies: usize,
}

impl<H: Host> Host for CopyHost<H> {
    type Element = Copied<H::Element>;

    fn rank_of(&self, elements: &[Self::Element]) -> usize {
        let bases: Vec<H::Element> = elements.iter().map(|c| c.base.clone()).collect();
        self.inner.rank_of(&bases)
    }

    fn describe(&self) -> String {
        format!("{} copies={}", self.inner.describe(), self.copies)
    }

    fn size(&self) -> Option<usize> {
        self.inner.size().and_then(|s| s.checked_mul(self.copies))
    }

    fn index_of(&self, e: &Self::Element) -> Option<usize> {
        (e.copy < self.copies).then_some(())?;
        Some(self.inner.index_of(&e.base)? * self.copies + e.copy)
    }

    fn element_at(&self, i: usize) -> Option<Self::Element> {
        let base = self.inner.element_at(i / self.copies)?;
        Some(Copied { base, copy: i % self.copies })
    }
}

/// An enumerable host seen as a [`RankOracle`] on `0..size`.
pub struct HostOracle<'a, H> {
    host: &'a H,
    size: usize,
}

impl<'a, H: Host> HostOracle<'a, H> {
    /// `None` if the host cannot be enumerated.
    pub fn new(host: &'a H) -> Option<Self> {
        Some(HostOracle { host, size: host.size()? })
    }
}

impl<H: Host> RankOracle for HostOracle<'_, H> {
    fn len(&self) -> usize {
        self.size
    }

    fn rank_of(&self, ids: &[usize]) -> usize {
        let elems: Vec<H::Element> =
            ids.iter().map(|&i| self.host.element_at(i).expect("id within host size")).collect();
        self.host.rank_of(&elems)
    }
}
