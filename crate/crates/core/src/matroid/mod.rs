//! Matroids behind a uniform rank-oracle interface.
//!
//! Every matroid has the dense ground set `0..len()`. Values are immutable
//! after construction.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::subset::SubsetMask;

mod families;
pub mod gen;
mod ops;
pub(crate) mod verify;

pub use families::{Explicit, Graphic, Laminar, LinearGf2, LinearGfp, Uniform, MAX_EXPLICIT};
pub use ops::{Copies, DirectSum, Restriction};
pub use verify::{
    check_axioms, circuit_with, is_morphism, rank_table, span, Axiom, AxiomReport, MorphismReport,
    DEFAULT_EXHAUSTIVE_CAP,
};

/// A matroid given by its rank function.
pub trait RankOracle {
    /// Number of ground-set elements.
    fn len(&self) -> usize;

    /// Rank of the set of `elements`; repeated ids count once. Every id must be
    /// below [`RankOracle::len`].
    fn rank_of(&self, elements: &[usize]) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn rank(&self, s: &SubsetMask) -> usize {
        self.rank_of(&s.to_vec())
    }

    /// [`RankOracle::rank`] with the ids checked against the ground set.
    fn try_rank(&self, s: &SubsetMask) -> Result<usize> {
        if let Some(bad) = s.iter().find(|&e| e >= self.len()) {
            return Err(Error::ElementOutOfRange { element: bad, size: self.len() });
        }
        Ok(self.rank(s))
    }

    fn full_rank(&self) -> usize {
        self.rank(&SubsetMask::full(self.len()))
    }
}

impl<T: RankOracle + ?Sized> RankOracle for &T {
    fn len(&self) -> usize {
        (**self).len()
    }
    fn rank_of(&self, elements: &[usize]) -> usize {
        (**self).rank_of(elements)
    }
}

impl<T: RankOracle + ?Sized> RankOracle for Box<T> {
    fn len(&self) -> usize {
        (**self).len()
    }
    fn rank_of(&self, elements: &[usize]) -> usize {
        (**self).rank_of(elements)
    }
}

/// `ids` sorted with duplicates removed.
pub(crate) fn distinct(ids: &[usize]) -> Vec<usize> {
    let mut v = ids.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}
