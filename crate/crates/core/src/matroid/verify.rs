//! Exhaustive checks used as the trust anchor for everything else.

use alloc::vec::Vec;

use super::RankOracle;
use crate::error::{Error, Result};
use crate::subset::{bits, SubsetMask};

pub const DEFAULT_EXHAUSTIVE_CAP: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    /// `rank(∅) = 0`
    Normalization,
    /// `rank(S ∪ {i}) - rank(S) ∈ {0, 1}`
    UnitIncrease,
    /// `rank(S ∪ T) + rank(S ∩ T) <= rank(S) + rank(T)`
    Submodularity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomReport {
    Ok,
    Violated {
        axiom: Axiom,
        /// `[]` for normalization, `[S]` for unit increase, `[S, T]` for submodularity.
        sets: Vec<SubsetMask>,
        element: Option<usize>,
    },
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, AxiomReport::Ok)
    }
}

/// Rank of every subset, indexed by the subset's bit pattern.
pub fn rank_table<M: RankOracle + ?Sized>(m: &M) -> Vec<usize> {
    let n = m.len();
    assert!(n <= 24, "rank table over {n} elements");
    let mut ids = Vec::with_capacity(n);
    (0u64..1 << n)
        .map(|s| {
            ids.clear();
            ids.extend(bits(s));
            m.rank_of(&ids)
        })
        .collect()
}

/// Checks the three rank axioms over every subset (and every pair of subsets
/// for submodularity). Refuses ground sets larger than `cap`.
pub fn check_axioms<M: RankOracle + ?Sized>(m: &M, cap: usize) -> Result<AxiomReport> {
    let n = m.len();
    if n > cap {
        return Err(Error::CapExceeded { what: "exhaustive axiom check", size: n, cap });
    }
    let table = rank_table(m);
    let sub = |s: u64| SubsetMask::from_bits(n, s);
    if table[0] != 0 {
        return Ok(AxiomReport::Violated { axiom: Axiom::Normalization, sets: Vec::new(), element: None });
    }
    for s in 0u64..1 << n {
        for i in 0..n {
            if s >> i & 1 == 1 {
                continue;
            }
            let d = table[(s | 1 << i) as usize] as i64 - table[s as usize] as i64;
            if !(0..=1).contains(&d) {
                return Ok(AxiomReport::Violated {
                    axiom: Axiom::UnitIncrease,
                    sets: alloc::vec![sub(s)],
                    element: Some(i),
                });
            }
        }
    }
    let size = 1u64 << n;
    for s in 0..size {
        let rs = table[s as usize];
        for t in s + 1..size {
            if table[(s | t) as usize] + table[(s & t) as usize] > rs + table[t as usize] {
                return Ok(AxiomReport::Violated {
                    axiom: Axiom::Submodularity,
                    sets: alloc::vec![sub(s), sub(t)],
                    element: None,
                });
            }
        }
    }
    Ok(AxiomReport::Ok)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismReport {
    /// Rank preserved on every subset.
    pub morphism: bool,
    /// The element map is injective.
    pub injective: bool,
    /// First subset (in bit order) whose rank is not preserved.
    pub witness: Option<SubsetMask>,
}

impl MorphismReport {
    pub fn is_monomorphism(&self) -> bool {
        self.morphism && self.injective
    }
}

/// Exhaustively checks `rank_dst(map(S)) = rank_src(S)` for every `S`.
pub fn is_morphism<A, B>(map: &[usize], src: &A, dst: &B, cap: usize) -> Result<MorphismReport>
where
    A: RankOracle + ?Sized,
    B: RankOracle + ?Sized,
{
    let n = src.len();
    if map.len() != n {
        return Err(Error::InvalidParameter(alloc::format!(
            "map has {} entries for {} source elements",
            map.len(),
            n
        )));
    }
    if let Some(&bad) = map.iter().find(|&&e| e >= dst.len()) {
        return Err(Error::ElementOutOfRange { element: bad, size: dst.len() });
    }
    morphism_by(n, cap, map, |ids| src.rank_of(ids), |imgs| dst.rank_of(imgs))
}

/// Shared exhaustive loop: `src_rank` sees source ids, `dst_rank` the images.
pub(crate) fn morphism_by<T: Clone + Ord>(
    n: usize,
    cap: usize,
    images: &[T],
    mut src_rank: impl FnMut(&[usize]) -> usize,
    mut dst_rank: impl FnMut(&[T]) -> usize,
) -> Result<MorphismReport> {
    if n > cap {
        return Err(Error::CapExceeded { what: "exhaustive morphism check", size: n, cap });
    }
    let mut sorted = images.to_vec();
    sorted.sort();
    sorted.dedup();
    let injective = sorted.len() == images.len();
    let mut ids = Vec::with_capacity(n);
    let mut imgs = Vec::with_capacity(n);
    for s in 0u64..1 << n {
        ids.clear();
        ids.extend(bits(s));
        imgs.clear();
        imgs.extend(ids.iter().map(|&i| images[i].clone()));
        if src_rank(&ids) != dst_rank(&imgs) {
            return Ok(MorphismReport {
                morphism: false,
                injective,
                witness: Some(SubsetMask::from_bits(n, s)),
            });
        }
    }
    Ok(MorphismReport { morphism: true, injective, witness: None })
}

/// `{x : rank(S ∪ {x}) = rank(S)}`.
pub fn span<M: RankOracle + ?Sized>(m: &M, s: &SubsetMask) -> SubsetMask {
    let base = s.to_vec();
    let r = m.rank_of(&base);
    let mut with = base.clone();
    let mut out = SubsetMask::empty(m.len());
    for x in 0..m.len() {
        with.push(x);
        if m.rank_of(&with) == r {
            out.insert(x);
        }
        with.pop();
    }
    out
}

/// A circuit containing `x` whose other members come from `within`, found by
/// greedy deletion in increasing id order. `None` when `x` is not spanned by
/// `within \ {x}`. Only sets drawn from `within ∪ {x}` are ever queried.
pub fn circuit_with(
    mut rank: impl FnMut(&[usize]) -> Result<usize>,
    x: usize,
    within: &[usize],
) -> Result<Option<Vec<usize>>> {
    let mut rest: Vec<usize> = within.iter().copied().filter(|&y| y != x).collect();
    rest.sort_unstable();
    rest.dedup();
    let spans = |rank: &mut dyn FnMut(&[usize]) -> Result<usize>, set: &[usize]| -> Result<bool> {
        let r = rank(set)?;
        let mut with = set.to_vec();
        with.push(x);
        Ok(rank(&with)? == r)
    };
    if !spans(&mut rank, &rest)? {
        return Ok(None);
    }
    let mut i = 0;
    while i < rest.len() {
        let mut trial = rest.clone();
        trial.remove(i);
        if spans(&mut rank, &trial)? {
            rest = trial;
        } else {
            i += 1;
        }
    }
    rest.push(x);
    rest.sort_unstable();
    Ok(Some(rest))
}
