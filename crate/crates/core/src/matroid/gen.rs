//! Random instances of each family, for property tests and experiments.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Explicit, Graphic, Laminar, LinearGf2, LinearGfp, Uniform};
use crate::gf2::Gf2Vector;
use crate::gfp::GfpVector;
use crate::subset::SubsetMask;

/// `n` uniformly random columns of `F_2^dim` (zero columns and repeats allowed).
pub fn random_gf2<R: Rng + ?Sized>(n: usize, dim: usize, rng: &mut R) -> LinearGf2 {
    let cols = (0..n).map(|_| Gf2Vector::random(dim, rng)).collect();
    LinearGf2::new(dim, cols).expect("columns share the dimension")
}

/// `n` uniformly random columns of `GF(p)^dim`.
pub fn random_gfp<R: Rng + ?Sized>(n: usize, p: u64, dim: usize, rng: &mut R) -> LinearGfp {
    let cols = (0..n).map(|_| GfpVector((0..dim).map(|_| rng.random_range(0..p)).collect())).collect();
    LinearGfp::new(p, dim, cols).expect("caller passes a prime")
}

/// `n` edges with uniformly random endpoints; loops and parallel edges occur.
pub fn random_graph<R: Rng + ?Sized>(vertices: usize, n: usize, rng: &mut R) -> Graphic {
    assert!(vertices > 0);
    let edges = (0..n).map(|_| (rng.random_range(0..vertices), rng.random_range(0..vertices))).collect();
    Graphic::new(vertices, edges).expect("endpoints in range")
}

pub fn random_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Uniform {
    Uniform::new(n, rng.random_range(0..=n))
}

/// A random laminar family: random nested intervals of a shuffled ground set,
/// each with a capacity drawn from `0..=|set|`.
pub fn random_laminar<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Laminar {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut family = Vec::new();
    split(&perm, rng, &mut family, n);
    Laminar::new(n, family).expect("nested intervals are laminar")
}

fn split<R: Rng + ?Sized>(block: &[usize], rng: &mut R, family: &mut Vec<(SubsetMask, usize)>, n: usize) {
    if block.is_empty() {
        return;
    }
    if rng.random_bool(0.6) {
        let set = SubsetMask::from_ids(n, block.iter().copied()).unwrap();
        family.push((set, rng.random_range(0..=block.len())));
    }
    if block.len() == 1 {
        return;
    }
    let parts = rng.random_range(1..=3.min(block.len()));
    let mut cuts: Vec<usize> = (0..parts - 1).map(|_| rng.random_range(1..block.len())).collect();
    cuts.sort_unstable();
    cuts.dedup();
    let mut start = 0;
    for c in cuts.into_iter().chain(core::iter::once(block.len())) {
        // a single part equal to the block would recurse forever
        let part = &block[start..c];
        if part.len() < block.len() {
            split(part, rng, family, n);
        } else {
            let (l, r) = part.split_at(part.len() / 2);
            split(l, rng, family, n);
            split(r, rng, family, n);
        }
        start = c;
    }
}

/// Rank table of a random graphic matroid, to exercise the explicit type.
pub fn random_explicit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Explicit {
    let vertices = rng.random_range(1..=n.max(1) + 1);
    Explicit::from_oracle(&random_graph(vertices, n, rng)).expect("small ground set")
}
