use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{BinaryOmm, Copied, CopyHost, CopyLift, Gf2Space, Host, HostElement, OnlineEmbedder, Rank1Omm};
use crate::error::Result;
use crate::gate::PrefixGatedOracle;
use crate::gf2::{random_invertible, Gf2Matrix, Gf2Vector};

/// A matroid automorphism of a host, applied pointwise.
pub trait HostAutomorphism<H: Host> {
    fn apply(&mut self, x: &H::Element) -> H::Element;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Identity;

impl<H: Host> HostAutomorphism<H> for Identity {
    fn apply(&mut self, x: &H::Element) -> H::Element {
        x.clone()
    }
}

/// An invertible linear map of `F_2^n`.
#[derive(Clone, Debug)]
pub struct LinearAut(pub Gf2Matrix);

impl HostAutomorphism<Gf2Space> for LinearAut {
    fn apply(&mut self, x: &Gf2Vector) -> Gf2Vector {
        self.0.mul_vec(x)
    }
}

/// `(v, j) ↦ (A v, σ_v(j))` with an independent uniform permutation `σ_v` of
/// the copies for every `v`, drawn the first time `v` is seen.
#[derive(Clone, Debug)]
pub struct CopyAut<H: Host, A> {
    base: A,
    copies: usize,
    rng: ChaCha8Rng,
    perms: BTreeMap<H::Element, Vec<usize>>,
}

impl<H: Host, A: HostAutomorphism<H>> CopyAut<H, A> {
    pub fn new(base: A, copies: usize, rng: ChaCha8Rng) -> Self {
        CopyAut { base, copies, rng, perms: BTreeMap::new() }
    }
}

impl<H: Host, A: HostAutomorphism<H>> HostAutomorphism<CopyHost<H>> for CopyAut<H, A> {
    fn apply(&mut self, x: &Copied<H::Element>) -> Copied<H::Element> {
        let (copies, rng) = (self.copies, &mut self.rng);
        let perm = self.perms.entry(x.base.clone()).or_insert_with(|| {
            let mut p: Vec<usize> = (0..copies).collect();
            p.shuffle(rng);
            p
        });
        Copied { base: self.base.apply(&x.base), copy: perm[x.copy] }
    }
}

/// A deterministic embedder followed by a random host automorphism fixed at
/// the start of the stream.
#[derive(Clone, Debug)]
pub struct Randomized<E, A> {
    inner: E,
    aut: A,
    seed: u64,
}

impl<E: OnlineEmbedder, A: HostAutomorphism<E::Host>> Randomized<E, A> {
    pub fn new(inner: E, aut: A, seed: u64) -> Self {
        Randomized { inner, aut, seed }
    }

    pub fn automorphism(&self) -> &A {
        &self.aut
    }
}

impl<E: OnlineEmbedder, A: HostAutomorphism<E::Host>> OnlineEmbedder for Randomized<E, A> {
    type Host = E::Host;

    fn host(&self) -> &E::Host {
        self.inner.host()
    }

    fn step(&mut self, gate: &mut PrefixGatedOracle<'_>, x: usize) -> Result<HostElement<E>> {
        let y = self.inner.step(gate, x)?;
        Ok(self.aut.apply(&y))
    }

    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }
}

/// Binary OMM into `F_2^dim` composed with a uniform element of `GL(dim, 2)`.
pub fn order_independent_binary(dim: usize, seed: u64) -> Randomized<BinaryOmm, LinearAut> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_invertible(dim, &mut rng);
    Randomized::new(BinaryOmm::new(dim), LinearAut(a), seed)
}

/// Binary OME into `(F_2^dim)_[copies]`: the copy lift of the binary OMM
/// followed by a uniform linear automorphism and uniform copy relabelings.
pub fn order_independent_binary_copies(
    dim: usize,
    copies: usize,
    seed: u64,
) -> Randomized<CopyLift<BinaryOmm>, CopyAut<Gf2Space, LinearAut>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_invertible(dim, &mut rng);
    let aut = CopyAut::new(LinearAut(a), copies, rng);
    Randomized::new(CopyLift::new(BinaryOmm::new(dim), copies), aut, seed)
}

/// Rank-1 OME into `(U_{1,1} ⊕ T)_[copies]` with uniform copy relabelings.
pub fn order_independent_rank1(
    copies: usize,
    seed: u64,
) -> Randomized<CopyLift<Rank1Omm>, CopyAut<super::Rank1Host, Identity>> {
    let rng = ChaCha8Rng::seed_from_u64(seed);
    Randomized::new(CopyLift::new(Rank1Omm::new(), copies), CopyAut::new(Identity, copies, rng), seed)
}
