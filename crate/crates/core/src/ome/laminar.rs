use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GfpSpace, OnlineEmbedder};
use crate::error::{Error, Result};
use crate::gate::PrefixGatedOracle;
use crate::gfp::{next_prime_above, rank_in, random_vector_in_span, GfpVector, PrimeField};

/// Random draws per element before the deterministic fallback.
pub const LAMINAR_RETRIES: usize = 64;
/// Coefficient vectors tried by the fallback.
const FALLBACK_CANDIDATES: usize = 4096;
/// Largest source size; `2^n` must leave room for a prime below `2^61`.
const MAX_SOURCE: usize = 30;

/// Online morphism of laminar matroids on `n` elements into `GF(p)^n`, where
/// `p` is the smallest prime above `2^n`.
///
/// Independent arrivals take the next standard basis vector. A dependent
/// arrival `u` is placed in the span of `f(C - u)` for a smallest circuit `C`
/// through `u` (spans of circuits through `u` are nested in a laminar
/// matroid, so this is the smallest of them) and outside `span f(S)` for
/// every `S` with `S + u` a basis of the prefix.
#[derive(Clone, Debug)]
pub struct LaminarOmm {
    host: GfpSpace,
    next: usize,
    images: Vec<(usize, GfpVector)>,
    by_id: Vec<Option<GfpVector>>,
    rng: ChaCha8Rng,
    seed: u64,
    fallbacks: usize,
    audit: bool,
}

impl LaminarOmm {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if n > MAX_SOURCE {
            return Err(Error::DimensionTooLarge { dim: n, max: MAX_SOURCE });
        }
        Self::with_field(n, next_prime_above(1 << n), seed)
    }

    /// Explicit modulus, e.g. to observe failures when `p` is too small.
    pub fn with_field(dim: usize, p: u64, seed: u64) -> Result<Self> {
        Ok(LaminarOmm {
            host: GfpSpace { field: PrimeField::new(p)?, dim },
            next: 0,
            images: Vec::new(),
            by_id: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            fallbacks: 0,
            audit: false,
        })
    }

    /// Exhaustively check the prefix map after every step.
    pub fn with_audit(mut self, audit: bool) -> Self {
        self.audit = audit;
        self
    }

    /// Steps that needed the deterministic fallback.
    pub fn fallbacks(&self) -> usize {
        self.fallbacks
    }

    fn image(&self, x: usize) -> &GfpVector {
        self.by_id[x].as_ref().expect("arrived element has an image")
    }

    fn dependent_image(&mut self, gate: &mut PrefixGatedOracle<'_>, u: usize, others: &[usize]) -> Result<GfpVector> {
        let field = self.host.field;
        let dim = self.host.dim;
        if gate.rank(&[u])? == 0 {
            return Ok(GfpVector::zero(dim));
        }
        let circuit = smallest_circuit(gate, u, others)?;
        let target: Vec<GfpVector> = circuit.iter().map(|&y| self.image(y).clone()).collect();
        let r = gate.rank(&others.iter().copied().chain([u]).collect::<Vec<_>>())?;
        let avoid: Vec<Vec<GfpVector>> = bases_through(gate, u, others, r)?
            .into_iter()
            .map(|s| s.into_iter().map(|y| self.image(y).clone()).collect())
            .collect();
        let valid = |w: &GfpVector| {
            avoid.iter().all(|s| {
                let mut cols = s.clone();
                cols.push(w.clone());
                rank_in(&field, &cols).expect("dimensions agree") == s.len() + 1
            })
        };
        for _ in 0..LAMINAR_RETRIES {
            let w = random_vector_in_span(&target, &field, dim, &mut self.rng);
            if valid(&w) {
                return Ok(w);
            }
        }
        self.fallbacks += 1;
        // coefficients 1..=b for b = 1, 2, ... in lexicographic order
        let m = target.len();
        let mut tried = 0;
        let mut coeffs = alloc::vec![1u64; m];
        'outer: while tried < FALLBACK_CANDIDATES {
            let mut w = GfpVector::zero(dim);
            for (c, t) in coeffs.iter().zip(&target) {
                w.add_scaled(&field, *c, t);
            }
            if valid(&w) {
                return Ok(w);
            }
            tried += 1;
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < field.modulus() {
                    continue 'outer;
                }
                *c = 1;
            }
            break;
        }
        Err(Error::LaminarExtension { element: u })
    }
}

/// `C - u` for a circuit `C` through `u` of least size, with other members
/// drawn from `others`. The greedy circuit bounds the search; smaller
/// candidates are taken from its span, which contains every smaller circuit
/// span in a laminar matroid.
fn smallest_circuit(gate: &mut PrefixGatedOracle<'_>, u: usize, others: &[usize]) -> Result<Vec<usize>> {
    let greedy = gate.circuit_within(u, others)?.expect("caller checked dependence");
    let mut best: Vec<usize> = greedy.into_iter().filter(|&y| y != u).collect();
    let r = best.len();
    let mut pool = Vec::new();
    for &y in others {
        let mut with = best.clone();
        with.push(y);
        if gate.rank(&with)? == r {
            pool.push(y);
        }
    }
    for size in 0..r {
        let mut found = None;
        for_each_subset(&pool, size, &mut |s| {
            if found.is_some() {
                return Ok(());
            }
            let mut with = s.to_vec();
            with.push(u);
            if gate.rank(&with)? == size && gate.rank(s)? == size {
                found = Some(s.to_vec());
            }
            Ok(())
        })?;
        if let Some(s) = found {
            best = s;
            break;
        }
    }
    Ok(best)
}

/// Every `S ⊆ others` with `S + u` independent of size `r` (a basis of the
/// prefix through `u`).
fn bases_through(gate: &mut PrefixGatedOracle<'_>, u: usize, others: &[usize], r: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for_each_subset(others, r - 1, &mut |s| {
        let mut with = s.to_vec();
        with.push(u);
        if gate.rank(&with)? == r {
            out.push(s.to_vec());
        }
        Ok(())
    })?;
    Ok(out)
}

fn for_each_subset(pool: &[usize], size: usize, f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    fn go(pool: &[usize], size: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
        if cur.len() == size {
            return f(cur);
        }
        let need = size - cur.len();
        for i in 0..pool.len() {
            if pool.len() - i < need {
                break;
            }
            cur.push(pool[i]);
            go(&pool[i + 1..], size, cur, f)?;
            cur.pop();
        }
        Ok(())
    }
    go(pool, size, &mut Vec::with_capacity(size), f)
}

impl OnlineEmbedder for LaminarOmm {
    type Host = GfpSpace;

    fn host(&self) -> &GfpSpace {
        &self.host
    }

    fn step(&mut self, gate: &mut PrefixGatedOracle<'_>, u: usize) -> Result<GfpVector> {
        let others: Vec<usize> = gate.order().iter().copied().filter(|&y| y != u).collect();
        let r_others = gate.rank(&others)?;
        let mut all = others.clone();
        all.push(u);
        let img = if gate.rank(&all)? > r_others {
            if self.next >= self.host.dim {
                return Err(Error::HostExhausted { dim: self.host.dim });
            }
            self.next += 1;
            GfpVector::unit(self.host.dim, self.next - 1)
        } else {
            self.dependent_image(gate, u, &others)?
        };
        self.images.push((u, img.clone()));
        if self.by_id.len() <= u {
            self.by_id.resize(u + 1, None);
        }
        self.by_id[u] = Some(img.clone());
        if self.audit && super::audit_newest(gate, &self.host, &self.images)?.is_some() {
            return Err(Error::LaminarExtension { element: u });
        }
        Ok(img)
    }

    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }
}
