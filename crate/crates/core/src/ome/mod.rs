//! Online matroid morphisms and embeddings.
//!
//! An [`OnlineEmbedder`] assigns each arriving element a host element, seeing
//! the source matroid only through a [`PrefixGatedOracle`]. Images are never
//! revised, so replaying any prefix of the stream reproduces the prefix of the
//! record.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gate::PrefixGatedOracle;
use crate::matroid::{MorphismReport, RankOracle};

mod align;
mod binary;
mod bounded_rank;
mod copies;
mod hosts;
mod laminar;
mod randomize;

pub use align::solve_alignment;
pub use binary::BinaryOmm;
pub use bounded_rank::{Rank1Omm, Rank2Omm};
pub use copies::CopyLift;
pub use hosts::{Copied, CopyHost, FreeHost, Gf2Space, GfpSpace, HostOracle, Rank1Host, Rank2Host};
pub use laminar::{LaminarOmm, LAMINAR_RETRIES};
pub use randomize::{
    order_independent_binary, order_independent_binary_copies, order_independent_rank1, CopyAut,
    HostAutomorphism, Identity, LinearAut, Randomized,
};

/// A known host matroid whose elements are values of `Element`.
pub trait Host {
    type Element: Clone + Ord + fmt::Debug + fmt::Display;

    fn rank_of(&self, elements: &[Self::Element]) -> usize;

    /// Short description written into embedding records.
    fn describe(&self) -> String;

    /// Number of host elements, when they can be enumerated densely.
    fn size(&self) -> Option<usize> {
        None
    }

    fn index_of(&self, _e: &Self::Element) -> Option<usize> {
        None
    }

    fn element_at(&self, _i: usize) -> Option<Self::Element> {
        None
    }
}

pub trait OnlineEmbedder {
    type Host: Host;

    fn host(&self) -> &Self::Host;

    /// Image of `element`, which has just arrived at `gate`.
    fn step(
        &mut self,
        gate: &mut PrefixGatedOracle<'_>,
        element: usize,
    ) -> Result<<Self::Host as Host>::Element>;

    /// Seed of the embedder's randomness, if any.
    fn seed(&self) -> Option<u64> {
        None
    }
}

pub type HostElement<E> = <<E as OnlineEmbedder>::Host as Host>::Element;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingRecord<T> {
    /// `(source element, image)` in arrival order.
    pub pairs: Vec<(usize, T)>,
    pub host: String,
    pub seed: Option<u64>,
    pub queries: usize,
}

impl<T: Clone> EmbeddingRecord<T> {
    pub fn image(&self, src: usize) -> Option<&T> {
        self.pairs.iter().find(|(s, _)| *s == src).map(|(_, t)| t)
    }

    /// Images indexed by source id, for a record covering `0..n`.
    pub fn images(&self, n: usize) -> Option<Vec<T>> {
        (0..n).map(|u| self.image(u).cloned()).collect()
    }

    pub fn prefix(&self, t: usize) -> &[(usize, T)] {
        &self.pairs[..t.min(self.pairs.len())]
    }
}

impl<T: fmt::Display> fmt::Display for EmbeddingRecord<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "host {}", self.host)?;
        match self.seed {
            Some(s) => writeln!(f, "seed {s}")?,
            None => writeln!(f, "seed none")?,
        }
        for (t, (src, img)) in self.pairs.iter().enumerate() {
            writeln!(f, "step {t} src={src} img={img}")?;
        }
        Ok(())
    }
}

/// Streams `order` through `embedder`. Arrival is recorded on the gate before
/// each step, so the step may query the new element.
pub fn run_embedder<E: OnlineEmbedder + ?Sized>(
    embedder: &mut E,
    source: &dyn RankOracle,
    order: &[usize],
) -> Result<EmbeddingRecord<HostElement<E>>> {
    let mut gate = PrefixGatedOracle::new(source);
    run_on_gate(embedder, &mut gate, order)
}

/// As [`run_embedder`] but on a caller-owned gate, e.g. one with a query log.
pub fn run_on_gate<E: OnlineEmbedder + ?Sized>(
    embedder: &mut E,
    gate: &mut PrefixGatedOracle<'_>,
    order: &[usize],
) -> Result<EmbeddingRecord<HostElement<E>>> {
    let mut pairs = Vec::with_capacity(order.len());
    for &x in order {
        gate.arrive(x)?;
        pairs.push((x, embedder.step(gate, x)?));
    }
    Ok(EmbeddingRecord {
        pairs,
        host: embedder.host().describe(),
        seed: embedder.seed(),
        queries: gate.queries(),
    })
}

/// Exhaustive morphism check of the recorded map, restricted to the elements
/// it covers.
pub fn verify_record<H: Host, M: RankOracle + ?Sized>(
    record: &EmbeddingRecord<H::Element>,
    source: &M,
    host: &H,
    cap: usize,
) -> Result<MorphismReport> {
    let ids: Vec<usize> = record.pairs.iter().map(|(s, _)| *s).collect();
    let images: Vec<H::Element> = record.pairs.iter().map(|(_, t)| t.clone()).collect();
    let mut src = Vec::new();
    let mut report = crate::matroid::verify::morphism_by(
        ids.len(),
        cap,
        &images,
        |pos| {
            src.clear();
            src.extend(pos.iter().map(|&p| ids[p]));
            source.rank_of(&src)
        },
        |imgs| host.rank_of(imgs),
    )?;
    // report the witness in source ids rather than positions
    if let Some(w) = report.witness.take() {
        let n = source.len();
        report.witness = Some(crate::subset::SubsetMask::from_ids(n, w.iter().map(|p| ids[p]))?);
    }
    Ok(report)
}

/// Checks that the map is a monomorphism, with a descriptive error otherwise.
pub fn require_monomorphism<H: Host, M: RankOracle + ?Sized>(
    record: &EmbeddingRecord<H::Element>,
    source: &M,
    host: &H,
    cap: usize,
) -> Result<()> {
    let rep = verify_record(record, source, host, cap)?;
    if rep.is_monomorphism() {
        Ok(())
    } else {
        Err(Error::InvalidMatroid(format!(
            "map into {} is not a monomorphism (morphism={}, injective={}, witness={:?})",
            host.describe(),
            rep.morphism,
            rep.injective,
            rep.witness
        )))
    }
}

/// Prefix audits enumerate subsets only up to this many arrivals.
const AUDIT_CAP: usize = 14;

/// Compares the gate's ranks with the host's on the prefix map `pairs`, whose
/// last entry is new: on every subset containing it while the prefix is
/// small, on the whole prefix beyond that. Returns a failing subset.
pub(crate) fn audit_newest<H: Host>(
    gate: &mut PrefixGatedOracle<'_>,
    host: &H,
    pairs: &[(usize, H::Element)],
) -> Result<Option<Vec<usize>>> {
    let t = pairs.len();
    if t == 0 {
        return Ok(None);
    }
    let mut ids = Vec::with_capacity(t);
    let mut imgs = Vec::with_capacity(t);
    let patterns: Vec<u64> = if t <= AUDIT_CAP {
        let last = 1u64 << (t - 1);
        (0..last).map(|s| s | last).collect()
    } else {
        Vec::new()
    };
    let full = patterns.is_empty();
    for s in patterns.into_iter().map(Some).chain(full.then_some(None)) {
        ids.clear();
        imgs.clear();
        for (p, (x, img)) in pairs.iter().enumerate() {
            if s.is_none_or(|s| s >> p & 1 == 1) {
                ids.push(*x);
                imgs.push(img.clone());
            }
        }
        if gate.rank(&ids)? != host.rank_of(&imgs) {
            return Ok(Some(ids));
        }
    }
    Ok(None)
}
