use alloc::collections::BTreeMap;

use super::{Copied, CopyHost, Host, HostElement, OnlineEmbedder};
use crate::error::{Error, Result};
use crate::gate::PrefixGatedOracle;

/// Turns an online morphism into an online embedding into `copies` parallel
/// copies of its host: the `j`-th arrival sent to host element `v` becomes
/// copy `j` of `v` (copies are numbered from 0).
#[derive(Clone, Debug)]
pub struct CopyLift<E: OnlineEmbedder> {
    inner: E,
    host: CopyHost<E::Host>,
    used: BTreeMap<HostElement<E>, usize>,
}

impl<E: OnlineEmbedder> CopyLift<E>
where
    E::Host: Clone,
{
    /// `copies` must be at least the number of source elements.
    pub fn new(inner: E, copies: usize) -> Self {
        let host = CopyHost { inner: inner.host().clone(), copies };
        CopyLift { inner, host, used: BTreeMap::new() }
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }
}

impl<E: OnlineEmbedder> OnlineEmbedder for CopyLift<E>
where
    E::Host: Clone,
{
    type Host = CopyHost<E::Host>;

    fn host(&self) -> &Self::Host {
        &self.host
    }

    fn step(
        &mut self,
        gate: &mut PrefixGatedOracle<'_>,
        x: usize,
    ) -> Result<Copied<<E::Host as Host>::Element>> {
        let base = self.inner.step(gate, x)?;
        let used = self.used.entry(base.clone()).or_insert(0);
        if *used >= self.host.copies {
            return Err(Error::CopiesExhausted { capacity: self.host.copies });
        }
        *used += 1;
        Ok(Copied { base, copy: *used - 1 })
    }

    fn seed(&self) -> Option<u64> {
        self.inner.seed()
    }
}
