use alloc::vec::Vec;

use super::{OnlineEmbedder, Rank1Host, Rank2Host};
use crate::error::{Error, Result};
use crate::gate::PrefixGatedOracle;

fn check_promise(gate: &mut PrefixGatedOracle<'_>, bound: usize, x: usize) -> Result<()> {
    let all = gate.order().to_vec();
    if gate.rank(&all)? > bound {
        return Err(Error::RankPromise { bound, element: x });
    }
    Ok(())
}

/// Online morphism of rank-1 matroids into `U_{1,1} ⊕ T`: loops go to the
/// loop 0, everything else to 1.
#[derive(Clone, Debug, Default)]
pub struct Rank1Omm {
    host: Rank1Host,
}

impl Rank1Omm {
    pub fn new() -> Self {
        Self::default()
    }
}

impl OnlineEmbedder for Rank1Omm {
    type Host = Rank1Host;

    fn host(&self) -> &Rank1Host {
        &self.host
    }

    fn step(&mut self, gate: &mut PrefixGatedOracle<'_>, x: usize) -> Result<usize> {
        check_promise(gate, 1, x)?;
        gate.rank(&[x])
    }
}

/// Online morphism of matroids of rank at most 2 into `U_{n,2} ⊕ T`: loops
/// go to 0, an element parallel to an earlier one shares its image, and
/// anything else takes the next unused index.
#[derive(Clone, Debug)]
pub struct Rank2Omm {
    host: Rank2Host,
    next: usize,
    images: Vec<(usize, usize)>,
}

impl Rank2Omm {
    pub fn new(n: usize) -> Self {
        Rank2Omm { host: Rank2Host { n }, next: 0, images: Vec::new() }
    }
}

impl OnlineEmbedder for Rank2Omm {
    type Host = Rank2Host;

    fn host(&self) -> &Rank2Host {
        &self.host
    }

    fn step(&mut self, gate: &mut PrefixGatedOracle<'_>, x: usize) -> Result<usize> {
        check_promise(gate, 2, x)?;
        let img = if gate.rank(&[x])? == 0 {
            0
        } else {
            let mut found = None;
            for &(b, img) in &self.images {
                if img != 0 && gate.rank(&[x, b])? == 1 {
                    found = Some(img);
                    break;
                }
            }
            match found {
                Some(img) => img,
                None => {
                    if self.next >= self.host.n {
                        return Err(Error::HostExhausted { dim: self.host.n });
                    }
                    self.next += 1;
                    self.next
                }
            }
        };
        self.images.push((x, img));
        Ok(img)
    }
}
