use alloc::vec::Vec;

use super::{Gf2Space, OnlineEmbedder};
use crate::error::{Error, Result};
use crate::gate::PrefixGatedOracle;
use crate::gf2::Gf2Vector;

/// Online morphism from a binary matroid into `F_2^dim`.
///
/// An element independent of the prefix gets the next standard basis vector;
/// any other element gets the XOR of the images of the rest of a circuit
/// through it. Circuits are searched inside the independent arrivals, which
/// form a basis of the prefix, so each step costs `O(rank)` queries.
#[derive(Clone, Debug)]
pub struct BinaryOmm {
    host: Gf2Space,
    next: usize,
    basis: Vec<usize>,
    images: Vec<(usize, Gf2Vector)>,
    by_id: Vec<Option<Gf2Vector>>,
    audit: bool,
}

impl BinaryOmm {
    pub fn new(dim: usize) -> Self {
        BinaryOmm { host: Gf2Space { dim }, next: 0, basis: Vec::new(), images: Vec::new(), by_id: Vec::new(), audit: false }
    }

    /// After every step, check the prefix map against the gate: exhaustively
    /// while the prefix is small, on the whole prefix beyond that.
    pub fn with_audit(mut self, audit: bool) -> Self {
        self.audit = audit;
        self
    }

    /// Index of the next fresh basis vector; equals the rank of the prefix.
    pub fn counter(&self) -> usize {
        self.next
    }

    pub fn image(&self, x: usize) -> Option<Gf2Vector> {
        self.by_id.get(x).copied().flatten()
    }
}

impl OnlineEmbedder for BinaryOmm {
    type Host = Gf2Space;

    fn host(&self) -> &Gf2Space {
        &self.host
    }

    fn step(&mut self, gate: &mut PrefixGatedOracle<'_>, x: usize) -> Result<Gf2Vector> {
        let dim = self.host.dim;
        let img = match gate.circuit_within(x, &self.basis)? {
            None => {
                if self.next >= dim {
                    return Err(Error::HostExhausted { dim });
                }
                self.basis.push(x);
                self.next += 1;
                Gf2Vector::unit(dim, self.next - 1)
            }
            Some(circuit) => {
                let mut v = Gf2Vector::zero(dim);
                for y in circuit.into_iter().filter(|&y| y != x) {
                    v.xor_assign(&self.image(y).expect("circuit members have arrived"));
                }
                v
            }
        };
        self.images.push((x, img));
        if self.by_id.len() <= x {
            self.by_id.resize(x + 1, None);
        }
        self.by_id[x] = Some(img);
        if self.audit {
            if let Some(witness) = super::audit_newest(gate, &self.host, &self.images)? {
                return Err(Error::NotBinary { witness });
            }
        }
        Ok(img)
    }
}
