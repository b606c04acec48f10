//! Online access to a matroid: rank queries only over elements that have
//! already arrived.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matroid::{circuit_with, RankOracle};
use crate::subset::SubsetMask;

pub struct PrefixGatedOracle<'a> {
    inner: &'a dyn RankOracle,
    arrived: SubsetMask,
    order: Vec<usize>,
    log: Option<Vec<Vec<usize>>>,
    queries: usize,
    violations: usize,
}

impl<'a> PrefixGatedOracle<'a> {
    pub fn new(inner: &'a dyn RankOracle) -> Self {
        PrefixGatedOracle {
            inner,
            arrived: SubsetMask::empty(inner.len()),
            order: Vec::new(),
            log: None,
            queries: 0,
            violations: 0,
        }
    }

    /// Like [`PrefixGatedOracle::new`], but records every query.
    pub fn logged(inner: &'a dyn RankOracle) -> Self {
        let mut g = Self::new(inner);
        g.log = Some(Vec::new());
        g
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.len() == 0
    }

    pub fn arrive(&mut self, x: usize) -> Result<()> {
        if x >= self.inner.len() {
            return Err(Error::ElementOutOfRange { element: x, size: self.inner.len() });
        }
        if self.arrived.contains(x) {
            return Err(Error::DuplicateArrival(x));
        }
        self.arrived.insert(x);
        self.order.push(x);
        Ok(())
    }

    pub fn arrived(&self) -> &SubsetMask {
        &self.arrived
    }

    /// Arrived elements in arrival order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn has_arrived(&self, x: usize) -> bool {
        x < self.inner.len() && self.arrived.contains(x)
    }

    pub fn rank(&mut self, ids: &[usize]) -> Result<usize> {
        if let Some(&bad) = ids.iter().find(|&&x| !self.has_arrived(x)) {
            self.violations += 1;
            return Err(Error::GateViolation { element: bad });
        }
        self.queries += 1;
        if let Some(log) = &mut self.log {
            log.push(ids.to_vec());
        }
        Ok(self.inner.rank_of(ids))
    }

    /// A circuit through `x` inside the arrived prefix, by greedy deletion over
    /// the whole prefix in increasing id order.
    pub fn find_circuit(&mut self, x: usize) -> Result<Option<Vec<usize>>> {
        self.circuit_within(x, &self.arrived.to_vec())
    }

    /// A circuit through `x` whose other members come from `within`.
    pub fn circuit_within(&mut self, x: usize, within: &[usize]) -> Result<Option<Vec<usize>>> {
        if !self.has_arrived(x) {
            self.violations += 1;
            return Err(Error::GateViolation { element: x });
        }
        circuit_with(|ids| self.rank(ids), x, within)
    }

    pub fn queries(&self) -> usize {
        self.queries
    }

    pub fn violations(&self) -> usize {
        self.violations
    }

    pub fn log(&self) -> Option<&[Vec<usize>]> {
        self.log.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{Graphic, Uniform};
    use alloc::vec;

    #[test]
    fn rejects_queries_outside_prefix() {
        let u = Uniform::new(4, 2);
        let mut g = PrefixGatedOracle::logged(&u);
        g.arrive(2).unwrap();
        assert_eq!(g.rank(&[2]).unwrap(), 1);
        assert_eq!(g.rank(&[1, 2]), Err(Error::GateViolation { element: 1 }));
        assert_eq!(g.violations(), 1);
        assert_eq!(g.log().unwrap(), &[vec![2]]);
        assert_eq!(g.arrive(2), Err(Error::DuplicateArrival(2)));
        assert!(matches!(g.arrive(9), Err(Error::ElementOutOfRange { .. })));
    }

    #[test]
    fn circuit_of_fig_two_left() {
        let k4 = Graphic::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (1, 3)]).unwrap();
        let mut g = PrefixGatedOracle::logged(&k4);
        for x in 0..4 {
            g.arrive(x).unwrap();
        }
        assert_eq!(g.find_circuit(3).unwrap(), Some(vec![0, 1, 3]));
        assert_eq!(g.find_circuit(0).unwrap(), Some(vec![0, 1, 3]));
        let arrived = g.arrived().clone();
        assert!(g.log().unwrap().iter().flatten().all(|&x| arrived.contains(x)));
    }
}
