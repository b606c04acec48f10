use alloc::vec;
use alloc::vec::Vec;

use super::laminar_fixtures;
use crate::error::{Error, Result};
use crate::matroid::{rank_table, Laminar, RankOracle};

pub const MAX_SEARCH_GROUND: usize = 6;
pub const MAX_SEARCH_FAMILY: usize = 6;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaminarReport {
    pub ground: usize,
    pub max_family: usize,
    /// Laminar families of nonempty subsets, before capacities.
    pub families: u64,
    /// Family and capacity assignments (capacities below the set size).
    pub hosts: u64,
    /// Hosts in which the fixed images of `a, b, c` are independent.
    pub prefix_valid: u64,
    /// Hosts serving each fixture, by fixture index.
    pub extendable: [u64; 3],
    pub simultaneous: u64,
}

impl LaminarReport {
    pub fn no_counterexample(&self) -> bool {
        self.simultaneous == 0
    }
}

fn fixture_tables() -> [Vec<usize>; 3] {
    laminar_fixtures().map(|m| rank_table(&m))
}

/// Whether images `placed` of `a, b, c` extend, by some image of `d`, to a
/// morphism of each laminar fixture.
pub fn laminar_extensions(host: &Laminar, placed: [usize; 3]) -> Result<[bool; 3]> {
    let n = host.len();
    if let Some(&bad) = placed.iter().find(|&&e| e >= n) {
        return Err(Error::ElementOutOfRange { element: bad, size: n });
    }
    let tables = fixture_tables();
    Ok(core::array::from_fn(|i| {
        (0..n).any(|d| {
            let images = [placed[0], placed[1], placed[2], d];
            (0..16usize).all(|s| {
                let sel: Vec<usize> = crate::subset::bits(s as u64).map(|j| images[j]).collect();
                host.rank_of(&sel) == tables[i][s]
            })
        })
    }))
}

struct Search {
    m: usize,
    max_family: usize,
    tables: [Vec<usize>; 3],
    report: LaminarReport,
}

fn laminar_pair(a: u32, b: u32) -> bool {
    a & b == 0 || a & !b == 0 || b & !a == 0
}

impl Search {
    fn families(&mut self, start: u32, chosen: &mut Vec<u32>) {
        self.report.families += 1;
        let mut caps = vec![0usize; chosen.len()];
        self.caps(chosen, &mut caps, 0);
        if chosen.len() == self.max_family {
            return;
        }
        for s in start..(1u32 << self.m) {
            if chosen.iter().all(|&c| laminar_pair(c, s)) {
                chosen.push(s);
                self.families(s + 1, chosen);
                chosen.pop();
            }
        }
    }

    fn caps(&mut self, sets: &[u32], caps: &mut [usize], i: usize) {
        if i == sets.len() {
            self.host(sets, caps);
            return;
        }
        for c in 0..sets[i].count_ones() as usize {
            caps[i] = c;
            self.caps(sets, caps, i + 1);
        }
    }

    fn host(&mut self, sets: &[u32], caps: &[usize]) {
        self.report.hosts += 1;
        let size = 1usize << self.m;
        let indep = |s: usize| sets.iter().zip(caps).all(|(&a, &c)| (s as u32 & a).count_ones() as usize <= c);
        if !indep(0b111) {
            return;
        }
        self.report.prefix_valid += 1;
        let mut rank = vec![0u8; size];
        for s in 1..size {
            rank[s] = if indep(s) {
                s.count_ones() as u8
            } else {
                crate::subset::bits(s as u64).map(|x| rank[s & !(1 << x)]).max().unwrap_or(0)
            };
        }
        let mut served = [false; 3];
        for (i, t) in self.tables.iter().enumerate() {
            served[i] = (0..self.m).any(|d| {
                (0..16usize).all(|s| {
                    let img = (s & 0b111) | if s & 0b1000 != 0 { 1 << d } else { 0 };
                    rank[img] as usize == t[s]
                })
            });
            if served[i] {
                self.report.extendable[i] += 1;
            }
        }
        if served.iter().all(|&b| b) {
            self.report.simultaneous += 1;
        }
    }
}

/// Every laminar host on `ground` elements with at most `max_family` sets,
/// with `a, b, c` placed on elements 0, 1, 2 (no loss by relabeling).
pub fn laminar_host_search(ground: usize, max_family: usize) -> Result<LaminarReport> {
    if !(3..=MAX_SEARCH_GROUND).contains(&ground) || max_family > MAX_SEARCH_FAMILY {
        return Err(Error::InvalidParameter(alloc::format!(
            "laminar search bounds ground={ground} family={max_family} outside 3..={MAX_SEARCH_GROUND} and 0..={MAX_SEARCH_FAMILY}"
        )));
    }
    let mut search = Search {
        m: ground,
        max_family,
        tables: fixture_tables(),
        report: LaminarReport { ground, max_family, ..LaminarReport::default() },
    };
    search.families(1, &mut Vec::new());
    Ok(search.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::SubsetMask;

    #[test]
    fn free_host_serves_nothing() {
        let host = Laminar::new(4, Vec::new()).unwrap();
        assert_eq!(laminar_extensions(&host, [0, 1, 2]).unwrap(), [false; 3]);
    }

    #[test]
    fn fixture_hosts_serve_themselves() {
        for (i, m) in laminar_fixtures().into_iter().enumerate() {
            let served = laminar_extensions(&m, [0, 1, 2]).unwrap();
            for (j, &s) in served.iter().enumerate() {
                assert_eq!(s, i == j, "host {i} fixture {j}");
            }
        }
    }

    #[test]
    fn dependent_prefix_is_rejected() {
        let pair = SubsetMask::from_ids(4, [0, 1]).unwrap();
        let host = Laminar::new(4, vec![(pair, 1)]).unwrap();
        assert_eq!(host.rank_of(&[0, 1, 2]), 2);
        let r = laminar_host_search(3, 1).unwrap();
        // Seven singletons or pairs or the triple, each with every capacity
        // below its size, plus the empty family; only the empty family keeps
        // the prefix free.
        assert_eq!(r.families, 8);
        assert_eq!(r.hosts, 1 + 3 + 3 * 2 + 3);
        assert_eq!(r.prefix_valid, 1);
        assert_eq!(r.extendable, [0; 3]);
    }

    #[test]
    fn fast_path_matches_oracle() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let tables = fixture_tables();
        for _ in 0..200 {
            let host = crate::matroid::gen::random_laminar(5, &mut rng);
            if host.rank_of(&[0, 1, 2]) != 3 {
                continue;
            }
            let sets: Vec<u32> = host.family().iter().map(|(a, _)| a.low_bits() as u32).collect();
            let caps: Vec<usize> = host.family().iter().map(|(_, c)| *c).collect();
            let mut s = Search { m: 5, max_family: 6, tables: tables.clone(), report: LaminarReport::default() };
            s.host(&sets, &caps);
            let slow = laminar_extensions(&host, [0, 1, 2]).unwrap();
            assert_eq!(s.report.extendable.map(|c| c == 1), slow);
        }
    }

    #[test]
    fn small_sweep() {
        let r = laminar_host_search(4, 3).unwrap();
        assert!(r.no_counterexample());
        assert!(r.extendable.iter().all(|&c| c > 0));
    }
}
