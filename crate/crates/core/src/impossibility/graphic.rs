use alloc::vec::Vec;

use super::{graphic_fixture, GraphicFixture};
use crate::error::{Error, Result};
use crate::matroid::{rank_table, Graphic, RankOracle};

/// Largest host vertex count the search accepts.
pub const MAX_SEARCH_VERTICES: usize = 8;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphicReport {
    pub vertices: usize,
    /// Ordered triples of distinct host edges tried as images of `a, b, c`.
    pub placements: usize,
    pub independent_placements: usize,
    pub left_extendable: usize,
    pub right_extendable: usize,
    /// Left-extendable placements whose three edges lack a common endpoint.
    pub shared_endpoint_violations: usize,
    pub simultaneous: usize,
}

impl GraphicReport {
    pub fn no_counterexample(&self) -> bool {
        self.simultaneous == 0 && self.shared_endpoint_violations == 0
    }
}

fn is_morphism_on<M: RankOracle>(host: &M, table: &[usize], images: &[usize]) -> bool {
    (0..table.len()).all(|s| {
        let sel: Vec<usize> = crate::subset::bits(s as u64).map(|i| images[i]).collect();
        host.rank_of(&sel) == table[s]
    })
}

/// Whether host edges `placed` (images of `a, b, c`) extend to morphisms of
/// the left and right fixtures, by brute force over the remaining images.
pub fn graphic_extensions(host: &Graphic, placed: [usize; 3]) -> Result<(bool, bool)> {
    let m = host.edges().len();
    if let Some(&bad) = placed.iter().find(|&&e| e >= m) {
        return Err(Error::ElementOutOfRange { element: bad, size: m });
    }
    Ok(extensions(host, &graphic_fixture(), placed))
}

fn extensions(host: &Graphic, f: &GraphicFixture, [a, b, c]: [usize; 3]) -> (bool, bool) {
    let m = host.edges().len();
    let (lt, rt) = (rank_table(&f.left), rank_table(&f.right));
    let triangle = |x: usize, y: usize| -> Vec<usize> {
        (0..m).filter(|&z| host.rank_of(&[z]) == 1 && host.rank_of(&[x, y, z]) == 2).collect()
    };
    let (ds, es, fs) = (triangle(a, b), triangle(b, c), triangle(a, c));
    let left = ds.iter().any(|&d| {
        es.iter().any(|&e| fs.iter().any(|&fe| is_morphism_on(host, &lt, &[a, b, c, d, e, fe])))
    });
    let right = (0..m).any(|g| is_morphism_on(host, &rt, &[a, b, c, g]));
    (left, right)
}

/// Every placement of `a, b, c` as independent edges of the complete graph
/// on `vertices` vertices, checked for extensions to both fixtures.
pub fn graphic_host_search(vertices: usize) -> Result<GraphicReport> {
    if !(2..=MAX_SEARCH_VERTICES).contains(&vertices) {
        return Err(Error::InvalidParameter(alloc::format!(
            "vertex count {vertices} outside 2..={MAX_SEARCH_VERTICES}"
        )));
    }
    let edges: Vec<(usize, usize)> =
        (0..vertices).flat_map(|u| (u + 1..vertices).map(move |v| (u, v))).collect();
    let host = Graphic::new(vertices, edges)?;
    let f = graphic_fixture();
    let m = host.edges().len();
    let mut rep = GraphicReport { vertices, ..GraphicReport::default() };
    for a in 0..m {
        for b in (0..m).filter(|&b| b != a) {
            for c in (0..m).filter(|&c| c != a && c != b) {
                rep.placements += 1;
                if host.rank_of(&[a, b, c]) != 3 {
                    continue;
                }
                rep.independent_placements += 1;
                let (left, right) = extensions(&host, &f, [a, b, c]);
                if left {
                    rep.left_extendable += 1;
                    let ends = |e: usize| {
                        let (u, v) = host.edges()[e];
                        (1u32 << u) | (1u32 << v)
                    };
                    if ends(a) & ends(b) & ends(c) == 0 {
                        rep.shared_endpoint_violations += 1;
                    }
                }
                if right {
                    rep.right_extendable += 1;
                }
                if left && right {
                    rep.simultaneous += 1;
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_serves_only_the_complete_graph() {
        let host = Graphic::new(4, alloc::vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(graphic_extensions(&host, [0, 1, 2]).unwrap(), (true, false));
    }

    #[test]
    fn path_serves_only_the_cycle() {
        let host = Graphic::new(4, alloc::vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(graphic_extensions(&host, [0, 1, 2]).unwrap(), (false, true));
    }

    #[test]
    fn four_vertex_search() {
        let r = graphic_host_search(4).unwrap();
        assert_eq!(r.placements, 6 * 5 * 4);
        // Independent triples in K4 are spanning trees: 4 stars and 12 paths,
        // each in 6 orders.
        assert_eq!(r.independent_placements, 96);
        assert_eq!(r.left_extendable, 24);
        assert_eq!(r.right_extendable, 72);
        assert!(r.no_counterexample());
    }

    #[test]
    fn out_of_range_placement() {
        let host = Graphic::new(3, alloc::vec![(0, 1)]).unwrap();
        assert!(graphic_extensions(&host, [0, 1, 2]).is_err());
        assert!(graphic_host_search(9).is_err());
    }
}
