//! Finite witnesses for the non-existence results: the fixture matroids and
//! exhaustive searches over small hosts. A clean search report means "no
//! counterexample within the stated bounds", nothing more.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::gfp::GfpVector;
use crate::matroid::{rank_table, Graphic, Laminar, LinearGfp, RankOracle, Restriction, Uniform};
use crate::subset::SubsetMask;

mod graphic;
mod laminar;
mod rank3;

pub use graphic::{graphic_extensions, graphic_host_search, GraphicReport};
pub use laminar::{laminar_extensions, laminar_host_search, LaminarReport};
pub use rank3::{examine_prefix, rank3_extension_search, PrefixResult, Rank3Report};

/// Element names used by the fixtures, in id order.
pub const NAMES: [char; 7] = ['a', 'b', 'c', 'd', 'e', 'f', 'g'];

fn cols(rows: [[u64; 7]; 3]) -> Vec<GfpVector> {
    (0..7).map(|j| GfpVector(vec![rows[0][j], rows[1][j], rows[2][j]])).collect()
}

/// Two rank-3 matroids over GF(7) on `a..g` that agree on `a..f` (both
/// `U_{6,3}` there) but force incompatible positions for `g`.
#[derive(Clone, Debug)]
pub struct Rank3Fixture {
    pub m1: LinearGfp,
    pub m2: LinearGfp,
}

pub fn rank3_fixture() -> Rank3Fixture {
    let m1 = cols([[0, 2, 1, 1, 2, 0, 1], [1, 1, 2, 0, 0, 2, 1], [2, 0, 0, 2, 1, 1, 1]]);
    let m2 = cols([[0, 2, 1, 1, 2, 0, 1], [1, 1, 2, 0, 0, 1, 1], [2, 0, 0, 2, 1, 1, 1]]);
    Rank3Fixture {
        m1: LinearGfp::new(7, 3, m1).expect("7 is prime"),
        m2: LinearGfp::new(7, 3, m2).expect("7 is prime"),
    }
}

/// Two graphic matroids that are free on `{a, b, c}`: the complete graph on
/// four vertices with `a, b, c` at one vertex (circuits `{a,b,d}`, `{b,c,e}`,
/// `{a,c,f}`), and the 4-cycle `a, b, c, g` (element 3 is `g`).
#[derive(Clone, Debug)]
pub struct GraphicFixture {
    pub left: Graphic,
    pub right: Graphic,
}

pub fn graphic_fixture() -> GraphicFixture {
    GraphicFixture {
        left: Graphic::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (1, 3)]).expect("valid graph"),
        right: Graphic::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).expect("valid graph"),
    }
}

/// `U_{3,2}(S) ⊕ U_{1,1}({x})` on `{a, b, c, d}` for `x = c, b, a`.
pub fn laminar_fixtures() -> [Laminar; 3] {
    let make = |s: [usize; 3]| {
        Laminar::new(4, vec![(SubsetMask::from_ids(4, s).expect("ids below 4"), 2)]).expect("single set is laminar")
    };
    [make([0, 1, 3]), make([0, 2, 3]), make([1, 2, 3])]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureCheck {
    pub claim: String,
    pub passed: bool,
    /// Elements of the offending set when the claim fails.
    pub witness: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureReport {
    pub checks: Vec<FixtureCheck>,
}

impl FixtureReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn claim(&mut self, claim: String, passed: bool, witness: &[usize]) {
        let witness = (!passed).then(|| witness.to_vec());
        self.checks.push(FixtureCheck { claim, passed, witness });
    }

    fn rank<M: RankOracle + ?Sized>(&mut self, label: &str, m: &M, set: &[usize], expected: usize) {
        let names: String = set.iter().map(|&i| NAMES[i]).collect();
        let got = m.rank_of(set);
        self.claim(alloc::format!("{label}: rank{{{names}}} = {expected} (got {got})"), got == expected, set);
    }

    /// Every proper subset of `set` independent and `set` itself of rank
    /// `|set| - 1`.
    fn circuit<M: RankOracle + ?Sized>(&mut self, label: &str, m: &M, set: &[usize]) {
        self.rank(label, m, set, set.len() - 1);
        for skip in 0..set.len() {
            let sub: Vec<usize> = set.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &x)| x).collect();
            self.rank(label, m, &sub, sub.len());
        }
    }

    fn same_table<A: RankOracle, B: RankOracle>(&mut self, claim: &str, a: &A, b: &B) {
        let (ta, tb) = (rank_table(a), rank_table(b));
        let bad = (0..ta.len()).find(|&s| ta[s] != tb[s]);
        let witness: Vec<usize> = bad.map(|s| crate::subset::bits(s as u64).collect()).unwrap_or_default();
        self.claim(claim.into(), bad.is_none(), &witness);
    }
}

/// 3×3 determinant mod `p` of three columns.
pub fn det3(a: &GfpVector, b: &GfpVector, c: &GfpVector, p: u64) -> u64 {
    let m = |x: u64, y: u64| (x as u128 * y as u128 % p as u128) as u64;
    let t = |x: &GfpVector, y: &GfpVector, z: &GfpVector| m(x.0[0], m(y.0[1], z.0[2]));
    let plus = (t(a, b, c) + t(b, c, a) + t(c, a, b)) % p;
    let t2 = |x: &GfpVector, y: &GfpVector, z: &GfpVector| m(x.0[0], m(y.0[2], z.0[1]));
    let minus = (t2(a, b, c) + t2(b, c, a) + t2(c, a, b)) % p;
    (plus + p - minus) % p
}

pub fn verify_rank3_fixture(f: &Rank3Fixture) -> FixtureReport {
    let mut r = FixtureReport { checks: Vec::new() };
    for t in [[0, 1, 6], [2, 3, 6], [4, 5, 6]] {
        r.rank("M1", &f.m1, &t, 2);
    }
    for t in [[0, 1, 6], [2, 3, 6]] {
        r.rank("M2", &f.m2, &t, 2);
    }
    r.rank("M2", &f.m2, &[4, 5, 6], 3);
    let c = f.m2.columns();
    let det = det3(&c[4], &c[5], &c[6], 7);
    r.claim(alloc::format!("M2: det(e,f,g) = -1 mod 7 (got {det})"), det == 6, &[4, 5, 6]);
    let prefix: Vec<usize> = (0..6).collect();
    let r1 = Restriction::new(&f.m1, prefix.clone()).expect("ids in range");
    let r2 = Restriction::new(&f.m2, prefix).expect("ids in range");
    r.same_table("M1 and M2 agree on a..f", &r1, &r2);
    r.same_table("M1 restricted to a..f is U_{6,3}", &r1, &Uniform::new(6, 3));
    r
}

pub fn verify_graphic_fixture(f: &GraphicFixture) -> FixtureReport {
    let mut r = FixtureReport { checks: Vec::new() };
    for c in [[0, 1, 3], [1, 2, 4], [0, 2, 5]] {
        r.circuit("left", &f.left, &c);
    }
    r.circuit("right", &f.right, &[0, 1, 2, 3]);
    let l = Restriction::new(&f.left, vec![0, 1, 2]).expect("ids in range");
    let rt = Restriction::new(&f.right, vec![0, 1, 2]).expect("ids in range");
    r.same_table("left restricted to a,b,c is free", &l, &Uniform::free(3));
    r.same_table("right restricted to a,b,c is free", &rt, &Uniform::free(3));
    r
}

pub fn verify_laminar_fixtures(fs: &[Laminar; 3]) -> FixtureReport {
    let mut r = FixtureReport { checks: Vec::new() };
    for (i, (m, x)) in fs.iter().zip([2usize, 1, 0]).enumerate() {
        let s: Vec<usize> = (0..4).filter(|&y| y != x).collect();
        let direct = crate::matroid::Explicit::from_rank_table(
            4,
            (0u64..16)
                .map(|t| {
                    let uni = s.iter().filter(|&&y| t >> y & 1 == 1).count().min(2);
                    (uni + (t >> x & 1) as usize) as u8
                })
                .collect(),
        )
        .expect("16 entries");
        r.same_table(&alloc::format!("fixture {i} is U_{{3,2}} plus a coloop"), m, &direct);
        let res = Restriction::new(m, vec![0, 1, 2]).expect("ids in range");
        r.same_table(&alloc::format!("fixture {i} restricted to a,b,c is free"), &res, &Uniform::free(3));
    }
    r
}
