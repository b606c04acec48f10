//! The line-oriented matroid text format.
//!
//! ```text
//! matroid <name>
//! type linear_gf2 dim=<d> | linear_gfp p=<prime> dim=<d> | graphic vertices=<V> | laminar | uniform r=<r> | free | explicit
//! elements <n>
//! col <id> <v_1> ... <v_d>
//! edge <id> <u> <v>
//! set cap=<c> <id> ...
//! indep <id> ...
//! order <id> ...
//! weights <w_0> ... <w_{n-1}>
//! ```
//!
//! `#` starts a comment. `order` and `weights` are optional and apply to any
//! type.

use std::fmt::Write as _;

use ome_core::gf2::Gf2Vector;
use ome_core::gfp::GfpVector;
use ome_core::matroid::{Explicit, Graphic, Laminar, LinearGf2, LinearGfp, Uniform};
use ome_core::{RankOracle, SubsetMask};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("invalid matroid: {0}")]
    Matroid(#[from] ome_core::Error),
}

fn syntax<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Syntax { line, msg: msg.into() })
}

/// Any of the matroid types the text format can describe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyMatroid {
    LinearGf2(LinearGf2),
    LinearGfp(LinearGfp),
    Graphic(Graphic),
    Laminar(Laminar),
    Uniform(Uniform),
    Explicit(Explicit),
}

impl AnyMatroid {
    fn inner(&self) -> &dyn RankOracle {
        match self {
            AnyMatroid::LinearGf2(m) => m,
            AnyMatroid::LinearGfp(m) => m,
            AnyMatroid::Graphic(m) => m,
            AnyMatroid::Laminar(m) => m,
            AnyMatroid::Uniform(m) => m,
            AnyMatroid::Explicit(m) => m,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AnyMatroid::LinearGf2(_) => "linear_gf2",
            AnyMatroid::LinearGfp(_) => "linear_gfp",
            AnyMatroid::Graphic(_) => "graphic",
            AnyMatroid::Laminar(_) => "laminar",
            AnyMatroid::Uniform(_) => "uniform",
            AnyMatroid::Explicit(_) => "explicit",
        }
    }
}

impl RankOracle for AnyMatroid {
    fn len(&self) -> usize {
        self.inner().len()
    }
    fn rank_of(&self, elements: &[usize]) -> usize {
        self.inner().rank_of(elements)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatroidFile {
    pub name: String,
    pub matroid: AnyMatroid,
    pub order: Option<Vec<usize>>,
    pub weights: Option<Vec<f64>>,
}

enum Kind {
    Gf2 { dim: usize },
    Gfp { p: u64, dim: usize },
    Graphic { vertices: usize },
    Laminar,
    Uniform { r: usize },
    Free,
    Explicit,
}

fn param<T: std::str::FromStr>(line: usize, tokens: &[&str], key: &str) -> Result<T, FormatError> {
    let prefix = format!("{key}=");
    let Some(raw) = tokens.iter().find_map(|t| t.strip_prefix(&prefix)) else {
        return syntax(line, format!("missing {key}=<value>"));
    };
    raw.parse().or_else(|_| syntax(line, format!("bad value for {key}: {raw:?}")))
}

fn number<T: std::str::FromStr>(line: usize, raw: &str) -> Result<T, FormatError> {
    raw.parse().or_else(|_| syntax(line, format!("expected a number, got {raw:?}")))
}

fn numbers<T: std::str::FromStr>(line: usize, raw: &[&str]) -> Result<Vec<T>, FormatError> {
    raw.iter().map(|r| number(line, r)).collect()
}

/// Stores `value` at `id`, rejecting duplicates and ids outside `0..n`.
fn place<T>(slots: &mut [Option<T>], line: usize, id: usize, value: T) -> Result<(), FormatError> {
    let n = slots.len();
    match slots.get_mut(id) {
        None => syntax(line, format!("id {id} outside 0..{n}")),
        Some(Some(_)) => syntax(line, format!("id {id} defined twice")),
        Some(slot) => {
            *slot = Some(value);
            Ok(())
        }
    }
}

fn complete<T>(slots: Vec<Option<T>>, what: &str) -> Result<Vec<T>, FormatError> {
    let n = slots.len();
    slots
        .into_iter()
        .enumerate()
        .map(|(id, s)| s.ok_or_else(|| FormatError::Invalid(format!("{what} for id {id} missing (of {n})"))))
        .collect()
}

pub fn parse(text: &str) -> Result<MatroidFile, FormatError> {
    let mut name = None;
    let mut kind = None;
    let mut n = None;
    let mut cols: Vec<Option<Vec<u64>>> = Vec::new();
    let mut edges: Vec<Option<(usize, usize)>> = Vec::new();
    let mut sets = Vec::new();
    let mut indep = Vec::new();
    let mut order = None;
    let mut weights = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&head, rest)) = tokens.split_first() else { continue };
        let need_n = |n: Option<usize>| n.map_or_else(|| syntax(line, "`elements` must come first"), Ok);
        match head {
            "matroid" => name = Some(rest.join(" ")),
            "type" => {
                let Some((&t, params)) = rest.split_first() else { return syntax(line, "missing type") };
                kind = Some(match t {
                    "linear_gf2" => Kind::Gf2 { dim: param(line, params, "dim")? },
                    "linear_gfp" => Kind::Gfp { p: param(line, params, "p")?, dim: param(line, params, "dim")? },
                    "graphic" => Kind::Graphic { vertices: param(line, params, "vertices")? },
                    "laminar" => Kind::Laminar,
                    "uniform" => Kind::Uniform { r: param(line, params, "r")? },
                    "free" => Kind::Free,
                    "explicit" => Kind::Explicit,
                    other => return syntax(line, format!("unknown type {other:?}")),
                });
            }
            "elements" => {
                let [count] = rest else { return syntax(line, "expected `elements <n>`") };
                let count: usize = number(line, count)?;
                n = Some(count);
                cols = vec![None; count];
                edges = vec![None; count];
            }
            "col" => {
                need_n(n)?;
                let dim = match kind {
                    Some(Kind::Gf2 { dim } | Kind::Gfp { dim, .. }) => dim,
                    _ => return syntax(line, "`col` needs a linear type"),
                };
                let Some((id, entries)) = rest.split_first() else { return syntax(line, "expected `col <id> ...`") };
                if entries.len() != dim {
                    return syntax(line, format!("column has {} entries, expected {dim}", entries.len()));
                }
                let entries: Vec<u64> = numbers(line, entries)?;
                if matches!(kind, Some(Kind::Gf2 { .. })) && entries.iter().any(|&x| x > 1) {
                    return syntax(line, "GF(2) entries must be 0 or 1");
                }
                place(&mut cols, line, number(line, id)?, entries)?;
            }
            "edge" => {
                need_n(n)?;
                let [id, u, v] = rest else { return syntax(line, "expected `edge <id> <u> <v>`") };
                place(&mut edges, line, number(line, id)?, (number(line, u)?, number(line, v)?))?;
            }
            "set" => {
                let n = need_n(n)?;
                let Some((cap, ids)) = rest.split_first() else { return syntax(line, "expected `set cap=<c> ...`") };
                let cap: usize = param(line, &[cap], "cap")?;
                let ids: Vec<usize> = numbers(line, ids)?;
                let mask = SubsetMask::from_ids(n, ids).or_else(|e| syntax(line, e.to_string()))?;
                sets.push((mask, cap));
            }
            "indep" => {
                let n = need_n(n)?;
                let ids: Vec<usize> = numbers(line, rest)?;
                indep.push(SubsetMask::from_ids(n, ids).or_else(|e| syntax(line, e.to_string()))?);
            }
            "order" => {
                let n = need_n(n)?;
                let ids: Vec<usize> = numbers(line, rest)?;
                let mut sorted = ids.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != ids.len() || ids.iter().any(|&x| x >= n) {
                    return syntax(line, "order must list distinct ids below the ground-set size");
                }
                order = Some(ids);
            }
            "weights" => {
                let n = need_n(n)?;
                let w: Vec<f64> = numbers(line, rest)?;
                if w.len() != n {
                    return syntax(line, format!("{} weights for {n} elements", w.len()));
                }
                weights = Some(w);
            }
            other => return syntax(line, format!("unknown directive {other:?}")),
        }
    }
    let missing = |what: &str| FormatError::Invalid(format!("missing `{what}` line"));
    let Some(kind) = kind else { return Err(missing("type")) };
    let Some(n) = n else { return Err(missing("elements")) };
    let matroid = match kind {
        Kind::Gf2 { dim } => {
            let cols = complete(cols, "column")?;
            let cols = cols.iter().map(|c| Gf2Vector::from_coords(&c.iter().map(|&x| x as u8).collect::<Vec<_>>())).collect();
            AnyMatroid::LinearGf2(LinearGf2::new(dim, cols)?)
        }
        Kind::Gfp { p, dim } => {
            let cols = complete(cols, "column")?.into_iter().map(GfpVector).collect();
            AnyMatroid::LinearGfp(LinearGfp::new(p, dim, cols)?)
        }
        Kind::Graphic { vertices } => AnyMatroid::Graphic(Graphic::new(vertices, complete(edges, "edge")?)?),
        Kind::Laminar => AnyMatroid::Laminar(Laminar::new(n, sets)?),
        Kind::Uniform { r } => {
            if r > n {
                return Err(FormatError::Invalid(format!("rank {r} exceeds {n} elements")));
            }
            AnyMatroid::Uniform(Uniform::new(n, r))
        }
        Kind::Free => AnyMatroid::Uniform(Uniform::free(n)),
        Kind::Explicit => AnyMatroid::Explicit(Explicit::from_bases(n, &indep)?),
    };
    Ok(MatroidFile { name: name.unwrap_or_else(|| "unnamed".into()), matroid, order, weights })
}

fn ids_line(out: &mut String, head: &str, ids: impl Iterator<Item = usize>) {
    out.push_str(head);
    for id in ids {
        let _ = write!(out, " {id}");
    }
    out.push('\n');
}

pub fn write(file: &MatroidFile) -> String {
    let mut out = format!("matroid {}\n", file.name);
    let n = file.matroid.len();
    match &file.matroid {
        AnyMatroid::LinearGf2(m) => {
            let _ = writeln!(out, "type linear_gf2 dim={}\nelements {n}", m.dim());
            for (id, c) in m.columns().iter().enumerate() {
                ids_line(&mut out, &format!("col {id}"), (0..m.dim()).map(|i| usize::from(c.get(i))));
            }
        }
        AnyMatroid::LinearGfp(m) => {
            let _ = writeln!(out, "type linear_gfp p={} dim={}\nelements {n}", m.modulus(), m.dim());
            for (id, c) in m.columns().iter().enumerate() {
                ids_line(&mut out, &format!("col {id}"), c.0.iter().map(|&x| x as usize));
            }
        }
        AnyMatroid::Graphic(m) => {
            let _ = writeln!(out, "type graphic vertices={}\nelements {n}", m.vertices());
            for (id, (u, v)) in m.edges().iter().enumerate() {
                let _ = writeln!(out, "edge {id} {u} {v}");
            }
        }
        AnyMatroid::Laminar(m) => {
            let _ = writeln!(out, "type laminar\nelements {n}");
            for (set, cap) in m.family() {
                ids_line(&mut out, &format!("set cap={cap}"), set.iter());
            }
        }
        AnyMatroid::Uniform(m) => {
            let _ = writeln!(out, "type uniform r={}\nelements {n}", m.rank_bound());
        }
        AnyMatroid::Explicit(m) => {
            let _ = writeln!(out, "type explicit\nelements {n}");
            for b in m.bases() {
                ids_line(&mut out, "indep", b.iter());
            }
        }
    }
    if let Some(order) = &file.order {
        ids_line(&mut out, "order", order.iter().copied());
    }
    if let Some(w) = &file.weights {
        out.push_str("weights");
        for x in w {
            let _ = write!(out, " {x}");
        }
        out.push('\n');
    }
    out
}
