use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf2::{complete_basis, EchelonBasis, Gf2Matrix, Gf2Vector};

/// An invertible `A` with `A g(u) = f(u)` for every `u`, where `f[u]` and
/// `g[u]` are the images of the same source element under two morphisms into
/// `F_2^dim`.
///
/// Picks source elements whose `g`-images form a basis of `span(g)`, sends
/// them to their `f`-images, and completes both families to bases of the
/// whole space.
pub fn solve_alignment(f: &[Gf2Vector], g: &[Gf2Vector], dim: usize) -> Result<Gf2Matrix> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch { expected: g.len(), got: f.len() });
    }
    if let Some(bad) = f.iter().chain(g).find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: bad.dim() });
    }
    let mut eg = EchelonBasis::new(dim);
    let mut ef = EchelonBasis::new(dim);
    let mut gb = Vec::new();
    let mut fb = Vec::new();
    for (u, (fu, gu)) in f.iter().zip(g).enumerate() {
        if eg.insert(gu) {
            if !ef.insert(fu) {
                return Err(Error::AlignmentFailed { witness: u });
            }
            gb.push(*gu);
            fb.push(*fu);
        }
    }
    let gm = Gf2Matrix::from_columns(dim, complete_basis(&gb, dim))?;
    let fm = Gf2Matrix::from_columns(dim, complete_basis(&fb, dim))?;
    let a = fm.mul(&gm.inverse().expect("completed basis is invertible"));
    if let Some(u) = (0..f.len()).find(|&u| a.mul_vec(&g[u]) != f[u]) {
        return Err(Error::AlignmentFailed { witness: u });
    }
    Ok(a)
}
