//! Symmetric representations: congruence reduction at a point and
//! verification of symmetric block decompositions.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::arith::{LocalRational, ProjectivePoint, Rational};
use crate::error::{ensure, Error, Result};
use crate::localred::LocalMatrix;
use crate::matrix::{determinant, PolyMatrix, QMatrix};

/// `a * M * a^T = diag(units) ⊕ n` with `n` symmetric and vanishing at the
/// center.
///
/// The diagonal entries are units of the local ring, not constants: over
/// the rationals a unit such as `1 + x1` has no square root, so it cannot be
/// normalized away by a congruence. `d` holds their values at the center.
#[derive(Clone, Debug)]
pub struct SymmetricReduction {
    pub d: QMatrix,
    pub units: Vec<LocalRational>,
    pub n: LocalMatrix,
    pub a: LocalMatrix,
}

impl SymmetricReduction {
    /// `diag(units) ⊕ n`.
    pub fn reduced_form(&self) -> LocalMatrix {
        let k = self.units.len();
        let c = self.n.center().clone();
        let nv = self.n.nvars();
        LocalMatrix::from_fn(k + self.n.size(), nv, c.clone(), |i, j| {
            if i < k || j < k {
                if i == j {
                    self.units[i].clone()
                } else {
                    LocalRational::zero(nv, c.clone())
                }
            } else {
                self.n.get(i - k, j - k).clone()
            }
        })
    }
}

pub fn is_symmetric(m: &PolyMatrix) -> bool {
    m.is_symmetric()
}

/// `e_i += e_j` applied as a congruence to `c` and as a row operation to `a`.
fn add_row_and_column(c: &mut LocalMatrix, a: &mut LocalMatrix, i: usize, j: usize) {
    let d = c.size();
    for t in 0..d {
        let v = c.get(i, t).add(c.get(j, t));
        c.set(i, t, v);
        let v = a.get(i, t).add(a.get(j, t));
        a.set(i, t, v);
    }
    for t in 0..d {
        let v = c.get(t, i).add(c.get(t, j));
        c.set(t, i, v);
    }
}

/// Symmetric local reduction of a symmetric matrix at `pt`.
///
/// Repeatedly takes a diagonal entry that is a unit at the center (largest
/// value, lowest index). When only off-diagonal units remain, row and
/// column `j` are added to row and column `i` first, which makes the
/// diagonal entry `(i, i)` a unit. The pivot row and column are then
/// cleared by a symmetric elimination.
pub fn sym_reduce(m: &PolyMatrix, pt: &ProjectivePoint) -> Result<SymmetricReduction> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    m.check_point(pt.len())?;
    if determinant(m).is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    let d = m.size();
    let nv = m.nvars();
    let center = Arc::new(pt.clone());
    let original = LocalMatrix::from_poly(m, center.clone());
    let mut c = original.clone();
    let mut a = LocalMatrix::identity(d, nv, center.clone());
    let mut k = 0;
    while k < d {
        let largest = |c: &LocalMatrix| {
            let mut best: Option<(usize, Rational)> = None;
            for i in k..d {
                let v = c.get(i, i).value_at_center().abs();
                if !v.is_zero() && best.as_ref().is_none_or(|(_, b)| v > *b) {
                    best = Some((i, v));
                }
            }
            best.map(|(i, _)| i)
        };
        let pivot = match largest(&c) {
            Some(i) => i,
            None => {
                let off = (k..d)
                    .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
                    .find(|&(i, j)| c.get(i, j).is_unit());
                let Some((i, j)) = off else { break };
                add_row_and_column(&mut c, &mut a, i, j);
                ensure!(c.get(i, i).is_unit(), "hyperbolic move did not produce a unit");
                i
            }
        };
        c.swap_rows(k, pivot);
        c.swap_cols(k, pivot);
        a.swap_rows(k, pivot);
        let inv = c.get(k, k).inverse().expect("pivot is a unit");
        let factors: Vec<LocalRational> = (0..d).map(|i| c.get(i, k).mul(&inv)).collect();
        let mut next = c.clone();
        for (i, fi) in factors.iter().enumerate().skip(k + 1) {
            for j in k + 1..d {
                if fi.is_zero() || c.get(k, j).is_zero() {
                    continue;
                }
                next.set(i, j, c.get(i, j).sub(&fi.mul(c.get(k, j))));
            }
        }
        for (i, fi) in factors.iter().enumerate().skip(k + 1) {
            next.set(i, k, LocalRational::zero(nv, center.clone()));
            next.set(k, i, LocalRational::zero(nv, center.clone()));
            if fi.is_zero() {
                continue;
            }
            for t in 0..d {
                if !a.get(k, t).is_zero() {
                    let v = a.get(i, t).sub(&fi.mul(a.get(k, t)));
                    a.set(i, t, v);
                }
            }
        }
        c = next;
        ensure!(
            c.equals(&c.transpose()),
            "symmetric reduction lost symmetry"
        );
        k += 1;
    }
    let units: Vec<LocalRational> = (0..k).map(|i| c.get(i, i).clone()).collect();
    let dmat = QMatrix::from_fn(k, k, |i, j| {
        if i == j {
            units[i].value_at_center()
        } else {
            Rational::zero()
        }
    });
    let n = LocalMatrix::from_fn(d - k, nv, center, |i, j| c.get(k + i, k + j).clone());
    ensure!(n.eval_at_center().is_zero(), "reduced block does not vanish at the center");
    ensure!(
        k == m.eval(pt.coords()).rank(),
        "diagonal part has size {k}, expected the rank at the point"
    );
    let red = SymmetricReduction {
        d: dmat,
        units,
        n,
        a,
    };
    ensure!(red.a.is_invertible_at_center(), "congruence is not invertible");
    ensure!(
        red.a.mul(&original).mul(&red.a.transpose()).equals(&red.reduced_form()),
        "congruence does not reproduce the reduced form"
    );
    Ok(red)
}

/// True iff `a * m * a^T` is exactly the block sum of the given symmetric
/// blocks and `a` is invertible.
pub fn verify_symmetric_decomposition(m: &PolyMatrix, a: &QMatrix, blocks: &[PolyMatrix]) -> bool {
    let d = m.size();
    if !m.is_symmetric()
        || !blocks.iter().all(PolyMatrix::is_symmetric)
        || blocks.iter().map(PolyMatrix::size).sum::<usize>() != d
        || a.nrows() != d
        || a.ncols() != d
        || a.det().is_zero()
    {
        return false;
    }
    let nv = m.nvars();
    let ap = PolyMatrix::from_constant(a, nv);
    let at = PolyMatrix::from_constant(&a.transpose(), nv);
    ap.mul(m).mul(&at) == PolyMatrix::block_diagonal(blocks)
}
