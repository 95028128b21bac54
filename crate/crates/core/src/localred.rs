//! Local reduction at a point: over the ring of rational functions regular
//! at the point, every representation is equivalent to an identity block
//! plus a block that vanishes at the point.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::arith::{LocalRational, Polynomial, ProjectivePoint};
use crate::error::{ensure, Error, Result};
use crate::matrix::{corank_at, determinant, PolyMatrix, QMatrix};

/// Square matrix of local rationals sharing one center.
#[derive(Clone, Debug)]
pub struct LocalMatrix {
    d: usize,
    nvars: usize,
    center: Arc<ProjectivePoint>,
    entries: Vec<LocalRational>,
}

impl LocalMatrix {
    pub fn from_poly(m: &PolyMatrix, center: Arc<ProjectivePoint>) -> Self {
        let entries = m
            .entries()
            .map(|(_, e)| LocalRational::from_poly(e.clone(), center.clone()))
            .collect();
        LocalMatrix {
            d: m.size(),
            nvars: m.nvars(),
            center,
            entries,
        }
    }

    pub fn identity(d: usize, nvars: usize, center: Arc<ProjectivePoint>) -> Self {
        Self::from_poly(&PolyMatrix::identity(d, nvars), center)
    }

    pub fn from_fn(
        d: usize,
        nvars: usize,
        center: Arc<ProjectivePoint>,
        f: impl Fn(usize, usize) -> LocalRational,
    ) -> Self {
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(f(i, j));
            }
        }
        LocalMatrix {
            d,
            nvars,
            center,
            entries,
        }
    }

    pub fn transpose(&self) -> LocalMatrix {
        LocalMatrix::from_fn(self.d, self.nvars, self.center.clone(), |i, j| {
            self.get(j, i).clone()
        })
    }

    /// `I_k ⊕ self`.
    pub fn with_identity_block(&self, k: usize) -> LocalMatrix {
        let c = self.center.clone();
        LocalMatrix::from_fn(self.d + k, self.nvars, c.clone(), |i, j| {
            if i < k || j < k {
                if i == j {
                    LocalRational::one(self.nvars, c.clone())
                } else {
                    LocalRational::zero(self.nvars, c.clone())
                }
            } else {
                self.get(i - k, j - k).clone()
            }
        })
    }

    pub fn size(&self) -> usize {
        self.d
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn center(&self) -> &Arc<ProjectivePoint> {
        &self.center
    }

    pub fn get(&self, i: usize, j: usize) -> &LocalRational {
        &self.entries[i * self.d + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LocalRational) {
        self.entries[i * self.d + j] = v;
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.d {
                self.entries.swap(a * self.d + j, b * self.d + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.d {
                self.entries.swap(i * self.d + a, i * self.d + b);
            }
        }
    }

    /// Values of the entries at the center.
    pub fn eval_at_center(&self) -> QMatrix {
        QMatrix::from_fn(self.d, self.d, |i, j| self.get(i, j).value_at_center())
    }

    /// Invertible over the local ring iff invertible at the center.
    pub fn is_invertible_at_center(&self) -> bool {
        self.d == 0 || !self.eval_at_center().det().is_zero()
    }

    pub fn mul(&self, other: &LocalMatrix) -> LocalMatrix {
        assert_eq!(self.d, other.d, "dimension mismatch in product");
        let c = self.center.clone();
        LocalMatrix::from_fn(self.d, self.nvars.max(other.nvars), c.clone(), |i, j| {
            let mut acc = LocalRational::zero(self.nvars, c.clone());
            for k in 0..self.d {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        })
    }

    /// Exact entrywise equality (by cross multiplication).
    pub fn equals(&self, other: &LocalMatrix) -> bool {
        self.d == other.d
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.equals(b))
    }

    /// Determinant, computed by clearing each row's denominators and taking
    /// a polynomial determinant.
    pub fn det(&self) -> LocalRational {
        let mut scaled = Vec::with_capacity(self.d);
        let mut total_den = Polynomial::one(self.nvars);
        for i in 0..self.d {
            let mut dens: Vec<&Polynomial> = Vec::new();
            for j in 0..self.d {
                let den = self.get(i, j).denominator();
                if !den.is_constant() && !dens.contains(&den) {
                    dens.push(den);
                }
            }
            let row_den = dens
                .iter()
                .fold(Polynomial::one(self.nvars), |acc, d| &acc * *d);
            let row: Vec<Polynomial> = (0..self.d)
                .map(|j| {
                    let e = self.get(i, j);
                    let cof = row_den
                        .exact_divide(e.denominator())
                        .expect("row denominator is a multiple of each entry denominator");
                    e.numerator() * &cof
                })
                .collect();
            total_den = &total_den * &row_den;
            scaled.push(row);
        }
        let num = if self.d == 0 {
            Polynomial::one(self.nvars)
        } else {
            determinant(&PolyMatrix::from_rows(scaled))
        };
        LocalRational::new(num, total_den, self.center.clone())
            .expect("product of regular denominators is regular")
    }
}

impl fmt::Display for LocalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.d {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.d {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `left * M * right = I_{d-p} ⊕ n`, with `n` vanishing at the center.
#[derive(Clone, Debug)]
pub struct LocalReduction {
    pub p: usize,
    pub n: LocalMatrix,
    pub left: LocalMatrix,
    pub right: LocalMatrix,
}

impl LocalReduction {
    /// The reduced form `I_{d-p} ⊕ n`.
    pub fn reduced_form(&self) -> LocalMatrix {
        self.n.with_identity_block(self.left.size() - self.p)
    }
}

/// Chips off the identity block of `m` at `pt`.
pub fn local_reduce(m: &PolyMatrix, pt: &ProjectivePoint) -> Result<LocalReduction> {
    m.check_point(pt.len())?;
    if determinant(m).is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    let center = Arc::new(pt.clone());
    let red = reduce_local_matrix(&LocalMatrix::from_poly(m, center))?;
    let expected = corank_at(m, pt);
    ensure!(
        red.p == expected,
        "reduced block has size {} but the corank is {expected}",
        red.p
    );
    Ok(red)
}

/// Local reduction of a matrix that already has local-rational entries.
pub fn reduce_local_matrix(m: &LocalMatrix) -> Result<LocalReduction> {
    let d = m.size();
    let nv = m.nvars();
    let center = m.center().clone();
    let mut c = m.clone();
    let mut left = LocalMatrix::identity(d, nv, center.clone());
    let mut right = LocalMatrix::identity(d, nv, center.clone());
    let mut k = 0;
    while k < d {
        // largest value at the center, row-major first among ties
        let mut best: Option<(usize, usize, crate::arith::Rational)> = None;
        for i in k..d {
            for j in k..d {
                let v = c.get(i, j).value_at_center().abs();
                if !v.is_zero() && best.as_ref().is_none_or(|(_, _, b)| v > *b) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((pr, pc, _)) = best else { break };
        c.swap_rows(k, pr);
        left.swap_rows(k, pr);
        c.swap_cols(k, pc);
        right.swap_cols(k, pc);

        let inv = c.get(k, k).inverse().expect("pivot is a unit");
        for j in 0..d {
            let v = c.get(k, j).mul(&inv);
            c.set(k, j, v);
            let v = left.get(k, j).mul(&inv);
            left.set(k, j, v);
        }
        for i in 0..d {
            if i == k || c.get(i, k).is_zero() {
                continue;
            }
            let f = c.get(i, k).clone();
            for j in 0..d {
                if !c.get(k, j).is_zero() {
                    let v = c.get(i, j).sub(&f.mul(c.get(k, j)));
                    c.set(i, j, v);
                }
                if !left.get(k, j).is_zero() {
                    let v = left.get(i, j).sub(&f.mul(left.get(k, j)));
                    left.set(i, j, v);
                }
            }
        }
        // column k is now e_k, so clearing row k only touches row k of c
        for j in 0..d {
            if j == k || c.get(k, j).is_zero() {
                continue;
            }
            let f = c.get(k, j).clone();
            c.set(k, j, LocalRational::zero(nv, center.clone()));
            for i in 0..d {
                if !right.get(i, k).is_zero() {
                    let v = right.get(i, j).sub(&right.get(i, k).mul(&f));
                    right.set(i, j, v);
                }
            }
        }
        k += 1;
    }
    let p = d - k;
    let n = LocalMatrix::from_fn(p, nv, center.clone(), |i, j| c.get(k + i, k + j).clone());
    ensure!(
        n.eval_at_center().is_zero(),
        "reduced block does not vanish at the center"
    );
    let red = LocalReduction { p, n, left, right };
    ensure!(
        verify_local_equivalence(&red.left, m, &red.reduced_form(), &red.right),
        "local reduction transformations do not reproduce the reduced form"
    );
    Ok(red)
}

/// True iff `a * m1 * b = m2` exactly and `a`, `b` are invertible at the
/// shared center.
pub fn verify_local_equivalence(
    a: &LocalMatrix,
    m1: &LocalMatrix,
    m2: &LocalMatrix,
    b: &LocalMatrix,
) -> bool {
    let same_center = [m1, m2, b].iter().all(|x| x.center() == a.center());
    let d = a.size();
    same_center
        && [m1, m2, b].iter().all(|x| x.size() == d)
        && a.is_invertible_at_center()
        && b.is_invertible_at_center()
        && a.mul(m1).mul(b).equals(m2)
}
