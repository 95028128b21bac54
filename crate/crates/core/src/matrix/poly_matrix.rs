use std::ops::Deref;

use super::QMatrix;
use crate::arith::{Polynomial, Rational};
use crate::error::{Error, Result};

/// Square matrix of polynomials sharing one ambient variable count.
///
/// Equality compares entries only, like polynomial equality; the ambient
/// variable count is bookkeeping.
#[derive(Clone, Debug)]
pub struct PolyMatrix {
    d: usize,
    nvars: usize,
    entries: Vec<Polynomial>,
}

impl PartialEq for PolyMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.entries == other.entries
    }
}

impl Eq for PolyMatrix {}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Self {
        let d = rows.len();
        assert!(rows.iter().all(|r| r.len() == d), "matrix must be square");
        let nvars = rows.iter().flatten().map(Polynomial::nvars).max().unwrap_or(1);
        let entries = rows
            .into_iter()
            .flatten()
            .map(|e| e.with_nvars(nvars))
            .collect();
        PolyMatrix { d, nvars, entries }
    }

    pub fn from_fn(d: usize, nvars: usize, f: impl Fn(usize, usize) -> Polynomial) -> Self {
        let mut entries = Vec::with_capacity(d * d);
        let mut n = nvars;
        for i in 0..d {
            for j in 0..d {
                let e = f(i, j);
                n = n.max(e.nvars());
                entries.push(e);
            }
        }
        let entries = entries.into_iter().map(|e| e.with_nvars(n)).collect();
        PolyMatrix { d, nvars: n, entries }
    }

    pub fn zeros(d: usize, nvars: usize) -> Self {
        Self::from_fn(d, nvars, |_, _| Polynomial::zero(nvars))
    }

    pub fn identity(d: usize, nvars: usize) -> Self {
        Self::from_fn(d, nvars, |i, j| {
            if i == j {
                Polynomial::one(nvars)
            } else {
                Polynomial::zero(nvars)
            }
        })
    }

    pub fn diagonal(diag: Vec<Polynomial>) -> Self {
        let nvars = diag.iter().map(Polynomial::nvars).max().unwrap_or(1);
        let d = diag.len();
        Self::from_fn(d, nvars, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                Polynomial::zero(nvars)
            }
        })
    }

    pub fn from_constant(q: &QMatrix, nvars: usize) -> Self {
        assert_eq!(q.nrows(), q.ncols());
        Self::from_fn(q.nrows(), nvars, |i, j| Polynomial::constant(q.get(i, j).clone(), nvars))
    }

    /// Block-diagonal sum of square blocks.
    pub fn block_diagonal(blocks: &[PolyMatrix]) -> Self {
        let d: usize = blocks.iter().map(|b| b.d).sum();
        let nvars = blocks.iter().map(|b| b.nvars).max().unwrap_or(1);
        let mut out = Self::zeros(d, nvars);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.d {
                for j in 0..b.d {
                    out.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.d;
        }
        out
    }

    pub fn size(&self) -> usize {
        self.d
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.d + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Polynomial) {
        self.nvars = self.nvars.max(v.nvars());
        self.entries[i * self.d + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Polynomial)> {
        let d = self.d;
        self.entries.iter().enumerate().map(move |(k, e)| ((k / d, k % d), e))
    }

    pub fn rows(&self) -> Vec<Vec<Polynomial>> {
        (0..self.d)
            .map(|i| self.entries[i * self.d..(i + 1) * self.d].to_vec())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial> {
        (0..self.d).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> PolyMatrix {
        Self::from_fn(self.d, self.nvars, |i, j| f(self.get(i, j)))
    }

    pub fn try_map(&self, f: impl Fn(&Polynomial) -> Result<Polynomial>) -> Result<PolyMatrix> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(f(e)?);
        }
        let nvars = entries.iter().map(Polynomial::nvars).max().unwrap_or(self.nvars);
        Ok(PolyMatrix {
            d: self.d,
            nvars,
            entries,
        })
    }

    pub fn transpose(&self) -> PolyMatrix {
        Self::from_fn(self.d, self.nvars, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.d).all(|i| (i + 1..self.d).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn scale(&self, c: &Rational) -> PolyMatrix {
        self.map(|e| e.scale(c))
    }

    pub fn scale_poly(&self, p: &Polynomial) -> PolyMatrix {
        self.map(|e| e * p)
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.d, other.d);
        Self::from_fn(self.d, self.nvars, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.d, other.d);
        Self::from_fn(self.d, self.nvars, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.d, other.d, "dimension mismatch in product");
        let d = self.d;
        let nvars = self.nvars.max(other.nvars);
        Self::from_fn(d, nvars, |i, j| {
            let mut acc = Polynomial::zero(nvars);
            for k in 0..d {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        })
    }

    /// Evaluates every entry at the given coordinates (missing ones read as 0).
    pub fn eval(&self, point: &[Rational]) -> QMatrix {
        QMatrix::from_fn(self.d, self.d, |i, j| self.get(i, j).eval(point))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    /// `Some` when all entries are constants.
    pub fn as_constant(&self) -> Option<QMatrix> {
        self.entries.iter().all(Polynomial::is_constant).then(|| {
            QMatrix::from_fn(self.d, self.d, |i, j| self.get(i, j).constant_term())
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        assert_eq!(rows.len(), cols.len());
        Self::from_fn(rows.len(), self.nvars, |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// `Some(c)` when `self == c * other` for a nonzero rational `c`.
    pub fn proportionality(&self, other: &PolyMatrix) -> Option<Rational> {
        if self.d != other.d {
            return None;
        }
        let ((i, j), _) = other.entries().find(|(_, e)| !e.is_zero())?;
        let c = self.get(i, j).proportionality(other.get(i, j))?;
        (*self == other.scale(&c)).then_some(c)
    }

    /// Highest total degree among the entries.
    pub fn max_degree(&self) -> Option<u32> {
        self.entries.iter().filter_map(Polynomial::degree).max()
    }

    /// Fails unless the point has a coordinate for every variable in use.
    pub fn check_point(&self, len: usize) -> Result<()> {
        let used = self
            .entries
            .iter()
            .flat_map(|e| e.terms().map(|(m, _)| m.support_len()))
            .max()
            .unwrap_or(0);
        if len < used {
            return Err(Error::DimensionMismatch(format!(
                "point has {len} coordinates, matrix uses {used} variables"
            )));
        }
        Ok(())
    }
}

/// A matrix whose entries are linear forms or zero: `M = sum_i M_i x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMatrix(PolyMatrix);

impl LinearMatrix {
    pub fn new(m: PolyMatrix) -> Result<Self> {
        for ((i, j), e) in m.entries() {
            if !e.is_zero() && !(e.is_homogeneous() && e.degree() == Some(1)) {
                return Err(Error::NotLinear {
                    row: i,
                    col: j,
                    entry: e.to_string(),
                });
            }
        }
        Ok(LinearMatrix(m))
    }

    /// Assembles `sum_i coeffs[i] * x_i`.
    pub fn from_coefficients(coeffs: &[QMatrix]) -> Self {
        let d = coeffs.first().map_or(0, QMatrix::nrows);
        let n = coeffs.len();
        let m = PolyMatrix::from_fn(d, n, |i, j| {
            let mut e = Polynomial::zero(n);
            for (k, c) in coeffs.iter().enumerate() {
                e.add_term(crate::arith::Monomial::var(k), c.get(i, j).clone());
            }
            e
        });
        LinearMatrix(m)
    }

    /// Coefficient matrices `M_0, ..., M_{n-1}` for `n = max(nvars, self.nvars())`.
    pub fn coefficient_matrices(&self, nvars: usize) -> Vec<QMatrix> {
        let n = nvars.max(self.0.nvars());
        let d = self.0.size();
        (0..n)
            .map(|k| {
                let m = crate::arith::Monomial::var(k);
                QMatrix::from_fn(d, d, |i, j| self.0.get(i, j).coefficient(&m))
            })
            .collect()
    }

    pub fn as_poly(&self) -> &PolyMatrix {
        &self.0
    }

    pub fn into_poly(self) -> PolyMatrix {
        self.0
    }
}

impl Deref for LinearMatrix {
    type Target = PolyMatrix;
    fn deref(&self) -> &PolyMatrix {
        &self.0
    }
}

/// A declared factorization `f = prod f_a^{p_a}` of a hypersurface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypersurfaceSpec {
    factors: Vec<(Polynomial, u32)>,
}

impl HypersurfaceSpec {
    pub fn new(factors: Vec<(Polynomial, u32)>) -> Self {
        HypersurfaceSpec { factors }
    }

    /// Validates homogeneity, positive multiplicities and pairwise
    /// non-proportionality.
    pub fn try_new(factors: Vec<(Polynomial, u32)>) -> Result<Self> {
        for (k, (f, p)) in factors.iter().enumerate() {
            if f.is_zero() || f.is_constant() {
                return Err(Error::BadFactorization(format!("constant factor {f}")));
            }
            if !f.is_homogeneous() {
                return Err(Error::NotHomogeneous(f.to_string()));
            }
            if *p == 0 {
                return Err(Error::BadFactorization(format!("zero multiplicity for {f}")));
            }
            if factors[..k].iter().any(|(g, _)| f.proportionality(g).is_some()) {
                return Err(Error::BadFactorization(format!("{f} repeats an earlier factor")));
            }
        }
        Ok(HypersurfaceSpec { factors })
    }

    pub fn factors(&self) -> &[(Polynomial, u32)] {
        &self.factors
    }

    pub fn nvars(&self) -> usize {
        self.factors.iter().map(|(f, _)| f.nvars()).max().unwrap_or(1)
    }

    /// `sum p_a * deg(f_a)`.
    pub fn degree(&self) -> u32 {
        self.factors
            .iter()
            .map(|(f, p)| p * f.degree().unwrap_or(0))
            .sum()
    }

    /// `prod f_a^{p_a}`.
    pub fn product(&self) -> Polynomial {
        let n = self.nvars();
        self.factors
            .iter()
            .fold(Polynomial::one(n), |acc, (f, p)| &acc * &f.pow(*p))
    }

    /// `prod f_a`.
    pub fn reduced(&self) -> Polynomial {
        let n = self.nvars();
        self.factors.iter().fold(Polynomial::one(n), |acc, (f, _)| &acc * f)
    }

    /// `prod f_a^{p_a - 1}`.
    pub fn excess(&self) -> Polynomial {
        let n = self.nvars();
        self.factors
            .iter()
            .fold(Polynomial::one(n), |acc, (f, p)| &acc * &f.pow(p - 1))
    }

    /// The scalar `c` with `det = c * product()`, or `BadFactorization`.
    pub fn scalar_against(&self, det: &Polynomial) -> Result<Rational> {
        let prod = self.product();
        det.proportionality(&prod).ok_or_else(|| {
            Error::BadFactorization(format!("{det} is not a nonzero multiple of {prod}"))
        })
    }
}

impl From<Vec<(Polynomial, u32)>> for HypersurfaceSpec {
    fn from(v: Vec<(Polynomial, u32)>) -> Self {
        HypersurfaceSpec::new(v)
    }
}
