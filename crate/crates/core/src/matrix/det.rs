use std::collections::HashMap;

use num_traits::{One, Zero};

use super::PolyMatrix;
use crate::arith::{Polynomial, Rational};

/// Largest size handled by plain memoized cofactor expansion.
pub(crate) const COFACTOR_LIMIT: usize = 8;

/// Memoized minors of one matrix, keyed by (row subset, column subset).
///
/// Each minor is expanded along its first row; sub-minors are shared between
/// all minors requested from the same cache.
pub struct MinorCache<'a> {
    m: &'a PolyMatrix,
    memo: HashMap<(u32, u32), Polynomial>,
}

impl<'a> MinorCache<'a> {
    pub fn new(m: &'a PolyMatrix) -> Self {
        assert!(m.size() <= 31, "minor cache supports at most 31 rows");
        MinorCache {
            m,
            memo: HashMap::new(),
        }
    }

    pub fn minor_of(&mut self, rows: &[usize], cols: &[usize]) -> Polynomial {
        let rm = rows.iter().fold(0u32, |a, &r| a | (1 << r));
        let cm = cols.iter().fold(0u32, |a, &c| a | (1 << c));
        self.minor(rm, cm)
    }

    pub fn minor(&mut self, rows: u32, cols: u32) -> Polynomial {
        debug_assert_eq!(rows.count_ones(), cols.count_ones());
        let n = self.m.nvars();
        if rows == 0 {
            return Polynomial::one(n);
        }
        if rows.count_ones() == 1 {
            return self
                .m
                .get(rows.trailing_zeros() as usize, cols.trailing_zeros() as usize)
                .clone();
        }
        if let Some(v) = self.memo.get(&(rows, cols)) {
            return v.clone();
        }
        let r0 = rows.trailing_zeros() as usize;
        let rest = rows & !(1 << r0);
        let mut acc = Polynomial::zero(n);
        let mut k = 0;
        let mut cs = cols;
        while cs != 0 {
            let c = cs.trailing_zeros() as usize;
            cs &= cs - 1;
            let a = self.m.get(r0, c);
            if !a.is_zero() {
                let sub = self.minor(rest, cols & !(1 << c));
                if !sub.is_zero() {
                    let t = a * &sub;
                    if k % 2 == 0 {
                        acc += &t;
                    } else {
                        acc -= &t;
                    }
                }
            }
            k += 1;
        }
        self.memo.insert((rows, cols), acc.clone());
        acc
    }
}

pub(crate) fn full_mask(d: usize) -> u32 {
    if d == 0 {
        0
    } else {
        u32::MAX >> (32 - d)
    }
}

/// Exact determinant.
///
/// Small matrices use memoized cofactor expansion. Larger ones first
/// eliminate nonzero constant pivots (exact over the polynomial ring, since
/// the pivot is a unit) and then fall back to memoized expansion or to
/// fraction-free Bareiss elimination.
pub fn determinant(m: &PolyMatrix) -> Polynomial {
    let d = m.size();
    if d == 0 {
        return Polynomial::one(m.nvars());
    }
    if d <= COFACTOR_LIMIT {
        return MinorCache::new(m).minor(full_mask(d), full_mask(d));
    }
    let (scalar, rest) = condense_constant_pivots(m);
    if scalar.is_zero() {
        return Polynomial::zero(m.nvars());
    }
    let core = if rest.size() <= 12 {
        let k = rest.size();
        MinorCache::new(&rest).minor(full_mask(k), full_mask(k))
    } else {
        bareiss(&rest)
    };
    core.scale(&scalar)
}

/// Repeatedly pivots on nonzero constant entries. Returns `(c, S)` with
/// `det(m) = c * det(S)`.
///
/// Elimination happens in place over the still-active rows and columns, and
/// only touches rows with a nonzero entry in the pivot column, so sparse
/// inputs (such as linearizations, which carry many unit entries) condense
/// in roughly quadratic time per pivot.
pub(crate) fn condense_constant_pivots(m: &PolyMatrix) -> (Rational, PolyMatrix) {
    let n = m.nvars();
    let mut a = m.rows();
    let mut rows: Vec<usize> = (0..m.size()).collect();
    let mut cols: Vec<usize> = (0..m.size()).collect();
    let mut scalar = Rational::one();
    while !rows.is_empty() {
        let row_counts: Vec<usize> = rows
            .iter()
            .map(|&i| cols.iter().filter(|&&j| !a[i][j].is_zero()).count())
            .collect();
        let col_counts: Vec<usize> = cols
            .iter()
            .map(|&j| rows.iter().filter(|&&i| !a[i][j].is_zero()).count())
            .collect();
        // Markowitz-style choice: fewest fill-in candidates, then row-major.
        let mut best: Option<(usize, usize, usize)> = None;
        for (ri, &i) in rows.iter().enumerate() {
            for (ci, &j) in cols.iter().enumerate() {
                let e = &a[i][j];
                if e.is_zero() || !e.is_constant() {
                    continue;
                }
                let cost = (row_counts[ri] - 1) * (col_counts[ci] - 1);
                if best.is_none_or(|(_, _, c)| cost < c) {
                    best = Some((ri, ci, cost));
                }
            }
        }
        let Some((pri, pci, _)) = best else { break };
        let (pr, pc) = (rows[pri], cols[pci]);
        let piv = a[pr][pc].constant_term();
        // sign of moving the pivot to the top-left of the active block
        if (pri + pci) % 2 == 1 {
            scalar = -scalar;
        }
        scalar *= &piv;
        let inv = piv.recip();
        rows.remove(pri);
        cols.remove(pci);
        let prow: Vec<(usize, Polynomial)> = cols
            .iter()
            .filter(|&&j| !a[pr][j].is_zero())
            .map(|&j| (j, a[pr][j].scale(&inv)))
            .collect();
        for &i in &rows {
            if a[i][pc].is_zero() {
                continue;
            }
            let f = std::mem::replace(&mut a[i][pc], Polynomial::zero(n));
            for (j, pj) in &prow {
                let t = &f * pj;
                a[i][*j] -= &t;
            }
        }
    }
    let rest = if rows.is_empty() {
        PolyMatrix::zeros(0, n)
    } else {
        PolyMatrix::from_fn(rows.len(), n, |i, j| a[rows[i]][cols[j]].clone())
    };
    (scalar, rest)
}

/// Fraction-free elimination; every division is exact in the polynomial ring.
pub(crate) fn bareiss(m: &PolyMatrix) -> Polynomial {
    let n = m.size();
    let nv = m.nvars();
    let mut a = m.rows();
    let mut prev = Polynomial::one(nv);
    let mut negate = false;
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            // prefer the sparsest nonzero pivot below
            let Some(p) = (k + 1..n)
                .filter(|&i| !a[i][k].is_zero())
                .min_by_key(|&i| a[i][k].num_terms())
            else {
                return Polynomial::zero(nv);
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_divide(&prev)
                    .expect("Bareiss division is exact");
            }
            a[i][k] = Polynomial::zero(nv);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}
