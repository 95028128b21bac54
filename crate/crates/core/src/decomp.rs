//! Global block decomposition of linear representations.
//!
//! If `det M = c * f1 * f2` with coprime `f1`, `f2`, then `M` is globally
//! equivalent to a block sum `M1 ⊕ M2` exactly when every entry of `adj(M)`
//! lies in the ideal `(f1, f2)`. In that case `adj(M) = f2*N1 + f1*N2`
//! uniquely, the constant matrices `A_a = M*N_a / (c*f_a)` and
//! `B_a = N_a*M / (c*f_a)` are complementary idempotents, and their images
//! give the change of basis.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::{Monomial, Polynomial, Rational};
use crate::error::{ensure, Error, Result};
use crate::matrix::{adjugate, determinant, HypersurfaceSpec, LinearMatrix, PolyMatrix, QMatrix};

/// `adj(M) = f2 * n1 + f1 * n2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjugateSplit {
    pub n1: PolyMatrix,
    pub n2: PolyMatrix,
}

/// `u1 * M * u2` is block diagonal with the listed blocks, and
/// `det(blocks[a]) = scalars[a] * factors[a]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionResult {
    pub u1: QMatrix,
    pub u2: QMatrix,
    pub blocks: Vec<LinearMatrix>,
    pub factors: Vec<Polynomial>,
    pub scalars: Vec<Rational>,
}

impl DecompositionResult {
    pub fn block_dets(&self) -> Vec<Polynomial> {
        self.factors
            .iter()
            .zip(&self.scalars)
            .map(|(f, c)| f.scale(c))
            .collect()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.size()).collect()
    }

    /// The block-diagonal matrix `u1 * M * u2`.
    pub fn block_sum(&self) -> PolyMatrix {
        let blocks: Vec<PolyMatrix> = self.blocks.iter().map(|b| b.as_poly().clone()).collect();
        PolyMatrix::block_diagonal(&blocks)
    }

    fn trivial(m: &LinearMatrix, factor: Polynomial, scalar: Rational) -> Self {
        let d = m.size();
        DecompositionResult {
            u1: QMatrix::identity(d),
            u2: QMatrix::identity(d),
            blocks: vec![m.clone()],
            factors: vec![factor],
            scalars: vec![scalar],
        }
    }
}

/// What was achieved before a split failed. `failed_block` is the index of
/// the block that could not be split further; the witness entry of the
/// error refers to that block's adjugate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialDecomposition {
    pub achieved: DecompositionResult,
    pub failed_block: usize,
}

/// The linear system `f2*g1 + f1*g2 = rhs` in the unknown coefficients of
/// the forms `g1`, `g2`, with one row per monomial of degree
/// `deg f1 + deg f2 - 1`.
struct SplitSystem {
    out_index: BTreeMap<Monomial, usize>,
    unknowns1: Vec<Monomial>,
    unknowns2: Vec<Monomial>,
    matrix: QMatrix,
    nvars: usize,
}

impl SplitSystem {
    fn new(f1: &Polynomial, f2: &Polynomial, nvars: usize, reverse: bool) -> Self {
        let d1 = f1.degree().expect("nonzero factor");
        let d2 = f2.degree().expect("nonzero factor");
        let out: Vec<Monomial> = Monomial::all_of_degree(nvars, d1 + d2 - 1);
        let out_index: BTreeMap<Monomial, usize> =
            out.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut unknowns1 = if d1 == 0 { vec![] } else { Monomial::all_of_degree(nvars, d1 - 1) };
        let mut unknowns2 = if d2 == 0 { vec![] } else { Monomial::all_of_degree(nvars, d2 - 1) };
        if reverse {
            unknowns1.reverse();
            unknowns2.reverse();
        }
        let columns: Vec<Polynomial> = unknowns1
            .iter()
            .map(|m| f2.mul_monomial(m))
            .chain(unknowns2.iter().map(|m| f1.mul_monomial(m)))
            .collect();
        let mut matrix = QMatrix::zeros(out.len(), columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (m, c) in col.terms() {
                matrix.set(out_index[m], j, c.clone());
            }
        }
        SplitSystem {
            out_index,
            unknowns1,
            unknowns2,
            matrix,
            nvars,
        }
    }

    fn num_unknowns(&self) -> usize {
        self.unknowns1.len() + self.unknowns2.len()
    }

    /// The map `(g1, g2) -> f2*g1 + f1*g2` is injective iff `f1`, `f2` are
    /// coprime (a common factor `h` gives the kernel element `(f1/h, -f2/h)`
    /// times any form of degree `deg h - 1`).
    fn is_injective(&self) -> bool {
        self.matrix.rank() == self.num_unknowns()
    }

    /// Solves every right-hand side at once. Returns per-rhs `Some((g1, g2))`
    /// or `None` if that rhs is outside the image.
    fn solve_all(&self, rhs: &[&Polynomial]) -> Vec<Option<(Polynomial, Polynomial)>> {
        let k = self.num_unknowns();
        let rows = self.matrix.nrows();
        let mut aug = QMatrix::zeros(rows, k + rhs.len());
        for i in 0..rows {
            for j in 0..k {
                aug.set(i, j, self.matrix.get(i, j).clone());
            }
        }
        let mut stray = vec![false; rhs.len()];
        for (t, p) in rhs.iter().enumerate() {
            for (m, c) in p.terms() {
                match self.out_index.get(m) {
                    Some(&i) => aug.set(i, k + t, c.clone()),
                    None => stray[t] = true,
                }
            }
        }
        let (r, pivots) = aug.rref();
        debug_assert!(pivots.iter().take(k).copied().eq(0..k));
        (0..rhs.len())
            .map(|t| {
                let col = k + t;
                if stray[t] || (k..rows).any(|i| !r.get(i, col).is_zero()) {
                    return None;
                }
                let mut g1 = Polynomial::zero(self.nvars);
                let mut g2 = Polynomial::zero(self.nvars);
                for (u, m) in self.unknowns1.iter().enumerate() {
                    g1.add_term(m.clone(), r.get(u, col).clone());
                }
                let off = self.unknowns1.len();
                for (u, m) in self.unknowns2.iter().enumerate() {
                    g2.add_term(m.clone(), r.get(off + u, col).clone());
                }
                Some((g1, g2))
            })
            .collect()
    }
}

fn check_factor(f: &Polynomial) -> Result<()> {
    if f.is_zero() || f.is_constant() {
        return Err(Error::BadFactorization(format!("constant factor {f}")));
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous(f.to_string()));
    }
    Ok(())
}

/// True iff the homogeneous forms `f1`, `f2` have no common factor.
pub fn are_coprime(f1: &Polynomial, f2: &Polynomial) -> Result<bool> {
    check_factor(f1)?;
    check_factor(f2)?;
    let nv = f1.nvars().max(f2.nvars());
    Ok(SplitSystem::new(f1, f2, nv, false).is_injective())
}

/// Validates `det(m) = c * f1 * f2` and coprimality; returns `c`.
fn check_split_inputs(m: &LinearMatrix, f1: &Polynomial, f2: &Polynomial) -> Result<Rational> {
    check_factor(f1)?;
    check_factor(f2)?;
    let det = determinant(m);
    if det.is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    let prod = f1 * f2;
    let c = det
        .proportionality(&prod)
        .ok_or_else(|| Error::BadFactorization(format!("{det} is not a multiple of ({f1})*({f2})")))?;
    if !are_coprime(f1, f2)? {
        return Err(Error::NotCoprime(format!("({f1}) and ({f2})")));
    }
    Ok(c)
}

fn split_with_order(
    m: &LinearMatrix,
    f1: &Polynomial,
    f2: &Polynomial,
    reverse: bool,
) -> Result<AdjugateSplit> {
    let d = m.size();
    let nv = m.nvars().max(f1.nvars()).max(f2.nvars());
    let adj = adjugate(m);
    let system = SplitSystem::new(f1, f2, nv, reverse);
    let rhs: Vec<&Polynomial> = adj.entries().map(|(_, e)| e).collect();
    let sols = system.solve_all(&rhs);
    let mut n1 = PolyMatrix::zeros(d, nv);
    let mut n2 = PolyMatrix::zeros(d, nv);
    for (idx, sol) in sols.into_iter().enumerate() {
        let (i, j) = (idx / d, idx % d);
        let Some((g1, g2)) = sol else {
            return Err(Error::NotInIdeal { row: i, col: j });
        };
        n1.set(i, j, g1);
        n2.set(i, j, g2);
    }
    ensure!(
        n1.scale_poly(f2).add(&n2.scale_poly(f1)) == adj,
        "adjugate split does not reproduce the adjugate"
    );
    Ok(AdjugateSplit { n1, n2 })
}

/// Writes `adj(m) = f2*n1 + f1*n2` by solving, entry by entry, a linear
/// system in the graded piece of degree `d - 1`.
///
/// Fails with `NotInIdeal` at the first (row-major) entry outside `(f1, f2)`.
pub fn adjugate_ideal_split(
    m: &LinearMatrix,
    f1: &Polynomial,
    f2: &Polynomial,
) -> Result<AdjugateSplit> {
    check_split_inputs(m, f1, f2)?;
    split_with_order(m, f1, f2, false)
}

/// Divides every entry by `f` and insists that the quotient is constant.
fn constant_quotient(m: &PolyMatrix, f: &Polynomial, c: &Rational) -> Result<QMatrix> {
    let d = m.size();
    let mut out = QMatrix::zeros(d, d);
    for ((i, j), e) in m.entries() {
        let q = e.exact_divide(f).map_err(|_| {
            Error::InternalAssertion(format!("entry ({i}, {j}) is not divisible by {f}"))
        })?;
        let v = q.as_constant().ok_or_else(|| {
            Error::InternalAssertion(format!("entry ({i}, {j}) of the idempotent is not constant"))
        })?;
        out.set(i, j, v / c);
    }
    Ok(out)
}

fn check_partition(a1: &QMatrix, a2: &QMatrix, name: &str) -> Result<()> {
    let d = a1.nrows();
    let id = QMatrix::identity(d);
    let zero = QMatrix::zeros(d, d);
    ensure!(a1.add(a2) == id, "{name}1 + {name}2 is not the identity");
    ensure!(
        (a1 * a2) == zero && (a2 * a1) == zero,
        "{name}1 and {name}2 are not orthogonal"
    );
    ensure!(
        &(a1 * a1) == a1 && &(a2 * a2) == a2,
        "{name}1, {name}2 are not idempotent"
    );
    ensure!(
        a1.rank() + a2.rank() == d,
        "ranks of {name}1 and {name}2 do not add up to the size"
    );
    Ok(())
}

fn constant_times(q: &QMatrix, m: &PolyMatrix) -> PolyMatrix {
    PolyMatrix::from_constant(q, m.nvars()).mul(m)
}

fn times_constant(m: &PolyMatrix, q: &QMatrix) -> PolyMatrix {
    m.mul(&PolyMatrix::from_constant(q, m.nvars()))
}

/// Splits off blocks of sizes `sizes` from a matrix that is block diagonal;
/// fails if it is not.
fn extract_blocks(m: &PolyMatrix, sizes: &[usize]) -> Result<Vec<LinearMatrix>> {
    let mut bounds = Vec::with_capacity(sizes.len());
    let mut off = 0;
    for &s in sizes {
        bounds.push(off..off + s);
        off += s;
    }
    let block_of = |i: usize| bounds.iter().position(|b| b.contains(&i)).unwrap();
    for ((i, j), e) in m.entries() {
        ensure!(
            block_of(i) == block_of(j) || e.is_zero(),
            "transformed matrix is not block diagonal at ({i}, {j})"
        );
    }
    bounds
        .iter()
        .map(|b| {
            let idx: Vec<usize> = b.clone().collect();
            LinearMatrix::new(m.submatrix(&idx, &idx))
        })
        .collect()
}

/// Splits `m` into two blocks with determinants proportional to `f1` and
/// `f2`, or certifies that no such global splitting exists.
pub fn decompose(m: &LinearMatrix, f1: &Polynomial, f2: &Polynomial) -> Result<DecompositionResult> {
    let c = check_split_inputs(m, f1, f2)?;
    let split = match split_with_order(m, f1, f2, false) {
        Ok(s) => s,
        Err(Error::NotInIdeal { row, col }) => {
            let partial = PartialDecomposition {
                achieved: DecompositionResult::trivial(m, f1 * f2, c),
                failed_block: 0,
            };
            return Err(Error::NotDecomposable {
                row,
                col,
                partial: Box::new(partial),
            });
        }
        Err(e) => return Err(e),
    };
    let mp = m.as_poly();
    let a1 = constant_quotient(&mp.mul(&split.n1), f1, &c)?;
    let a2 = constant_quotient(&mp.mul(&split.n2), f2, &c)?;
    let b1 = constant_quotient(&split.n1.mul(mp), f1, &c)?;
    let b2 = constant_quotient(&split.n2.mul(mp), f2, &c)?;
    check_partition(&a1, &a2, "A")?;
    check_partition(&b1, &b2, "B")?;
    // M * B_a = A_a * M, so M maps image(B_a) into image(A_a) and the row
    // spaces of A_a annihilate M * image(B_b) for b != a.
    ensure!(
        times_constant(mp, &b1) == constant_times(&a1, mp),
        "idempotents do not intertwine M"
    );
    let (r1, r2) = (a1.rank(), a2.rank());
    ensure!(
        b1.rank() == r1 && b2.rank() == r2,
        "left and right idempotents have different ranks"
    );
    let u1 = QMatrix::from_rows(
        a1.row_space_basis()
            .into_iter()
            .chain(a2.row_space_basis())
            .collect(),
    );
    let u2 = QMatrix::from_rows(
        b1.transpose()
            .row_space_basis()
            .into_iter()
            .chain(b2.transpose().row_space_basis())
            .collect(),
    )
    .transpose();
    ensure!(
        !u1.det().is_zero() && !u2.det().is_zero(),
        "change of basis is singular"
    );
    let transformed = times_constant(&constant_times(&u1, mp), &u2);
    let blocks = extract_blocks(&transformed, &[r1, r2])?;
    let mut scalars = Vec::with_capacity(2);
    for (b, f) in blocks.iter().zip([f1, f2]) {
        let det = determinant(b);
        let s = det.proportionality(f).ok_or_else(|| {
            Error::InternalAssertion(format!("block determinant {det} is not a multiple of {f}"))
        })?;
        scalars.push(s);
    }
    Ok(DecompositionResult {
        u1,
        u2,
        blocks,
        factors: vec![f1.clone(), f2.clone()],
        scalars,
    })
}

/// `I_before ⊕ q ⊕ I_after`.
fn embed(q: &QMatrix, before: usize, after: usize) -> QMatrix {
    let n = before + q.nrows() + after;
    QMatrix::from_fn(n, n, |i, j| {
        let inside = |k: usize| k >= before && k < before + q.nrows();
        if inside(i) && inside(j) {
            q.get(i - before, j - before).clone()
        } else if i == j {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// Splits `m` into one block per factor group `f_a^{p_a}` of `spec`.
///
/// A block carrying several groups is split by peeling off one group
/// against the product of the others, trying the groups in order. If no
/// group of some block can be peeled off, the result so far is returned
/// inside `NotDecomposable`.
pub fn decompose_completely(m: &LinearMatrix, spec: &HypersurfaceSpec) -> Result<DecompositionResult> {
    let det = determinant(m);
    if det.is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    spec.scalar_against(&det)?;
    let d = m.size();
    let groups: Vec<Polynomial> = spec.factors().iter().map(|(f, p)| f.pow(*p)).collect();
    for (i, g) in groups.iter().enumerate() {
        for h in &groups[..i] {
            if !are_coprime(g, h)? {
                return Err(Error::NotCoprime(format!("({g}) and ({h})")));
            }
        }
    }
    let product = |gs: &[Polynomial]| {
        gs.iter()
            .fold(Polynomial::one(m.nvars()), |acc, g| &acc * g)
    };
    // each pending block carries the groups its determinant is made of
    let mut u1 = QMatrix::identity(d);
    let mut u2 = QMatrix::identity(d);
    let mut blocks: Vec<(LinearMatrix, Vec<Polynomial>)> = vec![(m.clone(), groups)];
    let mut k = 0;
    while k < blocks.len() {
        if blocks[k].1.len() < 2 {
            k += 1;
            continue;
        }
        let (block, gs) = blocks[k].clone();
        let mut first_failure = None;
        let mut done = None;
        for a in 0..gs.len() {
            let rest: Vec<Polynomial> = gs.iter().enumerate().filter(|&(b, _)| b != a).map(|(_, g)| g.clone()).collect();
            match decompose(&block, &gs[a], &product(&rest)) {
                Ok(r) => {
                    done = Some((r, gs[a].clone(), rest));
                    break;
                }
                Err(Error::NotDecomposable { row, col, .. }) => {
                    first_failure.get_or_insert((row, col));
                }
                Err(e) => return Err(e),
            }
        }
        let Some((r, g, rest)) = done else {
            let (row, col) = first_failure.expect("at least two groups were tried");
            let achieved = finish(u1, u2, blocks)?;
            return Err(Error::NotDecomposable {
                row,
                col,
                partial: Box::new(PartialDecomposition {
                    achieved,
                    failed_block: k,
                }),
            });
        };
        let before: usize = blocks[..k].iter().map(|(b, _)| b.size()).sum();
        let after = d - before - block.size();
        u1 = &embed(&r.u1, before, after) * &u1;
        u2 = &u2 * &embed(&r.u2, before, after);
        let mut it = r.blocks.into_iter();
        let (first, second) = (it.next().unwrap(), it.next().unwrap());
        blocks.splice(k..=k, [(first, vec![g]), (second, rest)]);
    }
    let result = finish(u1, u2, blocks)?;
    let transformed = times_constant(&constant_times(&result.u1, m.as_poly()), &result.u2);
    ensure!(
        transformed == result.block_sum(),
        "composed change of basis does not produce the block sum"
    );
    Ok(result)
}

fn finish(
    u1: QMatrix,
    u2: QMatrix,
    blocks: Vec<(LinearMatrix, Vec<Polynomial>)>,
) -> Result<DecompositionResult> {
    let mut out_blocks = Vec::with_capacity(blocks.len());
    let mut factors = Vec::with_capacity(blocks.len());
    let mut scalars = Vec::with_capacity(blocks.len());
    for (b, gs) in blocks {
        let f = gs
            .iter()
            .fold(Polynomial::one(b.nvars()), |acc, g| &acc * g);
        let det = determinant(&b);
        let s = det.proportionality(&f).ok_or_else(|| {
            Error::InternalAssertion(format!("block determinant {det} is not a multiple of {f}"))
        })?;
        out_blocks.push(b);
        factors.push(f);
        scalars.push(s);
    }
    Ok(DecompositionResult {
        u1,
        u2,
        blocks: out_blocks,
        factors,
        scalars,
    })
}
