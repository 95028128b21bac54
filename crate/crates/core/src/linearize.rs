//! Linearization: trading polynomial entries of high degree for a larger
//! matrix with affine-linear entries and the same determinant, one monomial
//! variable at a time; plus a symmetric variant and homogenization.

use num_traits::One;

use crate::arith::{rat, Monomial, Polynomial, Rational};
use crate::error::{ensure, Error, Result};
use crate::matrix::{determinant, LinearMatrix, PolyMatrix};

/// Largest size for which [`homogenize_matrix`] re-checks its determinant
/// identity; beyond it the identity holds by construction.
const HOMOGENIZE_CHECK_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizationResult {
    /// Matrix with entries of total degree at most 1.
    pub matrix: PolyMatrix,
    /// `det(matrix) = unit * det(input)`; always `1` or `-1`.
    pub unit: Rational,
    /// Number of degree-reduction moves performed.
    pub step_count: usize,
    /// [`top_degree_profile`] of the input, then after every move.
    pub trace: Vec<(u32, usize)>,
}

impl LinearizationResult {
    pub fn size(&self) -> usize {
        self.matrix.size()
    }
}

/// Top degree and the number of monomials of that degree over all entries.
pub fn top_degree_profile(m: &PolyMatrix) -> (u32, usize) {
    let top = m.max_degree().unwrap_or(0);
    let count = m
        .entries()
        .flat_map(|(_, e)| e.terms())
        .filter(|(mono, _)| mono.degree() == top)
        .count();
    (top, count)
}

/// The graded-lex largest monomial among all entries, with its coefficient
/// and the first entry (row-major) where it occurs.
fn pick_monomial(m: &PolyMatrix) -> Option<(usize, usize, Monomial, Rational)> {
    let mut best: Option<(usize, usize, Monomial, Rational)> = None;
    for ((i, j), e) in m.entries() {
        if let Some((mono, c)) = e.leading_term() {
            if best.as_ref().is_none_or(|(_, _, b, _)| mono > b) {
                best = Some((i, j, mono.clone(), c.clone()));
            }
        }
    }
    best
}

/// Splits `m = x_i * rest` at its lowest-index variable.
fn split_variable(m: &Monomial) -> (usize, Monomial) {
    let i = m.first_var().expect("monomial of positive degree");
    let rest = Monomial::var(i).div(m).expect("variable divides the monomial");
    (i, rest)
}

/// `zero_block(k) ⊕ m` with `k` new leading rows and columns.
fn prepend(m: &PolyMatrix, k: usize) -> PolyMatrix {
    let n = m.nvars();
    PolyMatrix::from_fn(m.size() + k, n, |i, j| {
        if i < k || j < k {
            Polynomial::zero(n)
        } else {
            m.get(i - k, j - k).clone()
        }
    })
}

fn check_nonzero_det(n: &PolyMatrix) -> Result<Polynomial> {
    let det = determinant(n);
    if det.is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    Ok(det)
}

/// Linearizes `n` while preserving its determinant.
///
/// Each move takes the graded-lex largest monomial `a * x_i * m'` of top
/// degree (first entry row-major), prepends a row and column, and uses
/// `det [[1, x_i], [-a*m', e - a*x_i*m']] = e` to lower the degree. The pair
/// (top degree, number of top-degree monomials) strictly decreases at every
/// move.
pub fn linearize(n: &PolyMatrix) -> Result<LinearizationResult> {
    let det = check_nonzero_det(n)?;
    let nv = n.nvars();
    let mut l = n.clone();
    let mut steps = 0;
    let mut trace = vec![top_degree_profile(n)];
    while l.max_degree().unwrap_or(0) >= 2 {
        let before = top_degree_profile(&l);
        let (r, c, mono, a) = pick_monomial(&l).expect("nonzero entry of degree >= 2");
        let (var, rest) = split_variable(&mono);
        let mut next = prepend(&l, 1);
        next.set(0, 0, Polynomial::one(nv));
        next.set(0, c + 1, Polynomial::var(var, nv));
        next.set(r + 1, 0, -Polynomial::term(a.clone(), rest, nv));
        let reduced = l.get(r, c) - &Polynomial::term(a, mono, nv);
        next.set(r + 1, c + 1, reduced);
        l = next;
        steps += 1;
        let after = top_degree_profile(&l);
        ensure!(
            after < before,
            "linearization measure did not decrease: {before:?} -> {after:?}"
        );
        trace.push(after);
    }
    ensure!(
        determinant(&l) == det,
        "linearization changed the determinant"
    );
    Ok(LinearizationResult {
        matrix: l,
        unit: Rational::one(),
        step_count: steps,
        trace,
    })
}

/// Linearizes a symmetric matrix by symmetric moves.
///
/// Each move prepends a hyperbolic pair `[[0, 1], [1, 0]]` and couples it to
/// the chosen entry; the Schur complement of the pair is the matrix before
/// the move, so the determinant changes sign. On a diagonal entry
/// `a * x_i * m'` the couplings are `x_i` and `-a*m'/2`; on an off-diagonal
/// pair they are `x_i` in one row and `-a*m'` in the other.
pub fn sym_linearize(n: &PolyMatrix) -> Result<LinearizationResult> {
    if !n.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let det = check_nonzero_det(n)?;
    let nv = n.nvars();
    let mut l = n.clone();
    let mut steps = 0;
    let mut trace = vec![top_degree_profile(n)];
    let mut unit = Rational::one();
    while l.max_degree().unwrap_or(0) >= 2 {
        let before = top_degree_profile(&l);
        let (r, c, mono, a) = pick_monomial(&l).expect("nonzero entry of degree >= 2");
        let (var, rest) = split_variable(&mono);
        let mut next = prepend(&l, 2);
        let one = Polynomial::one(nv);
        next.set(0, 1, one.clone());
        next.set(1, 0, one);
        let x = Polynomial::var(var, nv);
        let am = Polynomial::term(a.clone(), mono.clone(), nv);
        if r == c {
            let v = Polynomial::term(-&a * rat(1, 2), rest, nv);
            for (k, e) in [(0, &x), (1, &v)] {
                next.set(r + 2, k, e.clone());
                next.set(k, r + 2, e.clone());
            }
            next.set(r + 2, r + 2, l.get(r, r) - &am);
        } else {
            let v = Polynomial::term(-a, rest, nv);
            next.set(r + 2, 0, x.clone());
            next.set(0, r + 2, x);
            next.set(c + 2, 1, v.clone());
            next.set(1, c + 2, v);
            let reduced = l.get(r, c) - &am;
            next.set(r + 2, c + 2, reduced.clone());
            next.set(c + 2, r + 2, reduced);
        }
        l = next;
        steps += 1;
        unit = -unit;
        ensure!(l.is_symmetric(), "symmetric linearization lost symmetry");
        let after = top_degree_profile(&l);
        ensure!(
            after < before,
            "linearization measure did not decrease: {before:?} -> {after:?}"
        );
        trace.push(after);
    }
    ensure!(
        determinant(&l) == det.scale(&unit),
        "symmetric linearization changed the determinant beyond its sign"
    );
    Ok(LinearizationResult {
        matrix: l,
        unit,
        step_count: steps,
        trace,
    })
}

/// Turns an affine-linear matrix into a matrix of linear forms by replacing
/// each constant `c` with `c * x_var`.
///
/// If `x_var` does not occur in `l`, the determinant of the result is the
/// homogenization of `det(l)` with respect to `x_var`, times
/// `x_var^(d - deg det(l))`.
pub fn homogenize_matrix(l: &PolyMatrix, var: usize) -> Result<LinearMatrix> {
    let nv = l.nvars().max(var + 1);
    let x = Polynomial::var(var, nv);
    let out = l.try_map(|e| {
        let c = e.constant_term();
        let linear = e - &Polynomial::constant(c.clone(), nv);
        Ok(&linear + &x.scale(&c))
    })?;
    for ((i, j), e) in l.entries() {
        if e.degree().unwrap_or(0) > 1 {
            return Err(Error::NotAffineLinear {
                row: i,
                col: j,
                entry: e.to_string(),
            });
        }
    }
    let out = LinearMatrix::new(out)?;
    let var_free = l
        .entries()
        .all(|(_, e)| e.terms().all(|(m, _)| m.exponent(var) == 0));
    if var_free && l.size() <= HOMOGENIZE_CHECK_LIMIT {
        let det = determinant(l);
        let expected = if det.is_zero() {
            det
        } else {
            let deficit = l.size() as u32 - det.degree().unwrap_or(0);
            det.homogenize(var)
                .mul_monomial(&Monomial::var_pow(var, deficit))
        };
        ensure!(
            determinant(out.as_poly()) == expected,
            "homogenized determinant is not the homogenized determinant"
        );
    }
    Ok(out)
}
