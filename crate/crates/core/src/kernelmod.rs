//! Kernel generators, maximal generation, reduced kernels, matrix
//! factorizations, and recovery of a representation from its adjoint.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::arith::{Polynomial, ProjectivePoint, Rational};
use crate::error::{ensure, Error, Result};
use crate::matrix::{
    adjugate, corank_at, determinant, generic_corank_mod, HypersurfaceSpec, LinearMatrix,
    PolyMatrix,
};

/// The `d` columns of `adj(M)`, each annihilated by `M` modulo `det(M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelGenerators {
    pub columns: Vec<Vec<Polynomial>>,
    pub det: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorRecord {
    pub factor: Polynomial,
    pub multiplicity: u32,
    pub generic_corank: usize,
    pub verdict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointRecord {
    pub point: ProjectivePoint,
    pub corank: usize,
    pub multiplicity: u32,
    pub verdict: bool,
}

/// Evidence behind a maximal-generation verdict.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MGReport {
    pub factors: Vec<FactorRecord>,
    pub points: Vec<PointRecord>,
}

impl MGReport {
    pub fn verdict(&self) -> bool {
        self.factors.iter().all(|r| r.verdict) && self.points.iter().all(|r| r.verdict)
    }
}

fn nonzero_det(m: &PolyMatrix) -> Result<Polynomial> {
    let det = determinant(m);
    if det.is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    Ok(det)
}

/// Columns of the adjugate.
pub fn kernel_generators(m: &LinearMatrix) -> Result<KernelGenerators> {
    let det = nonzero_det(m)?;
    let adj = adjugate(m);
    let d = m.size();
    ensure!(
        m.mul(&adj) == PolyMatrix::identity(d, m.nvars()).scale_poly(&det),
        "M * adj(M) is not det(M) * I"
    );
    let columns = (0..d).map(|j| adj.column(j)).collect();
    Ok(KernelGenerators { columns, det })
}

/// Compares the corank of `m` at `pt` with the multiplicity of `f` there.
pub fn is_mg_at(m: &LinearMatrix, f: &Polynomial, pt: &ProjectivePoint) -> Result<MGReport> {
    let det = nonzero_det(m)?;
    if det.proportionality(f).is_none() {
        return Err(Error::BadFactorization(format!(
            "{f} is not a multiple of the determinant {det}"
        )));
    }
    m.check_point(pt.len())?;
    if !f.eval(pt.coords()).is_zero() {
        return Err(Error::PointOffHypersurface);
    }
    let corank = corank_at(m, pt);
    let multiplicity = f.multiplicity_at(pt)?;
    Ok(MGReport {
        factors: vec![],
        points: vec![PointRecord {
            point: pt.clone(),
            corank,
            multiplicity,
            verdict: corank as u32 == multiplicity,
        }],
    })
}

/// Checks, factor by factor, that the generic corank on `{f_a = 0}` equals
/// the multiplicity `p_a`, by exact minor divisibility.
pub fn is_generically_mg(m: &LinearMatrix, spec: &HypersurfaceSpec) -> Result<MGReport> {
    let det = nonzero_det(m)?;
    spec.scalar_against(&det)?;
    let factors = spec
        .factors()
        .par_iter()
        .map(|(f, p)| {
            let generic_corank = generic_corank_mod(m, f)?;
            Ok(FactorRecord {
                factor: f.clone(),
                multiplicity: *p,
                generic_corank,
                verdict: generic_corank as u32 == *p,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MGReport {
        factors,
        points: vec![],
    })
}

/// `adj(M) / prod f_a^{p_a - 1}`, defined for generically maximally
/// generated representations.
pub fn reduced_kernel_generators(m: &LinearMatrix, spec: &HypersurfaceSpec) -> Result<PolyMatrix> {
    if !is_generically_mg(m, spec)?.verdict() {
        return Err(Error::NotGenericallyMG);
    }
    let adj = adjugate(m);
    let excess = spec.excess();
    let reduced = adj.try_map(|e| e.exact_divide(&excess))?;
    ensure!(
        reduced.scale_poly(&excess) == adj,
        "reduced kernel does not reconstruct the adjugate"
    );
    Ok(reduced)
}

/// `N` with `M * N = N * M = (prod f_a) * I`.
///
/// This is the reduced kernel divided by the constant `c` in
/// `det(M) = c * prod f_a^{p_a}`.
pub fn matrix_factorization(m: &LinearMatrix, spec: &HypersurfaceSpec) -> Result<PolyMatrix> {
    let reduced = reduced_kernel_generators(m, spec)?;
    let c = spec.scalar_against(&determinant(m))?;
    let n = reduced.scale(&c.recip());
    let f_red = spec.reduced();
    let expected = PolyMatrix::identity(m.size(), m.nvars()).scale_poly(&f_red);
    ensure!(m.mul(&n) == expected, "M * N is not f_red * I");
    ensure!(n.mul(m) == expected, "N * M is not f_red * I");
    Ok(n)
}

/// Exact rational `d`-th root, if one exists (positive when there is a
/// choice).
fn rational_root(r: &Rational, d: u32) -> Option<Rational> {
    if r.is_negative() && d.is_multiple_of(2) {
        return None;
    }
    let root = |n: &BigInt| {
        let k = n.abs().nth_root(d);
        (k.pow(d) == n.abs()).then_some(k)
    };
    let num = root(r.numer())?;
    let den = root(r.denom())?;
    let out = Rational::new(num, den);
    Some(if r.is_negative() { -out } else { out })
}

/// Rebuilds the linear representation `M = adj(A) / f^(d-2)` from a
/// candidate adjoint `A`, normalized so that `det(M) = f` exactly.
///
/// `det(adj(A) / f^(d-2)) = c^(d-1) * f` when `det(A) = c * f^(d-1)`. The
/// result is multiplied by the rational `d`-th root of `c^-(d-1)` when one
/// exists; otherwise its first row is scaled by `c^-(d-1)`, which is a
/// constant global equivalence with the same effect on the determinant.
pub fn recover_from_adjoint(a: &PolyMatrix, f: &Polynomial) -> Result<LinearMatrix> {
    let d = a.size();
    if d == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    if f.is_zero() || !f.is_homogeneous() {
        return Err(Error::NotHomogeneous(f.to_string()));
    }
    if f.degree() != Some(d as u32) {
        return Err(Error::DegreeMismatch(format!(
            "{f} has degree {}, expected {d}",
            f.degree().unwrap_or(0)
        )));
    }
    for ((i, j), e) in a.entries() {
        if !e.is_zero() && !(e.is_homogeneous() && e.degree() == Some(d as u32 - 1)) {
            return Err(Error::DegreeMismatch(format!(
                "entry ({}, {}) = {e} is not a form of degree {}",
                i + 1,
                j + 1,
                d - 1
            )));
        }
    }
    let nv = a.nvars().max(f.nvars());
    if d == 1 {
        if a.get(0, 0).is_zero() {
            return Err(Error::DeterminantMismatch("adjoint is zero".into()));
        }
        return LinearMatrix::new(PolyMatrix::from_fn(1, nv, |_, _| f.clone()));
    }
    let det_a = determinant(a);
    let power = f.pow(d as u32 - 1);
    let c = det_a.proportionality(&power).ok_or_else(|| {
        Error::DeterminantMismatch(format!("det(A) = {det_a} is not a multiple of ({f})^{}", d - 1))
    })?;
    let divisor = f.pow(d as u32 - 2);
    let m0 = adjugate(a).try_map(|e| e.exact_divide(&divisor))?;
    let target = c.pow(d as i32 - 1).recip();
    let m = match rational_root(&target, d as u32) {
        Some(lambda) => m0.scale(&lambda),
        None => {
            let mut m = m0;
            for j in 0..d {
                let v = m.get(0, j).scale(&target);
                m.set(0, j, v);
            }
            m
        }
    };
    ensure!(determinant(&m) == *f, "recovered matrix has the wrong determinant");
    LinearMatrix::new(m)
}
