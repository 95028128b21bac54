//! Real symmetric representations: positive definiteness at a point,
//! coordinates in which every coefficient matrix is positive definite, and
//! sampled hyperbolicity checks that are exact on each sampled line.

mod sturm;

pub use sturm::{count_real_roots, RootCount, SturmChain, UniPoly};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{rat, Polynomial, ProjectivePoint, Rational};
use crate::error::{ensure, Error, Result};
use crate::matrix::{determinant, LinearMatrix, QMatrix};

/// Default number of radius halvings in [`pd_coordinates`].
pub const DEFAULT_MAX_HALVINGS: u32 = 64;

/// Numerators of sampled directions lie in `[-H, H]`, denominators in
/// `[1, H]`.
pub const DIRECTION_HEIGHT: i64 = 16;

/// Cap on consecutive rejected directions within one trial.
const MAX_RESAMPLES: usize = 10_000;

fn check_symmetric(m: &LinearMatrix) -> Result<()> {
    if m.is_symmetric() {
        Ok(())
    } else {
        Err(Error::NotSymmetric)
    }
}

/// Positive definiteness of `M` at the given coordinates, taken literally.
pub fn is_pd_at_representative(m: &LinearMatrix, coords: &[Rational]) -> Result<bool> {
    check_symmetric(m)?;
    m.check_point(coords.len())?;
    Ok(m.eval(coords).is_positive_definite())
}

/// Positive definiteness of `M` at the canonical representative of `e`
/// (first nonzero coordinate 1), by Sylvester's criterion.
pub fn is_pd_at(m: &LinearMatrix, e: &ProjectivePoint) -> Result<bool> {
    is_pd_at_representative(m, e.coords())
}

/// Verdicts at both representatives `e` and `-e` of a projective point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdVerdict {
    pub canonical: bool,
    pub antipodal: bool,
    pub leading_minors: Vec<Rational>,
}

pub fn pd_verdict(m: &LinearMatrix, e: &ProjectivePoint) -> Result<PdVerdict> {
    check_symmetric(m)?;
    m.check_point(e.len())?;
    let at = m.eval(e.coords());
    let neg = at.scale(&-Rational::one());
    Ok(PdVerdict {
        canonical: at.is_positive_definite(),
        antipodal: neg.is_positive_definite(),
        leading_minors: at.leading_principal_minors(),
    })
}

/// A coordinate change `x = T y` after which every coefficient matrix of
/// the pencil is positive definite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdCoordinates {
    /// Columns are the points `p_j` at which the pencil is evaluated.
    pub t: QMatrix,
    /// `M(p_j)`, the coefficient of `y_j` after substitution.
    pub coefficient_matrices: Vec<QMatrix>,
    /// Perturbation radius that succeeded.
    pub radius: Rational,
}

impl PdCoordinates {
    /// The pencil `sum_j y_j M(p_j)`.
    pub fn transformed(&self) -> LinearMatrix {
        LinearMatrix::from_coefficients(&self.coefficient_matrices)
    }
}

/// Finds points `e` and `e + r*e_i` (for every coordinate `i` other than the
/// chart of `e`), halving `r` from 1 until the pencil is positive definite at
/// all of them. These points are linearly independent for any `r != 0`.
pub fn pd_coordinates(m: &LinearMatrix, e: &ProjectivePoint, max_halvings: u32) -> Result<PdCoordinates> {
    if !is_pd_at(m, e)? {
        return Err(Error::NotPDAtPoint);
    }
    let n = e.len();
    let chart = e.chart();
    let coeffs = m.coefficient_matrices(n);
    let at = |p: &[Rational]| {
        coeffs
            .iter()
            .zip(p)
            .fold(QMatrix::zeros(m.size(), m.size()), |acc, (c, x)| acc.add(&c.scale(x)))
    };
    let mut r = Rational::one();
    for _ in 0..=max_halvings {
        let mut points = Vec::with_capacity(n);
        points.push(e.coords().to_vec());
        for i in (0..n).filter(|&i| i != chart) {
            let mut p = e.coords().to_vec();
            p[i] += &r;
            points.push(p);
        }
        let mats: Vec<QMatrix> = points.iter().map(|p| at(p)).collect();
        if mats.iter().all(QMatrix::is_positive_definite) {
            let t = QMatrix::from_fn(n, n, |i, j| points[j][i].clone());
            ensure!(!t.det().is_zero(), "PD coordinate points are dependent");
            return Ok(PdCoordinates {
                t,
                coefficient_matrices: mats,
                radius: r,
            });
        }
        r /= Rational::from_integer(BigInt::from(2));
    }
    Err(Error::SearchExhausted(max_halvings))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HyperbolicityVerdict {
    HyperbolicOnSamples,
    Refuted,
}

impl HyperbolicityVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            HyperbolicityVerdict::HyperbolicOnSamples => "hyperbolic-on-samples",
            HyperbolicityVerdict::Refuted => "refuted",
        }
    }
}

/// One sampled line `t -> e + t*v` and the root count of `f` on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub direction: Vec<Rational>,
    pub restricted: UniPoly,
    pub roots: RootCount,
    /// Directions rejected before this one (degenerate lines).
    pub resamples: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolicityReport {
    pub point: ProjectivePoint,
    pub trials: usize,
    pub seed: u64,
    pub verdict: HyperbolicityVerdict,
    /// Index into `records` of the first line with a non-real root.
    pub witness: Option<usize>,
    pub records: Vec<TrialRecord>,
}

impl HyperbolicityReport {
    pub fn witness_record(&self) -> Option<&TrialRecord> {
        self.witness.map(|k| &self.records[k])
    }

    pub fn resampled(&self) -> usize {
        self.records.iter().map(|r| r.resamples).sum()
    }
}

/// `f(e + t*v)` as a polynomial in `t`.
pub fn restrict_to_line(f: &Polynomial, e: &[Rational], v: &[Rational]) -> UniPoly {
    let z = Rational::zero();
    let mut out = UniPoly::zero();
    for (m, c) in f.terms() {
        let mut term = UniPoly::constant(c.clone());
        for (i, &k) in m.exponents().iter().enumerate() {
            if k > 0 {
                let lin = UniPoly::linear(
                    e.get(i).unwrap_or(&z).clone(),
                    v.get(i).unwrap_or(&z).clone(),
                );
                term = term.mul(&lin.pow(k));
            }
        }
        out = out.add(&term);
    }
    out
}

fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            let a = rng.gen_range(-DIRECTION_HEIGHT..=DIRECTION_HEIGHT);
            let b = rng.gen_range(1..=DIRECTION_HEIGHT);
            rat(a, b)
        })
        .collect()
}

fn parallel_to(v: &[Rational], e: &[Rational]) -> bool {
    // v = lambda * e with e canonical: compare v against v[chart] * e
    let chart = e.iter().position(|x| !x.is_zero()).unwrap_or(0);
    let lambda = &v[chart];
    v.iter().zip(e).all(|(a, b)| *a == lambda * b)
}

fn run_trial(f: &Polynomial, e: &[Rational], seed: u64, index: usize) -> Result<TrialRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let n = e.len();
    for resamples in 0..MAX_RESAMPLES {
        let v = random_direction(&mut rng, n);
        // the leading coefficient of f(e + t v) is f(v)
        if f.eval(&v).is_zero() || parallel_to(&v, e) {
            continue;
        }
        let restricted = restrict_to_line(f, e, &v);
        let roots = count_real_roots(&restricted)?;
        return Ok(TrialRecord {
            direction: v,
            restricted,
            roots,
            resamples,
        });
    }
    Err(Error::InternalAssertion(format!(
        "no admissible direction after {MAX_RESAMPLES} samples"
    )))
}

/// Samples `trials` lines through `e` and checks, exactly on each, that all
/// roots of the restriction of `f` are real.
///
/// Trial `k` draws from the ChaCha8 stream `k` of `seed`, so the report does
/// not depend on how trials are scheduled across threads.
pub fn is_hyperbolic_at(
    f: &Polynomial,
    e: &ProjectivePoint,
    trials: usize,
    seed: u64,
) -> Result<HyperbolicityReport> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous(f.to_string()));
    }
    let used = f.terms().map(|(m, _)| m.support_len()).max().unwrap_or(0);
    if e.len() < used {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, polynomial uses {used} variables",
            e.len()
        )));
    }
    if f.eval(e.coords()).is_zero() {
        return Err(Error::PointOnHypersurface);
    }
    let records = (0..trials)
        .into_par_iter()
        .map(|k| run_trial(f, e.coords(), seed, k))
        .collect::<Result<Vec<_>>>()?;
    let witness = records.iter().position(|r| !r.roots.all_real);
    Ok(HyperbolicityReport {
        point: e.clone(),
        trials,
        seed,
        verdict: if witness.is_some() {
            HyperbolicityVerdict::Refuted
        } else {
            HyperbolicityVerdict::HyperbolicOnSamples
        },
        witness,
        records,
    })
}

/// Samples hyperbolicity of `det(M)` at a point where `M` is positive
/// definite. A refutation contradicts the theory and is reported as an
/// internal failure carrying the report.
pub fn pd_rep_hyperbolicity_check(
    m: &LinearMatrix,
    e: &ProjectivePoint,
    trials: usize,
    seed: u64,
) -> Result<HyperbolicityReport> {
    if !is_pd_at(m, e)? {
        return Err(Error::NotPDAtPoint);
    }
    let report = is_hyperbolic_at(&determinant(m), e, trials, seed)?;
    if report.verdict == HyperbolicityVerdict::Refuted {
        return Err(Error::PdHyperbolicityRefuted(Box::new(report)));
    }
    Ok(report)
}
