//! Exact linear algebra over the polynomial ring.

mod det;
mod poly_matrix;
mod qmatrix;

pub use det::{determinant, MinorCache};
pub use poly_matrix::{HypersurfaceSpec, LinearMatrix, PolyMatrix};
pub use qmatrix::QMatrix;

pub(crate) use det::full_mask;
#[cfg(test)]
use det::{bareiss, condense_constant_pivots};

use crate::arith::{Polynomial, ProjectivePoint};
use crate::error::{Error, Result};

/// Transposed cofactor matrix, so that `M * adj(M) = det(M) * I`.
///
/// All `(d-1)`-minors come from one shared minor cache.
pub fn adjugate(m: &PolyMatrix) -> PolyMatrix {
    let d = m.size();
    let n = m.nvars();
    if d <= 1 {
        return PolyMatrix::identity(d, n);
    }
    let mut cache = MinorCache::new(m);
    let all = full_mask(d);
    let mut out = PolyMatrix::zeros(d, n);
    for i in 0..d {
        for j in 0..d {
            let minor = cache.minor(all & !(1 << j), all & !(1 << i));
            out.set(i, j, if (i + j) % 2 == 0 { minor } else { -minor });
        }
    }
    out
}

/// `d` minus the rank of `M` evaluated at the canonical representative.
pub fn corank_at(m: &PolyMatrix, pt: &ProjectivePoint) -> usize {
    m.size() - m.eval(pt.coords()).rank()
}

/// Corank of `M` at the generic point of the component `{f = 0}`.
///
/// The generic rank on the component is the largest `r` such that some
/// `r x r` minor is not divisible by `f`. Minors are scanned largest-first,
/// stopping at the first non-divisible one.
pub fn generic_corank_mod(m: &PolyMatrix, f: &Polynomial) -> Result<usize> {
    let d = m.size();
    let det = determinant(m);
    if f.is_zero() || f.is_constant() || !f.divides(&det) {
        return Err(Error::NotAComponent(f.to_string()));
    }
    let mut cache = MinorCache::new(m);
    for r in (1..d).rev() {
        for rows in subsets(d, r) {
            for cols in subsets(d, r) {
                let minor = cache.minor_of(&rows, &cols);
                if !f.divides(&minor) {
                    return Ok(d - r);
                }
            }
        }
    }
    Ok(d)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, Monomial, Rational};
    use crate::parser::{parse_matrix, parse_polynomial};
    use proptest::prelude::*;

    fn m(s: &str) -> PolyMatrix {
        parse_matrix(s).unwrap()
    }
    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }
    fn pt(s: &str) -> ProjectivePoint {
        ProjectivePoint::parse(s).unwrap()
    }

    /// Naive Laplace expansion along the first row, no caching.
    fn cofactor_oracle(a: &PolyMatrix) -> Polynomial {
        let d = a.size();
        if d == 0 {
            return Polynomial::one(a.nvars());
        }
        if d == 1 {
            return a.get(0, 0).clone();
        }
        let mut acc = Polynomial::zero(a.nvars());
        for c in 0..d {
            let rows: Vec<usize> = (1..d).collect();
            let cols: Vec<usize> = (0..d).filter(|&j| j != c).collect();
            let t = a.get(0, c) * &cofactor_oracle(&a.submatrix(&rows, &cols));
            if c % 2 == 0 {
                acc += &t;
            } else {
                acc -= &t;
            }
        }
        acc
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&m("[[x0, x1], [x1, x2]]")), p("x0*x2 - x1^2"));
        assert_eq!(
            determinant(&m("[[x0, 0, 0], [0, x1, 0], [0, 0, x2]]")),
            p("x0*x1*x2")
        );
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(
            adjugate(&m("[[x0, x1], [x1, x2]]")),
            m("[[x2, -x1], [-x1, x0]]")
        );
        assert_eq!(adjugate(&m("[[x0, 0], [0, x1]]")), m("[[x1, 0], [0, x0]]"));
        assert_eq!(adjugate(&m("[[x0]]")), m("[[1]]"));
    }

    #[test]
    fn corank_examples() {
        assert_eq!(corank_at(&m("[[x0, 0], [0, x1]]"), &pt("0,0,1")), 2);
        assert_eq!(corank_at(&m("[[x0, x1], [x1, x2]]"), &pt("1,0,0")), 1);
        assert_eq!(corank_at(&m("[[x0, x1], [x1, x2]]"), &pt("1,0,1")), 0);
    }

    #[test]
    fn generic_corank_examples() {
        assert_eq!(generic_corank_mod(&m("[[x0, 0], [0, x0]]"), &p("x0")).unwrap(), 2);
        assert_eq!(generic_corank_mod(&m("[[x0, x1], [0, x0]]"), &p("x0")).unwrap(), 1);
        assert_eq!(
            generic_corank_mod(&m("[[x0, x1], [x1, x2]]"), &p("x0*x2 - x1^2")).unwrap(),
            1
        );
        assert!(matches!(
            generic_corank_mod(&m("[[x0, x1], [x1, x2]]"), &p("x0")),
            Err(Error::NotAComponent(_))
        ));
    }

    #[test]
    fn generic_corank_minor_enumeration_oracle() {
        // [[x0, x1], [0, x0]] mod x0: 1x1 minors are x0, x1, 0, x0; x1 survives
        let a = m("[[x0, x1], [0, x0]]");
        let f = p("x0");
        let survivors: Vec<_> = a.entries().filter(|(_, e)| !f.divides(e)).collect();
        assert_eq!(survivors.len(), 1);
        assert_eq!(survivors[0].0, (0, 1));
    }

    #[test]
    fn generic_corank_agrees_with_smooth_point() {
        // conic through (1:0:0), smooth there
        let a = m("[[x0, x1], [x1, x2]]");
        let f = p("x0*x2 - x1^2");
        assert_eq!(f.multiplicity_at(&pt("1,0,0")).unwrap(), 1);
        assert_eq!(generic_corank_mod(&a, &f).unwrap(), corank_at(&a, &pt("1,0,0")));
        // x0 = 0 is a double component of diag(x0, x0, x1); (0:1:1) is a smooth point of it
        let b = m("[[x0, 0, 0], [0, x0, 0], [0, 0, x1]]");
        assert_eq!(generic_corank_mod(&b, &p("x0")).unwrap(), 2);
        assert_eq!(corank_at(&b, &pt("0,1,1")), 2);
        assert_eq!(generic_corank_mod(&b, &p("x1")).unwrap(), 1);
        assert_eq!(corank_at(&b, &pt("1,0,1")), 1);
    }

    #[test]
    fn large_determinant_paths_agree() {
        // 10x10 bidiagonal-plus-corner matrix with constants and linear forms
        let n = 3;
        let a = PolyMatrix::from_fn(10, n, |i, j| {
            if i == j {
                if i % 3 == 0 {
                    Polynomial::one(n)
                } else {
                    Polynomial::var(i % 3, n)
                }
            } else if j == i + 1 {
                Polynomial::var(0, n)
            } else if i == 9 && j == 0 {
                Polynomial::var(2, n)
            } else {
                Polynomial::zero(n)
            }
        });
        let expected = MinorCache::new(&a).minor(full_mask(10), full_mask(10));
        assert_eq!(determinant(&a), expected);
        assert_eq!(bareiss(&a), expected);
        let (c, rest) = condense_constant_pivots(&a);
        assert_eq!(determinant(&rest).scale(&c), expected);
    }

    #[test]
    fn combinations_count() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }

    pub(crate) fn random_matrix(d: usize, nvars: usize, maxdeg: u32) -> impl Strategy<Value = PolyMatrix> {
        proptest::collection::vec(
            proptest::collection::vec((proptest::collection::vec(0..=maxdeg, nvars), -5i64..=5), 0..3),
            d * d,
        )
        .prop_map(move |entries| {
            let polys: Vec<Polynomial> = entries
                .into_iter()
                .map(|ts| {
                    let mut e = Polynomial::zero(nvars);
                    for (mut ex, c) in ts {
                        while ex.iter().sum::<u32>() > maxdeg {
                            let i = ex.iter().position(|&x| x > 0).unwrap();
                            ex[i] -= 1;
                        }
                        e.add_term(Monomial::new(ex), int(c));
                    }
                    e
                })
                .collect();
            PolyMatrix::from_fn(d, nvars, |i, j| polys[i * d + j].clone())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn determinant_matches_oracle(a in random_matrix(4, 3, 2)) {
            prop_assert_eq!(determinant(&a), cofactor_oracle(&a));
        }

        #[test]
        fn adjugate_identities(a in (2usize..=3).prop_flat_map(|d| random_matrix(d, 3, 1))) {
            let d = a.size();
            let det = determinant(&a);
            let adj = adjugate(&a);
            let scalar = PolyMatrix::identity(d, 3).scale_poly(&det);
            prop_assert_eq!(a.mul(&adj), scalar.clone());
            prop_assert_eq!(adj.mul(&a), scalar);
            prop_assert_eq!(adjugate(&adj), a.scale_poly(&det.pow(d as u32 - 2)));
            prop_assert_eq!(determinant(&adj), det.pow(d as u32 - 1));
        }

        #[test]
        fn determinant_is_multiplicative(a in random_matrix(2, 3, 1), b in random_matrix(2, 3, 1)) {
            prop_assert_eq!(determinant(&a.mul(&b)), &determinant(&a) * &determinant(&b));
        }

        #[test]
        fn constant_det_agrees(vals in proptest::collection::vec(-4i64..=4, 9)) {
            let q = QMatrix::from_fn(3, 3, |i, j| int(vals[i * 3 + j]));
            let pm = PolyMatrix::from_constant(&q, 1);
            let det: Rational = determinant(&pm).constant_term();
            prop_assert_eq!(det, q.det());
        }
    }
}
