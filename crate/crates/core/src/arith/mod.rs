//! Exact rational and sparse multivariate polynomial arithmetic.

mod local;
mod monomial;
mod point;
mod polynomial;

pub use local::LocalRational;
pub use monomial::Monomial;
pub use point::ProjectivePoint;
pub use polynomial::Polynomial;

use num_bigint::BigInt;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_polynomial;
    use num_traits::One;
    use proptest::prelude::*;

    #[test]
    fn rational_canonical() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(&r * &r.recip(), Rational::one());
    }

    pub(crate) fn poly_strategy(nvars: usize, maxdeg: u32) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(
            (proptest::collection::vec(0..=maxdeg, nvars), -5i64..=5),
            0..5,
        )
        .prop_map(move |ts| {
            let mut out = Polynomial::zero(nvars);
            for (mut e, c) in ts {
                // cap total degree
                while e.iter().sum::<u32>() > maxdeg {
                    let i = e.iter().position(|&x| x > 0).unwrap();
                    e[i] -= 1;
                }
                out.add_term(Monomial::new(e), int(c));
            }
            out
        })
    }

    fn homogeneous_strategy(nvars: usize, deg: u32) -> impl Strategy<Value = Polynomial> {
        let monos = Monomial::all_of_degree(nvars, deg);
        let k = monos.len();
        proptest::collection::vec(-4i64..=4, k).prop_map(move |cs| {
            Polynomial::from_terms(nvars, monos.clone().into_iter().zip(cs.into_iter().map(int)))
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in poly_strategy(3, 3), b in poly_strategy(3, 3), c in poly_strategy(3, 3)) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn degree_is_additive(a in poly_strategy(3, 3), b in poly_strategy(3, 3)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!((&a * &b).degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
        }

        #[test]
        fn exact_division_inverts_multiplication(a in poly_strategy(3, 3), b in poly_strategy(3, 3)) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_divide(&b).unwrap(), a);
        }

        #[test]
        fn homogenize_roundtrip(f in (1u32..=4).prop_flat_map(|d| homogeneous_strategy(3, d)), i in 0usize..3) {
            prop_assume!(!f.is_zero());
            let back = f.dehomogenize(i).homogenize(i);
            let k = f.var_valuation(i);
            let stripped = f.exact_divide(&Polynomial::var(i, 3).pow(k)).unwrap();
            prop_assert_eq!(back, stripped);
        }

        #[test]
        fn multiplicity_is_additive(f in homogeneous_strategy(3, 2), g in homogeneous_strategy(3, 1), pt in proptest::collection::vec(-2i64..=2, 3)) {
            prop_assume!(!f.is_zero() && !g.is_zero() && pt.iter().any(|&c| c != 0));
            let pt = ProjectivePoint::new(pt.into_iter().map(int).collect()).unwrap();
            let fg = &f * &g;
            prop_assert_eq!(
                fg.multiplicity_at(&pt).unwrap(),
                f.multiplicity_at(&pt).unwrap() + g.multiplicity_at(&pt).unwrap()
            );
        }
    }

    #[test]
    fn parse_helper_works() {
        assert_eq!(parse_polynomial("x0").unwrap(), Polynomial::var(0, 1));
    }
}
