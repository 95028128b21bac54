use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{Polynomial, ProjectivePoint, Rational};
use crate::error::{Error, Result};

/// A fraction of polynomials whose denominator does not vanish at a fixed
/// center: an element of the local ring at that point.
///
/// Fractions are never reduced by a multivariate gcd. Constant denominators
/// are folded into the numerator, and a denominator that divides the
/// numerator exactly is cancelled.
#[derive(Clone, Debug)]
pub struct LocalRational {
    num: Polynomial,
    den: Polynomial,
    center: Arc<ProjectivePoint>,
}

impl LocalRational {
    pub fn new(num: Polynomial, den: Polynomial, center: Arc<ProjectivePoint>) -> Result<Self> {
        if den.eval(center.coords()).is_zero() {
            return Err(Error::DimensionMismatch(format!(
                "denominator {den} vanishes at the center {center}"
            )));
        }
        Ok(Self::normalized(num, den, center))
    }

    pub fn from_poly(num: Polynomial, center: Arc<ProjectivePoint>) -> Self {
        let n = num.nvars();
        LocalRational {
            num,
            den: Polynomial::one(n),
            center,
        }
    }

    pub fn zero(nvars: usize, center: Arc<ProjectivePoint>) -> Self {
        Self::from_poly(Polynomial::zero(nvars), center)
    }

    pub fn one(nvars: usize, center: Arc<ProjectivePoint>) -> Self {
        Self::from_poly(Polynomial::one(nvars), center)
    }

    fn normalized(num: Polynomial, den: Polynomial, center: Arc<ProjectivePoint>) -> Self {
        if num.is_zero() {
            let n = num.nvars().max(den.nvars());
            return Self::zero(n, center);
        }
        if let Some(c) = den.as_constant() {
            let n = den.nvars();
            return LocalRational {
                num: num.scale(&c.recip()),
                den: Polynomial::one(n),
                center,
            };
        }
        if let Ok(q) = num.exact_divide(&den) {
            let n = den.nvars();
            return LocalRational {
                num: q,
                den: Polynomial::one(n),
                center,
            };
        }
        // monic denominator in graded-lex order
        let lc = den.leading_term().map(|(_, c)| c.clone()).unwrap();
        let inv = lc.recip();
        LocalRational {
            num: num.scale(&inv),
            den: den.scale(&inv),
            center,
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn center(&self) -> &Arc<ProjectivePoint> {
        &self.center
    }

    pub fn value_at_center(&self) -> Rational {
        self.num.eval(self.center.coords()) / self.den.eval(self.center.coords())
    }

    pub fn is_unit(&self) -> bool {
        !self.num.eval(self.center.coords()).is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Equality by cross multiplication.
    pub fn equals(&self, other: &LocalRational) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn add(&self, other: &LocalRational) -> LocalRational {
        self.check_center(other);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::normalized(&self.num + &other.num, self.den.clone(), self.center.clone());
        }
        Self::normalized(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
            self.center.clone(),
        )
    }

    pub fn neg(&self) -> LocalRational {
        LocalRational {
            num: -&self.num,
            den: self.den.clone(),
            center: self.center.clone(),
        }
    }

    pub fn sub(&self, other: &LocalRational) -> LocalRational {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LocalRational) -> LocalRational {
        self.check_center(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.num.nvars(), self.center.clone());
        }
        // cancel a denominator against the opposite numerator when it divides
        if !other.den.is_constant() {
            if let Ok(q) = self.num.exact_divide(&other.den) {
                return Self::normalized(&q * &other.num, self.den.clone(), self.center.clone());
            }
        }
        if !self.den.is_constant() {
            if let Ok(q) = other.num.exact_divide(&self.den) {
                return Self::normalized(&self.num * &q, other.den.clone(), self.center.clone());
            }
        }
        Self::normalized(
            &self.num * &other.num,
            &self.den * &other.den,
            self.center.clone(),
        )
    }

    pub fn scale(&self, c: &Rational) -> LocalRational {
        Self::normalized(self.num.scale(c), self.den.clone(), self.center.clone())
    }

    /// Multiplicative inverse; only defined for units at the center.
    pub fn inverse(&self) -> Option<LocalRational> {
        self.is_unit()
            .then(|| Self::normalized(self.den.clone(), self.num.clone(), self.center.clone()))
    }

    fn check_center(&self, other: &LocalRational) {
        debug_assert!(
            Arc::ptr_eq(&self.center, &other.center) || self.center == other.center,
            "local rationals with different centers"
        );
    }
}

impl fmt::Display for LocalRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant() == Some(Rational::one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
