use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::{Monomial, Rational};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial with rational coefficients.
///
/// `nvars` is the ambient number of variables. Binary operations promote to
/// the larger ambient count, and equality compares terms only.
#[derive(Clone, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(Rational::one(), nvars)
    }

    pub fn constant(c: Rational, nvars: usize) -> Self {
        Self::term(c, Monomial::one(), nvars)
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        Self::term(Rational::one(), Monomial::var(i), nvars)
    }

    pub fn term(c: Rational, m: Monomial, nvars: usize) -> Self {
        let nvars = nvars.max(m.support_len());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(nvars: usize, it: I) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Same polynomial, viewed in a ring with at least `nvars` variables.
    pub fn with_nvars(mut self, nvars: usize) -> Self {
        self.nvars = self.nvars.max(nvars);
        self
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        self.nvars = self.nvars.max(m.support_len());
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value if the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.constant_term())
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Lowest total degree of a term; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// True when every term has the same total degree. The zero polynomial
    /// counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Terms of exactly the given total degree.
    pub fn homogeneous_part(&self, deg: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            nvars: self.nvars.max(m.support_len()),
            terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = point.get(i).cloned().unwrap_or_else(Rational::zero);
                v *= num_traits::pow(x, e as usize);
            }
            total += v;
        }
        total
    }

    /// Exact quotient `self / q`.
    ///
    /// Uses leading-term division in graded-lex order: if `q` divides `self`
    /// then the leading term of every intermediate remainder is divisible by
    /// the leading term of `q`, so the first failure certifies non-divisibility.
    pub fn exact_divide(&self, q: &Polynomial) -> Result<Polynomial> {
        let (lm, lc) = q.leading_term().ok_or(Error::DivisionByZero)?;
        let nvars = self.nvars.max(q.nvars);
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(nvars);
        while let Some((rm, rc)) = rem.leading_term() {
            let Some(m) = lm.div(rm) else {
                return Err(Error::NotDivisible(format!("{self} by {q}")));
            };
            let c = rc / lc;
            let step = Polynomial::term(c.clone(), m.clone(), nvars);
            rem -= &(q * &step);
            quot.add_term(m, c);
        }
        Ok(quot)
    }

    pub fn divides(&self, p: &Polynomial) -> bool {
        p.exact_divide(self).is_ok()
    }

    /// If `self = c * other` for a nonzero rational `c`, returns `c`.
    pub fn proportionality(&self, other: &Polynomial) -> Option<Rational> {
        let (om, oc) = other.leading_term()?;
        let (sm, sc) = self.leading_term()?;
        if om != sm || self.terms.len() != other.terms.len() {
            return None;
        }
        let c = sc / oc;
        (*self == other.scale(&c)).then_some(c)
    }

    /// Sets `x_var = 1`.
    pub fn dehomogenize(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.without(var), c.clone());
        }
        out
    }

    /// Multiplies each term by the power of `x_var` that brings it up to the
    /// total degree of the polynomial.
    pub fn homogenize(&self, var: usize) -> Polynomial {
        let Some(deg) = self.degree() else {
            return self.clone();
        };
        let mut out = Polynomial::zero(self.nvars.max(var + 1));
        for (m, c) in &self.terms {
            let e = m.exponent(var) + deg - m.degree();
            out.add_term(m.with_exponent(var, e), c.clone());
        }
        out
    }

    /// Largest `k` such that `x_var^k` divides the polynomial.
    pub fn var_valuation(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(var))
            .min()
            .unwrap_or(0)
    }

    /// `p(x + shift)`.
    pub fn translate(&self, shift: &[Rational]) -> Polynomial {
        let n = self.nvars.max(shift.len());
        // powers[i][k] = (x_i + shift_i)^k
        let maxexp: Vec<u32> = (0..n)
            .map(|i| self.terms.keys().map(|m| m.exponent(i)).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<Polynomial>> = (0..n)
            .map(|i| {
                let a = shift.get(i).cloned().unwrap_or_else(Rational::zero);
                let lin = &Polynomial::var(i, n) + &Polynomial::constant(a, n);
                let mut v = vec![Polynomial::one(n)];
                for k in 1..=maxexp[i] {
                    let next = &v[k as usize - 1] * &lin;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Polynomial::zero(n);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(c.clone(), n);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            out += &t;
        }
        out
    }

    /// Multiplicity of the hypersurface `{self = 0}` at a point: the lowest
    /// degree of the Taylor expansion there.
    ///
    /// For a homogeneous polynomial the point is read projectively: the
    /// polynomial is dehomogenized in the chart of the first nonzero
    /// coordinate and translated to the origin. For a non-homogeneous
    /// polynomial the canonical coordinates are used as an affine point.
    pub fn multiplicity_at(&self, pt: &super::ProjectivePoint) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let coords = pt.coords();
        let local = if self.is_homogeneous() {
            let chart = pt.chart();
            let mut shift = coords.to_vec();
            shift[chart] = Rational::zero();
            self.dehomogenize(chart).translate(&shift)
        } else {
            self.translate(coords)
        };
        Ok(local.min_degree().expect("translation of a nonzero polynomial"))
    }

    /// Largest absolute value among the coefficients.
    pub fn height(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                $inner(self, rhs)
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                $inner(&self, &rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                $inner(&self, rhs)
            }
        }
    };
}

fn add_impl(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut out = a.clone();
    out += b;
    out
}

fn sub_impl(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut out = a.clone();
    out -= b;
    out
}

fn mul_impl(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero(a.nvars.max(b.nvars));
    if a.is_zero() || b.is_zero() {
        return out;
    }
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            out.add_term(ma.mul(mb), ca * cb);
        }
    }
    out
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        self.nvars = self.nvars.max(rhs.nvars);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        self.nvars = self.nvars.max(rhs.nvars);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
