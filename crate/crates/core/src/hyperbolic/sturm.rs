//! Dense univariate polynomials over the rationals and Sturm sequences.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{Polynomial, Rational};
use crate::error::{Error, Result};

/// Dense univariate polynomial in `t`; `coeffs[k]` multiplies `t^k`, with
/// no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `a + b*t`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![a, b])
    }

    /// `c * prod (t - r)^m`.
    pub fn from_roots(c: Rational, roots: &[(Rational, u32)]) -> Self {
        let mut out = Self::constant(c);
        for (r, m) in roots {
            let factor = Self::linear(-r.clone(), Rational::one());
            for _ in 0..*m {
                out = out.mul(&factor);
            }
        }
        out
    }

    /// Reads a polynomial in the single variable `x_var`.
    pub fn from_polynomial(p: &Polynomial, var: usize) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (m, c) in p.terms() {
            let e = m.exponent(var);
            if m.degree() != e {
                return Err(Error::DimensionMismatch(format!(
                    "{p} is not a polynomial in x{var} alone"
                )));
            }
            let e = e as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, Rational::zero());
            }
            coeffs[e] = c.clone();
        }
        Ok(Self::new(coeffs))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        UniPoly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&z) + other.coeffs.get(k).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        (0..e).fold(UniPoly::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.leading_coeff().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let q = &rem[k] / &lc;
            if !q.is_zero() {
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    rem[k - dd + j] -= &q * c;
                }
            }
            quot[k - dd] = q;
            rem.pop();
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        match a.leading_coeff() {
            Some(lc) => a.scale(&lc.recip()),
            None => a,
        }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    /// Sign as `t -> +inf` (`negative = false`) or `t -> -inf`.
    fn sign_at_infinity(&self, negative: bool) -> Ordering {
        let Some(lc) = self.leading_coeff() else {
            return Ordering::Equal;
        };
        let s = lc.cmp(&Rational::zero());
        if negative && self.degree().unwrap() % 2 == 1 {
            s.reverse()
        } else {
            s
        }
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        f.write_str("t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// `p0 = p`, `p1 = p'`, `p_{i+1} = -rem(p_{i-1}, p_i)` until the remainder
/// vanishes. The last element is `gcd(p, p')` up to a constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmChain {
    pub chain: Vec<UniPoly>,
}

impl SturmChain {
    pub fn new(p: &UniPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut chain = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(d);
            loop {
                let n = chain.len();
                let r = chain[n - 2].div_rem(&chain[n - 1]).1;
                if r.is_zero() {
                    break;
                }
                chain.push(r.neg());
            }
        }
        Ok(SturmChain { chain })
    }

    fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
        let nonzero: Vec<Ordering> = signs.filter(|s| *s != Ordering::Equal).collect();
        nonzero.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots.
    pub fn count_real(&self) -> usize {
        let at = |neg: bool| Self::variations(self.chain.iter().map(|p| p.sign_at_infinity(neg)));
        at(true) - at(false)
    }

    /// Number of distinct roots in `(a, b]`, for `a < b`.
    pub fn count_between(&self, a: &Rational, b: &Rational) -> usize {
        let at = |x: &Rational| Self::variations(self.chain.iter().map(|p| p.eval(x).cmp(&Rational::zero())));
        at(a) - at(b)
    }
}

/// Distinct real roots and whether every complex root is real.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootCount {
    pub distinct: usize,
    pub all_real: bool,
}

/// Counts real roots with a Sturm chain; all roots are real iff the
/// squarefree part `p / gcd(p, p')` has as many real roots as its degree.
pub fn count_real_roots(p: &UniPoly) -> Result<RootCount> {
    let chain = SturmChain::new(p)?;
    let distinct = chain.count_real();
    let g = p.gcd(&p.derivative());
    let squarefree = if g.is_zero() {
        p.clone()
    } else {
        p.div_rem(&g).0
    };
    let all_real = distinct == squarefree.degree().unwrap_or(0);
    Ok(RootCount { distinct, all_real })
}
