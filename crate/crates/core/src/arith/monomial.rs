use std::cmp::Ordering;

/// Exponent vector of a monomial in `x0, x1, ...`.
///
/// Trailing zero exponents are never stored, so `x0*x1` has the same
/// representation regardless of how many variables the surrounding ring has.
/// Ordering is graded lexicographic with `x0 > x1 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial { exps }
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u32) -> Self {
        let mut exps = vec![0; i + 1];
        exps[i] = e;
        Self::new(exps)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps.get(i).copied().unwrap_or(0)
    }

    /// Exponents up to the highest variable that occurs.
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// One past the index of the highest variable present.
    pub fn support_len(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        let exps = (0..n)
            .map(|i| self.exponent(i) + other.exponent(i))
            .collect();
        Monomial { exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.len() <= other.exps.len()
            && self
                .exps
                .iter()
                .zip(&other.exps)
                .all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps = (0..other.exps.len())
            .map(|i| other.exponent(i) - self.exponent(i))
            .collect();
        Some(Monomial::new(exps))
    }

    /// Drops variable `i` entirely (sets its exponent to zero).
    pub fn without(&self, i: usize) -> Monomial {
        let mut exps = self.exps.clone();
        if i < exps.len() {
            exps[i] = 0;
        }
        Monomial::new(exps)
    }

    pub fn with_exponent(&self, i: usize, e: u32) -> Monomial {
        let mut exps = self.exps.clone();
        if exps.len() <= i {
            exps.resize(i + 1, 0);
        }
        exps[i] = e;
        Monomial::new(exps)
    }

    /// Index of the lowest variable with positive exponent.
    pub fn first_var(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e > 0)
    }

    /// All monomials of total degree `deg` in `nvars` variables, in
    /// decreasing graded-lex order.
    pub fn all_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == nvars {
                cur[i] = left;
                out.push(Monomial::new(cur.clone()));
                cur[i] = 0;
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(nvars, i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if nvars == 0 {
            return if deg == 0 { vec![Monomial::one()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        rec(nvars, 0, deg, &mut vec![0; nvars], &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.exps.len().max(other.exps.len());
            for i in 0..n {
                match self.exponent(i).cmp(&other.exponent(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
