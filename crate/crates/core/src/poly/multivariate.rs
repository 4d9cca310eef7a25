use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, ExactScalar, Scalar};
use crate::Rational;

pub type Exponents = Vec<u32>;

/// Sparse multivariate polynomial. Monomials are keyed by exponent vectors
/// and ordered lexicographically with `x₁` most significant; the last key
/// is the lex-leading monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<T> {
    nvars: usize,
    terms: BTreeMap<Exponents, T>,
}

impl<T: Scalar> MPoly<T> {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: T) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        p.add_term(exps, c);
        p
    }

    /// The variable `x_{i+1}` (0-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, T::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, T)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> T {
        self.terms.get(exps).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Exponents, c: T) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn leading_term(&self) -> Option<(&Exponents, &T)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Every exponent of every variable is even.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|x| x % 2 == 0))
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, T::one());
        let mut base = self.clone();
        let mut e = k;
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

    pub fn eval(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.nvars);
        self.terms.iter().fold(T::zero(), |acc, (e, c)| {
            let m = e
                .iter()
                .zip(point)
                .filter(|(k, _)| **k > 0)
                .fold(c.clone(), |m, (k, x)| m * x.pow_u32(*k));
            acc + m
        })
    }

    /// Substitutes constants for a subset of variables; `None` keeps the
    /// variable.
    pub fn partial_eval(&self, values: &[Option<T>]) -> Self {
        assert_eq!(values.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let mut c2 = c.clone();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    c2 = c2 * v.pow_u32(e[i]);
                    e2[i] = 0;
                }
            }
            out.add_term(e2, c2);
        }
        out
    }

    /// Embeds into a ring with more variables; variable `i` goes to slot
    /// `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        Self::from_terms(
            nvars,
            self.terms.iter().map(|(e, c)| {
                let mut e2 = vec![0; nvars];
                for (i, k) in e.iter().enumerate() {
                    e2[map[i]] += k;
                }
                (e2, c.clone())
            }),
        )
    }
}

impl<T: ExactScalar> MPoly<T> {
    /// Exact division, lex order. Fails if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        assert_eq!(self.nvars, divisor.nvars);
        let (dexp, dc) = divisor
            .leading_term()
            .map(|(e, c)| (e.clone(), c.clone()))
            .ok_or(Error::InexactDivision)?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((e, c)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&dexp).any(|(a, b)| a < b) {
                return Err(Error::InexactDivision);
            }
            let qe: Exponents = e.iter().zip(&dexp).map(|(a, b)| a - b).collect();
            let qc = c / dc.clone();
            let t = Self::monomial(self.nvars, qe.clone(), qc.clone());
            rem = rem - &t * divisor;
            quot.add_term(qe, qc);
        }
        Ok(quot)
    }
}

impl<T: Scalar> Add<&MPoly<T>> for &MPoly<T> {
    type Output = MPoly<T>;
    fn add(self, rhs: &MPoly<T>) -> MPoly<T> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<T: Scalar> Add for MPoly<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for MPoly<T> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, -c);
        }
        self
    }
}

impl<T: Scalar> Neg for MPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<T: Scalar> Mul for &MPoly<T> {
    type Output = MPoly<T>;
    fn mul(self, rhs: Self) -> MPoly<T> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Scalar> Mul for MPoly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl fmt::Display for MPoly<Rational> {
    /// One monomial per line in the same style as the form text format,
    /// e.g. `-1/10 * a1^12 * a2^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return writeln!(f, "0");
        }
        for (e, c) in self.terms.iter().rev() {
            write!(f, "{}", format_rational(c))?;
            for (i, k) in e.iter().enumerate() {
                if *k > 0 {
                    write!(f, " * a{}^{}", i + 1, k)?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    type Q = MPoly<Rational>;

    #[test]
    fn exact_division_by_linear_factor() {
        let x = Q::var(2, 0);
        let y = Q::var(2, 1);
        // (x^3 - y^3) / (x - y) = x^2 + xy + y^2
        let num = x.pow(3) - y.pow(3);
        let q = num.div_exact(&(x.clone() - y.clone())).unwrap();
        assert_eq!(q, x.pow(2) + &x * &y + y.pow(2));
        assert!((x.pow(2) + y.pow(2)).div_exact(&(x - y)).is_err());
    }

    #[test]
    fn evaluation_and_partial_evaluation() {
        let x = Q::var(2, 0);
        let y = Q::var(2, 1);
        let p = &x.pow(2) * &y + y.scale(&int(3));
        assert_eq!(p.eval(&[int(2), int(5)]), int(35));
        let px = p.partial_eval(&[None, Some(int(1))]);
        assert_eq!(px.eval(&[int(2), int(0)]), int(7));
        assert!(!p.is_homogeneous());
    }
}
