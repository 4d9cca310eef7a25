use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::scalar::{format_rational, ExactScalar, Scalar};
use crate::Rational;

/// Dense univariate polynomial, coefficients in ascending degree order.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> UniPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c · x^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The linear polynomial `x - root`.
    pub fn linear_root(root: T) -> Self {
        Self::new(vec![-root, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.leading_coeff();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lc.clone();
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - c.clone() * d.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Substitutes `x ↦ x²`.
    pub fn in_square(&self) -> Self {
        let mut coeffs = vec![T::zero(); 2 * self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * k] = c.clone();
        }
        Self::new(coeffs)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> UniPoly<U> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: ExactScalar> UniPoly<T> {
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        Self::new(self.coeffs.iter().map(|c| c.clone() / lc.clone()).collect())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Exact quotient; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Square-free part `f / gcd(f, f')`, made monic.
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return Self::constant(T::one());
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g)
            .expect("gcd divides its argument")
            .monic()
    }

    /// Yun's square-free decomposition: monic `g_1, g_2, …` with
    /// `f = lc · g_1 · g_2² · g_3³ ⋯`, each `g_i` square-free and pairwise
    /// coprime. Entry `i` of the returned vector is `g_{i+1}`.
    pub fn square_free_decomposition(&self) -> Vec<Self> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.div_exact(&a).expect("gcd divides f");
        let mut c = fp.div_exact(&a).expect("gcd divides f'");
        let mut d = c - b.derivative();
        loop {
            let g = b.gcd(&d);
            out.push(g.clone());
            b = b.div_exact(&g).expect("gcd divides b");
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.div_exact(&g).expect("gcd divides d");
            d = c - b.derivative();
        }
        while out.last().is_some_and(|g| g.degree() == Some(0)) {
            out.pop();
        }
        out
    }
}

impl<T: Scalar> Add for UniPoly<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Add for &UniPoly<T> {
    type Output = UniPoly<T>;
    fn add(self, rhs: Self) -> UniPoly<T> {
        self.clone() + rhs.clone()
    }
}

impl<T: Scalar> Sub for UniPoly<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for &UniPoly<T> {
    type Output = UniPoly<T>;
    fn sub(self, rhs: Self) -> UniPoly<T> {
        self.clone() - rhs.clone()
    }
}

impl<T: Scalar> Neg for UniPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: Scalar> Mul for &UniPoly<T> {
    type Output = UniPoly<T>;
    fn mul(self, rhs: Self) -> UniPoly<T> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }
}

impl<T: Scalar> Mul for UniPoly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl fmt::Display for UniPoly<Rational> {
    /// Highest degree first, e.g. `29/10 * x^12 + 12/5 * x^10 + 29/10`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = *c < Rational::from_i64(0);
            let mag = format_rational(&c.abs_val());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag} * x")?,
                _ => write!(f, "{mag} * x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for UniPoly<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        v.serialize(s)
    }
}
