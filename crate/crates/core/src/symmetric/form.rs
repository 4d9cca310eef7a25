use std::collections::{BTreeMap, BTreeSet};
use std::ops::Add;

use num_traits::Zero;
use serde::Serialize;

use super::term::PowerSumTerm;
use crate::error::{Error, Result};
use crate::scalar::{format_rational, Scalar};
use crate::Rational;

/// `M_r(x) = Σ x_i^r`.
pub fn power_sum_value<T: Scalar>(r: u32, point: &[T]) -> T {
    point
        .iter()
        .fold(T::zero(), |acc, x| acc + x.pow_u32(r))
}

/// An even symmetric form written in the power-sum basis with exact
/// rational coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumForm {
    n: usize,
    degree: u32,
    terms: BTreeMap<PowerSumTerm, Rational>,
}

impl PowerSumForm {
    pub fn zero(n: usize, degree: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "forms need at least two variables, got n = {n}"
            )));
        }
        if degree == 0 || degree % 2 == 1 {
            return Err(Error::InvalidInput(format!(
                "degree must be even and positive, got {degree}"
            )));
        }
        Ok(PowerSumForm {
            n,
            degree,
            terms: BTreeMap::new(),
        })
    }

    pub fn from_terms(
        n: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (PowerSumTerm, Rational)>,
    ) -> Result<Self> {
        let mut form = Self::zero(n, degree)?;
        for (t, c) in terms {
            form.add_term(t, c)?;
        }
        Ok(form)
    }

    /// Accumulates `c · term`, pruning the entry if it cancels.
    pub fn add_term(&mut self, term: PowerSumTerm, c: Rational) -> Result<()> {
        if term.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: term.degree(),
            });
        }
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(term).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<PowerSumTerm, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, term: &PowerSumTerm) -> Rational {
        self.terms.get(term).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same coefficients, different number of variables.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        let mut f = Self::zero(n, self.degree)?;
        f.terms = self.terms.clone();
        Ok(f)
    }

    /// Distinct power-sum indices used by any term.
    pub fn indices(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|t| t.indices()).collect()
    }

    fn power_sums<T: Scalar>(&self, point: &[T]) -> BTreeMap<u32, T> {
        self.indices()
            .into_iter()
            .map(|j| (j, power_sum_value(j, point)))
            .collect()
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: len,
            });
        }
        Ok(())
    }

    /// Exact (or floating, depending on `T`) value at a point, computed
    /// through the power sums of the point.
    pub fn evaluate<T: Scalar>(&self, point: &[T]) -> Result<T> {
        self.check_dim(point.len())?;
        Ok(self.evaluate_unchecked(point))
    }

    /// Evaluates at a point of any length, i.e. with the power sums taken
    /// over exactly the given coordinates.
    pub fn evaluate_unchecked<T: Scalar>(&self, point: &[T]) -> T {
        let sums = self.power_sums(point);
        self.terms.iter().fold(T::zero(), |acc, (t, c)| {
            acc + T::from_rational(c) * t.eval_with(|j| sums[&j].clone())
        })
    }

    /// Gradient `(∂p/∂x_1, …, ∂p/∂x_n)` at a point.
    pub fn gradient<T: Scalar>(&self, point: &[T]) -> Result<Vec<T>> {
        self.check_dim(point.len())?;
        let sums = self.power_sums(point);
        let coeffs: Vec<(T, &PowerSumTerm)> = self
            .terms
            .iter()
            .map(|(t, c)| (T::from_rational(c), t))
            .collect();
        Ok(point
            .iter()
            .map(|xi| {
                coeffs.iter().fold(T::zero(), |acc, (c, t)| {
                    acc + c.clone() * t.partial_with(xi, |j| sums[&j].clone())
                })
            })
            .collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut f = self.clone();
        if c.is_zero() {
            f.terms.clear();
        } else {
            for v in f.terms.values_mut() {
                *v *= c;
            }
        }
        f
    }

    pub fn try_add(&self, other: &PowerSumForm) -> Result<PowerSumForm> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        let mut f = self.clone();
        for (t, c) in &other.terms {
            f.add_term(t.clone(), c.clone())?;
        }
        Ok(f)
    }

    /// Product with another form (degrees add).
    pub fn multiply(&self, other: &PowerSumForm) -> Result<PowerSumForm> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut f = PowerSumForm::zero(self.n, self.degree + other.degree)?;
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                f.add_term(a.times(b), ca * cb)?;
            }
        }
        Ok(f)
    }
}

impl Add for &PowerSumForm {
    type Output = PowerSumForm;

    /// Panics on mismatched shapes; use [`PowerSumForm::try_add`] to get an
    /// error instead.
    fn add(self, rhs: &PowerSumForm) -> PowerSumForm {
        self.try_add(rhs).expect("forms of matching n and degree")
    }
}

/// The three terms every form in the studied subspaces carries:
/// `M_2^{2d}`, `M_{2d}²` and `M_{2d} M_2^d`, for `degree = 4d`.
pub fn anchor_terms(d: u32) -> [PowerSumTerm; 3] {
    [
        PowerSumTerm::power(2, 2 * d),
        PowerSumTerm::power(2 * d, 2),
        PowerSumTerm::new([(2 * d, 1), (2, d)]).expect("even indices"),
    ]
}

/// Every product of even power sums of total degree `degree` that belongs to
/// the power-sum basis of even symmetric forms in `n` variables, i.e. the
/// partitions of `degree/2` into parts at most `n`, doubled.
pub fn enumerate_basis(n: usize, degree: u32) -> Vec<PowerSumTerm> {
    if degree % 2 == 1 {
        return Vec::new();
    }
    let half = degree / 2;
    let max_part = (n as u32).min(half);
    crate::partition::partitions(half, half as usize, max_part)
        .into_iter()
        .map(|p| {
            PowerSumTerm::new(p.parts().iter().map(|&part| (2 * part, 1))).expect("even indices")
        })
        .collect()
}

#[derive(Serialize)]
struct FormJson {
    n: usize,
    degree: u32,
    terms: Vec<(String, String)>,
}

impl Serialize for PowerSumForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormJson {
            n: self.n,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(t, c)| (t.to_string(), format_rational(c)))
                .collect(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    pub(crate) fn example_form(n: usize) -> PowerSumForm {
        PowerSumForm::from_terms(
            n,
            12,
            [
                (PowerSumTerm::power(4, 3), int(1)),
                (PowerSumTerm::power(2, 6), rat(-1, 10)),
                (PowerSumTerm::power(6, 2), int(1)),
                (PowerSumTerm::new([(6, 1), (2, 3)]).unwrap(), int(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(power_sum_value(2, &[int(1), int(1), int(1)]), int(3));
        assert_eq!(power_sum_value(4, &[int(0), int(0), int(0)]), int(0));
        assert_eq!(power_sum_value(6, &[int(1), int(2)]), int(65));
    }

    #[test]
    fn evaluate_examples() {
        let m22 = PowerSumForm::from_terms(2, 4, [(PowerSumTerm::power(2, 2), int(1))]).unwrap();
        assert_eq!(m22.evaluate(&[int(1), int(1)]).unwrap(), int(4));
        let p = example_form(3);
        assert_eq!(p.evaluate(&[int(1), int(0), int(0)]).unwrap(), rat(29, 10));
        assert!(p.evaluate(&[int(1), int(0)]).is_err());
    }

    #[test]
    fn add_and_scale() {
        let p = example_form(3);
        assert!((&p + &p.scale(&int(-1))).is_zero());
        let m22 = PowerSumForm::from_terms(2, 4, [(PowerSumTerm::power(2, 2), int(1))]).unwrap();
        let twice = &m22 + &m22;
        assert_eq!(twice.coefficient(&PowerSumTerm::power(2, 2)), int(2));
        assert!(p.try_add(&example_form(4)).is_err());
        assert!(p.try_add(&m22.with_n(3).unwrap()).is_err());
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(enumerate_basis(3, 12).len(), 7);
        assert_eq!(enumerate_basis(4, 12).len(), 9);
        let b = enumerate_basis(2, 4);
        assert_eq!(b, vec![PowerSumTerm::power(4, 1), PowerSumTerm::power(2, 2)]);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = example_form(3);
        let x = [0.3f64, -0.7, 1.1];
        let g = p.gradient(&x).unwrap();
        for i in 0..3 {
            let h = 1e-6;
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            let fd = (p.evaluate(&xp).unwrap() - p.evaluate(&xm).unwrap()) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-5 * (1.0 + g[i].abs()), "{fd} vs {}", g[i]);
        }
    }
}
