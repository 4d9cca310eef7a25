use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partition::partitions;
use crate::symmetric::PowerSumForm;
use crate::{QMPoly, QPoly, Rational};

/// Orbit type of a k-point: `s` distinct nonzero values, value `aᵢ`
/// repeated `mᵢ` times, the remaining coordinates zero. Multiplicities are
/// kept weakly decreasing since value labels are interchangeable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KPointPattern {
    multiplicities: Vec<usize>,
}

impl KPointPattern {
    pub fn new(mut multiplicities: Vec<usize>) -> Result<Self> {
        if multiplicities.is_empty() || multiplicities.contains(&0) {
            return Err(Error::InvalidInput(format!(
                "pattern multiplicities must be positive, got {multiplicities:?}"
            )));
        }
        multiplicities.sort_unstable_by(|a, b| b.cmp(a));
        Ok(KPointPattern { multiplicities })
    }

    /// Parses `2,1`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts = text
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("bad multiplicity `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Number of distinct nonzero values.
    pub fn s(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn zeros(&self, n: usize) -> usize {
        n.saturating_sub(self.total())
    }

    /// The n-coordinate point with `values[i]` repeated `mᵢ` times followed
    /// by zeros.
    pub fn lift<T: Clone>(&self, n: usize, values: &[T], zero: T) -> Vec<T> {
        assert_eq!(values.len(), self.s());
        let mut out = Vec::with_capacity(n);
        for (v, &m) in values.iter().zip(&self.multiplicities) {
            out.extend(std::iter::repeat_n(v.clone(), m));
        }
        out.resize(n, zero);
        out
    }

    fn check_fits(&self, n: usize) -> Result<()> {
        if self.total() > n {
            return Err(Error::InvalidInput(format!(
                "pattern {self} needs {} coordinates, form has n = {n}",
                self.total()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for KPointPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.multiplicities.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for KPointPattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.multiplicities.serialize(s)
    }
}

/// Every pattern with at most `k` distinct values fitting in `n`
/// coordinates: `s` from `k` down to 1, then by number of nonzero
/// coordinates, then reverse-lexicographically.
pub fn enumerate_patterns(n: usize, k: usize) -> Vec<KPointPattern> {
    let mut out = Vec::new();
    for s in (1..=k.min(n)).rev() {
        for total in s..=n {
            for p in partitions(total as u32, s, total as u32) {
                if p.len() == s {
                    out.push(KPointPattern {
                        multiplicities: p.parts().iter().map(|&x| x as usize).collect(),
                    });
                }
            }
        }
    }
    out
}

/// A form restricted to a pattern: a polynomial in the values
/// `a₁,…,a_s`, even in each and homogeneous of the original degree.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedForm {
    pub pattern: KPointPattern,
    pub poly: QMPoly,
}

/// Substitutes `M_r ↦ Σ mᵢ aᵢ^r` into every power-sum product.
pub fn restrict(form: &PowerSumForm, pattern: &KPointPattern) -> Result<RestrictedForm> {
    pattern.check_fits(form.n())?;
    let s = pattern.s();
    let sums: BTreeMap<u32, QMPoly> = form
        .indices()
        .into_iter()
        .map(|j| {
            let p = QMPoly::from_terms(
                s,
                pattern.multiplicities.iter().enumerate().map(|(i, &m)| {
                    let mut e = vec![0; s];
                    e[i] = j;
                    (e, Rational::from_integer(m.into()))
                }),
            );
            (j, p)
        })
        .collect();
    let mut poly = QMPoly::zero(s);
    for (t, c) in form.terms() {
        let prod = t
            .factors()
            .iter()
            .fold(QMPoly::constant(s, Rational::one()), |acc, (j, k)| {
                &acc * &sums[j].pow(*k)
            });
        poly = poly + prod.scale(c);
    }
    Ok(RestrictedForm {
        pattern: pattern.clone(),
        poly,
    })
}

/// Sets `a₂ = 1` in a two-value restriction, giving an even polynomial in
/// `x = a₁`.
pub fn dehomogenize(rf: &RestrictedForm) -> Result<QPoly> {
    if rf.pattern.s() != 2 {
        return Err(Error::InvalidInput(format!(
            "dehomogenization needs a two-value pattern, got {}",
            rf.pattern
        )));
    }
    Ok(univariate_slice(&rf.poly))
}

/// Reads the restriction as a univariate polynomial in `a₁`, with every
/// other value set to one. For `s = 1` this is `c·x^D`.
pub(crate) fn univariate_slice(poly: &QMPoly) -> QPoly {
    let deg = poly.terms().map(|(e, _)| e[0] as usize).max().unwrap_or(0);
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for (e, c) in poly.terms() {
        coeffs[e[0] as usize] += c;
    }
    QPoly::new(coeffs)
}
