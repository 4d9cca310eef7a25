use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A product of power sums `M_{j₁}^{k₁} ⋯ M_{j_r}^{k_r}`, stored with the
/// indices `j` strictly decreasing so that each product has one key.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PowerSumTerm {
    factors: Vec<(u32, u32)>,
}

impl PowerSumTerm {
    /// Builds a canonical term from `(j, k)` pairs in any order; repeated
    /// indices are merged and `k = 0` factors dropped. Every `j` must be a
    /// positive even integer.
    pub fn new(factors: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut acc: Vec<(u32, u32)> = Vec::new();
        for (j, k) in factors {
            if j == 0 || j % 2 == 1 {
                return Err(Error::InvalidInput(format!(
                    "power-sum index must be even and positive, got M{j}"
                )));
            }
            if k == 0 {
                continue;
            }
            match acc.iter_mut().find(|(jj, _)| *jj == j) {
                Some((_, kk)) => *kk += k,
                None => acc.push((j, k)),
            }
        }
        acc.sort_unstable_by_key(|f| std::cmp::Reverse(f.0));
        Ok(PowerSumTerm { factors: acc })
    }

    /// `M_j^k`
    pub fn power(j: u32, k: u32) -> Self {
        Self::new([(j, k)]).expect("even index")
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(j, k)| j * k).sum()
    }

    /// Distinct power-sum indices, decreasing.
    pub fn indices(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors.iter().map(|(j, _)| *j)
    }

    pub fn exponent_of(&self, j: u32) -> u32 {
        self.factors
            .iter()
            .find(|(jj, _)| *jj == j)
            .map_or(0, |(_, k)| *k)
    }

    /// Product of two terms.
    pub fn times(&self, other: &PowerSumTerm) -> PowerSumTerm {
        PowerSumTerm::new(self.factors.iter().chain(&other.factors).copied())
            .expect("factors already valid")
    }

    /// Evaluates the product given a lookup for `M_j`.
    pub fn eval_with<T: Scalar>(&self, power_sum: impl Fn(u32) -> T) -> T {
        self.factors
            .iter()
            .fold(T::one(), |acc, (j, k)| acc * power_sum(*j).pow_u32(*k))
    }

    /// Partial derivative with respect to `x_i`, given `x_i` and a lookup for
    /// `M_j`: `Σ_l k_l j_l x_i^{j_l−1} M_{j_l}^{k_l−1} ∏_{s≠l} M_{j_s}^{k_s}`.
    pub fn partial_with<T: Scalar>(&self, xi: &T, power_sum: impl Fn(u32) -> T) -> T {
        let mut total = T::zero();
        for (l, (j, k)) in self.factors.iter().enumerate() {
            let mut t = T::from_i64((*j as i64) * (*k as i64))
                * xi.pow_u32(j - 1)
                * power_sum(*j).pow_u32(k - 1);
            for (s, (js, ks)) in self.factors.iter().enumerate() {
                if s != l {
                    t = t * power_sum(*js).pow_u32(*ks);
                }
            }
            total = total + t;
        }
        total
    }
}

impl fmt::Display for PowerSumTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (j, k)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "M{j}^{k}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_merge() {
        let t = PowerSumTerm::new([(2, 3), (6, 1), (2, 1)]).unwrap();
        assert_eq!(t.factors(), &[(6, 1), (2, 4)]);
        assert_eq!(t.degree(), 14);
        assert_eq!(t.to_string(), "M6^1 * M2^4");
        assert!(PowerSumTerm::new([(3, 4)]).is_err());
    }
}
