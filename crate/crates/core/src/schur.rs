//! Schur polynomials, Kostka numbers and monomial symmetric functions.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{partitions, Partition};
use crate::scalar::Scalar;
use crate::{QMPoly, Rational};

/// All distinct rearrangements of a multiset, in lexicographic order.
pub fn distinct_permutations(items: &[u32]) -> Vec<Vec<u32>> {
    let mut v = items.to_vec();
    v.sort_unstable();
    let mut out = vec![v.clone()];
    // Standard next-permutation walk.
    loop {
        let Some(i) = (0..v.len().saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
            return out;
        };
        let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("exists");
        v.swap(i, j);
        v[i + 1..].reverse();
        out.push(v.clone());
    }
}

/// `m_λ(x₁,…,x_l)`: the sum of all distinct monomials whose exponent vector
/// is a rearrangement of `λ` padded with zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialSymmetric {
    pub index: Partition,
    pub l: usize,
}

impl MonomialSymmetric {
    pub fn new(index: Partition, l: usize) -> Result<Self> {
        if index.len() > l {
            return Err(Error::InvalidInput(format!(
                "partition {index} has more than {l} parts"
            )));
        }
        Ok(MonomialSymmetric { index, l })
    }

    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<T> {
        if point.len() != self.l {
            return Err(Error::DimensionMismatch {
                expected: self.l,
                got: point.len(),
            });
        }
        Ok(distinct_permutations(&self.index.padded(self.l))
            .into_iter()
            .fold(T::zero(), |acc, e| {
                acc + e
                    .iter()
                    .zip(point)
                    .fold(T::one(), |m, (k, x)| m * x.pow_u32(*k))
            }))
    }

    pub fn to_mpoly(&self) -> QMPoly {
        QMPoly::from_terms(
            self.l,
            distinct_permutations(&self.index.padded(self.l))
                .into_iter()
                .map(|e| (e, Rational::one())),
        )
    }
}

/// A Schur polynomial with its expansion `S_λ = Σ_μ K_{λμ} m_μ` in
/// monomial symmetric functions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchurPoly {
    pub index: Partition,
    pub l: usize,
    pub expansion: BTreeMap<Partition, u64>,
}

impl SchurPoly {
    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<T> {
        let mut acc = T::zero();
        for (mu, k) in &self.expansion {
            let m = MonomialSymmetric::new(mu.clone(), self.l)?.eval(point)?;
            acc = acc + T::from_i64(*k as i64) * m;
        }
        Ok(acc)
    }

    pub fn to_mpoly(&self) -> QMPoly {
        self.expansion.iter().fold(QMPoly::zero(self.l), |acc, (mu, k)| {
            let m = MonomialSymmetric {
                index: mu.clone(),
                l: self.l,
            };
            acc + m.to_mpoly().scale(&Rational::from_integer((*k).into()))
        })
    }

    /// Number of semistandard tableaux of shape `index` with entries in
    /// `1..=l`, i.e. `S_λ(1,…,1)`.
    pub fn tableau_count(&self) -> u64 {
        self.expansion
            .iter()
            .map(|(mu, k)| k * distinct_permutations(&mu.padded(self.l)).len() as u64)
            .sum()
    }
}

/// Kostka number `K_{λμ}`: the number of semistandard Young tableaux of
/// shape `λ` and content `μ`.
///
/// Tableaux are enumerated as chains of shapes in which the cells filled
/// with the entry `i` form a horizontal strip of size `μ_i`.
pub fn kostka(shape: &Partition, content: &Partition) -> Result<u64> {
    if shape.weight() != content.weight() {
        return Err(Error::WeightMismatch {
            shape: shape.weight(),
            content: content.weight(),
        });
    }
    let lam = shape.parts().to_vec();
    let mut memo = HashMap::new();
    Ok(count_chains(
        &lam,
        content.parts(),
        vec![0; lam.len()],
        &mut memo,
    ))
}

fn count_chains(
    lam: &[u32],
    content: &[u32],
    current: Vec<u32>,
    memo: &mut HashMap<(usize, Vec<u32>), u64>,
) -> u64 {
    let Some((&first, rest)) = content.split_first() else {
        return u64::from(current.as_slice() == lam);
    };
    let key = (content.len(), current);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let current = key.1.clone();
    let mut total = 0;
    for next in horizontal_strips(lam, &current, first) {
        total += count_chains(lam, rest, next, memo);
    }
    memo.insert(key, total);
    total
}

/// Shapes `ν` with `current ⊆ ν ⊆ lam` such that `ν / current` is a
/// horizontal strip of `size` cells.
fn horizontal_strips(lam: &[u32], current: &[u32], size: u32) -> Vec<Vec<u32>> {
    fn go(
        r: usize,
        remaining: u32,
        lam: &[u32],
        current: &[u32],
        acc: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if r == lam.len() {
            if remaining == 0 {
                out.push(acc.clone());
            }
            return;
        }
        // A horizontal strip adds at most one cell per column: row r may grow
        // only up to the old length of row r-1.
        let cap = if r == 0 { lam[0] } else { lam[r].min(current[r - 1]) };
        let max_add = cap.saturating_sub(current[r]).min(remaining);
        for add in 0..=max_add {
            acc.push(current[r] + add);
            go(r + 1, remaining - add, lam, current, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(0, size, lam, current, &mut Vec::with_capacity(lam.len()), &mut out);
    out
}

fn check_len(index: &Partition, l: usize) -> Result<()> {
    if index.len() > l {
        return Err(Error::InvalidInput(format!(
            "Schur index {index} has more than {l} nonzero parts"
        )));
    }
    Ok(())
}

/// `S_λ` in `l` variables via Kostka numbers.
pub fn schur_by_kostka(index: &Partition, l: usize) -> Result<SchurPoly> {
    check_len(index, l)?;
    let w = index.weight();
    let mut expansion = BTreeMap::new();
    for mu in partitions(w, l, w) {
        let k = kostka(index, &mu)?;
        if k > 0 {
            expansion.insert(mu, k);
        }
    }
    Ok(SchurPoly {
        index: index.clone(),
        l,
        expansion,
    })
}

/// `Δ_l = ∏_{i<j} (x_i − x_j)`, the Vandermonde determinant
/// `det[x_i^{l−j}]`.
pub fn vandermonde(l: usize) -> QMPoly {
    let mut acc = QMPoly::constant(l, Rational::one());
    for i in 0..l {
        for j in i + 1..l {
            acc = &acc * &(QMPoly::var(l, i) - QMPoly::var(l, j));
        }
    }
    acc
}

/// The alternant `D_λ = det[x_i^{λ_j + l − j}]` expanded over permutations.
pub fn alternant(exponents: &[u32]) -> QMPoly {
    let l = exponents.len();
    let mut out = QMPoly::zero(l);
    for (perm, sign) in permutations_with_sign(l) {
        let e: Vec<u32> = perm.iter().map(|&c| exponents[c]).collect();
        out.add_term(e, Rational::from_integer(sign.into()));
    }
    out
}

/// All permutations of `0..l` (as images of rows) with their signs.
pub fn permutations_with_sign(l: usize) -> Vec<(Vec<usize>, i64)> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        let l = used.len();
        if prefix.len() == l {
            out.push((prefix.clone(), sign));
            return;
        }
        for c in 0..l {
            if used[c] {
                continue;
            }
            // Inversions contributed by placing c after the current prefix.
            let inv = prefix.iter().filter(|&&p| p > c).count();
            used[c] = true;
            prefix.push(c);
            go(prefix, used, if inv % 2 == 0 { sign } else { -sign }, out);
            prefix.pop();
            used[c] = false;
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(l), &mut vec![false; l], 1, &mut out);
    out
}

/// `S_λ = D_λ / Δ_l` computed by dividing the alternant by each factor
/// `x_i − x_j` in turn, then reading off the monomial symmetric expansion.
pub fn schur_by_determinant(index: &Partition, l: usize) -> Result<SchurPoly> {
    check_len(index, l)?;
    let padded = index.padded(l);
    let exps: Vec<u32> = padded
        .iter()
        .enumerate()
        .map(|(j, d)| d + (l - 1 - j) as u32)
        .collect();
    let mut q = alternant(&exps);
    for i in 0..l {
        for j in i + 1..l {
            q = q.div_exact(&(QMPoly::var(l, i) - QMPoly::var(l, j)))?;
        }
    }
    let mut expansion = BTreeMap::new();
    for (e, c) in q.terms() {
        if !e.windows(2).all(|w| w[0] >= w[1]) {
            continue;
        }
        if !c.is_integer() || c.is_negative() {
            return Err(Error::CertificateFailure(format!(
                "Schur coefficient {c} of x^{e:?} is not a nonnegative integer"
            )));
        }
        let mu = Partition::new(e.clone())?;
        expansion.insert(mu, c.to_integer().to_u64().expect("small coefficient"));
    }
    let s = SchurPoly {
        index: index.clone(),
        l,
        expansion,
    };
    if s.to_mpoly() != q {
        return Err(Error::CertificateFailure(
            "alternant quotient is not symmetric".into(),
        ));
    }
    Ok(s)
}

/// Exact value of `S` at a point of the open positive orthant.
pub fn positivity_on_positive_orthant(s: &SchurPoly, point: &[Rational]) -> Result<Rational> {
    if point.len() != s.l {
        return Err(Error::DimensionMismatch {
            expected: s.l,
            got: point.len(),
        });
    }
    if let Some(x) = point.iter().find(|x| !x.is_positive() || x.is_zero()) {
        return Err(Error::InvalidInput(format!(
            "coordinate {x} is not strictly positive"
        )));
    }
    s.eval(point)
}
