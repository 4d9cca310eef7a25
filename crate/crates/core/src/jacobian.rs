//! Jacobians of spanning sets of power-sum products, their distinguished
//! minors and the factorization `minor = prefactor · Δ · (±1) · S_λ`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::partition::Partition;
use crate::scalar::{serde_text, Scalar};
use crate::schur::{permutations_with_sign, schur_by_kostka, vandermonde};
use crate::symmetric::{anchor_terms, power_sum_value, PowerSumForm, PowerSumTerm};
use crate::testset::{form_shape, sorting_sign};
use crate::{QMPoly, QMatrix, Rational};

/// The generators whose gradients form the columns of the Jacobian.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobianSpec {
    pub generators: Vec<PowerSumTerm>,
    pub n: usize,
    pub degree: u32,
}

impl JacobianSpec {
    pub fn new(generators: Vec<PowerSumTerm>, n: usize, degree: u32) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                expected: degree,
                got: g.degree(),
            });
        }
        Ok(JacobianSpec {
            generators,
            n,
            degree,
        })
    }

    /// Free terms followed by `M_2^{2d}`, `M_{2d}²`, `M_{2d}M_2^d`.
    pub fn with_anchors(free: Vec<PowerSumTerm>, d: u32, n: usize) -> Result<Self> {
        let mut g = free;
        g.extend(anchor_terms(d));
        Self::new(g, n, 4 * d)
    }

    /// The spanning set of a form: its free terms in admissible order, then
    /// the anchors.
    pub fn from_form(form: &PowerSumForm) -> Result<Self> {
        let mut violations = Vec::new();
        let shape = form_shape(form, &mut violations).ok_or_else(|| {
            Error::InvalidInput(violations.join("; "))
        })?;
        let free: Vec<PowerSumTerm> = shape.free.into_iter().map(|(t, _)| t).collect();
        let ordered = match crate::testset::admissible_order(&free, shape.d) {
            Some(order) => order.into_iter().map(|i| free[i].clone()).collect(),
            None => free,
        };
        Self::with_anchors(ordered, shape.d, form.n())
    }

    pub fn columns(&self) -> usize {
        self.generators.len()
    }
}

/// `J[i][c] = ∂ g_c / ∂x_i (y)`.
pub fn jacobian_at<T: Scalar>(spec: &JacobianSpec, y: &[T]) -> Result<Matrix<T>> {
    if y.len() != spec.n {
        return Err(Error::DimensionMismatch {
            expected: spec.n,
            got: y.len(),
        });
    }
    let mut sums: BTreeMap<u32, T> = BTreeMap::new();
    for g in &spec.generators {
        for j in g.indices() {
            sums.entry(j).or_insert_with(|| power_sum_value(j, y));
        }
    }
    let rows = y
        .iter()
        .map(|yi| {
            spec.generators
                .iter()
                .map(|g| g.partial_with(yi, |j| sums[&j].clone()))
                .collect()
        })
        .collect();
    Ok(Matrix::from_rows(rows))
}

/// Exact rank of `J(y)` by fraction-free elimination.
pub fn rank_at(spec: &JacobianSpec, y: &[Rational]) -> Result<usize> {
    Ok(jacobian_at(spec, y)?.rank())
}

/// Drops the `M_{2d} M_2^d` column. Its gradient lies in the span of the
/// gradients of `M_2^{2d}` and `M_{2d}²` wherever `M_{2d} ≠ 0`, see
/// [`mixed_anchor_combination`].
pub fn drop_mixed_anchor(spec: &JacobianSpec, d: u32) -> JacobianSpec {
    let mixed = &anchor_terms(d)[2];
    JacobianSpec {
        generators: spec.generators.iter().filter(|g| *g != mixed).cloned().collect(),
        n: spec.n,
        degree: spec.degree,
    }
}

/// `(a, b)` with `∇(M_{2d} M_2^d) = a ∇M_2^{2d} + b ∇M_{2d}²` at `y`, namely
/// `a = M_{2d} / (2 M_2^d)` and `b = M_2^d / (2 M_{2d})`; `None` when
/// `M_{2d}(y) = 0`.
pub fn mixed_anchor_combination(y: &[Rational], d: u32) -> Option<(Rational, Rational)> {
    let m2d = power_sum_value(2 * d, y);
    if m2d.is_zero() {
        return None;
    }
    let m2 = power_sum_value(2, y).pow_u32(d);
    let two = Rational::from_integer(2.into());
    Some((&m2d / (&two * &m2), &m2 / (&two * &m2d)))
}

/// One piece of a column: `constant · (product of power sums) · x_i^exponent`.
#[derive(Clone, Debug, PartialEq)]
struct ColumnPiece {
    constant: Rational,
    power_sums: Vec<(u32, u32)>,
    exponent: u32,
}

/// The gradient of `∏ M_j^{k_j}` as `Σ_l k_l j_l M_{j_l}^{k_l−1} ∏_{s≠l} M_{j_s}^{k_s} · x_i^{j_l−1}`.
fn generator_column(g: &PowerSumTerm) -> Vec<ColumnPiece> {
    g.factors()
        .iter()
        .enumerate()
        .map(|(l, (j, k))| ColumnPiece {
            constant: Rational::from_integer(((*j as i64) * (*k as i64)).into()),
            power_sums: g
                .factors()
                .iter()
                .enumerate()
                .filter_map(|(s, (js, ks))| {
                    let e = if s == l { ks - 1 } else { *ks };
                    (e > 0).then_some((*js, e))
                })
                .collect(),
            exponent: j - 1,
        })
        .collect()
}

/// One term of the multilinear expansion of a minor.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinorSummand {
    #[serde(serialize_with = "serde_text::one")]
    pub constant: Rational,
    /// Product of power sums multiplying this term, as `(j, k)` pairs.
    pub power_sums: Vec<(u32, u32)>,
    /// Exponents of `x_i` in the columns of the reduced determinant.
    pub exponents: Vec<u32>,
    /// Sign of the permutation sorting `exponents` decreasingly.
    pub sign: i32,
    pub schur_index: Partition,
}

/// `minor = Σ constant · ∏M · sign · Δ_l · S_λ` over the nonzero summands.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinorFactorization {
    pub rows: Vec<usize>,
    pub columns: Vec<String>,
    pub summands: Vec<MinorSummand>,
    /// Summands dropped because two column exponents coincide.
    pub vanishing_summands: usize,
    #[serde(skip)]
    pieces: Vec<Vec<ColumnPiece>>,
}

impl MinorFactorization {
    pub fn signs_agree(&self) -> bool {
        self.summands.windows(2).all(|w| w[0].sign == w[1].sign)
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }
}

/// Schur index and sign of `det[x_i^{e_c}]`: sort the exponents decreasingly
/// and subtract the staircase `(l−1, …, 0)`.
pub fn alternant_index(exponents: &[u32]) -> Option<(i32, Partition)> {
    let sign = sorting_sign(exponents)?;
    let mut e = exponents.to_vec();
    e.sort_unstable_by(|a, b| b.cmp(a));
    let l = e.len();
    let parts = e
        .iter()
        .enumerate()
        .map(|(t, &v)| v - (l - 1 - t) as u32)
        .collect();
    Some((sign, Partition::new(parts).expect("strictly decreasing minus staircase")))
}

fn factor_from_pieces(pieces: Vec<Vec<ColumnPiece>>, labels: Vec<String>) -> Result<MinorFactorization> {
    let l = pieces.len();
    let mut summands = Vec::new();
    let mut vanishing = 0;
    let mut choice = vec![0usize; l];
    loop {
        let chosen: Vec<&ColumnPiece> = choice.iter().enumerate().map(|(c, &i)| &pieces[c][i]).collect();
        let exponents: Vec<u32> = chosen.iter().map(|p| p.exponent).collect();
        match alternant_index(&exponents) {
            Some((sign, schur_index)) => {
                let constant = chosen.iter().fold(Rational::one(), |a, p| a * &p.constant);
                let mut ps: BTreeMap<u32, u32> = BTreeMap::new();
                for p in &chosen {
                    for (j, k) in &p.power_sums {
                        *ps.entry(*j).or_insert(0) += k;
                    }
                }
                summands.push(MinorSummand {
                    constant,
                    power_sums: ps.into_iter().rev().collect(),
                    exponents,
                    sign,
                    schur_index,
                });
            }
            None => vanishing += 1,
        }
        let mut c = 0;
        while c < l && choice[c] + 1 == pieces[c].len() {
            choice[c] = 0;
            c += 1;
        }
        if c == l {
            break;
        }
        choice[c] += 1;
    }
    if summands.is_empty() {
        return Err(Error::ZeroMinor(format!(
            "every reduced determinant has two equal column exponents (columns {})",
            labels.join(", ")
        )));
    }
    Ok(MinorFactorization {
        rows: (0..l).collect(),
        columns: labels,
        summands,
        vanishing_summands: vanishing,
        pieces,
    })
}

/// Factorization of the leading `size × size` minor of `J`: rows
/// `x_1..x_size`, the first `size` generators as columns.
pub fn minor_factorization(spec: &JacobianSpec, size: usize) -> Result<MinorFactorization> {
    if size == 0 || size > spec.columns() || size > spec.n {
        return Err(Error::InvalidInput(format!(
            "minor size {size} does not fit a {}×{} Jacobian",
            spec.n,
            spec.columns()
        )));
    }
    let gens = &spec.generators[..size];
    factor_from_pieces(
        gens.iter().map(generator_column).collect(),
        gens.iter().map(|g| g.to_string()).collect(),
    )
}

/// Factorization of the minor of the Jacobian of
/// `φ = (M_2, M_{2d−2}, M_{2d})` on `x_1, x_2, x_3`.
pub fn phi_minor_factorization(d: u32) -> Result<MinorFactorization> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("φ needs d ≥ 3, got d = {d}")));
    }
    let pieces = [2, 2 * d - 2, 2 * d]
        .iter()
        .map(|&r| {
            vec![ColumnPiece {
                constant: Rational::from_integer(r.into()),
                power_sums: vec![],
                exponent: r - 1,
            }]
        })
        .collect();
    factor_from_pieces(
        pieces,
        vec!["M2".into(), format!("M{}", 2 * d - 2), format!("M{}", 2 * d)],
    )
}

/// Symbolic check of a factorization: power sums become independent
/// indeterminates next to `x_1..x_l`, the minor is expanded over all
/// permutations, and the claimed right-hand side is expanded with the Schur
/// polynomials taken from Kostka numbers. Returns whether both agree.
pub fn verify_factorization(f: &MinorFactorization) -> bool {
    let l = f.size();
    let mut msyms: Vec<u32> = f
        .pieces
        .iter()
        .flatten()
        .flat_map(|p| p.power_sums.iter().map(|(j, _)| *j))
        .chain(f.summands.iter().flat_map(|s| s.power_sums.iter().map(|(j, _)| *j)))
        .collect();
    msyms.sort_unstable();
    msyms.dedup();
    let nv = l + msyms.len();
    let mono = |ps: &[(u32, u32)]| -> QMPoly {
        let mut e = vec![0; nv];
        for (j, k) in ps {
            let slot = l + msyms.binary_search(j).expect("collected");
            e[slot] += k;
        }
        QMPoly::monomial(nv, e, Rational::one())
    };
    let entry = |i: usize, c: usize| -> QMPoly {
        f.pieces[c].iter().fold(QMPoly::zero(nv), |acc, p| {
            let mut x = vec![0; nv];
            x[i] = p.exponent;
            acc + &mono(&p.power_sums) * &QMPoly::monomial(nv, x, p.constant.clone())
        })
    };
    let entries: Vec<Vec<QMPoly>> = (0..l).map(|i| (0..l).map(|c| entry(i, c)).collect()).collect();
    let mut lhs = QMPoly::zero(nv);
    for (perm, sign) in permutations_with_sign(l) {
        let prod = (0..l).fold(QMPoly::constant(nv, Rational::from_integer(sign.into())), |acc, i| {
            &acc * &entries[i][perm[i]]
        });
        lhs = lhs + prod;
    }
    let map: Vec<usize> = (0..l).collect();
    let delta = vandermonde(l).embed(nv, &map);
    let mut rhs = QMPoly::zero(nv);
    for s in &f.summands {
        let Ok(schur) = schur_by_kostka(&s.schur_index, l) else {
            return false;
        };
        let c = &s.constant * Rational::from_integer(s.sign.into());
        rhs = rhs + (&(&mono(&s.power_sums) * &delta) * &schur.to_mpoly().embed(nv, &map)).scale(&c);
    }
    lhs == rhs
}

/// Identity test of a Jacobian minor factorization at one point of `ℚⁿ`,
/// with the power sums taken over all `n` coordinates.
pub fn check_factorization_at(spec: &JacobianSpec, f: &MinorFactorization, y: &[Rational]) -> Result<bool> {
    let l = f.size();
    let j = jacobian_at(spec, y)?;
    let idx: Vec<usize> = (0..l).collect();
    let minor = j.submatrix(&idx, &idx).determinant();
    let head = &y[..l];
    let delta = vandermonde(l).eval(head);
    let mut rhs = Rational::zero();
    for s in &f.summands {
        let schur = schur_by_kostka(&s.schur_index, l)?.eval(head)?;
        let ps = s
            .power_sums
            .iter()
            .fold(Rational::one(), |a, (jj, k)| a * power_sum_value(*jj, y).pow_u32(*k));
        rhs += &s.constant * Rational::from_integer(s.sign.into()) * ps * &delta * schur;
    }
    Ok(minor == rhs)
}

/// `T_y = (M̄_2^d M_{2d} − M̄_{2d} M_2^d)²`, where bars denote values at `y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelForm {
    #[serde(serialize_with = "serde_text::vec")]
    pub y: Vec<Rational>,
    #[serde(serialize_with = "serde_text::one")]
    pub m2_bar: Rational,
    #[serde(serialize_with = "serde_text::one")]
    pub m2d_bar: Rational,
    pub form: PowerSumForm,
}

pub fn kernel_form(y: &[Rational], d: u32, n: usize) -> Result<KernelForm> {
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: y.len(),
        });
    }
    if y.iter().all(Zero::is_zero) {
        return Err(Error::InvalidInput("the kernel form needs y ≠ 0".into()));
    }
    if d < 2 {
        return Err(Error::InvalidInput(format!("need d ≥ 2, got {d}")));
    }
    let m2 = power_sum_value(2, y);
    let m2d = power_sum_value(2 * d, y);
    let [b, g, dl] = anchor_terms(d);
    let a = m2.pow_u32(d);
    let form = PowerSumForm::from_terms(
        n,
        4 * d,
        [
            (g, &a * &a),
            (dl, Rational::from_integer((-2).into()) * &a * &m2d),
            (b, &m2d * &m2d),
        ],
    )?;
    Ok(KernelForm {
        y: y.to_vec(),
        m2_bar: m2,
        m2d_bar: m2d,
        form,
    })
}

/// Rank of the Jacobian of `φ = (M_2, M_{2d−2}, M_{2d})` at `y`.
pub fn phi_map_rank(y: &[Rational], d: u32) -> Result<usize> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("φ needs d ≥ 3, got d = {d}")));
    }
    let m = QMatrix::from_rows(
        [2, 2 * d - 2, 2 * d]
            .iter()
            .map(|&r| {
                y.iter()
                    .map(|x| Rational::from_integer(r.into()) * x.pow_u32(r - 1))
                    .collect()
            })
            .collect(),
    );
    Ok(m.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn m2_column_and_zero_point() {
        let spec = JacobianSpec::with_anchors(vec![PowerSumTerm::power(4, 3)], 3, 3).unwrap();
        let y = vec![int(1), int(2), int(3)];
        let j = jacobian_at(&spec, &y).unwrap();
        let m2 = int(14);
        for (i, yi) in y.iter().enumerate() {
            assert_eq!(*j.get(i, 1), int(12) * yi * m2.pow_u32(5));
        }
        assert_eq!(jacobian_at(&spec, &ints(&[0, 0, 0])).unwrap(), QMatrix::zeros(3, 4));
        assert!(jacobian_at(&spec, &ints(&[1, 2])).is_err());
    }

    #[test]
    fn mixed_anchor_column_in_span() {
        let y = vec![rat(1, 2), int(3), rat(-2, 3), int(1)];
        let spec = JacobianSpec::with_anchors(vec![PowerSumTerm::power(4, 3)], 3, 4).unwrap();
        let j = jacobian_at(&spec, &y).unwrap();
        let (a, b) = mixed_anchor_combination(&y, 3).unwrap();
        for i in 0..4 {
            assert_eq!(*j.get(i, 3), &a * j.get(i, 1) + &b * j.get(i, 2));
        }
        let reduced = drop_mixed_anchor(&spec, 3);
        assert_eq!(reduced.columns(), 3);
        assert_eq!(rank_at(&reduced, &y).unwrap(), rank_at(&spec, &y).unwrap());
    }

    #[test]
    fn rank_examples() {
        let spec = JacobianSpec::with_anchors(vec![PowerSumTerm::power(4, 3)], 3, 5).unwrap();
        assert!(rank_at(&spec, &ints(&[2, 2, 2, 2, 5])).unwrap() <= 2);
        assert_eq!(rank_at(&spec, &ints(&[1, 2, 3, 0, 0])).unwrap(), 3);
        assert_eq!(rank_at(&spec, &ints(&[1, 1, 1, 1, 1])).unwrap(), 1);
    }

    #[test]
    fn schur_index_rule() {
        let spec = JacobianSpec::with_anchors(vec![PowerSumTerm::power(4, 3)], 3, 3).unwrap();
        let f = minor_factorization(&spec, 3).unwrap();
        assert_eq!(f.summands.len(), 1);
        assert_eq!(f.summands[0].schur_index, p(&[3, 2, 1]));
        assert!(verify_factorization(&f));
        let spec = JacobianSpec::with_anchors(vec![PowerSumTerm::new([(8, 1), (2, 2)]).unwrap()], 3, 3)
            .unwrap();
        let f = minor_factorization(&spec, 3).unwrap();
        assert!(f.summands.iter().any(|s| s.schur_index == p(&[5, 4, 1])));
        assert!(verify_factorization(&f));
        let bad = JacobianSpec::new(
            vec![PowerSumTerm::power(6, 2), PowerSumTerm::power(2, 6), PowerSumTerm::power(6, 2)],
            3,
            12,
        )
        .unwrap();
        assert!(matches!(minor_factorization(&bad, 3), Err(Error::ZeroMinor(_))));
    }

    #[test]
    fn kernel_form_examples() {
        let k = kernel_form(&ints(&[1, 0, 0, 0]), 3, 4).unwrap();
        for i in 0..4 {
            let mut e = ints(&[0, 0, 0, 0]);
            e[i] = int(1);
            assert!(k.form.evaluate(&e).unwrap().is_zero());
        }
        let y = vec![rat(1, 2), int(3), rat(-2, 3)];
        let k = kernel_form(&y, 3, 3).unwrap();
        assert!(k.form.evaluate(&y).unwrap().is_zero());
        assert!(kernel_form(&ints(&[0, 0, 0]), 3, 3).is_err());
    }

    #[test]
    fn phi_rank_and_minor() {
        assert_eq!(phi_map_rank(&ints(&[1, 2, 3]), 3).unwrap(), 3);
        assert!(phi_map_rank(&ints(&[2, 2, 5]), 3).unwrap() <= 2);
        assert!(phi_map_rank(&ints(&[1, 2, 3]), 2).is_err());
        let f = phi_minor_factorization(3).unwrap();
        assert_eq!(f.summands[0].schur_index, p(&[3, 2, 1]));
        assert_eq!(f.summands[0].constant, int(2 * 4 * 6));
        assert!(verify_factorization(&f));
    }
}
