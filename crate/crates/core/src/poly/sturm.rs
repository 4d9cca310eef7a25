//! Sturm sequences, real-root isolation and the exact nonnegativity test
//! for univariate polynomials.

use serde::Serialize;

use super::univariate::UniPoly;
use crate::scalar::{sign_of, ExactScalar};

/// Sturm chain `p₀ = f, p₁ = f', pₖ₊₁ = -rem(pₖ₋₁, pₖ)` of a square-free
/// polynomial. Members are normalized by a positive constant, which leaves
/// sign variations unchanged.
#[derive(Clone, Debug)]
pub struct SturmChain<T> {
    chain: Vec<UniPoly<T>>,
}

impl<T: ExactScalar> SturmChain<T> {
    pub fn new(f: &UniPoly<T>) -> Self {
        let normalize = |p: UniPoly<T>| {
            let lc = p.leading_coeff().abs_val();
            if lc.is_zero() {
                p
            } else {
                p.scale(&(T::one() / lc))
            }
        };
        let mut chain = vec![normalize(f.clone())];
        let d = f.derivative();
        if !d.is_zero() {
            chain.push(normalize(d));
        }
        while chain.len() >= 2 {
            let k = chain.len();
            let (_, r) = chain[k - 2].div_rem(&chain[k - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(normalize(-r));
        }
        SturmChain { chain }
    }

    fn variations<I: Iterator<Item = i32>>(signs: I) -> usize {
        let mut last = 0;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &T) -> usize {
        Self::variations(self.chain.iter().map(|p| sign_of(&p.eval(x))))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.chain.iter().map(|p| {
            let s = sign_of(&p.leading_coeff());
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if !positive && odd {
                -s
            } else {
                s
            }
        }))
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &T, b: &T) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    pub fn count_real_roots(&self) -> usize {
        self.variations_at_infinity(false)
            .saturating_sub(self.variations_at_infinity(true))
    }
}

/// Cauchy bound: every real root lies in `(-B, B)`.
pub fn root_bound<T: ExactScalar>(f: &UniPoly<T>) -> T {
    let lc = f.leading_coeff().abs_val();
    let n = f.degree().unwrap_or(0);
    let max = f.coeffs()[..n]
        .iter()
        .map(|c| c.abs_val() / lc.clone())
        .fold(T::zero(), |m, c| if c > m { c } else { m });
    max + T::one() + T::one()
}

/// Open interval `(lo, hi)` containing exactly one real root; neither
/// endpoint is a root.
#[derive(Clone, Debug, PartialEq)]
pub struct RootInterval<T> {
    pub lo: T,
    pub hi: T,
}

/// Isolates the real roots of `f` (need not be square-free) into disjoint
/// open intervals with non-root endpoints, sorted left to right, each of
/// width at most `max_width` when given.
pub fn isolate_real_roots<T: ExactScalar>(
    f: &UniPoly<T>,
    max_width: Option<&T>,
) -> Vec<RootInterval<T>> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sf = f.square_free_part();
    let chain = SturmChain::new(&sf);
    let bound = root_bound(&sf);
    let two = T::one() + T::one();
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        match chain.count_roots(&a, &b) {
            0 => {}
            1 if max_width.is_none_or(|w| b.clone() - a.clone() <= *w) => {
                out.push(RootInterval { lo: a, hi: b })
            }
            _ => {
                // Split near the midpoint, stepping off any root so that
                // every interval endpoint stays a non-root.
                let width = b.clone() - a.clone();
                let mut mid = (a.clone() + b.clone()) / two.clone();
                let mut step = width / T::from_i64(8);
                while sf.eval(&mid).is_zero() {
                    mid = mid + step.clone();
                    step = step / two.clone();
                }
                stack.push((mid.clone(), b));
                stack.push((a, mid));
            }
        }
    }
    out.sort_by(|x, y| x.lo.partial_cmp(&y.lo).expect("exact scalars are totally ordered"));
    out
}

/// Outcome of the exact univariate nonnegativity test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonnegOutcome<T> {
    pub nonnegative: bool,
    /// A rational point where the polynomial is strictly negative.
    pub witness: Option<T>,
    /// A closed interval on which the polynomial is strictly negative.
    pub negative_interval: Option<(T, T)>,
}

/// Decides whether `f(x) ≥ 0` for all real `x`.
///
/// `f ≥ 0` iff `f ≡ 0`, or the leading coefficient is positive and every
/// real root has even multiplicity. The multiplicity structure comes from
/// the square-free decomposition; the odd-multiplicity part is tested for
/// real roots with a Sturm chain. On failure, the real roots are isolated
/// and `f` is evaluated at one rational point in each gap between
/// consecutive roots (and beyond the extremes); `f` has constant sign on
/// each gap, so a negative sample exists and is returned as the witness.
pub fn univariate_nonneg<T: ExactScalar>(f: &UniPoly<T>) -> NonnegOutcome<T> {
    let pass = NonnegOutcome {
        nonnegative: true,
        witness: None,
        negative_interval: None,
    };
    if f.is_zero() {
        return pass;
    }
    if f.degree() == Some(0) {
        if f.leading_coeff() > T::zero() {
            return pass;
        }
        let x = T::zero();
        return NonnegOutcome {
            nonnegative: false,
            witness: Some(x.clone()),
            negative_interval: Some((x.clone() - T::one(), x + T::one())),
        };
    }
    let even_degree = f.degree().unwrap_or(0).is_multiple_of(2);
    if even_degree && f.leading_coeff() > T::zero() {
        let parts = f.square_free_decomposition();
        let odd_part = parts
            .iter()
            .step_by(2)
            .fold(UniPoly::constant(T::one()), |acc, g| &acc * g);
        if SturmChain::new(&odd_part).count_real_roots() == 0 {
            return pass;
        }
    }
    negative_sample(f).unwrap_or(pass)
}

fn negative_sample<T: ExactScalar>(f: &UniPoly<T>) -> Option<NonnegOutcome<T>> {
    let roots = isolate_real_roots(f, None);
    let one = T::one();
    // Gaps as closed intervals free of roots.
    let gaps: Vec<(T, T)> = if roots.is_empty() {
        vec![(-one.clone(), one.clone())]
    } else {
        let mut g = Vec::with_capacity(roots.len() + 1);
        g.push((roots[0].lo.clone() - one.clone(), roots[0].lo.clone()));
        for w in roots.windows(2) {
            g.push((w[0].hi.clone(), w[1].lo.clone()));
        }
        let last = &roots[roots.len() - 1].hi;
        g.push((last.clone(), last.clone() + one));
        g
    };
    gaps.into_iter().find_map(|(lo, hi)| {
        let v = f.eval(&lo);
        (v < T::zero()).then(|| NonnegOutcome {
            nonnegative: false,
            witness: Some(lo.clone()),
            negative_interval: Some((lo, hi)),
        })
    })
}

/// Lower bound for `min f` over the closed interval `[lo, hi]` from the
/// coefficient-wise interval extension (crude, but rigorous).
pub fn interval_lower_bound<T: ExactScalar>(f: &UniPoly<T>, lo: &T, hi: &T) -> T {
    // Horner with interval arithmetic.
    let mut acc_lo = T::zero();
    let mut acc_hi = T::zero();
    for c in f.coeffs().iter().rev() {
        let cands = [
            acc_lo.clone() * lo.clone(),
            acc_lo.clone() * hi.clone(),
            acc_hi.clone() * lo.clone(),
            acc_hi.clone() * hi.clone(),
        ];
        let mut mn = cands[0].clone();
        let mut mx = cands[0].clone();
        for v in &cands[1..] {
            if *v < mn {
                mn = v.clone();
            }
            if *v > mx {
                mx = v.clone();
            }
        }
        acc_lo = mn + c.clone();
        acc_hi = mx + c.clone();
    }
    acc_lo
}
