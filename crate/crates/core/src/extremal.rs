//! A form that is nonnegative at every 2-point but negative somewhere, and
//! the resulting non-convex pair of 2-point-decidable forms.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobian::phi_map_rank;
use crate::poly::{isolate_real_roots, univariate_nonneg};
use crate::scalar::{rational_from_f64, serde_text, Scalar};
use crate::symmetric::{anchor_terms, power_sum_value, PowerSumForm, PowerSumTerm};
use crate::testset::{
    check_conditions_thm_main, decide_on_k_points, enumerate_patterns, restrict, univariate_slice,
    ConditionReport, DecideOptions, KPointPattern, Status, Verdict,
};
use crate::{QPoly, Rational};

/// `f₁ = M_{2d−2}² M_2²`
pub fn f1(d: u32) -> PowerSumTerm {
    PowerSumTerm::new([(2 * d - 2, 2), (2, 2)]).expect("even indices")
}

/// `f₂ = M_{2d−2} M_2^{d+1}`
pub fn f2(d: u32) -> PowerSumTerm {
    PowerSumTerm::new([(2 * d - 2, 1), (2, d + 1)]).expect("even indices")
}

/// `p_v = (M̄_2^d M_{2d} − M̄_{2d} M_2^d)² + (M̄_2^d M_{2d−2} M_2 − M̄_{2d−2} M̄_2 M_2^d)²`
/// expanded in the power-sum basis, bars denoting values at `v`.
pub fn build_pv(v: &[Rational], d: u32) -> Result<PowerSumForm> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("need d ≥ 3, got d = {d}")));
    }
    if v.iter().all(Zero::is_zero) {
        return Err(Error::InvalidInput("base point must be nonzero".into()));
    }
    let a = power_sum_value(2, v);
    let b = power_sum_value(2 * d - 2, v);
    let c = power_sum_value(2 * d, v);
    let ad = a.pow_u32(d);
    let two = Rational::from_integer(2.into());
    let [t_beta, t_gamma, t_delta] = anchor_terms(d);
    PowerSumForm::from_terms(
        v.len(),
        4 * d,
        [
            (t_gamma, &ad * &ad),
            (t_delta, -(&two * &ad * &c)),
            (t_beta, &c * &c + &b * &b * &a * &a),
            (f1(d), &ad * &ad),
            (f2(d), -(&two * &ad * &a * &b)),
        ],
    )
}

/// Whether `f₁, f₂` are products of basis power sums for this `n`, as the
/// construction assumes.
pub fn pv_dimension_note(n: usize, d: u32) -> Option<String> {
    (n + 1 != d as usize && n != d as usize).then(|| {
        format!("n = {n} is outside {{d−1, d}} = {{{}, {d}}}; the construction is only claimed there", d - 1)
    })
}

/// Certified lower bound for one pattern.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternBound {
    pub pattern: KPointPattern,
    /// `p / M_2^{2d} ≥ bound` on this pattern, certified by Sturm.
    #[serde(serialize_with = "serde_text::one")]
    pub bound: Rational,
    /// Smallest sampled value of the ratio.
    pub estimate: f64,
}

fn f64_of(q: &Rational) -> f64 {
    Scalar::to_f64(q)
}

/// Certified rational `L > 0` with `g − L·h ≥ 0` on `ℝ`, or `None` when
/// the infimum of `g/h` does not look positive. `h` must be positive.
fn ratio_lower_bound(g: &QPoly, h: &QPoly) -> Option<(Rational, f64)> {
    let n = &(&g.derivative() * h) - &(g * &h.derivative());
    let mut samples = vec![Rational::zero()];
    let width = Rational::new(1.into(), (1u64 << 24).into());
    for r in isolate_real_roots(&n, Some(&width)) {
        samples.push((r.lo + r.hi) / Rational::from_integer(2.into()));
    }
    let mut est = samples
        .iter()
        .filter(|x| !h.eval(x).is_zero())
        .map(|x| g.eval(x) / h.eval(x))
        .fold(None::<Rational>, |m, v| Some(m.map_or(v.clone(), |m| if v < m { v } else { m })))
        .unwrap_or_else(|| g.leading_coeff() / h.leading_coeff());
    if g.degree() == h.degree() {
        let lim = g.leading_coeff() / h.leading_coeff();
        if lim < est {
            est = lim;
        }
    }
    if !est.is_positive() {
        return None;
    }
    let est_f = f64_of(&est);
    let mut l = rational_from_f64(est_f * (1.0 - 1e-6), 60);
    if !l.is_positive() {
        l = est.clone() / Rational::from_integer(2.into());
    }
    for _ in 0..64 {
        let diff = g - &h.scale(&l);
        if univariate_nonneg(&diff).nonnegative {
            return Some((l, est_f));
        }
        l /= Rational::from_integer(2.into());
    }
    None
}

fn restricted_univariate(form: &PowerSumForm, pattern: &KPointPattern) -> Result<QPoly> {
    Ok(univariate_slice(&restrict(form, pattern)?.poly))
}

/// Certified `κ` with `p ≥ κ · M_2^{2d}` at every 2-point, the minimum of
/// the per-pattern bounds.
pub fn two_point_kappa(form: &PowerSumForm) -> Result<Option<(Rational, Vec<PatternBound>)>> {
    let m2 = PowerSumForm::from_terms(
        form.n(),
        form.degree(),
        [(PowerSumTerm::power(2, form.degree() / 2), Rational::one())],
    )?;
    let mut bounds = Vec::new();
    for pattern in enumerate_patterns(form.n(), 2) {
        let g = restricted_univariate(form, &pattern)?;
        let h = restricted_univariate(&m2, &pattern)?;
        match ratio_lower_bound(&g, &h) {
            Some((bound, estimate)) => bounds.push(PatternBound {
                pattern,
                bound,
                estimate,
            }),
            None => return Ok(None),
        }
    }
    let kappa = bounds
        .iter()
        .map(|b| b.bound.clone())
        .reduce(|a, b| if b < a { b } else { a })
        .expect("patterns exist");
    Ok(Some((kappa, bounds)))
}

/// Base point together with its 2-point bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasePoint {
    #[serde(serialize_with = "serde_text::vec")]
    pub v: Vec<Rational>,
    /// `M̄_{2d−2} / M̄_2^{d−1}`.
    #[serde(serialize_with = "serde_text::one")]
    pub theta: Rational,
    #[serde(serialize_with = "serde_text::one")]
    pub kappa: Rational,
    pub bounds: Vec<PatternBound>,
    /// `p_v / M̄_2^{2d}`, i.e. `p_v` for `v` moved to the unit sphere.
    pub pv: PowerSumForm,
}

fn candidates(n: usize, max_coord: i64) -> Vec<Vec<i64>> {
    // Weakly decreasing tuples over 0..=max_coord, small maxima first.
    fn go(n: usize, cap: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for x in (0..=cap).rev() {
            prefix.push(x);
            go(n, x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for top in 1..=max_coord {
        let mut found = Vec::new();
        go(n, top, &mut vec![top], &mut found);
        found.retain(|c| {
            let mut pos: Vec<i64> = c.iter().copied().filter(|&x| x > 0).collect();
            pos.dedup();
            pos.len() >= 3
        });
        found.reverse();
        out.extend(found);
    }
    out
}

/// Tries `v` with `phi` rank 3 and a positive certified 2-point bound.
pub fn evaluate_base_point(v: &[Rational], d: u32) -> Result<Option<BasePoint>> {
    if phi_map_rank(v, d)? < 3 {
        return Ok(None);
    }
    let raw = build_pv(v, d)?;
    let a = power_sum_value(2, v);
    let pv = raw.scale(&(Rational::one() / a.pow_u32(2 * d)));
    let theta = power_sum_value(2 * d - 2, v) / a.pow_u32(d - 1);
    Ok(two_point_kappa(&pv)?.map(|(kappa, bounds)| BasePoint {
        v: v.to_vec(),
        theta,
        kappa,
        bounds,
        pv,
    }))
}

/// Searches small integer points with at least three distinct positive
/// coordinates.
pub fn select_base_point(n: usize, d: u32) -> Result<BasePoint> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("need d ≥ 3, got d = {d}")));
    }
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "need n ≥ 3 for a point that is not a 2-point, got n = {n}"
        )));
    }
    let max_coord = 6;
    for c in candidates(n, max_coord) {
        let v: Vec<Rational> = c.iter().map(|&x| Rational::from_integer(x.into())).collect();
        if let Some(bp) = evaluate_base_point(&v, d)? {
            return Ok(bp);
        }
    }
    Err(Error::SearchExhausted(format!(
        "integer points with coordinates ≤ {max_coord}, n = {n}, d = {d}"
    )))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalWitness {
    pub n: usize,
    pub d: u32,
    pub base: BasePoint,
    #[serde(serialize_with = "serde_text::one")]
    pub lambda: Rational,
    /// `p_{v,λ} = p_v − λ M_2^{2d}`.
    pub form: PowerSumForm,
    #[serde(serialize_with = "serde_text::one")]
    pub value_at_v: Rational,
    pub two_point_verdict: Verdict,
    pub conditions: ConditionReport,
    pub transcript: Vec<String>,
}

/// Builds `p_{v,λ}` and checks its three certificate legs: negative at `v`,
/// nonnegative on every 2-point restriction (exact), and outside the
/// single-free-term hypotheses.
pub fn build_counterexample(n: usize, d: u32) -> Result<ExtremalWitness> {
    let mut transcript = Vec::new();
    if let Some(note) = pv_dimension_note(n, d) {
        transcript.push(format!("warning: {note}"));
    }
    let base = select_base_point(n, d)?;
    transcript.push(format!(
        "base point v = ({}), φ-rank 3",
        base.v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
    ));
    transcript.push(format!("κ = {} (certified lower bound of p_v / M2^{} on 2-points)", base.kappa, 2 * d));
    let lambda = &base.kappa / Rational::from_integer(2.into());
    let shift = PowerSumForm::from_terms(n, 4 * d, [(PowerSumTerm::power(2, 2 * d), -lambda.clone())])?;
    let form = base.pv.try_add(&shift)?;
    transcript.push(format!("λ = κ/2 = {lambda}"));

    let value_at_v = form.evaluate(&base.v)?;
    if !value_at_v.is_negative() {
        return Err(Error::CertificateFailure(format!("p(v) = {value_at_v} is not negative")));
    }
    transcript.push(format!("leg (a): p(v) = {value_at_v} < 0"));

    let verdict = decide_on_k_points(&form, 2, &DecideOptions::default())?;
    if verdict.status != Status::Nonnegative {
        return Err(Error::CertificateFailure(
            "some 2-point restriction is negative".into(),
        ));
    }
    transcript.push(format!(
        "leg (b): all {} restrictions to 2-point patterns are nonnegative (Sturm)",
        verdict.trail.len()
    ));

    let conditions = check_conditions_thm_main(&form);
    if conditions.satisfied {
        return Err(Error::CertificateFailure(
            "the form unexpectedly satisfies the single-free-term hypotheses".into(),
        ));
    }
    transcript.push(format!("leg (c): hypotheses fail: {}", conditions.violations.join("; ")));

    Ok(ExtremalWitness {
        n,
        d,
        base,
        lambda,
        form,
        value_at_v,
        two_point_verdict: verdict,
        conditions,
        transcript,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonconvexityTriple {
    pub p: PowerSumForm,
    pub p1: PowerSumForm,
    pub p2: PowerSumForm,
    pub report1: ConditionReport,
    pub report2: ConditionReport,
    pub midpoint_exact: bool,
}

/// Splits `p = p_{v,λ}` as `½p₁ + ½p₂`, where `pᵢ` keeps the anchors and
/// doubles one of the two free terms.
pub fn split_midpoint(p: &PowerSumForm, d: u32) -> Result<NonconvexityTriple> {
    let anchors = anchor_terms(d);
    let two = Rational::from_integer(2.into());
    let build = |free: PowerSumTerm| {
        PowerSumForm::from_terms(
            p.n(),
            p.degree(),
            anchors
                .iter()
                .map(|t| (t.clone(), p.coefficient(t)))
                .chain([(free.clone(), &two * p.coefficient(&free))]),
        )
    };
    let p1 = build(f1(d))?;
    let p2 = build(f2(d))?;
    let half = Rational::new(1.into(), 2.into());
    let mid = p1.scale(&half).try_add(&p2.scale(&half))?;
    Ok(NonconvexityTriple {
        midpoint_exact: mid == *p,
        report1: check_conditions_thm_main(&p1),
        report2: check_conditions_thm_main(&p2),
        p: p.clone(),
        p1,
        p2,
    })
}

pub fn nonconvexity_triple(n: usize, d: u32) -> Result<NonconvexityTriple> {
    let w = build_counterexample(n, d)?;
    let t = split_midpoint(&w.form, d)?;
    if !t.midpoint_exact || !t.report1.satisfied || !t.report2.satisfied {
        return Err(Error::CertificateFailure(
            "midpoint identity or hypotheses of p₁, p₂ failed".into(),
        ));
    }
    Ok(t)
}
