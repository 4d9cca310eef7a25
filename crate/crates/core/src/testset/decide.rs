use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use super::conditions::{check_conditions_thm_main, check_conditions_thm_main2, ConditionReport};
use super::patterns::{enumerate_patterns, restrict, univariate_slice, KPointPattern, RestrictedForm};
use crate::error::{Error, Result};
use crate::numeric::{minimize_restricted, MinimizeOptions};
use crate::poly::univariate_nonneg;
use crate::scalar::{rational_from_f64, serde_text};
use crate::symmetric::PowerSumForm;
use crate::{QPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Nonnegative,
    NotNonnegative,
    UndecidedNumeric,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Nonnegative => "Nonnegative",
            Status::NotNonnegative => "NotNonnegative",
            Status::UndecidedNumeric => "UndecidedNumeric",
        })
    }
}

/// How a single restriction was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Exact: square-free decomposition plus Sturm counting.
    Sturm,
    /// Multistart search on the weighted sphere; not a certificate.
    NumericSphere,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrailEntry {
    pub pattern: KPointPattern,
    /// The restriction read as a polynomial in `a₁` with the other value
    /// set to one (patterns with at most two values).
    pub univariate: Option<QPoly>,
    pub method: Method,
    pub outcome: Status,
    pub numeric_minimum: Option<f64>,
    /// Values `a₁,…,a_s` at which the restriction is negative.
    #[serde(serialize_with = "serde_text::opt_vec")]
    pub values: Option<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    /// Point of `ℚⁿ` with a strictly negative value.
    #[serde(serialize_with = "serde_text::opt_vec")]
    pub witness: Option<Vec<Rational>>,
    pub k: usize,
    pub trail: Vec<TrailEntry>,
    pub conditions: Option<ConditionReport>,
    pub notes: Vec<String>,
}

impl Verdict {
    /// The first restriction that failed, if any.
    pub fn failing_pattern(&self) -> Option<&KPointPattern> {
        self.trail
            .iter()
            .find(|e| e.outcome == Status::NotNonnegative)
            .map(|e| &e.pattern)
    }
}

#[derive(Clone, Debug)]
pub struct DecideOptions {
    /// Restarts for restrictions with three or more values.
    pub restarts: usize,
    pub seed: u64,
    /// Numeric minima in `(−tolerance, 0]` leave the verdict undecided.
    pub tolerance: f64,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            restarts: 16,
            seed: 0,
            tolerance: 1e-7,
        }
    }
}

fn check_pattern(form: &PowerSumForm, pattern: &KPointPattern, opts: &DecideOptions) -> Result<TrailEntry> {
    let rf = restrict(form, pattern)?;
    if pattern.s() <= 2 {
        let uni = univariate_slice(&rf.poly);
        let out = univariate_nonneg(&uni);
        let values = out.witness.map(|x0| {
            let mut v = vec![x0];
            if pattern.s() == 2 {
                v.push(Rational::from_integer(1.into()));
            }
            v
        });
        if let Some(v) = &values {
            if !rf.poly.eval(v).is_negative() {
                return Err(Error::CertificateFailure(format!(
                    "restriction to {pattern} is not negative at its own witness"
                )));
            }
        }
        return Ok(TrailEntry {
            pattern: pattern.clone(),
            univariate: Some(uni),
            method: Method::Sturm,
            outcome: if out.nonnegative {
                Status::Nonnegative
            } else {
                Status::NotNonnegative
            },
            numeric_minimum: None,
            values,
        });
    }
    let res = minimize_restricted(
        form,
        pattern,
        &MinimizeOptions {
            restarts: opts.restarts,
            seed: opts.seed,
            ..MinimizeOptions::default()
        },
    );
    let exact_negative = [24, 40, 52].iter().find_map(|&bits| {
        let v: Vec<Rational> = res.argmin.iter().map(|&a| rational_from_f64(a, bits)).collect();
        rf.poly.eval(&v).is_negative().then_some(v)
    });
    let outcome = if exact_negative.is_some() {
        Status::NotNonnegative
    } else if res.minimum > 0.0 {
        Status::Nonnegative
    } else {
        Status::UndecidedNumeric
    };
    Ok(TrailEntry {
        pattern: pattern.clone(),
        univariate: None,
        method: Method::NumericSphere,
        outcome,
        numeric_minimum: Some(res.minimum),
        values: exact_negative,
    })
}

/// Runs every pattern with at most `k` distinct values. Restrictions with
/// one or two values are decided exactly; larger ones numerically.
pub fn decide_on_k_points(form: &PowerSumForm, k: usize, opts: &DecideOptions) -> Result<Verdict> {
    let k = k.clamp(1, form.n());
    let trail = enumerate_patterns(form.n(), k)
        .par_iter()
        .map(|p| check_pattern(form, p, opts))
        .collect::<Result<Vec<_>>>()?;
    let failing = trail.iter().find(|e| e.outcome == Status::NotNonnegative);
    let status = if failing.is_some() {
        Status::NotNonnegative
    } else if trail.iter().any(|e| e.outcome == Status::UndecidedNumeric) {
        Status::UndecidedNumeric
    } else {
        Status::Nonnegative
    };
    let witness = match failing {
        Some(e) => {
            let values = e.values.as_ref().expect("negative restriction carries values");
            let point = e.pattern.lift(form.n(), values, Rational::from_integer(0.into()));
            if !form.evaluate(&point)?.is_negative() {
                return Err(Error::CertificateFailure(format!(
                    "lifted witness from {} is not negative",
                    e.pattern
                )));
            }
            Some(point)
        }
        None => None,
    };
    Ok(Verdict {
        status,
        witness,
        k,
        trail,
        conditions: None,
        notes: Vec::new(),
    })
}

/// For a restriction with one or two values: its univariate slice and
/// whether that slice is nonnegative.
pub fn univariate_nonneg_of(rf: &RestrictedForm) -> Option<(QPoly, bool)> {
    (rf.pattern.s() <= 2).then(|| {
        let u = univariate_slice(&rf.poly);
        let ok = univariate_nonneg(&u).nonnegative;
        (u, ok)
    })
}

/// Every coefficient positive: the form is a positive combination of
/// products of even power sums, each of which is nonnegative.
pub fn is_positive_combination(form: &PowerSumForm) -> bool {
    !form.is_zero() && form.terms().values().all(|c| c.is_positive())
}

fn with_conditions(
    form: &PowerSumForm,
    report: ConditionReport,
    override_conditions: bool,
    k: usize,
    opts: &DecideOptions,
) -> Result<Verdict> {
    if !report.satisfied && !override_conditions {
        return Err(Error::ConditionsNotSatisfied(Box::new(report)));
    }
    let mut v = decide_on_k_points(form, k, opts)?;
    if !report.satisfied {
        v.notes.push(format!(
            "hypotheses overridden: {}",
            report.violations.join("; ")
        ));
        if v.status == Status::Nonnegative {
            if is_positive_combination(form) {
                v.notes.push(
                    "nonnegative regardless: all coefficients are positive and every power sum of even index is nonnegative"
                        .into(),
                );
            } else {
                v.status = Status::UndecidedNumeric;
                v.notes.push(
                    "nonnegative at the tested k-points only; outside the theorem's hypotheses that proves nothing"
                        .into(),
                );
            }
        }
    }
    v.conditions = Some(report);
    Ok(v)
}

/// Decides a form with one free term on 2-points.
pub fn decide_nonneg_2point(form: &PowerSumForm, override_conditions: bool) -> Result<Verdict> {
    decide_nonneg_2point_with(form, override_conditions, &DecideOptions::default())
}

pub fn decide_nonneg_2point_with(
    form: &PowerSumForm,
    override_conditions: bool,
    opts: &DecideOptions,
) -> Result<Verdict> {
    let report = check_conditions_thm_main(form);
    with_conditions(form, report, override_conditions, 2, opts)
}

/// Decides a form with `m − 2` free terms on (m−1)-points.
pub fn decide_nonneg_mpoint(form: &PowerSumForm, override_conditions: bool) -> Result<Verdict> {
    decide_nonneg_mpoint_with(form, override_conditions, &DecideOptions::default())
}

pub fn decide_nonneg_mpoint_with(
    form: &PowerSumForm,
    override_conditions: bool,
    opts: &DecideOptions,
) -> Result<Verdict> {
    let report = check_conditions_thm_main2(form);
    let mut violations = Vec::new();
    let free = super::conditions::form_shape(form, &mut violations).map_or(0, |s| s.free.len());
    let m = free + 2;
    with_conditions(form, report, override_conditions, m - 1, opts)
}

/// Baseline valid for every even symmetric form: a form of degree `2d'`
/// is nonnegative iff it is nonnegative on `⌊d'/2⌋`-points.
pub fn timofte_check(form: &PowerSumForm) -> Result<Verdict> {
    timofte_check_with(form, &DecideOptions::default())
}

pub fn timofte_k(form: &PowerSumForm) -> usize {
    ((form.degree() / 4) as usize).clamp(1, form.n())
}

pub fn timofte_check_with(form: &PowerSumForm, opts: &DecideOptions) -> Result<Verdict> {
    decide_on_k_points(form, timofte_k(form), opts)
}
