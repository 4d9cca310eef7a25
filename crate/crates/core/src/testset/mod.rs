//! Hypothesis checks, k-point restriction and the exact decision procedure.

mod conditions;
mod decide;
mod patterns;

pub use conditions::{
    admissible_order, check_conditions_thm_main, check_conditions_thm_main2, check_free_term,
    form_shape, psi_tuples, sorting_sign, ConditionReport, FormShape, Theorem,
};
pub use decide::{
    decide_nonneg_2point, decide_nonneg_2point_with, decide_nonneg_mpoint,
    decide_nonneg_mpoint_with, decide_on_k_points, is_positive_combination, timofte_check,
    timofte_check_with, timofte_k, univariate_nonneg_of, DecideOptions, Method, Status, TrailEntry, Verdict,
};
pub use patterns::{dehomogenize, enumerate_patterns, restrict, KPointPattern, RestrictedForm};
pub(crate) use patterns::univariate_slice;
