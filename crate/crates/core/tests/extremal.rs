use num_traits::Signed;

use symtest_core::extremal::{build_counterexample, nonconvexity_triple, pv_dimension_note};
use symtest_core::jacobian::phi_map_rank;
use symtest_core::numeric::minimize_on_sphere;
use symtest_core::scalar::Scalar;
use symtest_core::testset::{decide_nonneg_2point, Status};

#[test]
fn quartic_in_four_variables() {
    let w = build_counterexample(4, 4).unwrap();
    assert!(w.value_at_v.is_negative());
    assert_eq!(phi_map_rank(&w.base.v, 4).unwrap(), 3);
    assert_eq!(w.two_point_verdict.status, Status::Nonnegative);
    assert!(!w.conditions.satisfied);
}

#[test]
fn override_reports_two_points_but_not_a_proof() {
    let w = build_counterexample(3, 3).unwrap();
    let v = decide_nonneg_2point(&w.form, true).unwrap();
    assert!(v.trail.iter().all(|e| e.outcome == Status::Nonnegative));
    assert_eq!(v.status, Status::UndecidedNumeric);
    assert!(w.form.evaluate(&w.base.v).unwrap().is_negative());
}

#[test]
fn sphere_minimum_sits_at_the_base_point() {
    let w = build_counterexample(3, 3).unwrap();
    let res = minimize_on_sphere(&w.form, 64, 0);
    let lambda = Scalar::to_f64(&w.lambda);
    assert!(res.minimum < 0.0);
    assert!((res.minimum + lambda).abs() < 1e-6 * lambda.max(1.0));
    let v: Vec<f64> = w.base.v.iter().map(Scalar::to_f64).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut target: Vec<f64> = v.iter().map(|x| x / norm).collect();
    let mut found: Vec<f64> = res.argmin.iter().map(|x| x.abs()).collect();
    target.sort_by(f64::total_cmp);
    found.sort_by(f64::total_cmp);
    for (a, b) in target.iter().zip(&found) {
        assert!((a - b).abs() < 1e-6, "{target:?} vs {found:?}");
    }
}

#[test]
fn triple_and_dimension_notes() {
    let t = nonconvexity_triple(3, 3).unwrap();
    assert!(t.midpoint_exact && t.report1.satisfied && t.report2.satisfied);
    assert!(pv_dimension_note(3, 3).is_none());
    assert!(pv_dimension_note(3, 4).is_none());
    assert!(pv_dimension_note(5, 3).is_some());
    assert!(build_counterexample(2, 3).is_err());
}
