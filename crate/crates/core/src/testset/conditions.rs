//! Structural hypotheses under which 2-points, respectively (m−1)-points,
//! form a test set.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::symmetric::{anchor_terms, PowerSumForm, PowerSumTerm};
use crate::Rational;

/// Which test-set theorem a report refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// One free term, 2-points suffice.
    Main,
    /// `m − 2` free terms, (m−1)-points suffice.
    Main2,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::Main => "main",
            Theorem::Main2 => "main2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub theorem: Theorem,
    pub satisfied: bool,
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

impl ConditionReport {
    fn new(theorem: Theorem, violations: Vec<String>, notes: Vec<String>) -> Self {
        ConditionReport {
            theorem,
            satisfied: violations.is_empty(),
            violations,
            notes,
        }
    }
}

/// The form split into `d`, its free terms and anchor coefficients.
#[derive(Clone, Debug)]
pub struct FormShape {
    pub d: u32,
    pub free: Vec<(PowerSumTerm, Rational)>,
    /// Coefficients of `M_2^{2d}`, `M_{2d}²`, `M_{2d}M_2^d`.
    pub anchors: [Rational; 3],
}

/// Splits off the anchor terms, collecting shape violations.
pub fn form_shape(form: &PowerSumForm, violations: &mut Vec<String>) -> Option<FormShape> {
    let deg = form.degree();
    if !deg.is_multiple_of(4) {
        violations.push(format!("degree {deg} is not divisible by 4"));
        return None;
    }
    let d = deg / 4;
    if d < 2 {
        violations.push(format!(
            "degree {deg} gives d = {d}; the anchors M2^{{2d}}, M{{2d}}^2, M{{2d}}M2^d coincide unless d ≥ 2"
        ));
        return None;
    }
    let anchors = anchor_terms(d);
    let names = ["β", "γ", "δ"];
    for (t, name) in anchors.iter().zip(names) {
        if form.coefficient(t) == Rational::from_integer(0.into()) {
            violations.push(format!("anchor coefficient zero: {name} on {t}"));
        }
    }
    let free = form
        .terms()
        .iter()
        .rev()
        .filter(|(t, _)| !anchors.contains(t))
        .map(|(t, c)| (t.clone(), c.clone()))
        .collect();
    Some(FormShape {
        d,
        free,
        anchors: anchors.map(|t| form.coefficient(&t)),
    })
}

/// Sign of the permutation sorting `v` into strictly decreasing order, or
/// `None` when two entries coincide.
pub fn sorting_sign(v: &[u32]) -> Option<i32> {
    let mut inversions = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            match v[i].cmp(&v[j]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => inversions += 1,
                std::cmp::Ordering::Greater => {}
            }
        }
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Violations of the single-free-term conditions for a term of degree
/// `4d`: some factor index lies outside `{2, 2d}`, and either every index
/// is at most `2d` or all other indices lie in `{2, 2d}`. The product is
/// commutative, so the distinguished factor may be any of them.
pub fn check_free_term(term: &PowerSumTerm, d: u32) -> Vec<String> {
    let mut violations = Vec::new();
    if term.degree() != 4 * d {
        violations.push(format!(
            "term {term} has degree {}, expected {}",
            term.degree(),
            4 * d
        ));
    }
    let special = [2, 2 * d];
    let outside: Vec<u32> = term.indices().filter(|j| !special.contains(j)).collect();
    if outside.is_empty() {
        violations.push(format!("j₁ ∈ {{2,2d}} for {term} (2d = {})", 2 * d));
    } else if outside.len() > 1 && term.indices().any(|j| j > 2 * d) {
        violations.push(format!(
            "neither j₁,…,j_r ≤ 2d nor j₂,…,j_r ∈ {{2,2d}} for {term} (2d = {})",
            2 * d
        ));
    }
    violations
}

/// Hypotheses for the 2-point test set: `n ≥ 3`, exactly one free term
/// besides the three nonzero anchors, and the free-term conditions.
pub fn check_conditions_thm_main(form: &PowerSumForm) -> ConditionReport {
    let mut violations = Vec::new();
    let mut notes = Vec::new();
    if form.n() < 3 {
        violations.push(format!("n < 3 (n = {})", form.n()));
    }
    if let Some(shape) = form_shape(form, &mut violations) {
        match shape.free.as_slice() {
            [] => {
                violations.push("no free term besides the anchors".into());
                violations.push("j₁ ∈ {2,2d}: there is no factor outside the anchors".into());
            }
            [(t, _)] => {
                violations.extend(check_free_term(t, shape.d));
                notes.push(format!("free term {t}, 2d = {}", 2 * shape.d));
            }
            many => violations.push(format!(
                "expected exactly one free term, found {}: {}",
                many.len(),
                many.iter().map(|(t, _)| t.to_string()).collect::<Vec<_>>().join(", ")
            )),
        }
    }
    ConditionReport::new(Theorem::Main, violations, notes)
}

/// Whether the free terms can be ordered so that each has a factor index
/// outside `{2, 2d}` and outside every index of the earlier terms. The set
/// of forbidden indices depends only on which terms come earlier, so the
/// search runs over subsets.
pub fn admissible_order(terms: &[PowerSumTerm], d: u32) -> Option<Vec<usize>> {
    let m = terms.len();
    if m > 20 {
        return None;
    }
    let full = (1usize << m) - 1;
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; 1 << m];
    let mut reached = vec![false; 1 << m];
    reached[0] = true;
    for subset in 0..=full {
        if !reached[subset] {
            continue;
        }
        let mut forbidden: BTreeSet<u32> = [2, 2 * d].into();
        for (i, t) in terms.iter().enumerate() {
            if subset & (1 << i) != 0 {
                forbidden.extend(t.indices());
            }
        }
        for (i, t) in terms.iter().enumerate() {
            let next = subset | (1 << i);
            if next == subset || reached[next] {
                continue;
            }
            if t.indices().any(|j| !forbidden.contains(&j)) {
                reached[next] = true;
                parent[next] = Some((subset, i));
            }
        }
    }
    if !reached[full] {
        return None;
    }
    let mut order = Vec::with_capacity(m);
    let mut cur = full;
    while let Some((prev, i)) = parent[cur] {
        order.push(i);
        cur = prev;
    }
    order.reverse();
    Some(order)
}

/// All tuples `(j₁, …, j_{m−2}, 2, 2d)` taking one factor index from each
/// free term.
pub fn psi_tuples(terms: &[PowerSumTerm], d: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for t in terms {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                t.indices().map(move |j| {
                    let mut v = prefix.clone();
                    v.push(j);
                    v
                })
            })
            .collect();
    }
    for v in &mut out {
        v.push(2);
        v.push(2 * d);
    }
    out
}

/// Hypotheses for the (m−1)-point test set with `m − 2` free terms.
pub fn check_conditions_thm_main2(form: &PowerSumForm) -> ConditionReport {
    let mut violations = Vec::new();
    let mut notes = Vec::new();
    if let Some(shape) = form_shape(form, &mut violations) {
        let d = shape.d;
        let terms: Vec<PowerSumTerm> = shape.free.iter().map(|(t, _)| t.clone()).collect();
        let m = terms.len() + 2;
        if terms.is_empty() {
            violations.push("no free term besides the anchors".into());
        }
        let n = form.n();
        if m > n {
            violations.push(format!("m > n (m = {m}, n = {n})"));
        } else if m + 2 > n {
            notes.push(format!(
                "m ≤ n holds but m+2 ≤ n does not (m = {m}, n = {n}); the weaker bound m ≤ n is enforced"
            ));
        }
        if !terms.is_empty() {
            match admissible_order(&terms, d) {
                Some(order) => notes.push(format!(
                    "admissible term order: {}",
                    order.iter().map(|&i| terms[i].to_string()).collect::<Vec<_>>().join(", ")
                )),
                None => violations.push(
                    "no ordering of the free terms gives each a j_(i,1) ∉ {2,2d} ∪ (indices of earlier terms)"
                        .into(),
                ),
            }
            let tuples = psi_tuples(&terms, d);
            let signed: Vec<(&Vec<u32>, i32)> = tuples
                .iter()
                .filter_map(|v| sorting_sign(v).map(|s| (v, s)))
                .collect();
            let pos = signed.iter().find(|(_, s)| *s == 1);
            let neg = signed.iter().find(|(_, s)| *s == -1);
            match (pos, neg) {
                (Some((p, _)), Some((q, _))) => violations.push(format!(
                    "Ψ not identically oriented ordered: {p:?} and {q:?} sort with opposite signs"
                )),
                (None, None) => violations.push(
                    "every tuple of Ψ has a repeated entry, so no minor is nonzero".into(),
                ),
                (Some(_), None) | (None, Some(_)) => notes.push(format!(
                    "Ψ has {} tuples, {} with distinct entries, all of sorting sign {}",
                    tuples.len(),
                    signed.len(),
                    signed[0].1
                )),
            }
        }
    }
    ConditionReport::new(Theorem::Main2, violations, notes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn with_anchors(n: usize, d: u32, free: &[PowerSumTerm]) -> PowerSumForm {
        let mut terms: Vec<(PowerSumTerm, Rational)> =
            anchor_terms(d).into_iter().map(|t| (t, int(1))).collect();
        terms.extend(free.iter().map(|t| (t.clone(), rat(3, 2))));
        PowerSumForm::from_terms(n, 4 * d, terms).unwrap()
    }

    #[test]
    fn example_satisfies_main() {
        let f = with_anchors(3, 3, &[PowerSumTerm::power(4, 3)]);
        assert!(check_conditions_thm_main(&f).satisfied);
        assert!(check_conditions_thm_main2(&f).satisfied);
    }

    #[test]
    fn missing_anchor_and_bad_free_term() {
        let mut f = with_anchors(3, 3, &[PowerSumTerm::power(4, 3)]);
        f = f.try_add(&PowerSumForm::from_terms(
            3,
            12,
            [(PowerSumTerm::new([(6, 1), (2, 3)]).unwrap(), int(-1))],
        )
        .unwrap())
        .unwrap();
        let r = check_conditions_thm_main(&f);
        assert!(!r.satisfied);
        assert!(r.violations[0].contains("anchor coefficient zero"));
        let v = check_free_term(&PowerSumTerm::power(6, 2), 3);
        assert!(v[0].contains("j₁ ∈ {2,2d}"));
        let anchors_only = with_anchors(3, 3, &[]);
        assert!(check_conditions_thm_main(&anchors_only)
            .violations
            .iter()
            .any(|v| v.contains("j₁ ∈ {2,2d}")));
    }

    #[test]
    fn alternative_condition() {
        // 2d = 8: M10 M6 has two indices outside {2, 8} and one above 8.
        let bad = PowerSumTerm::new([(10, 1), (6, 1)]).unwrap();
        assert_eq!(check_free_term(&bad, 4).len(), 1);
        // M10 M2^3: single outside index.
        assert!(check_free_term(&PowerSumTerm::new([(10, 1), (2, 3)]).unwrap(), 4).is_empty());
        // M6 M4 M2^3: all ≤ 8.
        assert!(check_free_term(&PowerSumTerm::new([(6, 1), (4, 1), (2, 3)]).unwrap(), 4).is_empty());
    }

    #[test]
    fn sorting_signs() {
        assert_eq!(sorting_sign(&[3, 2, 1]), Some(1));
        assert_eq!(sorting_sign(&[2, 3, 1]), Some(-1));
        assert_eq!(sorting_sign(&[2, 2, 1]), None);
        assert_eq!(
            sorting_sign(&[4, 8, 2, 12]).unwrap() * sorting_sign(&[8, 4, 2, 12]).unwrap(),
            -1
        );
    }

    #[test]
    fn psi_with_opposite_orientations() {
        // 4d = 24: (4, 8, 2, 12) from M8 M4^4 and (8, 4, 2, 12) from M10 M8 M4 M2.
        let f1 = PowerSumTerm::new([(8, 1), (4, 4)]).unwrap();
        let f2 = PowerSumTerm::new([(10, 1), (8, 1), (4, 1), (2, 1)]).unwrap();
        let form = with_anchors(8, 6, &[f1, f2]);
        let r = check_conditions_thm_main2(&form);
        assert!(!r.satisfied);
        assert!(r.violations.iter().any(|v| v.contains("Ψ not identically oriented ordered")));
    }

    #[test]
    fn single_power_of_m4() {
        for d in 3..=6 {
            let f = with_anchors(3, d, &[PowerSumTerm::power(4, d)]);
            assert!(check_conditions_thm_main2(&f).satisfied, "d = {d}");
        }
    }

    #[test]
    fn m_bound() {
        let f = with_anchors(3, 4, &[PowerSumTerm::power(4, 4), PowerSumTerm::new([(6, 2), (2, 2)]).unwrap()]);
        let r = check_conditions_thm_main2(&f);
        assert!(r.violations.iter().any(|v| v.starts_with("m > n")));
        let r = check_conditions_thm_main2(&f.with_n(4).unwrap());
        assert!(r.notes.iter().any(|v| v.contains("m+2 ≤ n")));
    }
}
