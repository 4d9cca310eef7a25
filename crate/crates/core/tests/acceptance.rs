//! The nine acceptance criteria, one PASS/FAIL line each.
//!
//! Runs with its own harness so the lines are always printed:
//! `cargo test -p symtest-core --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symtest_core::extremal::{build_counterexample, split_midpoint};
use symtest_core::jacobian::{
    minor_factorization, rank_at, verify_factorization, JacobianSpec,
};
use symtest_core::numeric::{minimize_on_sphere, two_point_realization};
use symtest_core::partition::partitions;
use symtest_core::poly::univariate_nonneg;
use symtest_core::region::{scan_region, RegionScanSpec, RegionTemplate, ScanMethod};
use symtest_core::scalar::{int, rat};
use symtest_core::schur::{schur_by_determinant, schur_by_kostka};
use symtest_core::symmetric::{anchor_terms, enumerate_basis, power_sum_value};
use symtest_core::testset::{
    check_conditions_thm_main, check_conditions_thm_main2, check_free_term, decide_nonneg_2point,
    dehomogenize, enumerate_patterns, restrict, sorting_sign, KPointPattern, Status,
};
use symtest_core::{Partition, PowerSumForm, PowerSumTerm, Rational};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn example(n: usize) -> PowerSumForm {
    PowerSumForm::from_terms(
        n,
        12,
        [
            (PowerSumTerm::power(4, 3), int(1)),
            (PowerSumTerm::power(2, 6), rat(-1, 10)),
            (PowerSumTerm::power(6, 2), int(1)),
            (PowerSumTerm::new([(6, 1), (2, 3)]).unwrap(), int(1)),
        ],
    )
    .unwrap()
}

fn c1_restriction() -> Outcome {
    let p = example(3);
    let expect = [
        ([1, 1], [rat(29, 10), rat(12, 5), rat(9, 2), int(2), rat(9, 2), rat(12, 5), rat(29, 10)]),
        ([2, 1], [rat(108, 5), rat(24, 5), int(0), int(-2), int(12), rat(24, 5), rat(29, 10)]),
    ];
    for (m, coeffs) in expect {
        let pat = KPointPattern::new(m.to_vec()).map_err(err)?;
        let u = dehomogenize(&restrict(&p, &pat).map_err(err)?).map_err(err)?;
        let got: Vec<Rational> = (0..=6).rev().map(|k| u.coeff(2 * k)).collect();
        ensure(got == coeffs, format!("pattern {pat}: got {got:?}"))?;
        ensure((0..=6).all(|k| u.coeff(2 * k + 1).is_zero()), "odd coefficient")?;
    }
    Ok("(1,1) and (2,1) coefficient vectors bit-exact".into())
}

fn c2_verdicts() -> Outcome {
    let v3 = decide_nonneg_2point(&example(3), false).map_err(err)?;
    ensure(v3.status == Status::Nonnegative, format!("n=3 gave {}", v3.status))?;
    let p4 = example(4);
    let v4 = decide_nonneg_2point(&p4, false).map_err(err)?;
    ensure(v4.status == Status::NotNonnegative, format!("n=4 gave {}", v4.status))?;
    let w = v4.witness.ok_or("no witness")?;
    let val = p4.evaluate(&w).map_err(err)?;
    ensure(val.is_negative(), "witness value not negative")?;
    Ok(format!(
        "n=3 Nonnegative; n=4 NotNonnegative, p({}) = {val}",
        w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
    ))
}

fn c3_region() -> Outcome {
    let spec = RegionScanSpec::cube(RegionTemplate::degree_twelve(4), -4, 4).map_err(err)?;
    let res = scan_region(&spec).map_err(err)?;
    ensure(res.rows.len() == 729, format!("{} rows", res.rows.len()))?;
    let mut mismatches = Vec::new();
    let mut inconsistent = Vec::new();
    let mut fallback = 0;
    for r in &res.rows {
        let all_nonzero = !r.alpha.is_zero() && !r.beta.is_zero() && !r.gamma.is_zero();
        if all_nonzero {
            let inside = !r.beta.is_negative()
                && !(&r.alpha + &r.beta + &r.gamma + Rational::one()).is_negative();
            let expect = if inside { Status::Nonnegative } else { Status::NotNonnegative };
            if r.method != ScanMethod::TwoPoint || r.verdict != expect {
                mismatches.push(format!("({},{},{}) {}", r.alpha, r.beta, r.gamma, r.verdict));
            }
        } else {
            fallback += 1;
            if r.annotation.is_none() || r.numerically_consistent(1e-7) != Some(true) {
                inconsistent.push(format!(
                    "({},{},{}) {} min {:?}",
                    r.alpha, r.beta, r.gamma, r.verdict, r.numeric_minimum
                ));
            }
        }
    }
    ensure(
        mismatches.is_empty() && inconsistent.is_empty(),
        format!("mismatches {mismatches:?}; inconsistent fallback {inconsistent:?}"),
    )?;
    Ok(format!(
        "{} theorem points match the polyhedron; {fallback} zero-coefficient points annotated and consistent ({} Nonnegative, {} NotNonnegative, {} undecided overall)",
        729 - fallback,
        res.summary.nonnegative,
        res.summary.not_nonnegative,
        res.summary.undecided
    ))
}

fn c4_schur() -> Outcome {
    let mut count = 0;
    for w in 0..=10 {
        for lambda in partitions(w, 4, w) {
            let l = 4;
            let a = schur_by_determinant(&lambda, l).map_err(err)?;
            let b = schur_by_kostka(&lambda, l).map_err(err)?;
            ensure(a == b, format!("S_{lambda} differs"))?;
            count += 1;
        }
    }
    Ok(format!("{count} partitions agree in 4 variables"))
}

fn c5_lemma_factorization() -> Outcome {
    let mut checked = 0;
    for d in [3u32, 4] {
        for j1 in (4..=4 * d).step_by(2).filter(|&j| j != 2 * d) {
            let free = PowerSumTerm::new([(j1, 1), (2, (4 * d - j1) / 2)]).map_err(err)?;
            ensure(check_free_term(&free, d).is_empty(), format!("{free} invalid"))?;
            let spec = JacobianSpec::with_anchors(vec![free.clone()], d, 3).map_err(err)?;
            let f = minor_factorization(&spec, 3).map_err(err)?;
            ensure(f.summands.len() == 1, format!("{free}: {} summands", f.summands.len()))?;
            let s = &f.summands[0];
            let rule = if j1 < 2 * d {
                vec![2 * d - 3, j1 - 2, 1]
            } else {
                vec![j1 - 3, 2 * d - 2, 1]
            };
            ensure(
                s.schur_index == Partition::new(rule.clone()).map_err(err)?,
                format!("{free}: index {} vs rule {rule:?}", s.schur_index),
            )?;
            let sign = sorting_sign(&[j1 - 1, 1, 2 * d - 1]).ok_or("repeated exponents")?;
            ensure(s.sign == sign, format!("{free}: sign {} vs {sign}", s.sign))?;
            ensure(verify_factorization(&f), format!("{free}: symbolic identity fails"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} free terms (2d = 6, 8): index rule, sign and exact expansion"))
}

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rational {
    let q = rng.gen_range(1..=den);
    rat(rng.gen_range(lo * q..=hi * q), q)
}

fn valid_free_terms(n: usize, d: u32) -> Vec<PowerSumTerm> {
    let anchors = anchor_terms(d);
    enumerate_basis(n, 4 * d)
        .into_iter()
        .filter(|t| !anchors.contains(t) && check_free_term(t, d).is_empty())
        .collect()
}

fn c6_rank() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut violations = Vec::new();
    let spec_for = |rng: &mut ChaCha8Rng| {
        let d = rng.gen_range(3..=4u32);
        let n = rng.gen_range(3..=6usize);
        let free = valid_free_terms(n, d);
        let t = free[rng.gen_range(0..free.len())].clone();
        JacobianSpec::with_anchors(vec![t], d, n).unwrap()
    };
    for _ in 0..200 {
        let spec = spec_for(&mut rng);
        let m1 = rng.gen_range(1..spec.n);
        let m2 = rng.gen_range(0..=spec.n - m1);
        let (a, b) = (random_rational(&mut rng, -5, 5, 6), random_rational(&mut rng, -5, 5, 6));
        let pat = if m2 == 0 { vec![m1] } else { vec![m1, m2] };
        let vals = if m2 == 0 { vec![a] } else { vec![a, b] };
        let y = KPointPattern::new(pat).unwrap().lift(spec.n, &vals, int(0));
        if rank_at(&spec, &y).map_err(err)? >= 3 {
            violations.push(format!("2-point {y:?} has rank ≥ 3"));
        }
    }
    for _ in 0..200 {
        let spec = spec_for(&mut rng);
        let y = loop {
            let y: Vec<Rational> = (0..spec.n).map(|_| rat(rng.gen_range(1..=40), rng.gen_range(1..=7))).collect();
            let mut s = y.clone();
            s.sort();
            s.dedup();
            if s.len() >= 3 {
                break y;
            }
        };
        if rank_at(&spec, &y).map_err(err)? != 3 {
            violations.push(format!("point {y:?} with ≥ 3 distinct positive values not of rank 3"));
        }
    }
    // Two free terms in degree 16: rank < 4 on 3-points, 4 on points with
    // four distinct positive values.
    let terms = vec![PowerSumTerm::power(4, 4), PowerSumTerm::new([(6, 2), (4, 1)]).unwrap()];
    let spec = JacobianSpec::with_anchors(terms.clone(), 4, 5).map_err(err)?;
    let mut form_terms: Vec<(PowerSumTerm, Rational)> =
        spec.generators.iter().map(|g| (g.clone(), int(1))).collect();
    form_terms.truncate(spec.generators.len());
    let form = PowerSumForm::from_terms(5, 16, form_terms).map_err(err)?;
    ensure(check_conditions_thm_main2(&form).satisfied, "m = 4 spec fails its hypotheses")?;
    for _ in 0..20 {
        let vals: Vec<Rational> = (0..3).map(|_| random_rational(&mut rng, -4, 4, 5)).collect();
        let y = KPointPattern::new(vec![2, 2, 1]).unwrap().lift(5, &vals, int(0));
        if rank_at(&spec, &y).map_err(err)? >= 4 {
            violations.push(format!("m=4: 3-point {y:?} has rank ≥ 4"));
        }
        let y: Vec<Rational> = [1, 2, 3, 5, 5]
            .iter()
            .map(|&c| int(c) * rat(rng.gen_range(1..=9), 1) + rat(rng.gen_range(0..=2), 7))
            .collect();
        let mut s = y.clone();
        s.sort();
        s.dedup();
        if s.len() >= 4 && rank_at(&spec, &y).map_err(err)? != 4 {
            violations.push(format!("m=4: {y:?} not of rank 4"));
        }
    }
    ensure(violations.is_empty(), format!("{violations:?}"))?;
    Ok("400 random points plus 40 m = 4 spot checks, zero violations".into())
}

fn c7_counterexample() -> Outcome {
    let w = build_counterexample(3, 3).map_err(err)?;
    let v = &w.base.v;
    let val = w.form.evaluate(v).map_err(err)?;
    ensure(val.is_negative(), "p(v) not negative")?;
    let mut distinct: Vec<&Rational> = v.iter().filter(|x| x.is_positive()).collect();
    distinct.sort();
    distinct.dedup();
    ensure(distinct.len() >= 3, "v is a 2-point")?;
    // Independent re-check through restriction and Sturm.
    for pat in enumerate_patterns(3, 2) {
        let rf = restrict(&w.form, &pat).map_err(err)?;
        let u = if pat.s() == 2 {
            dehomogenize(&rf).map_err(err)?
        } else {
            let c = rf.poly.eval(&[int(1)]);
            symtest_core::QPoly::constant(c)
        };
        ensure(univariate_nonneg(&u).nonnegative, format!("restriction {pat} negative"))?;
    }
    ensure(!check_conditions_thm_main(&w.form).satisfied, "p satisfies one-free-term hypotheses")?;
    let t = split_midpoint(&w.form, 3).map_err(err)?;
    let half = rat(1, 2);
    let mid = t.p1.scale(&half).try_add(&t.p2.scale(&half)).map_err(err)?;
    ensure(mid == w.form, "½p₁ + ½p₂ ≠ p")?;
    ensure(
        check_conditions_thm_main(&t.p1).satisfied && check_conditions_thm_main(&t.p2).satisfied,
        "p₁ or p₂ fails the hypotheses",
    )?;
    Ok(format!(
        "v = ({}), λ = {}, p(v) = {val}; midpoint exact",
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "),
        w.lambda
    ))
}

fn c8_concordance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut contradictions = Vec::new();
    let (mut nonneg, mut neg) = (0, 0);
    for i in 0..100 {
        let d = rng.gen_range(2..=6u32);
        let n = rng.gen_range(3..=6usize);
        let free = valid_free_terms(n, d);
        if free.is_empty() {
            continue;
        }
        let t = free[rng.gen_range(0..free.len())].clone();
        let coeff = |rng: &mut ChaCha8Rng| loop {
            let c = random_rational(rng, -5, 5, 4);
            if !c.is_zero() {
                break c;
            }
        };
        let mut terms: Vec<(PowerSumTerm, Rational)> = vec![(t, coeff(&mut rng))];
        for a in anchor_terms(d) {
            terms.push((a, coeff(&mut rng)));
        }
        if i % 2 == 0 {
            // Bias half the sample towards the nonnegative side.
            for (_, c) in terms.iter_mut().take(3) {
                *c = c.abs();
            }
        }
        let form = PowerSumForm::from_terms(n, 4 * d, terms).map_err(err)?;
        let v = decide_nonneg_2point(&form, false).map_err(err)?;
        let m = minimize_on_sphere(&form, 64, i as u64).minimum;
        let ok = match v.status {
            Status::Nonnegative => m >= -1e-7,
            Status::NotNonnegative => m < 1e-7,
            Status::UndecidedNumeric => m.abs() < 1e-7,
        };
        match v.status {
            Status::Nonnegative => nonneg += 1,
            _ => neg += 1,
        }
        if !ok {
            contradictions.push(format!("n={n} 4d={} {} vs minimum {m}", 4 * d, v.status));
        }
    }
    ensure(contradictions.is_empty(), format!("{contradictions:?}"))?;
    Ok(format!("100 forms ({nonneg} Nonnegative, {neg} NotNonnegative), zero contradictions"))
}

fn c9_realization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=8usize);
        let k = rng.gen_range(1..=6u32);
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
        let r = power_sum_value(2 * k, &x);
        let z = two_point_realization(n, k, r).map_err(err)?;
        let e2 = (power_sum_value(2, &z.point) - 1.0).abs();
        let e2k = (power_sum_value(2 * k, &z.point) - r).abs();
        ensure(e2 < 1e-12 && e2k < 1e-10, format!("n={n} k={k}: errors {e2:e}, {e2k:e}"))?;
        worst = worst.max(e2k);
    }
    Ok(format!("100 points, worst |M_2k(z) − M_2k(x)| = {worst:.1e}"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("restriction exactness", Duration::from_secs(1), c1_restriction),
        ("verdict reproduction", Duration::from_secs(5), c2_verdicts),
        ("region reproduction", Duration::from_secs(120), c3_region),
        ("schur consistency", Duration::from_secs(30), c4_schur),
        ("minor factorization", Duration::from_secs(60), c5_lemma_factorization),
        ("rank dichotomy", Duration::from_secs(600), c6_rank),
        ("counterexample certificate", Duration::from_secs(120), c7_counterexample),
        ("oracle concordance", Duration::from_secs(600), c8_concordance),
        ("two-point realization", Duration::from_secs(60), c9_realization),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(format!("panic: {:?}", p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())))));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > *budget => Err(format!("{msg}; over budget ({took:.2?} > {budget:?})")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("criterion {} ({name}): PASS [{took:.2?}] {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{took:.2?}] {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
