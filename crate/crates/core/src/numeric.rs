//! Floating-point reference computations: multistart projected gradient on
//! the unit sphere, grid sampling over k-point patterns and the power-mean
//! bounds with their 2-point realization.
//!
//! Nothing here certifies a positive claim; the exact modules do that.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symmetric::{power_sum_value, PowerSumForm};
use crate::testset::{enumerate_patterns, KPointPattern};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimizationResult {
    pub minimum: f64,
    pub argmin: Vec<f64>,
    pub restarts: usize,
    pub converged: bool,
    pub gradient_norm: f64,
}

#[derive(Clone, Debug)]
pub struct MinimizeOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub initial_step: f64,
    /// Stop once the projected gradient is shorter than this.
    pub tolerance: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            restarts: 64,
            seed: 0,
            max_iterations: 5000,
            initial_step: 0.1,
            tolerance: 1e-10,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) {
    let norm = dot(x, x).sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

struct LocalResult {
    value: f64,
    x: Vec<f64>,
    converged: bool,
    gradient_norm: f64,
}

fn descend<F>(objective: &F, mut x: Vec<f64>, opts: &MinimizeOptions) -> LocalResult
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    normalize(&mut x);
    let (mut f, mut g) = objective(&x);
    let mut step = opts.initial_step;
    let mut converged = false;
    let mut gnorm = f64::INFINITY;
    let mut checkpoint = f;
    'outer: for it in 0..opts.max_iterations {
        let radial = dot(&g, &x);
        let pg: Vec<f64> = g.iter().zip(&x).map(|(gi, xi)| gi - radial * xi).collect();
        gnorm = dot(&pg, &pg).sqrt();
        if !gnorm.is_finite() {
            break;
        }
        if gnorm < opts.tolerance {
            converged = true;
            break;
        }
        if it % 50 == 49 {
            // Stalled: fifty steps gained less than rounding noise.
            if checkpoint - f <= 1e-14 * f.abs().max(1.0) {
                break;
            }
            checkpoint = f;
        }
        loop {
            // Moves below machine precision on the unit sphere change nothing.
            if step * gnorm < 1e-17 {
                break 'outer;
            }
            let mut xn: Vec<f64> = x.iter().zip(&pg).map(|(xi, p)| xi - step * p).collect();
            normalize(&mut xn);
            let (fnew, gnew) = objective(&xn);
            if fnew <= f - 1e-4 * step * gnorm * gnorm {
                x = xn;
                f = fnew;
                g = gnew;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
    }
    LocalResult {
        value: f,
        x,
        converged,
        gradient_norm: gnorm,
    }
}

/// Multistart minimization of `objective` over the unit sphere in `dim`
/// dimensions. Restart `i` draws its start from a ChaCha stream seeded with
/// `seed + i`; the best restart wins, ties going to the lowest index.
pub fn minimize_objective<F>(
    dim: usize,
    objective: F,
    sorted_starts: bool,
    opts: &MinimizeOptions,
) -> MinimizationResult
where
    F: Fn(&[f64]) -> (f64, Vec<f64>) + Sync,
{
    let restarts = opts.restarts.max(1);
    let locals: Vec<LocalResult> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
            let mut x: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect();
            if sorted_starts {
                x.sort_by(|a, b| b.total_cmp(a));
            }
            descend(&objective, x, opts)
        })
        .collect();
    let best = locals
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.value < locals[b].value { i } else { b });
    let r = &locals[best];
    MinimizationResult {
        minimum: r.value,
        argmin: r.x.clone(),
        restarts,
        converged: r.converged,
        gradient_norm: r.gradient_norm,
    }
}

/// Approximates `min p` over the unit sphere of `ℝⁿ`.
pub fn minimize_on_sphere(form: &PowerSumForm, restarts: usize, seed: u64) -> MinimizationResult {
    minimize_on_sphere_with(
        form,
        &MinimizeOptions {
            restarts,
            seed,
            ..MinimizeOptions::default()
        },
    )
}

pub fn minimize_on_sphere_with(form: &PowerSumForm, opts: &MinimizeOptions) -> MinimizationResult {
    let objective = |x: &[f64]| {
        (
            form.evaluate_unchecked(x),
            form.gradient(x).expect("dimension matches"),
        )
    };
    minimize_objective(form.n(), objective, true, opts)
}

/// Approximates the minimum of the restriction of `form` to `pattern` over
/// the weighted sphere `Σ mᵢ aᵢ² = 1`, i.e. over the k-points of the unit
/// sphere with that multiplicity structure. The returned argmin holds the
/// values `a₁,…,a_s`.
pub fn minimize_restricted(
    form: &PowerSumForm,
    pattern: &KPointPattern,
    opts: &MinimizeOptions,
) -> MinimizationResult {
    let mults = pattern.multiplicities();
    let roots: Vec<f64> = mults.iter().map(|&m| (m as f64).sqrt()).collect();
    let n = form.n();
    let objective = |b: &[f64]| {
        let a: Vec<f64> = b.iter().zip(&roots).map(|(bi, r)| bi / r).collect();
        let x = pattern.lift(n, &a, 0.0);
        let g = form.gradient(&x).expect("lifted point has length n");
        // Coordinates of value a_i occupy a contiguous block of length m_i.
        let mut offset = 0;
        let grad: Vec<f64> = mults
            .iter()
            .zip(&roots)
            .map(|(&m, r)| {
                let gi = g[offset] * m as f64 / r;
                offset += m;
                gi
            })
            .collect();
        (form.evaluate_unchecked(&x), grad)
    };
    let mut res = minimize_objective(mults.len(), objective, false, opts);
    res.argmin = res.argmin.iter().zip(&roots).map(|(b, r)| b / r).collect();
    res
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridCheckResult {
    pub worst_value: f64,
    pub pattern: KPointPattern,
    /// Values `a₁,…,a_s` on the weighted sphere.
    pub values: Vec<f64>,
    pub samples: usize,
}

/// Samples every pattern with at most `k` distinct values on a grid of
/// `density + 1` points per value coordinate, normalized to the unit
/// sphere, and reports the smallest value seen.
pub fn timofte_grid_check(form: &PowerSumForm, k: usize, density: usize) -> Result<GridCheckResult> {
    let n = form.n();
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}")));
    }
    let density = density.max(1);
    let per_pattern: Vec<GridCheckResult> = enumerate_patterns(n, k)
        .into_par_iter()
        .map(|pattern| {
            let s = pattern.s();
            let mults = pattern.multiplicities().to_vec();
            let mut best = GridCheckResult {
                worst_value: f64::INFINITY,
                pattern: pattern.clone(),
                values: vec![],
                samples: 0,
            };
            let mut idx = vec![0usize; s];
            loop {
                if idx.iter().any(|&i| i > 0) {
                    let mut a: Vec<f64> = idx.iter().map(|&i| i as f64 / density as f64).collect();
                    let norm: f64 = a
                        .iter()
                        .zip(&mults)
                        .map(|(v, &m)| m as f64 * v * v)
                        .sum::<f64>()
                        .sqrt();
                    a.iter_mut().for_each(|v| *v /= norm);
                    let value = form.evaluate_unchecked(&pattern.lift(n, &a, 0.0));
                    best.samples += 1;
                    if value < best.worst_value {
                        best.worst_value = value;
                        best.values = a;
                    }
                }
                // Odometer increment.
                let mut c = 0;
                while c < s && idx[c] == density {
                    idx[c] = 0;
                    c += 1;
                }
                if c == s {
                    break;
                }
                idx[c] += 1;
            }
            best
        })
        .collect();
    let samples = per_pattern.iter().map(|r| r.samples).sum();
    let mut worst = per_pattern
        .into_iter()
        .reduce(|a, b| if b.worst_value < a.worst_value { b } else { a })
        .expect("at least one pattern");
    worst.samples = samples;
    Ok(worst)
}

/// Checks `1/n^{k−1} ≤ M_{2k}(x) ≤ 1` for a point of the unit sphere.
pub fn power_mean_bounds_check(point: &[f64], k: u32) -> Result<bool> {
    let m2 = power_sum_value(2, point);
    if (m2 - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "point is not on the unit sphere: M_2 = {m2}"
        )));
    }
    let n = point.len() as f64;
    let m2k = power_sum_value(2 * k, point);
    let lower = n.powi(1 - k as i32);
    let slack = 1e-12;
    if m2k < lower - slack || m2k > 1.0 + slack {
        return Err(Error::BoundViolated(format!(
            "M_{} = {m2k} outside [{lower}, 1]",
            2 * k
        )));
    }
    Ok(true)
}

/// `f(α) = cos^{2k}α / (n−1)^{k−1} + sin^{2k}α`, the value of `M_{2k}` at
/// the 2-point `z_α = (cos α/√(n−1), …, cos α/√(n−1), sin α)`.
pub fn two_point_profile(n: usize, k: u32, alpha: f64) -> f64 {
    let c2 = alpha.cos().powi(2);
    let s2 = alpha.sin().powi(2);
    c2.powi(k as i32) / ((n - 1) as f64).powi(k as i32 - 1) + s2.powi(k as i32)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoPointRealization {
    pub alpha: f64,
    pub point: Vec<f64>,
}

/// Finds a 2-point `z_α` of the unit sphere with `M_{2k}(z_α) = r` by
/// bisection on `[arcsin(1/√n), π/2]`, where the profile runs from
/// `1/n^{k−1}` up to `1`.
pub fn two_point_realization(n: usize, k: u32, r: f64) -> Result<TwoPointRealization> {
    if n < 2 || k == 0 {
        return Err(Error::InvalidInput(format!("need n ≥ 2 and k ≥ 1, got n = {n}, k = {k}")));
    }
    let mut lo = (1.0 / (n as f64).sqrt()).asin();
    let mut hi = std::f64::consts::FRAC_PI_2;
    let (flo, fhi) = (two_point_profile(n, k, lo), two_point_profile(n, k, hi));
    if r < flo - 1e-12 || r > fhi + 1e-12 {
        return Err(Error::BoundViolated(format!(
            "target {r} outside [{flo}, {fhi}]"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if two_point_profile(n, k, mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = if (two_point_profile(n, k, lo) - r).abs() <= (two_point_profile(n, k, hi) - r).abs() {
        lo
    } else {
        hi
    };
    let a = alpha.cos() / ((n - 1) as f64).sqrt();
    let mut point = vec![a; n - 1];
    point.push(alpha.sin());
    Ok(TwoPointRealization { alpha, point })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::symmetric::PowerSumTerm;

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

    #[test]
    fn m2_power_is_constant_on_sphere() {
        let f = PowerSumForm::from_terms(4, 12, [(PowerSumTerm::power(2, 6), int(1))]).unwrap();
        let r = minimize_on_sphere(&f, 8, 1);
        assert!((r.minimum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn example_is_negative_somewhere_for_four_variables() {
        let r = minimize_on_sphere(&example(4), 32, 0);
        assert!(r.minimum < 0.0, "{r:?}");
        assert!((dot(&r.argmin, &r.argmin) - 1.0).abs() < 1e-12);
        let again = minimize_on_sphere(&example(4), 32, 0);
        assert_eq!(r.minimum.to_bits(), again.minimum.to_bits());
    }

    #[test]
    fn grid_finds_negative_two_point_sample() {
        let g = timofte_grid_check(&example(4), 2, 200).unwrap();
        assert!(g.worst_value < 0.0);
        assert_eq!(g.pattern.s(), 2);
        assert!(g.pattern.multiplicities() == [3, 1] || g.pattern.multiplicities() == [2, 2]);
        let g3 = timofte_grid_check(&example(3), 2, 60).unwrap();
        assert!(g3.worst_value >= -1e-9);
    }

    #[test]
    fn power_mean_extremes() {
        assert!(power_mean_bounds_check(&[1.0, 0.0, 0.0], 3).unwrap());
        let u = 1.0 / 3f64.sqrt();
        assert!(power_mean_bounds_check(&[u, u, u], 3).unwrap());
        assert!((power_sum_value(6, &[u, u, u]) - 1.0 / 9.0).abs() < 1e-15);
        assert!(power_mean_bounds_check(&[1.0, 1.0], 2).is_err());
    }

    #[test]
    fn bisection_hits_target() {
        let (n, k) = (5, 3);
        assert!((two_point_profile(n, k, std::f64::consts::FRAC_PI_2) - 1.0).abs() < 1e-15);
        let lo = (1.0 / (n as f64).sqrt()).asin();
        assert!((two_point_profile(n, k, lo) - 1.0 / 25.0).abs() < 1e-15);
        let r = (1.0 + 1.0 / 25.0) / 2.0;
        let z = two_point_realization(n, k, r).unwrap();
        assert!((two_point_profile(n, k, z.alpha) - r).abs() < 1e-12);
        assert!((power_sum_value(6, &z.point) - r).abs() < 1e-12);
    }
}
