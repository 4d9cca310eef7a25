//! Grid scans over the three anchor coefficients of a one-free-term family
//! `α·f + β M_2^{2d} + γ M_{2d}² + M_{2d} M_2^d`, and their reports.

use std::fmt::Write as _;
use std::io::Write;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::minimize_on_sphere;
use crate::scalar::{format_rational, serde_text};
use crate::symmetric::{anchor_terms, PowerSumForm, PowerSumTerm};
use crate::testset::{
    check_free_term, decide_nonneg_2point, timofte_check, timofte_k, KPointPattern, Status,
};
use crate::Rational;

/// The family being scanned. `δ`, the coefficient of `M_{2d} M_2^d`, is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionTemplate {
    pub n: usize,
    pub d: u32,
    pub free: PowerSumTerm,
}

impl RegionTemplate {
    pub fn new(n: usize, d: u32, free: PowerSumTerm) -> Result<Self> {
        if free.degree() != 4 * d {
            return Err(Error::InvalidInput(format!(
                "template shape mismatch: free term {free} has degree {}, expected {}",
                free.degree(),
                4 * d
            )));
        }
        if anchor_terms(d).contains(&free) {
            return Err(Error::InvalidInput(format!(
                "template shape mismatch: {free} is an anchor term"
            )));
        }
        let violations = check_free_term(&free, d);
        if !violations.is_empty() {
            return Err(Error::InvalidInput(format!(
                "template shape mismatch: {}",
                violations.join("; ")
            )));
        }
        Ok(RegionTemplate { n, d, free })
    }

    /// `α M_4³ + β M_2⁶ + γ M_6² + M_6 M_2³`.
    pub fn degree_twelve(n: usize) -> Self {
        Self::new(n, 3, PowerSumTerm::power(4, 3)).expect("valid template")
    }

    pub fn instantiate(&self, alpha: &Rational, beta: &Rational, gamma: &Rational) -> Result<PowerSumForm> {
        let [t_beta, t_gamma, t_delta] = anchor_terms(self.d);
        PowerSumForm::from_terms(
            self.n,
            4 * self.d,
            [
                (self.free.clone(), alpha.clone()),
                (t_beta, beta.clone()),
                (t_gamma, gamma.clone()),
                (t_delta, Rational::one()),
            ],
        )
    }
}

/// `start, start + step, …` up to and including `stop`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridAxis {
    pub start: Rational,
    pub stop: Rational,
    pub step: Rational,
}

impl GridAxis {
    pub fn new(start: Rational, stop: Rational, step: Rational) -> Result<Self> {
        if !step.is_positive() || stop < start {
            return Err(Error::InvalidInput(format!(
                "empty grid axis {start}..{stop} step {step}"
            )));
        }
        Ok(GridAxis { start, stop, step })
    }

    pub fn integers(lo: i64, hi: i64) -> Result<Self> {
        Self::new(crate::scalar::int(lo), crate::scalar::int(hi), Rational::one())
    }

    /// Parses `lo:hi` or `lo:hi:step`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let q = |s: &str| crate::scalar::parse_rational(s.trim());
        match parts.as_slice() {
            [lo, hi] => Self::new(q(lo)?, q(hi)?, Rational::one()),
            [lo, hi, step] => Self::new(q(lo)?, q(hi)?, q(step)?),
            _ => Err(Error::InvalidInput(format!("bad grid axis `{text}`, expected lo:hi[:step]"))),
        }
    }

    pub fn values(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        let mut x = self.start.clone();
        while x <= self.stop {
            out.push(x.clone());
            x += &self.step;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionScanSpec {
    pub template: RegionTemplate,
    pub alpha: GridAxis,
    pub beta: GridAxis,
    pub gamma: GridAxis,
    /// Also run the sphere minimizer on rows decided exactly.
    pub numeric_all: bool,
    pub restarts: usize,
    pub seed: u64,
}

impl RegionScanSpec {
    pub fn cube(template: RegionTemplate, lo: i64, hi: i64) -> Result<Self> {
        Ok(RegionScanSpec {
            template,
            alpha: GridAxis::integers(lo, hi)?,
            beta: GridAxis::integers(lo, hi)?,
            gamma: GridAxis::integers(lo, hi)?,
            numeric_all: false,
            restarts: 64,
            seed: 0,
        })
    }

    /// Grid points in index order: α slowest, γ fastest.
    pub fn points(&self) -> Vec<[Rational; 3]> {
        let (a, b, g) = (self.alpha.values(), self.beta.values(), self.gamma.values());
        let mut out = Vec::with_capacity(a.len() * b.len() * g.len());
        for x in &a {
            for y in &b {
                for z in &g {
                    out.push([x.clone(), y.clone(), z.clone()]);
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMethod {
    /// Single-free-term theorem on 2-points.
    TwoPoint,
    /// A coefficient is zero; decided on `⌊d'/2⌋`-points instead.
    Fallback,
}

impl ScanMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanMethod::TwoPoint => "two-point",
            ScanMethod::Fallback => "fallback",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionRow {
    #[serde(serialize_with = "serde_text::one")]
    pub alpha: Rational,
    #[serde(serialize_with = "serde_text::one")]
    pub beta: Rational,
    #[serde(serialize_with = "serde_text::one")]
    pub gamma: Rational,
    pub verdict: Status,
    #[serde(serialize_with = "serde_text::opt_vec")]
    pub witness: Option<Vec<Rational>>,
    pub failing_pattern: Option<KPointPattern>,
    pub method: ScanMethod,
    /// Whether the fallback used a numeric pattern (three or more values).
    pub numeric_patterns: bool,
    pub annotation: Option<String>,
    pub numeric_minimum: Option<f64>,
}

impl RegionRow {
    /// The sphere minimum agrees with the verdict up to `tol`.
    pub fn numerically_consistent(&self, tol: f64) -> Option<bool> {
        self.numeric_minimum.map(|m| match self.verdict {
            Status::Nonnegative => m >= -tol,
            Status::NotNonnegative => m < tol,
            Status::UndecidedNumeric => m.abs() < tol,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSummary {
    pub points: usize,
    pub nonnegative: usize,
    pub not_nonnegative: usize,
    pub undecided: usize,
    pub fallback: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionScanResult {
    pub n: usize,
    pub degree: u32,
    pub rows: Vec<RegionRow>,
    pub summary: ScanSummary,
}

fn scan_point(spec: &RegionScanSpec, p: &[Rational; 3]) -> Result<RegionRow> {
    let [alpha, beta, gamma] = p;
    let form = spec.template.instantiate(alpha, beta, gamma)?;
    let zeros: Vec<&str> = ["α", "β", "γ"]
        .into_iter()
        .zip(p.iter())
        .filter(|(_, c)| c.is_zero())
        .map(|(name, _)| name)
        .collect();
    let fallback = !zeros.is_empty();
    let verdict = if fallback {
        timofte_check(&form)?
    } else {
        decide_nonneg_2point(&form, false)?
    };
    let numeric_minimum = (fallback || spec.numeric_all)
        .then(|| minimize_on_sphere(&form, spec.restarts, spec.seed).minimum);
    let annotation = fallback.then(|| {
        format!(
            "out of theorem ({} = 0); decided on {}-points",
            zeros.join(", "),
            timofte_k(&form)
        )
    });
    Ok(RegionRow {
        alpha: alpha.clone(),
        beta: beta.clone(),
        gamma: gamma.clone(),
        failing_pattern: verdict.failing_pattern().cloned(),
        numeric_patterns: verdict.trail.iter().any(|e| e.univariate.is_none()),
        verdict: verdict.status,
        witness: verdict.witness,
        method: if fallback {
            ScanMethod::Fallback
        } else {
            ScanMethod::TwoPoint
        },
        annotation,
        numeric_minimum,
    })
}

/// Decides the given points; rows come back in input order.
pub fn scan_points(spec: &RegionScanSpec, points: &[[Rational; 3]]) -> Result<Vec<RegionRow>> {
    points.par_iter().map(|p| scan_point(spec, p)).collect()
}

pub fn scan_region(spec: &RegionScanSpec) -> Result<RegionScanResult> {
    let rows = scan_points(spec, &spec.points())?;
    let count = |s: Status| rows.iter().filter(|r| r.verdict == s).count();
    let summary = ScanSummary {
        points: rows.len(),
        nonnegative: count(Status::Nonnegative),
        not_nonnegative: count(Status::NotNonnegative),
        undecided: count(Status::UndecidedNumeric),
        fallback: rows.iter().filter(|r| r.method == ScanMethod::Fallback).count(),
    };
    Ok(RegionScanResult {
        n: spec.template.n,
        degree: 4 * spec.template.d,
        rows,
        summary,
    })
}

fn witness_text(w: &Option<Vec<Rational>>) -> String {
    w.as_ref()
        .map(|v| v.iter().map(format_rational).collect::<Vec<_>>().join(" "))
        .unwrap_or_default()
}

/// Columns `alpha,beta,gamma,verdict,witness,method`; witness coordinates
/// are space separated.
pub fn write_csv<W: Write>(result: &RegionScanResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidInput(format!("csv output: {e}"));
    w.write_record(["alpha", "beta", "gamma", "verdict", "witness", "method"])
        .map_err(io)?;
    for r in &result.rows {
        w.write_record([
            format_rational(&r.alpha),
            format_rational(&r.beta),
            format_rational(&r.gamma),
            r.verdict.to_string(),
            witness_text(&r.witness),
            r.method.as_str().to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidInput(format!("csv output: {e}")))
}

pub fn write_json_lines<W: Write>(result: &RegionScanResult, mut out: W) -> Result<()> {
    for r in &result.rows {
        let line = serde_json::to_string(r)
            .map_err(|e| Error::InvalidInput(format!("json output: {e}")))?;
        writeln!(out, "{line}").map_err(|e| Error::InvalidInput(format!("json output: {e}")))?;
    }
    Ok(())
}

/// One β×γ panel per α value. Green is Nonnegative, red NotNonnegative,
/// grey undecided; a ring marks fallback rows.
pub fn render_svg(result: &RegionScanResult) -> String {
    let mut alphas: Vec<&Rational> = result.rows.iter().map(|r| &r.alpha).collect();
    alphas.sort();
    alphas.dedup();
    let mut betas: Vec<&Rational> = result.rows.iter().map(|r| &r.beta).collect();
    betas.sort();
    betas.dedup();
    let mut gammas: Vec<&Rational> = result.rows.iter().map(|r| &r.gamma).collect();
    gammas.sort();
    gammas.dedup();

    let cell = 14.0;
    let pad = 30.0;
    let pw = gammas.len() as f64 * cell + pad;
    let ph = betas.len() as f64 * cell + pad;
    let cols = alphas.len().clamp(1, 3);
    let rows = alphas.len().div_ceil(cols).max(1);
    let (width, height) = (cols as f64 * pw + pad, rows as f64 * ph + pad);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="10">"#
    );
    for (i, a) in alphas.iter().enumerate() {
        let ox = (i % cols) as f64 * pw + pad;
        let oy = (i / cols) as f64 * ph + pad;
        let _ = writeln!(
            s,
            r#"<text x="{ox}" y="{}">α = {}</text>"#,
            oy - 8.0,
            format_rational(a)
        );
        for r in result.rows.iter().filter(|r| &r.alpha == *a) {
            let bi = betas.iter().position(|b| *b == &r.beta).unwrap_or(0);
            let gi = gammas.iter().position(|g| *g == &r.gamma).unwrap_or(0);
            let x = ox + gi as f64 * cell;
            // β grows upwards.
            let y = oy + (betas.len() - 1 - bi) as f64 * cell;
            let fill = match r.verdict {
                Status::Nonnegative => "#2e8b57",
                Status::NotNonnegative => "#c0392b",
                Status::UndecidedNumeric => "#999999",
            };
            let stroke = match r.method {
                ScanMethod::Fallback => r#" stroke="black" stroke-width="1.5""#,
                ScanMethod::TwoPoint => "",
            };
            let _ = writeln!(
                s,
                r#"<rect x="{x}" y="{y}" width="{}" height="{}" fill="{fill}"{stroke}><title>α={} β={} γ={}: {}</title></rect>"#,
                cell - 2.0,
                cell - 2.0,
                format_rational(&r.alpha),
                format_rational(&r.beta),
                format_rational(&r.gamma),
                r.verdict
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<text x="{pad}" y="{}">columns: γ, rows: β (increasing upwards)</text>"#,
        height - 6.0
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn template_rejects_bad_shapes() {
        assert!(RegionTemplate::new(4, 3, PowerSumTerm::power(2, 6)).is_err());
        assert!(RegionTemplate::new(4, 3, PowerSumTerm::power(4, 2)).is_err());
        assert!(RegionTemplate::new(4, 3, PowerSumTerm::new([(6, 1), (2, 3)]).unwrap()).is_err());
        assert!(RegionTemplate::new(4, 3, PowerSumTerm::new([(6, 1), (4, 1), (2, 1)]).unwrap()).is_ok());
    }

    #[test]
    fn axis_parsing() {
        assert_eq!(GridAxis::parse("-4:4").unwrap().values().len(), 9);
        assert_eq!(GridAxis::parse("0:1:1/4").unwrap().values().len(), 5);
        assert!(GridAxis::parse("3:1").is_err());
    }

    #[test]
    fn small_scan_and_boundary_point() {
        let mut spec = RegionScanSpec::cube(RegionTemplate::degree_twelve(4), -1, 1).unwrap();
        spec.restarts = 16;
        let res = scan_region(&spec).unwrap();
        assert_eq!(res.rows.len(), 27);
        let rows = scan_points(&spec, &[[int(1), int(0), int(-2)]]).unwrap();
        assert_eq!(rows[0].method, ScanMethod::Fallback);
        assert_ne!(rows[0].verdict, Status::NotNonnegative);
        let mut csv = Vec::new();
        write_csv(&res, &mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 28);
        assert!(render_svg(&res).starts_with("<svg"));
    }
}
