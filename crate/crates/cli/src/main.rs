use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use symtest_core::extremal::{build_counterexample, split_midpoint};
use symtest_core::jacobian::{
    jacobian_at, minor_factorization, rank_at, verify_factorization, JacobianSpec,
};
use symtest_core::numeric::{minimize_on_sphere_with, MinimizeOptions};
use symtest_core::region::{
    render_svg, scan_region, write_csv, write_json_lines, GridAxis, RegionScanSpec, RegionTemplate,
};
use symtest_core::scalar::{format_rational, parse_rational};
use symtest_core::schur::{kostka, schur_by_kostka};
use symtest_core::symmetric::{parse_form, render_form};
use symtest_core::testset::{
    decide_nonneg_2point_with, decide_nonneg_mpoint_with, restrict, timofte_check_with, univariate_nonneg_of, DecideOptions,
    KPointPattern, Status, Verdict,
};
use symtest_core::{Error, Partition, PowerSumForm, PowerSumTerm, Rational};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    JsonLines,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TheoremArg {
    Main,
    Main2,
    Timofte,
}

/// Nonnegativity of even symmetric forms through k-point test sets.
#[derive(Parser, Debug)]
#[command(name = "symtest", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "SYMTEST_JOBS", default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide nonnegativity of a form file (`-` reads stdin).
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "main")]
        theorem: TheoremArg,
        /// Run the test set even when the hypotheses fail.
        #[arg(long)]
        override_conditions: bool,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
    },
    /// Restrict a form to a k-point pattern such as `2,1`.
    Restrict {
        file: PathBuf,
        #[arg(long)]
        pattern: String,
    },
    /// Scan `α·f + β M_2^{2d} + γ M_{2d}² + M_{2d} M_2^d` over a grid.
    ScanRegion {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: u32,
        /// Free term `f`.
        #[arg(long, default_value = "M4^3")]
        free: String,
        #[arg(long, default_value = "-4:4", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value = "-4:4", allow_hyphen_values = true)]
        beta: String,
        #[arg(long, default_value = "-4:4", allow_hyphen_values = true)]
        gamma: String,
        /// Also minimize numerically at points decided exactly.
        #[arg(long)]
        numeric_all: bool,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Monomial expansion of a Schur polynomial.
    Schur {
        index: String,
        #[arg(long)]
        vars: usize,
    },
    /// Number of semistandard tableaux of a shape and content.
    Kostka { shape: String, content: String },
    /// Exact rank of the Jacobian of a form's spanning set at a point.
    JacobianRank {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Factor the leading minor of the Jacobian of a form's spanning set.
    MinorFactor {
        file: PathBuf,
        /// Minor size; defaults to the number of free terms plus two.
        #[arg(long)]
        size: Option<usize>,
    },
    /// Build a form nonnegative on 2-points but negative somewhere.
    Counterexample {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: u32,
    },
    /// Minimize a form over the unit sphere.
    Minimize {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
    },
}

fn read_form(path: &Path) -> Result<PowerSumForm> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    parse_form(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_point(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(|s| parse_rational(s.trim()).map_err(|e| anyhow!("bad coordinate `{s}`: {e}")))
        .collect()
}

fn parse_term(text: &str, n: usize) -> Result<PowerSumTerm> {
    let f = parse_form(&format!("n = {n}\n1 * {text}\n"))
        .with_context(|| format!("parsing term `{text}`"))?;
    let mut terms = f.terms().keys();
    match (terms.next(), terms.next()) {
        (Some(t), None) => Ok(t.clone()),
        _ => bail!("`{text}` is not a single product of power sums"),
    }
}

fn points_text(v: &[Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

fn json_line<T: Serialize>(out: &mut impl Write, value: &T) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(value)?)?;
    Ok(())
}

fn csv_rows<I, R>(out: impl Write, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn status_code(s: Status) -> ExitCode {
    match s {
        Status::Nonnegative => ExitCode::from(0),
        Status::NotNonnegative => ExitCode::from(1),
        Status::UndecidedNumeric => ExitCode::from(2),
    }
}

fn print_verdict(format: Format, form: &PowerSumForm, v: &Verdict) -> Result<()> {
    let mut out = io::stdout().lock();
    match format {
        Format::JsonLines => json_line(&mut out, v)?,
        Format::Csv => csv_rows(
            out,
            &["pattern", "method", "outcome", "numeric_minimum", "values"],
            v.trail.iter().map(|e| {
                vec![
                    e.pattern.to_string(),
                    format!("{:?}", e.method).to_lowercase(),
                    e.outcome.to_string(),
                    e.numeric_minimum.map(|m| m.to_string()).unwrap_or_default(),
                    e.values.as_deref().map(points_text).unwrap_or_default(),
                ]
            }),
        )?,
        Format::Text => {
            writeln!(out, "verdict: {}", v.status)?;
            writeln!(out, "tested on {}-points of R^{}", v.k, form.n())?;
            if let Some(c) = &v.conditions {
                writeln!(
                    out,
                    "hypotheses ({}): {}",
                    c.theorem,
                    if c.satisfied { "satisfied" } else { "not satisfied" }
                )?;
                for x in &c.violations {
                    writeln!(out, "  violation: {x}")?;
                }
                for x in &c.notes {
                    writeln!(out, "  note: {x}")?;
                }
            }
            for e in &v.trail {
                write!(out, "  {} {:?} {}", e.pattern, e.method, e.outcome)?;
                if let Some(m) = e.numeric_minimum {
                    write!(out, " (numeric minimum {m:e})")?;
                }
                writeln!(out)?;
                if let Some(u) = &e.univariate {
                    writeln!(out, "    {u}")?;
                }
            }
            if let Some(w) = &v.witness {
                let val = form.evaluate(w)?;
                writeln!(out, "witness: ({}) with value {}", points_text(w), format_rational(&val))?;
            }
            for x in &v.notes {
                writeln!(out, "note: {x}")?;
            }
        }
    }
    Ok(())
}

fn check(cli: &Cli, file: &Path, theorem: TheoremArg, override_conditions: bool, restarts: usize) -> Result<ExitCode> {
    let form = read_form(file)?;
    let opts = DecideOptions {
        restarts,
        seed: cli.seed,
        ..DecideOptions::default()
    };
    let verdict = match theorem {
        TheoremArg::Main => decide_nonneg_2point_with(&form, override_conditions, &opts),
        TheoremArg::Main2 => decide_nonneg_mpoint_with(&form, override_conditions, &opts),
        TheoremArg::Timofte => timofte_check_with(&form, &opts),
    };
    match verdict {
        Ok(v) => {
            print_verdict(cli.format, &form, &v)?;
            Ok(status_code(v.status))
        }
        Err(Error::ConditionsNotSatisfied(report)) => {
            let mut out = io::stdout().lock();
            match cli.format {
                Format::JsonLines => json_line(&mut out, &report)?,
                _ => {
                    writeln!(out, "hypotheses ({}) not satisfied:", report.theorem)?;
                    for x in &report.violations {
                        writeln!(out, "  violation: {x}")?;
                    }
                    writeln!(out, "use --override-conditions to test anyway, or --theorem timofte")?;
                }
            }
            Ok(ExitCode::from(2))
        }
        Err(e) => Err(e.into()),
    }
}

fn restrict_cmd(cli: &Cli, file: &Path, pattern: &str) -> Result<ExitCode> {
    let form = read_form(file)?;
    let pat = KPointPattern::parse(pattern)?;
    let rf = restrict(&form, &pat)?;
    let uni = univariate_nonneg_of(&rf);
    let mut out = io::stdout().lock();
    match cli.format {
        Format::JsonLines => json_line(
            &mut out,
            &serde_json::json!({
                "pattern": pat,
                "restriction": rf.poly.to_string(),
                "univariate": uni.as_ref().map(|(u, _)| u.to_string()),
                "nonnegative": uni.as_ref().map(|(_, ok)| *ok),
            }),
        )?,
        Format::Csv => csv_rows(
            out,
            &["pattern", "restriction", "univariate", "nonnegative"],
            [vec![
                pat.to_string(),
                rf.poly.to_string(),
                uni.as_ref().map(|(u, _)| u.to_string()).unwrap_or_default(),
                uni.as_ref().map(|(_, ok)| ok.to_string()).unwrap_or_default(),
            ]],
        )?,
        Format::Text => {
            writeln!(out, "pattern {pat}: {}", rf.poly)?;
            if let Some((u, ok)) = uni {
                writeln!(out, "univariate: {u}")?;
                writeln!(out, "nonnegative: {ok}")?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn scan_cmd(
    cli: &Cli,
    n: usize,
    d: u32,
    free: &str,
    axes: [&str; 3],
    numeric_all: bool,
    restarts: usize,
    output: Option<&Path>,
    svg: Option<&Path>,
) -> Result<ExitCode> {
    let template = RegionTemplate::new(n, d, parse_term(free, n)?)?;
    let spec = RegionScanSpec {
        template,
        alpha: GridAxis::parse(axes[0])?,
        beta: GridAxis::parse(axes[1])?,
        gamma: GridAxis::parse(axes[2])?,
        numeric_all,
        restarts,
        seed: cli.seed,
    };
    let res = scan_region(&spec)?;
    let sink: Box<dyn Write> = match output {
        Some(p) => Box::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    match cli.format {
        Format::Csv => write_csv(&res, sink)?,
        Format::JsonLines => write_json_lines(&res, sink)?,
        Format::Text => {
            let mut sink = sink;
            for r in &res.rows {
                write!(
                    sink,
                    "α={} β={} γ={} {} [{}]",
                    format_rational(&r.alpha),
                    format_rational(&r.beta),
                    format_rational(&r.gamma),
                    r.verdict,
                    r.method.as_str()
                )?;
                if let Some(p) = &r.failing_pattern {
                    write!(sink, " failing {p}")?;
                }
                if let Some(a) = &r.annotation {
                    write!(sink, " ({a})")?;
                }
                writeln!(sink)?;
            }
        }
    }
    if let Some(p) = svg {
        fs::write(p, render_svg(&res)).with_context(|| format!("writing {}", p.display()))?;
    }
    let s = &res.summary;
    eprintln!(
        "{} points: {} Nonnegative, {} NotNonnegative, {} undecided, {} by fallback",
        s.points, s.nonnegative, s.not_nonnegative, s.undecided, s.fallback
    );
    Ok(ExitCode::SUCCESS)
}

fn schur_cmd(cli: &Cli, index: &str, vars: usize) -> Result<ExitCode> {
    let lambda = Partition::parse(index)?;
    let s = schur_by_kostka(&lambda, vars)?;
    let mut out = io::stdout().lock();
    match cli.format {
        Format::JsonLines => json_line(&mut out, &s)?,
        Format::Csv => csv_rows(
            out,
            &["partition", "coefficient"],
            s.expansion.iter().map(|(p, c)| vec![p.to_string(), c.to_string()]),
        )?,
        Format::Text => {
            for (p, c) in &s.expansion {
                writeln!(out, "{p}: {c}")?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn kostka_cmd(cli: &Cli, shape: &str, content: &str) -> Result<ExitCode> {
    let (shape, content) = (Partition::parse(shape)?, Partition::parse(content)?);
    let k = kostka(&shape, &content)?;
    let mut out = io::stdout().lock();
    match cli.format {
        Format::JsonLines => json_line(
            &mut out,
            &serde_json::json!({"shape": shape.to_string(), "content": content.to_string(), "kostka": k}),
        )?,
        _ => writeln!(out, "{k}")?,
    }
    Ok(ExitCode::SUCCESS)
}

fn jacobian_cmd(cli: &Cli, file: &Path, point: &str) -> Result<ExitCode> {
    let form = read_form(file)?;
    let spec = JacobianSpec::from_form(&form)?;
    let y = parse_point(point)?;
    let rank = rank_at(&spec, &y)?;
    let mut out = io::stdout().lock();
    match cli.format {
        Format::JsonLines => json_line(
            &mut out,
            &serde_json::json!({"point": y.iter().map(format_rational).collect::<Vec<_>>(), "rank": rank}),
        )?,
        _ => {
            if cli.format == Format::Text {
                let j = jacobian_at(&spec, &y)?;
                let cols: Vec<String> = spec.generators.iter().map(|g| g.to_string()).collect();
                writeln!(out, "columns: {}", cols.join(" | "))?;
                for i in 0..spec.n {
                    let row: Vec<String> = j.row(i).iter().map(format_rational).collect();
                    writeln!(out, "  [{}]", row.join(", "))?;
                }
            }
            writeln!(out, "rank: {rank}")?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn minor_cmd(cli: &Cli, file: &Path, size: Option<usize>) -> Result<ExitCode> {
    let form = read_form(file)?;
    let spec = JacobianSpec::from_form(&form)?;
    let size = size.unwrap_or(spec.columns() - 1);
    let f = minor_factorization(&spec, size)?;
    let verified = verify_factorization(&f);
    let mut out = io::stdout().lock();
    match cli.format {
        Format::JsonLines => json_line(
            &mut out,
            &serde_json::json!({"factorization": f, "verified": verified}),
        )?,
        Format::Csv => csv_rows(
            out,
            &["constant", "power_sums", "sign", "schur_index", "verified"],
            f.summands.iter().map(|s| {
                vec![
                    format_rational(&s.constant),
                    s.power_sums.iter().map(|(j, k)| format!("M{j}^{k}")).collect::<Vec<_>>().join(" * "),
                    s.sign.to_string(),
                    s.schur_index.to_string(),
                    verified.to_string(),
                ]
            }),
        )?,
        Format::Text => {
            writeln!(out, "minor of columns {} on x1..x{size}", f.columns.join(", "))?;
            for s in &f.summands {
                let ps: Vec<String> = s.power_sums.iter().map(|(j, k)| format!("M{j}^{k}")).collect();
                writeln!(
                    out,
                    "  prefactor {}{}  sign {:+}  Schur index {}",
                    format_rational(&s.constant),
                    if ps.is_empty() { String::new() } else { format!(" * {}", ps.join(" * ")) },
                    s.sign,
                    s.schur_index
                )?;
            }
            writeln!(out, "summands with repeated exponents: {}", f.vanishing_summands)?;
            writeln!(out, "signs agree: {}", f.signs_agree())?;
            writeln!(out, "verification: {}", if verified { "ok" } else { "FAILED" })?;
        }
    }
    Ok(if verified { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn counterexample_cmd(cli: &Cli, n: usize, d: u32) -> Result<ExitCode> {
    let w = build_counterexample(n, d)?;
    let t = split_midpoint(&w.form, d)?;
    let mut out = io::stdout().lock();
    match cli.format {
        Format::JsonLines => json_line(&mut out, &serde_json::json!({"witness": w, "split": t}))?,
        _ => {
            write!(out, "{}", render_form(&w.form))?;
            writeln!(out, "# witness point v = ({})", points_text(&w.base.v))?;
            writeln!(out, "# p(v) = {}", format_rational(&w.value_at_v))?;
            writeln!(out, "# kappa = {}", format_rational(&w.base.kappa))?;
            writeln!(out, "# lambda = {}", format_rational(&w.lambda))?;
            writeln!(out, "# theta = {}", format_rational(&w.base.theta))?;
            for line in &w.transcript {
                writeln!(out, "# {line}")?;
            }
            writeln!(
                out,
                "# midpoint split exact: {}; p1 hypotheses: {}; p2 hypotheses: {}",
                t.midpoint_exact, t.report1.satisfied, t.report2.satisfied
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn minimize_cmd(cli: &Cli, file: &Path, restarts: usize) -> Result<ExitCode> {
    let form = read_form(file)?;
    let res = minimize_on_sphere_with(
        &form,
        &MinimizeOptions {
            restarts,
            seed: cli.seed,
            ..MinimizeOptions::default()
        },
    );
    let mut out = io::stdout().lock();
    match cli.format {
        Format::JsonLines => json_line(&mut out, &res)?,
        Format::Csv => csv_rows(
            out,
            &["minimum", "argmin", "converged", "gradient_norm"],
            [vec![
                res.minimum.to_string(),
                res.argmin.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                res.converged.to_string(),
                res.gradient_norm.to_string(),
            ]],
        )?,
        Format::Text => {
            writeln!(out, "minimum: {:.12e}", res.minimum)?;
            writeln!(out, "argmin: ({})", res.argmin.iter().map(|x| format!("{x:.9}")).collect::<Vec<_>>().join(", "))?;
            writeln!(out, "restarts: {}  converged: {}  gradient norm: {:e}", res.restarts, res.converged, res.gradient_norm)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .context("configuring worker threads")?;
    }
    match &cli.command {
        Command::Check {
            file,
            theorem,
            override_conditions,
            restarts,
        } => check(cli, file, *theorem, *override_conditions, *restarts),
        Command::Restrict { file, pattern } => restrict_cmd(cli, file, pattern),
        Command::ScanRegion {
            n,
            d,
            free,
            alpha,
            beta,
            gamma,
            numeric_all,
            restarts,
            output,
            svg,
        } => scan_cmd(
            cli,
            *n,
            *d,
            free,
            [alpha, beta, gamma],
            *numeric_all,
            *restarts,
            output.as_deref(),
            svg.as_deref(),
        ),
        Command::Schur { index, vars } => schur_cmd(cli, index, *vars),
        Command::Kostka { shape, content } => kostka_cmd(cli, shape, content),
        Command::JacobianRank { file, point } => jacobian_cmd(cli, file, point),
        Command::MinorFactor { file, size } => minor_cmd(cli, file, *size),
        Command::Counterexample { n, d } => counterexample_cmd(cli, *n, *d),
        Command::Minimize { file, restarts } => minimize_cmd(cli, file, *restarts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
