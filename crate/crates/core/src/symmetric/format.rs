//! Line-oriented text format for forms:
//!
//! ```text
//! n = 4
//! degree = 12
//! 1 * M4^3
//! -1/10 * M2^6
//! ```
//!
//! `#` starts a comment. `degree` may be omitted when at least one term is
//! present, in which case it is taken from the first term.

use super::form::PowerSumForm;
use super::term::PowerSumTerm;
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational};
use crate::Rational;

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Byte offset of `needle` within `haystack`, as a 1-based character column.
fn column_of(haystack: &str, needle: &str) -> usize {
    let offset = needle.as_ptr() as usize - haystack.as_ptr() as usize;
    haystack[..offset].chars().count() + 1
}

fn parse_header(raw: &str, value: &str, line: usize) -> Result<u64> {
    let v = value.trim();
    v.parse::<u64>()
        .map_err(|_| syntax(line, column_of(raw, v), format!("expected a nonnegative integer, got `{v}`")))
}

fn parse_factor(raw: &str, piece: &str, line: usize) -> Result<(u32, u32)> {
    let col = column_of(raw, piece);
    let body = piece
        .strip_prefix('M')
        .ok_or_else(|| syntax(line, col, format!("expected a factor `M<j>^<k>`, got `{piece}`")))?;
    let (j, k) = match body.split_once('^') {
        Some((j, k)) => (j.trim(), k.trim()),
        None => (body.trim(), "1"),
    };
    let j: u32 = j
        .parse()
        .map_err(|_| syntax(line, col + 1, format!("bad power-sum index `{j}`")))?;
    let k: u32 = k
        .parse()
        .map_err(|_| syntax(line, col, format!("bad exponent `{k}`")))?;
    if j == 0 || j % 2 == 1 {
        return Err(syntax(
            line,
            col + 1,
            format!("odd exponent: M{j} is not an even power sum"),
        ));
    }
    Ok((j, k))
}

fn parse_term_line(raw: &str, content: &str, line: usize) -> Result<(PowerSumTerm, Rational)> {
    let mut pieces = content.split('*').map(str::trim);
    let first = pieces.next().unwrap_or_default();
    let mut factors = Vec::new();
    let coeff = if first.starts_with('M') {
        factors.push(parse_factor(raw, first, line)?);
        Rational::from_integer(1.into())
    } else {
        parse_rational(first).map_err(|_| {
            syntax(line, column_of(raw, first), format!("bad coefficient `{first}`"))
        })?
    };
    for piece in pieces {
        if piece.is_empty() {
            return Err(syntax(line, column_of(raw, piece), "empty factor"));
        }
        factors.push(parse_factor(raw, piece, line)?);
    }
    let term = PowerSumTerm::new(factors).map_err(|e| syntax(line, 1, e.to_string()))?;
    Ok((term, coeff))
}

/// Parses a form from the text format.
pub fn parse_form(text: &str) -> Result<PowerSumForm> {
    let mut n: Option<usize> = None;
    let mut degree: Option<u32> = None;
    let mut terms: Vec<(usize, PowerSumTerm, Rational)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or_default().trim();
        if content.is_empty() {
            continue;
        }
        if let Some((key, value)) = content.split_once('=') {
            match key.trim() {
                "n" => n = Some(parse_header(raw, value, line)? as usize),
                "degree" => degree = Some(parse_header(raw, value, line)? as u32),
                other => {
                    return Err(syntax(
                        line,
                        column_of(raw, content),
                        format!("unknown header `{other}`"),
                    ))
                }
            }
            continue;
        }
        let (term, c) = parse_term_line(raw, content, line)?;
        terms.push((line, term, c));
    }
    let n = n.ok_or_else(|| syntax(1, 1, "missing header `n = <int>`"))?;
    let degree = match degree {
        Some(d) => d,
        None => terms
            .first()
            .map(|(_, t, _)| t.degree())
            .ok_or_else(|| syntax(1, 1, "missing header `degree = <int>`"))?,
    };
    let mut form = PowerSumForm::zero(n, degree)?;
    for (line, term, c) in terms {
        if term.degree() != degree {
            return Err(syntax(
                line,
                1,
                format!(
                    "degree inconsistency: term {term} has degree {}, form has degree {degree}",
                    term.degree()
                ),
            ));
        }
        form.add_term(term, c)?;
    }
    Ok(form)
}

/// Canonical rendering: headers, then terms ordered by decreasing leading
/// power-sum index.
pub fn render_form(form: &PowerSumForm) -> String {
    let mut out = format!("n = {}\ndegree = {}\n", form.n(), form.degree());
    for (t, c) in form.terms().iter().rev() {
        out.push_str(&format!("{} * {}\n", format_rational(c), t));
    }
    out
}
