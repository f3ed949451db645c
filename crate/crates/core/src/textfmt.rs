//! Line-oriented tokenizer shared by the protocol, construction and circuit
//! formats: one keyword per line, whitespace-separated arguments, `#` starts
//! a comment, blank lines are ignored.

use crate::error::{Error, Result};
use crate::state::Complex;

pub(crate) struct Record<'a> {
    /// 1-based line number.
    pub line: usize,
    pub keyword: &'a str,
    pub args: Vec<&'a str>,
    /// Everything after the keyword, comment stripped.
    pub rest: &'a str,
}

pub(crate) fn records(text: &str) -> Vec<Record<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                return None;
            }
            let (keyword, rest) = match content.find(char::is_whitespace) {
                Some(p) => (&content[..p], content[p..].trim()),
                None => (content, ""),
            };
            Some(Record {
                line: i + 1,
                keyword,
                args: rest.split_whitespace().collect(),
                rest,
            })
        })
        .collect()
}

/// Line number to blame for problems detected after the last line.
pub(crate) fn end_line(text: &str) -> usize {
    text.lines().count().max(1)
}

pub(crate) fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub(crate) fn parse_real(token: &str, line: usize) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| parse_error(line, format!("malformed number {token:?}")))?;
    if !v.is_finite() {
        return Err(parse_error(line, format!("non-finite number {token:?}")));
    }
    Ok(v)
}

pub(crate) fn parse_reals(args: &[&str], line: usize) -> Result<Vec<f64>> {
    args.iter().map(|t| parse_real(t, line)).collect()
}

/// Amplitudes written as `(re,im)` pairs or bare reals, whitespace allowed
/// inside the parentheses.
pub(crate) fn parse_complex_list(rest: &str, line: usize) -> Result<Vec<Complex>> {
    let mut out = Vec::new();
    let mut chars = rest.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '(' {
            let close = rest[start..]
                .find(')')
                .ok_or_else(|| parse_error(line, "unclosed '(' in amplitude list"))?;
            let inner = &rest[start + 1..start + close];
            let mut parts = inner.split(',');
            let (re, im) = match (parts.next(), parts.next(), parts.next()) {
                (Some(re), Some(im), None) => (re.trim(), im.trim()),
                _ => {
                    return Err(parse_error(
                        line,
                        format!("amplitude {:?} is not a (re,im) pair", &rest[start..=start + close]),
                    ))
                }
            };
            out.push(Complex::new(parse_real(re, line)?, parse_real(im, line)?));
            while let Some(&(i, _)) = chars.peek() {
                if i > start + close {
                    break;
                }
                chars.next();
            }
        } else {
            let end = rest[start..]
                .find(char::is_whitespace)
                .map(|p| start + p)
                .unwrap_or(rest.len());
            out.push(Complex::new(parse_real(&rest[start..end], line)?, 0.0));
            while let Some(&(i, _)) = chars.peek() {
                if i >= end {
                    break;
                }
                chars.next();
            }
        }
    }
    Ok(out)
}

pub(crate) fn format_complex(c: Complex) -> String {
    format!("({},{})", c.re, c.im)
}
