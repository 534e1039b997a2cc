//! Text form of semilinear sets.
//!
//! ```text
//! vars: x,y
//! x=0,y=0 | x=1,y=1
//! x=2,y=0 | x=1,y=0 ; x=0,y=3
//! ```
//!
//! One component per line, offset before `|`, periods separated by `;`.
//! With no variables a vector is written `-`. Blank lines and lines
//! starting with `#` are ignored.

use std::fmt;

use super::{SemilinearError, SemilinearSet};

pub(super) fn write_vector<'a>(
    f: &mut fmt::Formatter<'_>,
    vars: impl Iterator<Item = &'a str>,
    values: impl Iterator<Item = u64>,
) -> fmt::Result {
    let mut first = true;
    for (v, x) in vars.zip(values) {
        if !first {
            f.write_str(",")?;
        }
        first = false;
        write!(f, "{v}={x}")?;
    }
    if first {
        f.write_str("-")?;
    }
    Ok(())
}

pub(super) fn write_semilinear<'a>(
    f: &mut fmt::Formatter<'_>,
    vars: &[String],
    comps: impl Iterator<Item = (&'a Vec<u64>, &'a Vec<Vec<u64>>)>,
) -> fmt::Result {
    writeln!(f, "vars: {}", vars.join(","))?;
    let names = || vars.iter().map(String::as_str);
    for (offset, periods) in comps {
        write_vector(f, names(), offset.iter().copied())?;
        for (i, p) in periods.iter().enumerate() {
            f.write_str(if i == 0 { " | " } else { " ; " })?;
            write_vector(f, names(), p.iter().copied())?;
        }
        writeln!(f)?;
    }
    Ok(())
}

fn parse_vector(s: &str, vars: &[String], line: usize) -> Result<Vec<u64>, SemilinearError> {
    let err = |message: String| SemilinearError::Parse { line, message };
    let s = s.trim();
    if s == "-" {
        if vars.is_empty() {
            return Ok(Vec::new());
        }
        return Err(err("empty vector for a nonempty variable set".into()));
    }
    let mut out: Vec<Option<u64>> = vec![None; vars.len()];
    for entry in s.split(',') {
        let (name, value) = entry
            .split_once('=')
            .ok_or_else(|| err(format!("expected `var=value`, found `{}`", entry.trim())))?;
        let name = name.trim();
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| err(format!("unknown variable `{name}`")))?;
        let value: u64 = value
            .trim()
            .parse()
            .map_err(|e| err(format!("bad value for `{name}`: {e}")))?;
        if out[idx].replace(value).is_some() {
            return Err(err(format!("variable `{name}` given twice")));
        }
    }
    out.into_iter()
        .zip(vars)
        .map(|(x, v)| x.ok_or_else(|| err(format!("missing variable `{v}`"))))
        .collect()
}

/// Parses the format written by `SemilinearSet`'s `Display` impl.
pub fn parse_semilinear(input: &str) -> Result<SemilinearSet, SemilinearError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(SemilinearError::Parse {
        line: 1,
        message: "missing `vars:` header".into(),
    })?;
    let names = header.strip_prefix("vars:").ok_or_else(|| SemilinearError::Parse {
        line: hline,
        message: "missing `vars:` header".into(),
    })?;
    let mut vars: Vec<String> = names
        .split(',')
        .map(|s| s.trim().to_owned())
        .filter(|s| !s.is_empty())
        .collect();
    vars.sort();
    let before = vars.len();
    vars.dedup();
    if vars.len() != before {
        return Err(SemilinearError::Parse {
            line: hline,
            message: "duplicate variable in header".into(),
        });
    }
    let mut raw = Vec::new();
    for (line, text) in lines {
        let (off, rest) = match text.split_once('|') {
            Some((o, r)) => (o, Some(r)),
            None => (text, None),
        };
        let offset = parse_vector(off, &vars, line)?;
        let periods = match rest {
            Some(r) if !r.trim().is_empty() => r
                .split(';')
                .map(|p| parse_vector(p, &vars, line))
                .collect::<Result<Vec<_>, _>>()?,
            _ => Vec::new(),
        };
        raw.push((offset, periods));
    }
    Ok(SemilinearSet::from_raw(vars, raw))
}
