//! Inline set expressions such as `finite:0,1,3`, `congruence:7:0,1,3` or
//! `tail:0:5|finite:2`, where `|` joins union parts.

use std::str::FromStr;

use intersets_core::{Int, IntSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("in `{part}`: {message}")]
pub struct InlineError {
    pub part: String,
    pub message: String,
}

fn ints(list: &str, part: &str) -> Result<Vec<Int>, InlineError> {
    if list.trim().is_empty() {
        return Ok(Vec::new());
    }
    list.split(',')
        .map(|x| {
            Int::from_str(x.trim()).map_err(|_| InlineError { part: part.into(), message: format!("`{x}` is not an integer") })
        })
        .collect()
}

fn one(x: &str, part: &str) -> Result<Int, InlineError> {
    match ints(x, part)?.as_slice() {
        [v] => Ok(v.clone()),
        _ => Err(InlineError { part: part.into(), message: "expected one integer".into() }),
    }
}

fn parse_part(part: &str) -> Result<IntSet, InlineError> {
    let err = |m: &str| InlineError { part: part.into(), message: m.into() };
    let fields: Vec<&str> = part.trim().split(':').collect();
    match fields.as_slice() {
        ["empty"] => Ok(IntSet::Empty),
        ["all"] => Ok(IntSet::all()),
        ["nonzero"] => Ok(IntSet::nonzero()),
        ["finite", xs] => Ok(IntSet::finite(ints(xs, part)?)),
        ["cofinite", xs] => Ok(IntSet::cofinite(ints(xs, part)?)),
        ["congruence", m, rs] => {
            IntSet::congruence(one(m, part)?, ints(rs, part)?).map_err(|e| err(&e.to_string()))
        }
        ["tail", c, r] => IntSet::tail(one(c, part)?, one(r, part)?).map_err(|e| err(&e.to_string())),
        ["halftail", t] => Ok(IntSet::half_tail(one(t, part)?)),
        ["lowerhalf", b] => Ok(IntSet::lower_half(one(b, part)?)),
        _ => Err(err(
            "expected empty, all, nonzero, finite:LIST, cofinite:LIST, congruence:M:LIST, tail:C:R, halftail:T or lowerhalf:B",
        )),
    }
}

pub fn parse_set(expr: &str) -> Result<IntSet, InlineError> {
    let parts = expr.split('|').map(parse_part).collect::<Result<Vec<_>, _>>()?;
    match parts.len() {
        1 => Ok(parts.into_iter().next().unwrap_or(IntSet::Empty)),
        _ => Ok(IntSet::Union(parts)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: i64) -> Int {
        Int::from(v)
    }

    #[test]
    fn parses_each_form() {
        assert_eq!(parse_set("finite:0,1,3").unwrap(), IntSet::finite([n(0), n(1), n(3)]));
        assert_eq!(parse_set("nonzero").unwrap(), IntSet::nonzero());
        assert_eq!(parse_set("all").unwrap(), IntSet::all());
        assert_eq!(parse_set("congruence:7:0,1,3").unwrap(), IntSet::congruence(n(7), [n(0), n(1), n(3)]).unwrap());
        assert_eq!(parse_set("tail:0:5").unwrap(), IntSet::tail(n(0), n(5)).unwrap());
        assert_eq!(parse_set("halftail:1").unwrap(), IntSet::half_tail(n(1)));
        assert_eq!(parse_set("empty").unwrap(), IntSet::Empty);
        assert_eq!(parse_set("cofinite:").unwrap(), IntSet::cofinite([]));
        let u = parse_set("congruence:4:0|finite:1").unwrap();
        assert!(u.contains(&n(8)) && u.contains(&n(1)) && !u.contains(&n(2)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_set("finite:a").is_err());
        assert!(parse_set("tail:0:0").is_err());
        assert!(parse_set("weird").is_err());
        assert!(parse_set("congruence:0:1").is_err());
    }
}
