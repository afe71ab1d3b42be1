//! Line-oriented corpus format.
//!
//! One case per line, as whitespace-separated `key=value` items. Blank
//! lines and lines starting with `#` are skipped.
//!
//! ```text
//! id=anchor field=7 algebra=unramified expect.total=3 note="h(O)=3"
//! field=1 algebra=ramified:11 expect.classes=2
//! field=5 algebra=(-1,-3) level=11,11'
//! ```
//!
//! Keys:
//! - `field`: squarefree `d >= 1` (`1` is Q). Required.
//! - `algebra`: `unramified`, `ramified:L,L,...` (totally definite with
//!   exactly these finite ramified primes) or `(a,b)` with elements
//!   written `x`, `x+y*s` or `y*s`, where `s = sqrt(d)` and `x`, `y` are
//!   rationals. Defaults to `unramified`.
//! - `level`: comma-separated prime labels; `-` or absent for maximal.
//! - `id`: free-form name without spaces.
//! - `expect.total`, `expect.classes` (oracle count over Q): integers.
//! - `expect.h_divides`, `expect.h_plus_divides`: `true` or `false`.
//! - `oracle`: `true` or `false`; defaults to true for definite cases over Q.
//! - `note`: double-quoted text, kept as provenance.
//!
//! A prime label is `p` for the first (or only) prime above `p`, `p'` for
//! the second prime above a split `p`; `p^2` also names an inert prime.

use num_traits::Zero;
use serde::Serialize;

use quatclass::numberfield::{prime_ideals_above, FElem, PrimeIdeal, RealQuadraticField};
use quatclass::{Error, Rat, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraChoice {
    Unramified,
    RamifiedAt { primes: Vec<String> },
    Explicit { a: String, b: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Expectations {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_divides: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_plus_divides: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusCase {
    pub line: usize,
    pub id: String,
    pub field_d: i64,
    pub algebra: AlgebraChoice,
    pub level: Vec<String>,
    pub expect: Expectations,
    pub oracle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn err(line: usize, column: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, column, msg: msg.into() }
}

/// Splits a line into `(column, key, value)` items; a value starting with
/// `"` runs to the closing quote.
fn items(text: &str, line: usize) -> Result<Vec<(usize, String, String)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && chars[i] != '=' && !chars[i].is_whitespace() {
            i += 1;
        }
        if i >= chars.len() || chars[i] != '=' {
            return Err(err(line, start + 1, "expected key=value"));
        }
        let key: String = chars[start..i].iter().collect();
        i += 1;
        let value = if i < chars.len() && chars[i] == '"' {
            let open = i;
            i += 1;
            let vstart = i;
            while i < chars.len() && chars[i] != '"' {
                i += 1;
            }
            if i >= chars.len() {
                return Err(err(line, open + 1, "unterminated quoted value"));
            }
            let v: String = chars[vstart..i].iter().collect();
            i += 1;
            v
        } else {
            let vstart = i;
            while i < chars.len() && !chars[i].is_whitespace() {
                i += 1;
            }
            chars[vstart..i].iter().collect()
        };
        out.push((start + 1, key, value));
    }
    Ok(out)
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" => Some(true),
        "false" => Some(false),
        _ => None,
    }
}

fn parse_labels(v: &str) -> Vec<String> {
    if v == "-" {
        return Vec::new();
    }
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

/// Parses one non-comment line.
pub fn parse_case(text: &str, line: usize) -> Result<CorpusCase> {
    let mut field = None;
    let mut case = CorpusCase {
        line,
        id: format!("line{line}"),
        field_d: 0,
        algebra: AlgebraChoice::Unramified,
        level: Vec::new(),
        expect: Expectations::default(),
        oracle: None,
        note: None,
    };
    let mut seen: Vec<String> = Vec::new();
    for (col, key, value) in items(text, line)? {
        if seen.contains(&key) {
            return Err(err(line, col, format!("duplicate key {key}")));
        }
        seen.push(key.clone());
        let vcol = col + key.chars().count() + 1;
        let bad = |what: &str| err(line, vcol, format!("{what}: {value:?}"));
        match key.as_str() {
            "id" => case.id = value.clone(),
            "field" => {
                let d: i64 = value.parse().map_err(|_| bad("field must be an integer"))?;
                if d < 1 {
                    return Err(bad("field must be at least 1"));
                }
                field = Some(d);
            }
            "algebra" => case.algebra = parse_algebra(&value).ok_or_else(|| bad("unrecognized algebra"))?,
            "level" => case.level = parse_labels(&value),
            "expect.total" => case.expect.total = Some(value.parse().map_err(|_| bad("expected an integer"))?),
            "expect.classes" => case.expect.classes = Some(value.parse().map_err(|_| bad("expected an integer"))?),
            "expect.h_divides" => {
                case.expect.h_divides = Some(parse_bool(&value).ok_or_else(|| bad("expected true or false"))?)
            }
            "expect.h_plus_divides" => {
                case.expect.h_plus_divides = Some(parse_bool(&value).ok_or_else(|| bad("expected true or false"))?)
            }
            "oracle" => case.oracle = Some(parse_bool(&value).ok_or_else(|| bad("expected true or false"))?),
            "note" => case.note = Some(value.clone()),
            _ => return Err(err(line, col, format!("unknown key {key}"))),
        }
    }
    case.field_d = field.ok_or_else(|| err(line, 1, "missing field="))?;
    Ok(case)
}

fn parse_algebra(v: &str) -> Option<AlgebraChoice> {
    if v == "unramified" {
        return Some(AlgebraChoice::Unramified);
    }
    if let Some(rest) = v.strip_prefix("ramified:") {
        let primes = parse_labels(rest);
        return (!primes.is_empty()).then_some(AlgebraChoice::RamifiedAt { primes });
    }
    let inner = v.strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    let (a, b) = (a.trim(), b.trim());
    parse_elem(1, a)?;
    parse_elem(1, b)?;
    Some(AlgebraChoice::Explicit { a: a.to_string(), b: b.to_string() })
}

/// `x`, `x+y*s`, `x-y*s`, `y*s` or `s` with rational `x`, `y`.
pub fn parse_elem(d: i64, text: &str) -> Option<FElem> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let rat = |s: &str| -> Option<Rat> {
        match s {
            "" | "+" => Some(Rat::from_integer(1.into())),
            "-" => Some(Rat::from_integer((-1).into())),
            _ => s.strip_prefix('+').unwrap_or(s).parse().ok(),
        }
    };
    let Some(body) = t.strip_suffix('s') else {
        return Some(FElem::from_rat(d, rat(&t).filter(|_| !t.is_empty())?));
    };
    let body = body.strip_suffix('*').unwrap_or(body);
    let split = body
        .char_indices()
        .filter(|&(i, c)| i > 0 && (c == '+' || c == '-') && !body[..i].ends_with('/'))
        .map(|(i, _)| i)
        .last();
    let (x, y) = match split {
        Some(i) => (rat(&body[..i])?, rat(&body[i..])?),
        None => (Rat::zero(), rat(body)?),
    };
    Some(FElem::new(d, x, y))
}

/// Resolves a prime label to a prime ideal of `f`.
pub fn resolve_prime(f: &RealQuadraticField, label: &str) -> Result<PrimeIdeal> {
    let bad = || Error::InvalidInput(format!("no prime labelled {label} in {}", f.name()));
    let (base, second) = match label.strip_suffix('\'') {
        Some(b) => (b, true),
        None => (label.strip_suffix("^2").unwrap_or(label), false),
    };
    let p: u64 = base.parse().map_err(|_| bad())?;
    if p < 2 || !quatclass::arith::int::is_prime(p) {
        return Err(bad());
    }
    let above = prime_ideals_above(f, p);
    let idx = usize::from(second);
    above.into_iter().nth(idx).ok_or_else(bad)
}

/// Parses a whole corpus; the first malformed line aborts with its
/// position.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusCase>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.chars().count() - trimmed.chars().count();
        out.push(parse_case(trimmed, i + 1).map_err(|e| match e {
            Error::Parse { line, column, msg } => Error::Parse { line, column: column + indent, msg },
            other => other,
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let c = parse_case(
            r#"id=x field=7 algebra=ramified:3,3' level=2 expect.total=4 expect.h_plus_divides=false note="a b""#,
            3,
        )
        .unwrap();
        assert_eq!(c.field_d, 7);
        assert_eq!(c.algebra, AlgebraChoice::RamifiedAt { primes: vec!["3".into(), "3'".into()] });
        assert_eq!(c.level, vec!["2"]);
        assert_eq!(c.expect.total, Some(4));
        assert_eq!(c.expect.h_plus_divides, Some(false));
        assert_eq!(c.note.as_deref(), Some("a b"));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_corpus("# c\n\n  field=7 level=3 bogus=1\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 19)),
            other => panic!("{other:?}"),
        }
        match parse_case("field=x", 1) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 7),
            other => panic!("{other:?}"),
        }
        assert!(parse_case("level=3", 1).is_err());
        assert!(parse_case("field=2 note=\"open", 1).is_err());
    }

    #[test]
    fn elements() {
        let e = parse_elem(7, "-3-1*s").unwrap();
        assert_eq!(e, FElem::from_ints(7, -3, -1));
        assert_eq!(parse_elem(7, "s").unwrap(), FElem::from_ints(7, 0, 1));
        assert_eq!(
            parse_elem(7, "1/2+3/2s").unwrap(),
            FElem::new(7, Rat::new(1.into(), 2.into()), Rat::new(3.into(), 2.into()))
        );
        assert_eq!(parse_elem(1, "-11").unwrap(), FElem::from_ints(1, -11, 0));
        assert!(parse_elem(1, "").is_none());
        assert!(parse_elem(1, "x").is_none());
    }

    #[test]
    fn prime_labels() {
        let f = RealQuadraticField::new(7).unwrap();
        let p3 = resolve_prime(&f, "3").unwrap();
        let p3b = resolve_prime(&f, "3'").unwrap();
        assert_ne!(p3, p3b);
        assert_eq!(resolve_prime(&f, "5").unwrap().norm(), 25);
        assert_eq!(resolve_prime(&f, "5^2").unwrap().norm(), 25);
        assert!(resolve_prime(&f, "5'").is_err());
        assert!(resolve_prime(&f, "4").is_err());
    }
}
