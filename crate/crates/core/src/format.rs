//! The `OPCERT v1` text format.
//!
//! ```text
//! OPCERT v1 KN_PLUS_I n=10
//! DUP 0-5 1-6 2-7 3-8 4-9
//! FACTOR 0: (0 5 6 1 4) (2 3 9 7 8)
//! ...
//! ```
//!
//! The header variant is `KN_PLUS_I`, `KN_MINUS_I` (with a `MISSING` line in
//! place of `DUP`) or `EQUIPARTITE a=<parts> k=<part size>` (no matching
//! line). Lines starting with `#` and blank lines are ignored. Output is
//! always canonical: cycles start at their least vertex and head toward the
//! lesser neighbour, cycles are ordered by least vertex, pairs are written
//! `lo-hi` in ascending order.

use std::fmt::Write as _;

use crate::error::ParseError;
use crate::graph::{Cycle, Edge, TwoFactor, Vertex};
use crate::spec::{Certificate, ProblemSpec, Variant};

const MAGIC: &str = "OPCERT";
const VERSION: &str = "v1";

pub fn to_text(cert: &Certificate) -> String {
    let cert = cert.canonical();
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC} {VERSION} {} n={}", cert.spec.variant, cert.spec.n);
    let tag = match cert.spec.variant {
        Variant::KnPlusI => Some("DUP"),
        Variant::KnMinusI => Some("MISSING"),
        Variant::Equipartite { .. } => None,
    };
    if let Some(tag) = tag {
        out.push_str(tag);
        for e in &cert.matching {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    for (i, f) in cert.factors.iter().enumerate() {
        let _ = write!(out, "FACTOR {i}:");
        for c in f.cycles() {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
    }
    out
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::new(line, format!("expected {what}, found {tok:?}")))
}

fn parse_keyed(tok: Option<&str>, key: &str, line: usize) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::new(line, format!("missing {key}=")))?;
    let val = tok
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| ParseError::new(line, format!("expected {key}=<number>, found {tok:?}")))?;
    parse_num(val, line, "a number")
}

fn parse_header(text: &str, line: usize) -> Result<(Variant, usize), ParseError> {
    let mut toks = text.split_whitespace();
    if toks.next() != Some(MAGIC) {
        return Err(ParseError::new(line, format!("expected {MAGIC} header")));
    }
    match toks.next() {
        Some(VERSION) => {}
        other => {
            return Err(ParseError::new(
                line,
                format!("unsupported version {:?}", other.unwrap_or("")),
            ))
        }
    }
    let variant = match toks.next() {
        Some("KN_PLUS_I") => Variant::KnPlusI,
        Some("KN_MINUS_I") => Variant::KnMinusI,
        Some("EQUIPARTITE") => {
            let parts = parse_keyed(toks.next(), "a", line)?;
            let part_size = parse_keyed(toks.next(), "k", line)?;
            Variant::Equipartite { parts, part_size }
        }
        other => {
            return Err(ParseError::new(
                line,
                format!("unknown variant {:?}", other.unwrap_or("")),
            ))
        }
    };
    let n = parse_keyed(toks.next(), "n", line)?;
    if let Some(extra) = toks.next() {
        return Err(ParseError::new(line, format!("unexpected token {extra:?} in header")));
    }
    Ok((variant, n))
}

fn parse_pairs<'a>(toks: impl Iterator<Item = &'a str>, n: usize, line: usize) -> Result<Vec<Edge>, ParseError> {
    toks.map(|tok| {
        let (a, b) = tok
            .split_once('-')
            .ok_or_else(|| ParseError::new(line, format!("expected u-v pair, found {tok:?}")))?;
        let a: Vertex = parse_num(a, line, "a vertex")?;
        let b: Vertex = parse_num(b, line, "a vertex")?;
        for v in [a, b] {
            if v as usize >= n {
                return Err(ParseError::new(line, format!("vertex {v} out of range 0..{n}")));
            }
        }
        Edge::try_new(a, b).ok_or_else(|| ParseError::new(line, format!("pair {tok} is a loop")))
    })
    .collect()
}

fn parse_cycles(rest: &str, n: usize, line: usize) -> Result<Vec<Cycle>, ParseError> {
    let mut cycles = Vec::new();
    let mut chars = rest.trim();
    while !chars.is_empty() {
        let body = chars
            .strip_prefix('(')
            .ok_or_else(|| ParseError::new(line, format!("expected '(' at {chars:?}")))?;
        let close = body
            .find(')')
            .ok_or_else(|| ParseError::new(line, "unterminated cycle"))?;
        let mut verts = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for tok in body[..close].split_whitespace() {
            let v: Vertex = parse_num(tok, line, "a vertex")?;
            if v as usize >= n {
                return Err(ParseError::new(line, format!("vertex {v} out of range 0..{n}")));
            }
            if !seen.insert(v) {
                return Err(ParseError::new(line, format!("duplicate vertex {v} in cycle")));
            }
            verts.push(v);
        }
        if verts.len() < 3 {
            return Err(ParseError::new(line, format!("cycle of length {} is too short", verts.len())));
        }
        cycles.push(Cycle::new(verts).canonical());
        chars = body[close + 1..].trim_start();
    }
    Ok(cycles)
}

/// Structural parse; call the verifier to check the result. The spec's
/// length multiset is taken from factor 0.
pub fn parse(text: &str) -> Result<Certificate, ParseError> {
    let mut header = None;
    let mut matching: Option<Vec<Edge>> = None;
    let mut factors: Vec<(usize, usize, TwoFactor)> = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let Some((variant, n)) = header else {
            header = Some(parse_header(l, line)?);
            continue;
        };
        let (keyword, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match keyword {
            "DUP" | "MISSING" => {
                let wanted = match variant {
                    Variant::KnPlusI => "DUP",
                    Variant::KnMinusI => "MISSING",
                    Variant::Equipartite { .. } => {
                        return Err(ParseError::new(line, "equipartite certificates carry no matching"))
                    }
                };
                if keyword != wanted {
                    return Err(ParseError::new(line, format!("{keyword} line in a {variant} certificate")));
                }
                if matching.is_some() {
                    return Err(ParseError::new(line, format!("second {keyword} line")));
                }
                matching = Some(parse_pairs(rest.split_whitespace(), n, line)?);
            }
            k if k.starts_with("FACTOR") => {
                let after = l["FACTOR".len()..].trim_start();
                let (idx, cycles) = after
                    .split_once(':')
                    .ok_or_else(|| ParseError::new(line, "expected FACTOR <idx>:"))?;
                let idx: usize = parse_num(idx.trim(), line, "a factor index")?;
                let cycles = parse_cycles(cycles, n, line)?;
                factors.push((idx, line, TwoFactor::new(cycles).canonical()));
            }
            other => return Err(ParseError::new(line, format!("unknown line type {other:?}"))),
        }
    }

    let (variant, n) = header.ok_or_else(|| ParseError::new(last_line.max(1), "missing OPCERT header"))?;
    let matching = match variant {
        Variant::Equipartite { .. } => Vec::new(),
        _ => matching.ok_or_else(|| {
            ParseError::new(last_line, format!("{variant} certificate has no matching line"))
        })?,
    };
    factors.sort_by_key(|&(idx, _, _)| idx);
    for (pos, &(idx, line, _)) in factors.iter().enumerate() {
        if idx != pos {
            return Err(ParseError::new(line, format!("factor indices are not 0..{}", factors.len())));
        }
    }
    let factors: Vec<TwoFactor> = factors.into_iter().map(|(_, _, f)| f).collect();
    let lengths = factors
        .first()
        .map(TwoFactor::lengths)
        .ok_or_else(|| ParseError::new(last_line, "certificate has no factors"))?;
    let spec = ProblemSpec {
        variant,
        n,
        lengths,
    };
    Ok(Certificate::new(spec, matching, factors))
}
