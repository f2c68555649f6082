//! Text forms used by the CLI, config files and test fixtures:
//!
//! * partitions: `(5,4,4,3,1)`, `()` for the empty one;
//! * specializations: `trivial`, `single:0.5`, `rho:mu=0.7i`,
//!   `tp:a=0.3,0.2;b=0.1;g=0.4`, `scale:0.25*single:0.5`, `neg:single:0.5`,
//!   unions joined with `+`;
//! * profiles: `A=1011010;mark=1`;
//! * process configs: flat key-value text with keys `N`, `t`, `z`, `a[k]`,
//!   `b[k]`.
//!
//! All parsers return `Error::Config` on malformed input and never panic;
//! they are exercised by the fuzz targets under `fuzz/`.

use crate::cylindric::Profile;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::process::ProcessSpec;
use crate::quad::cr;
use crate::symfunc::Specialization;
use num_complex::Complex64;
use std::fmt::Write as _;

/// Parses `(5,4,4,3,1)` or `()`.
pub fn parse_partition(s: &str) -> Result<Partition> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::config(format!("partition must be parenthesised: {s:?}")))?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(Partition::empty());
    }
    let mut parts = Vec::new();
    for tok in inner.split(',') {
        let v: u32 = tok
            .trim()
            .parse()
            .map_err(|_| Error::config(format!("bad part {tok:?}")))?;
        parts.push(v);
    }
    if parts.len() > 4096 {
        return Err(Error::config("too many parts"));
    }
    Partition::new(parts)
}

/// Renders a partition in the same format.
pub fn format_partition(p: &Partition) -> String {
    p.to_string()
}

/// Parses complex literals: `1.5`, `-2`, `0.7i`, `-0.3i`, `0.3+0.2i`,
/// `1-0.5i`, `i`, `-i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s: String = s.trim().chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::config("empty complex literal"));
    }
    // split at the last +/- that is not a leading sign and not part of an
    // exponent
    let bytes = s.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
            split = Some(i);
            break;
        }
    }
    let parse_real = |tok: &str| -> Result<f64> {
        tok.parse::<f64>()
            .map_err(|_| Error::config(format!("bad number {tok:?}")))
    };
    let parse_imag = |tok: &str| -> Result<f64> {
        let body = &tok[..tok.len() - 1]; // strip the trailing 'i'
        match body {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => parse_real(body),
        }
    };
    if s.ends_with('i') {
        match split {
            Some(i) => {
                let re = parse_real(&s[..i])?;
                let im = parse_imag(&s[i..])?;
                Ok(Complex64::new(re, im))
            }
            None => Ok(Complex64::new(0.0, parse_imag(&s)?)),
        }
    } else {
        if split.is_some() {
            return Err(Error::config(format!("malformed complex literal {s:?}")));
        }
        Ok(cr(parse_real(&s)?))
    }
}

/// Renders a complex number in a form [`parse_complex`] accepts.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

const TERM_KEYWORDS: [&str; 6] = ["trivial", "single:", "rho:", "tp:", "scale:", "neg:"];

fn starts_with_keyword(s: &str) -> bool {
    let t = s.trim_start();
    TERM_KEYWORDS.iter().any(|k| t.starts_with(k))
}

/// Parses a specialization literal. A `+` separates union members only when
/// what follows it starts a new term keyword, so complex literals like
/// `0.3+0.2i` pass through unharmed.
pub fn parse_specialization(s: &str) -> Result<Specialization> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::config("empty specialization literal"));
    }
    // split into top-level union terms
    let mut terms = Vec::new();
    let mut start = 0usize;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'+' && i > start && starts_with_keyword(&s[i + 1..]) {
            terms.push(&s[start..i]);
            start = i + 1;
        }
        i += 1;
    }
    terms.push(&s[start..]);
    if terms.len() == 1 {
        parse_term(terms[0])
    } else {
        let parsed: Result<Vec<Specialization>> = terms.iter().map(|t| parse_term(t)).collect();
        Ok(Specialization::Union(parsed?))
    }
}

fn parse_term(s: &str) -> Result<Specialization> {
    let s = s.trim();
    if s == "trivial" {
        return Ok(Specialization::Trivial);
    }
    if let Some(rest) = s.strip_prefix("single:") {
        return Ok(Specialization::Single(parse_complex(rest)?));
    }
    if let Some(rest) = s.strip_prefix("rho:") {
        let body = rest
            .trim()
            .strip_prefix("mu=")
            .ok_or_else(|| Error::config("rho form is rho:mu=<complex>"))?;
        return Ok(Specialization::Rho(parse_complex(body)?));
    }
    if let Some(rest) = s.strip_prefix("neg:") {
        return Ok(Specialization::Negated(Box::new(parse_term(rest)?)));
    }
    if let Some(rest) = s.strip_prefix("scale:") {
        let (factor, inner) = rest
            .split_once('*')
            .ok_or_else(|| Error::config("scale form is scale:<complex>*<term>"))?;
        return Ok(Specialization::Scaled(
            parse_complex(factor)?,
            Box::new(parse_term(inner)?),
        ));
    }
    if let Some(rest) = s.strip_prefix("tp:") {
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        let mut drift = 0.0f64;
        for field in rest.split(';') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let (key, vals) = field
                .split_once('=')
                .ok_or_else(|| Error::config(format!("tp field {field:?} needs key=value")))?;
            let list: Result<Vec<f64>> = vals
                .split(',')
                .filter(|v| !v.trim().is_empty())
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::config(format!("bad tp value {v:?}")))
                })
                .collect();
            let list = list?;
            match key.trim() {
                "a" => alpha = list,
                "b" => beta = list,
                "g" => {
                    drift = *list
                        .first()
                        .ok_or_else(|| Error::config("tp drift g needs one value"))?
                }
                other => return Err(Error::config(format!("unknown tp field {other:?}"))),
            }
        }
        if alpha.iter().chain(beta.iter()).any(|v| *v < 0.0) || drift < 0.0 {
            return Err(Error::config("tp parameters must be nonnegative"));
        }
        if alpha.len() > 64 || beta.len() > 64 {
            return Err(Error::config("too many tp parameters"));
        }
        return Ok(Specialization::TotallyPositive { alpha, beta, drift });
    }
    Err(Error::config(format!("unknown specialization term {s:?}")))
}

/// Renders a specialization in the literal syntax.
pub fn format_specialization(spec: &Specialization) -> String {
    match spec {
        Specialization::Trivial => "trivial".to_string(),
        Specialization::Single(x) => format!("single:{}", format_complex(*x)),
        Specialization::Rho(mu) => format!("rho:mu={}", format_complex(*mu)),
        Specialization::TotallyPositive { alpha, beta, drift } => {
            let mut out = String::from("tp:");
            let join = |v: &[f64]| {
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            let mut fields = Vec::new();
            if !alpha.is_empty() {
                fields.push(format!("a={}", join(alpha)));
            }
            if !beta.is_empty() {
                fields.push(format!("b={}", join(beta)));
            }
            if *drift != 0.0 || fields.is_empty() {
                fields.push(format!("g={drift}"));
            }
            let _ = write!(out, "{}", fields.join(";"));
            out
        }
        Specialization::Scaled(q, inner) => {
            format!(
                "scale:{}*{}",
                format_complex(*q),
                format_specialization(inner)
            )
        }
        Specialization::Negated(inner) => format!("neg:{}", format_specialization(inner)),
        Specialization::Union(v) => v
            .iter()
            .map(format_specialization)
            .collect::<Vec<_>>()
            .join("+"),
    }
}

/// Parses `A=1011010;mark=1`.
pub fn parse_profile(s: &str) -> Result<Profile> {
    let s = s.trim();
    let mut word: Option<Vec<u8>> = None;
    let mut mark: usize = 0;
    let mut mark_seen = false;
    for field in s.split(';') {
        let field = field.trim();
        if field.is_empty() {
            continue;
        }
        let (key, val) = field
            .split_once('=')
            .ok_or_else(|| Error::config(format!("profile field {field:?} needs key=value")))?;
        match key.trim() {
            "A" => {
                let bits: Result<Vec<u8>> = val
                    .trim()
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(0u8),
                        '1' => Ok(1u8),
                        other => Err(Error::config(format!("bad profile bit {other:?}"))),
                    })
                    .collect();
                let bits = bits?;
                if bits.len() > 4096 {
                    return Err(Error::config("profile too long"));
                }
                word = Some(bits);
            }
            "mark" => {
                mark = val
                    .trim()
                    .parse()
                    .map_err(|_| Error::config(format!("bad mark {val:?}")))?;
                mark_seen = true;
            }
            other => return Err(Error::config(format!("unknown profile field {other:?}"))),
        }
    }
    let word = word.ok_or_else(|| Error::config("profile needs an A= word"))?;
    if !mark_seen {
        // default: first '≺'
        mark = word
            .iter()
            .position(|&b| b == 0)
            .map(|i| i + 1)
            .ok_or_else(|| Error::config("profile needs at least one 0 bit"))?;
    }
    Profile::new(word, mark)
}

pub fn format_profile(p: &Profile) -> String {
    p.to_string()
}

/// Parses the flat key-value process config. Entries are separated by
/// newlines or semicolons; a semicolon only starts a new entry when what
/// follows looks like a top-level key (`N`, `t`, `z`, `a[..]`, `b[..]`), so
/// `tp:...;b=...;g=...` literals survive inline use. `#` starts a comment.
pub fn parse_process_config(text: &str) -> Result<ProcessSpec> {
    let mut entries: Vec<String> = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        // split the line at semicolons that start a new top-level key
        let mut start = 0usize;
        let bytes = line.as_bytes();
        for i in 0..bytes.len() {
            if bytes[i] == b';' && looks_like_top_key(&line[i + 1..]) {
                let piece = line[start..i].trim();
                if !piece.is_empty() {
                    entries.push(piece.to_string());
                }
                start = i + 1;
            }
        }
        let piece = line[start..].trim();
        if !piece.is_empty() {
            entries.push(piece.to_string());
        }
    }
    let mut n: Option<usize> = None;
    let mut t: Option<f64> = None;
    let mut z = cr(1.0);
    let mut a_entries: Vec<(usize, Specialization)> = Vec::new();
    let mut b_entries: Vec<(usize, Specialization)> = Vec::new();
    for entry in &entries {
        let (key, val) = entry
            .split_once('=')
            .ok_or_else(|| Error::config(format!("config entry {entry:?} needs key=value")))?;
        let key = key.trim();
        let val = val.trim();
        match key {
            "N" => {
                let v: usize = val
                    .parse()
                    .map_err(|_| Error::config(format!("bad N {val:?}")))?;
                if v == 0 || v > 64 {
                    return Err(Error::config("N must be in 1..=64"));
                }
                n = Some(v);
            }
            "t" => {
                t = Some(
                    val.parse()
                        .map_err(|_| Error::config(format!("bad t {val:?}")))?,
                );
            }
            "z" => z = parse_complex(val)?,
            _ => {
                let (side, idx) = parse_slot_key(key)?;
                let spec = parse_specialization(val)?;
                if side == 'a' {
                    a_entries.push((idx, spec));
                } else {
                    b_entries.push((idx, spec));
                }
            }
        }
    }
    let n = n.ok_or_else(|| Error::config("config needs N"))?;
    let t = t.ok_or_else(|| Error::config("config needs t"))?;
    let mut a = vec![Specialization::Trivial; n];
    let mut b = vec![Specialization::Trivial; n];
    for (idx, spec) in a_entries {
        if idx == 0 || idx > n {
            return Err(Error::config(format!("a[{idx}] outside 1..={n}")));
        }
        a[idx - 1] = spec;
    }
    for (idx, spec) in b_entries {
        if idx == 0 || idx > n {
            return Err(Error::config(format!("b[{idx}] outside 1..={n}")));
        }
        b[idx - 1] = spec;
    }
    ProcessSpec::new(t, z, a, b)
}

fn looks_like_top_key(rest: &str) -> bool {
    let rest = rest.trim_start();
    for key in ["N=", "t=", "z="] {
        if rest.starts_with(key) {
            return true;
        }
    }
    rest.starts_with("a[") || rest.starts_with("b[")
}

fn parse_slot_key(key: &str) -> Result<(char, usize)> {
    let side = key
        .chars()
        .next()
        .filter(|c| *c == 'a' || *c == 'b')
        .ok_or_else(|| Error::config(format!("unknown config key {key:?}")))?;
    let idx_str = key[1..]
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::config(format!("slot key must look like a[k], got {key:?}")))?;
    let idx: usize = idx_str
        .trim()
        .parse()
        .map_err(|_| Error::config(format!("bad slot index {idx_str:?}")))?;
    Ok((side, idx))
}

/// Renders a process spec as a config document.
pub fn format_process_config(spec: &ProcessSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "N = {}", spec.period());
    let _ = writeln!(out, "t = {}", spec.t());
    let _ = writeln!(out, "z = {}", format_complex(spec.z()));
    for k in 1..=spec.period() {
        let _ = writeln!(out, "a[{k}] = {}", format_specialization(spec.a(k)));
        let _ = writeln!(out, "b[{k}] = {}", format_specialization(spec.b(k)));
    }
    out
}
