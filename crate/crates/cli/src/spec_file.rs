//! Line-oriented cone description files.
//!
//! ```text
//! # a polyhedral cone in the plane
//! kind = polyhedral
//! dim = 2
//! gen = 1,0
//! gen = 1,1
//! ```
//!
//! `orthant` and `lorentz` take `dim`, `psd_real` and `hermitian` take `k`.

use std::fmt::Write as _;
use std::path::Path;

use eudoxus::{ConeSpace, ConeSpec, Vector};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}, column {column}: {message}")]
pub struct SpecError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn fail<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, SpecError> {
    Err(SpecError { line, column, message: message.into() })
}

/// A `key = value` line with 1-based positions of both parts.
struct Entry<'a> {
    line: usize,
    key: &'a str,
    value: &'a str,
    value_col: usize,
}

fn entries(text: &str) -> Result<Vec<Entry<'_>>, SpecError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let Some(eq) = body.find('=') else {
            let col = body.len() - body.trim_start().len() + 1;
            return fail(line, col, "expected `key = value`");
        };
        let key = body[..eq].trim();
        let rest = &body[eq + 1..];
        let value = rest.trim();
        let value_col = eq + 2 + (rest.len() - rest.trim_start().len());
        if key.is_empty() {
            return fail(line, 1, "missing key before `=`");
        }
        out.push(Entry { line, key, value, value_col });
    }
    Ok(out)
}

fn parse_usize(e: &Entry<'_>) -> Result<usize, SpecError> {
    match e.value.parse::<usize>() {
        Ok(0) => fail(e.line, e.value_col, format!("{} must be positive", e.key)),
        Ok(n) => Ok(n),
        Err(_) => fail(e.line, e.value_col, format!("{} must be a positive integer, got `{}`", e.key, e.value)),
    }
}

fn parse_vector(e: &Entry<'_>) -> Result<Vector, SpecError> {
    let mut values = Vec::new();
    let mut col = e.value_col;
    for part in e.value.split(',') {
        let lead = part.len() - part.trim_start().len();
        let item = part.trim();
        match item.parse::<f64>() {
            Ok(x) if x.is_finite() => values.push(x),
            _ => return fail(e.line, col + lead, format!("bad generator component `{item}`")),
        }
        col += part.len() + 1;
    }
    Ok(Vector::from_vec(values))
}

/// Parses a description without building the cone.
pub fn parse_cone_spec(text: &str) -> Result<ConeSpec, SpecError> {
    let entries = entries(text)?;
    let mut kind: Option<&Entry<'_>> = None;
    let mut size: Option<&Entry<'_>> = None;
    let mut gens: Vec<&Entry<'_>> = Vec::new();
    for e in &entries {
        match e.key {
            "kind" | "dim" | "k" => {
                let slot = if e.key == "kind" { &mut kind } else { &mut size };
                if let Some(prev) = slot {
                    return fail(e.line, 1, format!("`{}` repeats line {}", e.key, prev.line));
                }
                *slot = Some(e);
            }
            "gen" => gens.push(e),
            other => return fail(e.line, 1, format!("unknown key `{other}`")),
        }
    }
    let last = entries.last().map_or(1, |e| e.line);
    let Some(kind) = kind else { return fail(last, 1, "missing `kind`") };
    let Some(size) = size else { return fail(last, 1, "missing `dim` or `k`") };
    let wants_k = matches!(kind.value, "psd_real" | "hermitian");
    let known = matches!(kind.value, "orthant" | "lorentz" | "psd_real" | "hermitian" | "polyhedral");
    if !known {
        return fail(kind.line, kind.value_col, format!("unknown kind `{}`", kind.value));
    }
    if wants_k != (size.key == "k") {
        let expected = if wants_k { "k" } else { "dim" };
        return fail(size.line, 1, format!("{} takes `{expected}`, not `{}`", kind.value, size.key));
    }
    let n = parse_usize(size)?;
    if kind.value != "polyhedral" {
        if let Some(g) = gens.first() {
            return fail(g.line, 1, format!("`gen` is only valid for polyhedral cones, not {}", kind.value));
        }
    }
    Ok(match kind.value {
        "orthant" => ConeSpec::Orthant(n),
        "lorentz" => ConeSpec::Lorentz(n),
        "psd_real" => ConeSpec::PsdReal(n),
        "hermitian" => ConeSpec::Hermitian(n),
        _ => {
            if gens.is_empty() {
                return fail(last, 1, "polyhedral cone needs at least one `gen`");
            }
            let mut generators = Vec::with_capacity(gens.len());
            for g in &gens {
                let v = parse_vector(g)?;
                if v.len() != n {
                    return fail(g.line, g.value_col, format!("generator has {} components, dim is {n}", v.len()));
                }
                generators.push(v);
            }
            ConeSpec::Polyhedral { dim: n, generators }
        }
    })
}

/// Parses and builds the cone; construction errors point at the offending
/// line (the generator for zero generators, the first `gen` for dependent
/// ones, the size line otherwise).
pub fn load_cone(text: &str) -> Result<ConeSpace, SpecError> {
    let spec = parse_cone_spec(text)?;
    ConeSpace::new(spec.clone()).or_else(|err| {
        let entries = entries(text)?;
        let gen_lines: Vec<&Entry<'_>> = entries.iter().filter(|e| e.key == "gen").collect();
        let size_line = entries.iter().find(|e| e.key == "dim" || e.key == "k").map_or(1, |e| e.line);
        let msg = err.to_string();
        let line = match (&spec, gen_lines.first()) {
            (ConeSpec::Polyhedral { .. }, Some(first)) => zero_generator(&msg)
                .and_then(|i| gen_lines.get(i - 1))
                .map_or(first.line, |e| e.line),
            _ => size_line,
        };
        fail(line, 1, msg)
    })
}

fn zero_generator(msg: &str) -> Option<usize> {
    let rest = msg.split("generator ").nth(1)?;
    rest.split_whitespace().next()?.parse().ok()
}

/// Canonical text of a cone description; `parse_cone_spec` inverts it.
pub fn emit_cone_spec(spec: &ConeSpec) -> String {
    let mut out = String::new();
    let (kind, key, n) = match spec {
        ConeSpec::Orthant(n) => ("orthant", "dim", *n),
        ConeSpec::Lorentz(n) => ("lorentz", "dim", *n),
        ConeSpec::PsdReal(k) => ("psd_real", "k", *k),
        ConeSpec::Hermitian(k) => ("hermitian", "k", *k),
        ConeSpec::Polyhedral { dim, .. } => ("polyhedral", "dim", *dim),
    };
    let _ = writeln!(out, "kind = {kind}");
    let _ = writeln!(out, "{key} = {n}");
    if let ConeSpec::Polyhedral { generators, .. } = spec {
        for g in generators {
            let parts: Vec<String> = g.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "gen = {}", parts.join(","));
        }
    }
    out
}

/// A cone given either as a file path or inline as `kind:n`
/// (`orthant:3`, `psd_real:2`).
pub fn resolve_cone(arg: &str) -> Result<ConeSpace, String> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Some((kind, n)) = arg.split_once(':') {
            let key = if matches!(kind, "psd_real" | "hermitian") { "k" } else { "dim" };
            return load_cone(&format!("kind = {kind}\n{key} = {n}\n")).map_err(|e| format!("{arg}: {}", e.message));
        }
    }
    let text = std::fs::read_to_string(path).map_err(|e| format!("{arg}: {e}"))?;
    load_cone(&text).map_err(|e| format!("{arg}: {e}"))
}

/// Comma-separated numbers.
pub fn parse_numbers(text: &str) -> Result<Vector, String> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad number `{}`", s.trim())))
        .collect::<Result<Vec<_>, _>>()
        .map(Vector::from_vec)
}

/// Rows separated by `;`, entries by `,`.
pub fn parse_matrix(text: &str) -> Result<eudoxus::Matrix, String> {
    let rows: Vec<Vector> = text.split(';').map(parse_numbers).collect::<Result<_, _>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(format!("matrix must be square, got {n} rows of lengths {:?}", rows.iter().map(|r| r.len()).collect::<Vec<_>>()));
    }
    Ok(eudoxus::Matrix::from_fn(n, n, |i, j| rows[i][j]))
}
