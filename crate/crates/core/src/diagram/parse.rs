//! Reader for the line-based `.vtd` format.
//!
//! ```text
//! # virtual trefoil
//! tangle k=0
//! C+ 3 1 4 2
//! C+ 6 5 1 3
//! V 2 4 5 6
//! ```

use super::{ArcId, Crossing, CrossingSign, DiagramError, VTangleDiagram, VirtualCrossing};

/// Splits a line into tokens with their 1-based columns.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub(crate) fn syntax(line: usize, column: usize, msg: impl Into<String>) -> DiagramError {
    DiagramError::Syntax { line, column, msg: msg.into() }
}

pub(crate) fn parse_arc(line: usize, (col, tok): (usize, &str)) -> Result<ArcId, DiagramError> {
    tok.parse::<ArcId>().map_err(|_| syntax(line, col, format!("expected an arc id, found {tok:?}")))
}

pub(crate) fn parse_arcs<const N: usize>(
    line: usize,
    keyword: (usize, &str),
    rest: &[(usize, &str)],
) -> Result<[ArcId; N], DiagramError> {
    if rest.len() != N {
        let col = rest.get(N).map_or(keyword.0, |t| t.0);
        return Err(syntax(line, col, format!("{} expects {N} arc ids, found {}", keyword.1, rest.len())));
    }
    let mut out = [0; N];
    for (slot, &t) in out.iter_mut().zip(rest) {
        *slot = parse_arc(line, t)?;
    }
    Ok(out)
}

/// Parses `<key>=<int>` as found in header lines.
pub(crate) fn parse_kv(line: usize, (col, tok): (usize, &str), key: &str) -> Result<usize, DiagramError> {
    tok.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| syntax(line, col, format!("expected {key}=<int>, found {tok:?}")))
}

pub fn parse_diagram(text: &str) -> Result<VTangleDiagram, DiagramError> {
    let mut name = None;
    let mut declared = None;
    let mut crossings = Vec::new();
    let mut virtuals = Vec::new();
    let mut boundary = Vec::new();
    let mut loops = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if name.is_none() && declared.is_none() && !comment.trim().is_empty() {
                name = Some(comment.trim().to_string());
            }
            continue;
        }
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&first) = toks.first() else { continue };
        if declared.is_none() {
            if first.1 != "tangle" {
                return Err(syntax(line, first.0, "expected header `tangle k=<int>`"));
            }
            if toks.len() != 2 {
                let col = toks.get(2).map_or(first.0, |t| t.0);
                return Err(syntax(line, col, "header takes exactly one field `k=<int>`"));
            }
            declared = Some(parse_kv(line, toks[1], "k")?);
            continue;
        }
        let rest = &toks[1..];
        match first.1 {
            "C+" | "C-" => {
                let slots = parse_arcs::<4>(line, first, rest)?;
                let sign = if first.1 == "C+" { CrossingSign::Positive } else { CrossingSign::Negative };
                crossings.push(Crossing::new(slots, sign));
            }
            "V" => virtuals.push(VirtualCrossing { ports: parse_arcs::<4>(line, first, rest)? }),
            "B" => boundary.push(parse_arcs::<1>(line, first, rest)?[0]),
            "O" => loops.push(parse_arcs::<1>(line, first, rest)?[0]),
            "tangle" => return Err(syntax(line, first.0, "duplicate header")),
            other => return Err(syntax(line, first.0, format!("unknown directive {other:?}"))),
        }
    }

    let declared = declared.unwrap_or(0);
    if declared != boundary.len() {
        return Err(DiagramError::BoundaryCount { declared, found: boundary.len() });
    }
    VTangleDiagram::new(name.unwrap_or_else(|| "diagram".into()), crossings, virtuals, boundary, loops)
}
