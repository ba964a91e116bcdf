//! Edge-list files: a header `n m W`, then `m` lines `u v w`; `#` starts a comment line.

use super::Graph;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based line number; 0 for file-level problems.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

fn fields<const K: usize>(line_no: usize, line: &str) -> Result<[u64; K], ParseError> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != K {
        return Err(err(line_no, format!("expected {K} integers, found {}", parts.len())));
    }
    let mut out = [0u64; K];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| err(line_no, format!("not a non-negative integer: {p:?}")))?;
    }
    Ok(out)
}

/// Iterates `(line number, content)` of non-blank, non-comment lines.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_header(line_no: usize, line: &str) -> Result<(usize, usize, u64), ParseError> {
    let [n, m, w] = fields::<3>(line_no, line)?;
    if w == 0 {
        return Err(err(line_no, "W must be positive"));
    }
    Ok((n as usize, m as usize, w))
}

pub(crate) fn parse_edge(line_no: usize, line: &str, n: usize, w_bound: u64) -> Result<(usize, usize, u64), ParseError> {
    let [u, v, w] = fields::<3>(line_no, line)?;
    let (u, v) = (u as usize, v as usize);
    if u >= n || v >= n {
        return Err(err(line_no, format!("node out of range for n={n}")));
    }
    if u == v {
        return Err(err(line_no, "self-loop"));
    }
    if w == 0 || w > w_bound {
        return Err(err(line_no, format!("weight {w} outside 1..={w_bound}")));
    }
    Ok((u, v, w))
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = data_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| err(0, "missing header `n m W`"))?;
    let (n, m, w_bound) = parse_header(hl, header)?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut last = hl;
    for (no, line) in lines {
        last = no;
        let (u, v, w) = parse_edge(no, line, n, w_bound)?;
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(err(no, format!("duplicate edge {u}-{v}")));
        }
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(err(last, format!("header declares {m} edges, found {}", edges.len())));
    }
    Graph::new(n, w_bound, edges).map_err(|e| err(0, e.to_string()))
}

pub fn read_edge_list(path: &Path) -> Result<Graph, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| err(0, format!("{}: {e}", path.display())))?;
    parse_edge_list(&text)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {} {}\n", g.n(), g.m(), g.max_weight());
    for &(u, v, w) in g.edges() {
        writeln!(out, "{u} {v} {w}").unwrap();
    }
    out
}
