//! DIMACS-style text format.
//!
//! Directed files: `p sp <n> <m>` followed by `a <u> <v> <w>` arc lines.
//! Undirected files: `p ud <n> <m>` followed by `e <u> <v>` edge lines.
//! Vertex ids are 1-based on disk and 0-based in memory; `c` lines are comments.

use super::{Edge, Graph, GraphError};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// `p sp` shortest-path files (directed, weighted).
    Sp,
    /// `p ud` files (undirected, unweighted).
    Ud,
    /// Whichever the header declares.
    Auto,
}

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, GraphError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

fn parse_vertex(tok: Option<&str>, line: usize, n: usize) -> Result<usize, GraphError> {
    let id: usize = parse_num(tok, line, "vertex id")?;
    if id == 0 {
        return Err(parse_err(line, "vertex id 0 in 1-based format"));
    }
    if id > n {
        return Err(parse_err(line, format!("vertex id {id} exceeds n = {n}")));
    }
    Ok(id - 1)
}

pub fn load_graph(bytes: &[u8], format: Format) -> Result<Graph, GraphError> {
    let text = std::str::from_utf8(bytes).map_err(|e| parse_err(0, format!("not UTF-8: {e}")))?;
    let mut header: Option<(bool, usize, usize)> = None;
    let mut arcs: Vec<Edge> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        match kind {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(parse_err(line, "duplicate problem line"));
                }
                let directed = match toks.next() {
                    Some("sp") => true,
                    Some("ud") => false,
                    other => {
                        return Err(parse_err(
                            line,
                            format!("unknown problem type `{}`", other.unwrap_or("")),
                        ))
                    }
                };
                match (format, directed) {
                    (Format::Sp, false) => return Err(parse_err(line, "expected `p sp` header")),
                    (Format::Ud, true) => return Err(parse_err(line, "expected `p ud` header")),
                    _ => {}
                }
                let n = parse_num(toks.next(), line, "vertex count")?;
                let m = parse_num(toks.next(), line, "edge count")?;
                header = Some((directed, n, m));
            }
            "a" | "e" => {
                let Some((directed, n, _)) = header else {
                    return Err(parse_err(line, "edge line before problem line"));
                };
                if directed != (kind == "a") {
                    return Err(parse_err(line, format!("`{kind}` line does not match header")));
                }
                let u = parse_vertex(toks.next(), line, n)?;
                let v = parse_vertex(toks.next(), line, n)?;
                if u == v {
                    return Err(parse_err(line, format!("self-loop at vertex {}", u + 1)));
                }
                if directed {
                    let w: i64 = parse_num(toks.next(), line, "weight")?;
                    arcs.push(Edge::new(u, v, w));
                } else {
                    pairs.push((u, v));
                }
                if toks.next().is_some() {
                    return Err(parse_err(line, "trailing tokens"));
                }
            }
            other => return Err(parse_err(line, format!("unknown line type `{other}`"))),
        }
    }

    let (directed, n, m) = header.ok_or_else(|| parse_err(0, "missing problem line"))?;
    let found = if directed { arcs.len() } else { pairs.len() };
    if found != m {
        return Err(GraphError::HeaderMismatch {
            what: if directed { "arcs" } else { "edges" },
            declared: m,
            found,
        });
    }
    if directed {
        Graph::directed(n, arcs)
    } else {
        Graph::undirected(n, pairs)
    }
}

pub fn save_graph(g: &Graph) -> Vec<u8> {
    let mut out = String::new();
    if g.is_directed() {
        let _ = writeln!(out, "p sp {} {}", g.n(), g.m());
        for e in g.edges() {
            let _ = writeln!(out, "a {} {} {}", e.u + 1, e.v + 1, e.w);
        }
    } else {
        let _ = writeln!(out, "p ud {} {}", g.n(), g.m());
        for e in g.edges() {
            let _ = writeln!(out, "e {} {}", e.u + 1, e.v + 1);
        }
    }
    out.into_bytes()
}

/// Canonical text of a valid file: comments and blank lines dropped, single
/// spaces, undirected edges sorted.
pub fn canonicalize(bytes: &[u8], format: Format) -> Result<Vec<u8>, GraphError> {
    load_graph(bytes, format).map(|g| save_graph(&g))
}
