//! Edge-list text format.
//!
//! ```text
//! # optional comments, anywhere after '#'
//! n m
//! u v
//! ...
//! ```
//!
//! Exactly `m` edge lines follow the header. Serialization writes each edge
//! as `u v` with `u < v`, edges in lexicographic order, LF line endings.

use std::fmt::Write as _;

use super::{Graph, GraphError};

fn parse_err(line: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_pair(line_no: usize, text: &str) -> Result<(usize, usize), GraphError> {
    let mut fields = text.split_whitespace();
    let mut next = |what: &str| -> Result<usize, GraphError> {
        let field = fields
            .next()
            .ok_or_else(|| parse_err(line_no, format!("missing {what}")))?;
        field
            .parse()
            .map_err(|_| parse_err(line_no, format!("invalid {what} {field:?}")))
    };
    let pair = (next("first field")?, next("second field")?);
    if fields.next().is_some() {
        return Err(parse_err(line_no, "expected exactly two fields"));
    }
    Ok(pair)
}

pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let (n, m) = parse_pair(header_line, header)?;

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = 0;
    for (line_no, line) in lines {
        let (a, b) = parse_pair(line_no, line)?;
        if a >= n || b >= n {
            return Err(parse_err(line_no, format!("vertex id out of range in edge {a} {b}")));
        }
        if a == b {
            return Err(parse_err(line_no, format!("self-loop at vertex {a}")));
        }
        let (u, v) = (a.min(b), a.max(b));
        if adj[u].contains(&v) {
            return Err(parse_err(line_no, format!("duplicate edge {u} {v}")));
        }
        adj[u].push(v);
        adj[v].push(u);
        count += 1;
        if count > m {
            return Err(parse_err(line_no, format!("more than the declared {m} edges")));
        }
    }
    if count != m {
        return Err(parse_err(
            text.lines().count().max(1),
            format!("expected {m} edges, found {count}"),
        ));
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    Ok(Graph::from_sorted_adjacency(adj))
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + 12 * g.m());
    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
