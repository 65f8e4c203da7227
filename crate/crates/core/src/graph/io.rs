//! Plain-text graph format.
//!
//! ```text
//! graph <n_vertices> <n_edges>
//! e <u> <v>
//! ```
//!
//! Indices are 0-based and `e v v` declares a self-loop. Blank lines and lines
//! starting with `#` are ignored, which is where vertex labels go.

use std::fmt::Write as _;

use super::Graph;
use crate::error::{Error, Result};

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line: line_no, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match (header, fields.as_slice()) {
            (None, ["graph", n, m]) => {
                let n = n.parse().map_err(|_| err(format!("bad vertex count {n:?}")))?;
                let m = m.parse().map_err(|_| err(format!("bad edge count {m:?}")))?;
                if n == 0 {
                    return Err(err("graph must have at least one vertex".into()));
                }
                header = Some((n, m, line_no));
            }
            (None, _) => return Err(err("expected header `graph <n_vertices> <n_edges>`".into())),
            (Some((n, _, _)), ["e", u, v]) => {
                let parse = |s: &str| -> Result<usize> {
                    let x: usize = s.parse().map_err(|_| err(format!("bad vertex index {s:?}")))?;
                    if x >= n {
                        return Err(err(format!("vertex {x} out of range for {n} vertices")));
                    }
                    Ok(x)
                };
                edges.push((parse(u)?, parse(v)?));
            }
            (Some(_), _) => return Err(err(format!("expected `e <u> <v>`, got {line:?}"))),
        }
    }
    let (n, m, header_line) = header.ok_or(Error::Parse { line: 1, message: "missing header".into() })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: header_line,
            message: format!("header declares {m} edges but {} were listed", edges.len()),
        });
    }
    Graph::new(n, edges)
}

pub fn write_graph(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("graph {} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

/// Like [`write_graph`], preceded by a `# <index> <label>` comment block.
pub fn write_graph_with_labels(g: &Graph, labels: &[String]) -> String {
    let mut out = String::from("# labels\n");
    for (v, label) in labels.iter().enumerate() {
        let _ = writeln!(out, "# {v} {label}");
    }
    out.push_str(&write_graph(g));
    out
}

/// Reads the `# <index> <label>` block written by [`write_graph_with_labels`].
pub fn parse_labels(text: &str, n: usize) -> Option<Vec<String>> {
    let mut lines = text.lines().map(str::trim).skip_while(|l| *l != "# labels");
    lines.next()?;
    let mut labels = vec![String::new(); n];
    let mut seen = 0;
    for line in lines {
        let Some(rest) = line.strip_prefix('#') else { break };
        let (index, label) = rest.trim().split_once(' ')?;
        let index: usize = index.parse().ok()?;
        *labels.get_mut(index)? = label.to_string();
        seen += 1;
    }
    (seen == n).then_some(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_self_loop() {
        let g = Graph::new(3, [(0, 1), (2, 2)]).unwrap();
        let text = write_graph(&g);
        assert_eq!(text, "graph 3 2\ne 0 1\ne 2 2\n");
        assert_eq!(parse_graph(&text).unwrap(), g);
        let labelled = write_graph_with_labels(&g, &["a".into(), "b".into(), "c".into()]);
        assert_eq!(parse_graph(&labelled).unwrap(), g);
        assert_eq!(parse_labels(&labelled, 3).unwrap(), vec!["a", "b", "c"]);
        assert_eq!(parse_labels(&text, 3), None);
    }

    #[test]
    fn malformed_lines_carry_line_numbers() {
        let e = parse_graph("graph 3 1\ne 0 5\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        let e = parse_graph("graph 3 1\n\nedge 0 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
        let e = parse_graph("e 0 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e:?}");
        let e = parse_graph("graph 3 2\ne 0 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e:?}");
        let e = parse_graph("graph x 2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e:?}");
    }
}
