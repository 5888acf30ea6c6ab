use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::Graph;
use crate::error::{Error, Result};

const NODES_TAG: &str = "# nodes:";

/// Parses the edge-list text format: one `u v` pair per line, `#` comments.
///
/// The node count is one past the largest id seen, or the value of a
/// `# nodes: N` comment when present (so trailing isolated nodes survive a
/// round trip).
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut declared: Option<usize> = None;
    let mut max_id: Option<usize> = None;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix(NODES_TAG) {
            declared = Some(rest.trim().parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad node count {:?}", rest.trim()),
            })?);
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let mut next_id = || -> Result<usize> {
            let tok = fields.next().ok_or_else(|| Error::Parse {
                line: lineno,
                msg: "expected two node ids".into(),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad node id {tok:?}"),
            })
        };
        let u = next_id()?;
        let v = next_id()?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: lineno,
                msg: "trailing fields after edge".into(),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("self-loop on node {u}"),
            });
        }
        let key = (u.min(v), u.max(v));
        if let Some(first) = seen.insert(key, lineno) {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("duplicate edge ({u}, {v}), first listed on line {first}"),
            });
        }
        max_id = Some(max_id.map_or(key.1, |m: usize| m.max(key.1)));
        edges.push((u, v));
    }
    let inferred = max_id.map_or(0, |m| m + 1);
    let n = match declared {
        Some(d) if d < inferred => {
            return Err(Error::arg(format!(
                "declared {d} nodes but edges reference node {}",
                inferred - 1
            )))
        }
        Some(d) => d,
        None => inferred,
    };
    Graph::from_edges(n, &edges)
}

/// Writes `g` in the edge-list format, each edge once with `u < v`.
pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    writeln!(w, "{NODES_TAG} {}", g.node_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}
