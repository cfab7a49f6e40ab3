//! Plain-text graph files: a header `p <nodes> <edges>` (or `p edge <nodes>
//! <edges>`), then one `e u v` line per edge with 1-based node ids. Lines
//! starting with `c` are comments.

use super::{Graph, GraphError};

pub fn to_dimacs(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.node_count(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<Graph, GraphError> {
    let mut graph: Option<Graph> = None;
    let mut declared = 0usize;
    for (k, line) in text.lines().enumerate() {
        let err = |msg: &str| GraphError::Parse {
            line: k + 1,
            msg: msg.to_string(),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            [] | ["c", ..] => {}
            ["p", rest @ ..] => {
                if graph.is_some() {
                    return Err(err("duplicate header"));
                }
                let nums = match rest {
                    [n, m] | ["edge", n, m] | ["col", n, m] => (n.parse::<usize>(), m.parse::<usize>()),
                    _ => return Err(err("expected `p <nodes> <edges>`")),
                };
                let (Ok(n), Ok(m)) = nums else {
                    return Err(err("header counts must be naturals"));
                };
                declared = m;
                graph = Some(Graph::empty(n));
            }
            ["e", u, v] => {
                let g = graph.as_mut().ok_or_else(|| err("edge before header"))?;
                let (Ok(u), Ok(v)) = (u.parse::<u32>(), v.parse::<u32>()) else {
                    return Err(err("edge endpoints must be naturals"));
                };
                if u == 0 || v == 0 {
                    return Err(err("node ids are 1-based"));
                }
                g.add_edge(u - 1, v - 1).map_err(|e| err(&e.to_string()))?;
            }
            _ => return Err(err("unrecognised line")),
        }
    }
    let g = graph.ok_or(GraphError::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    if g.edge_count() != declared {
        return Err(GraphError::Parse {
            line: 0,
            msg: format!("header declares {declared} edges, found {}", g.edge_count()),
        });
    }
    Ok(g)
}
