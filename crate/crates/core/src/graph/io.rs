use super::{BipartiteGraph, Graph, GraphError};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphFormat {
    /// JSON when the first non-blank character is `{`, edge list otherwise.
    #[default]
    Auto,
    EdgeList,
    Json,
}

/// Structured graph document: `{"n": 3, "edges": [[0,1],[1,2]], "U": [0,2], "W": [1]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(rename = "U", default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<usize>>,
    #[serde(rename = "W", default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl GraphDocument {
    pub fn from_graph(g: &Graph) -> Self {
        Self {
            n: g.n(),
            edges: g.edges().to_vec(),
            u: None,
            w: None,
            labels: g.labels().map(|l| l.to_vec()),
        }
    }

    pub fn from_bipartite(b: &BipartiteGraph) -> Self {
        Self {
            u: Some(b.u_vertices().to_vec()),
            w: Some(b.w_vertices().to_vec()),
            ..Self::from_graph(b.graph())
        }
    }
}

/// A parsed graph plus an optional declared bipartition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub u: Option<Vec<usize>>,
    pub w: Option<Vec<usize>>,
}

impl ParsedGraph {
    /// The declared bipartition, or a BFS 2-colouring when none was given.
    pub fn bipartite(&self) -> Result<BipartiteGraph, GraphError> {
        match (&self.u, &self.w) {
            (Some(u), Some(w)) => BipartiteGraph::from_sides(self.graph.clone(), u, w),
            (Some(u), None) => BipartiteGraph::new(self.graph.clone(), u),
            (None, Some(w)) => {
                let mut in_w = vec![false; self.graph.n()];
                for &v in w {
                    if v >= in_w.len() {
                        return Err(GraphError::VertexOutOfRange {
                            vertex: v,
                            n: self.graph.n(),
                        });
                    }
                    in_w[v] = true;
                }
                let u: Vec<usize> = (0..self.graph.n()).filter(|&v| !in_w[v]).collect();
                BipartiteGraph::from_sides(self.graph.clone(), &u, w)
            }
            (None, None) => BipartiteGraph::two_color(self.graph.clone()),
        }
    }
}

/// Plain edge list: one `u v` pair per line. Vertex names are arbitrary
/// tokens, numbered in order of first appearance. A line with a single token
/// declares an isolated vertex; `#` starts a comment.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |tok: &str| -> usize {
        if let Some(&id) = ids.get(tok) {
            return id;
        }
        let id = names.len();
        ids.insert(tok.to_string(), id);
        names.push(tok.to_string());
        id
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect();
        match toks.as_slice() {
            [] => {}
            [v] => {
                intern(v);
            }
            [a, b] => {
                let (x, y) = (intern(a), intern(b));
                edges.push((x, y));
            }
            _ => {
                return Err(GraphError::Parse {
                    line: lineno + 1,
                    msg: format!("expected 'u v', found {} tokens", toks.len()),
                })
            }
        }
    }
    let n = names.len();
    Graph::new(n, edges)?.with_labels(names)
}

pub fn parse_json(text: &str) -> Result<ParsedGraph, GraphError> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| GraphError::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    let mut graph = Graph::new(doc.n, doc.edges)?;
    if let Some(labels) = doc.labels {
        graph = graph.with_labels(labels)?;
    }
    Ok(ParsedGraph {
        graph,
        u: doc.u,
        w: doc.w,
    })
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<ParsedGraph, GraphError> {
    let json = match format {
        GraphFormat::Json => true,
        GraphFormat::EdgeList => false,
        GraphFormat::Auto => text.trim_start().starts_with('{'),
    };
    if json {
        parse_json(text)
    } else {
        Ok(ParsedGraph {
            graph: parse_edge_list(text)?,
            u: None,
            w: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_numbers_by_first_appearance() {
        let g = parse_edge_list("# square\n a b\n\tb   c\nc d\n d a  \nlonely\n").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(g.label(4), "lonely");
        assert!(matches!(parse_edge_list("a b c"), Err(GraphError::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("a a"), Err(GraphError::SelfLoop(0))));
    }

    #[test]
    fn json_with_sides() {
        let p = parse_graph(r#"{"n": 3, "edges": [[0,1],[1,2]], "U": [0,2], "W": [1]}"#, GraphFormat::Auto).unwrap();
        let b = p.bipartite().unwrap();
        assert_eq!(b.w_vertices(), &[1]);
        let bad = parse_json(r#"{"n": 3, "edges": [[0,1],[1,2]], "U": [0,1], "W": [2]}"#).unwrap();
        assert!(bad.bipartite().is_err());
        assert!(parse_json("{nope").is_err());
    }

    #[test]
    fn document_round_trip() {
        let b = BipartiteGraph::complete(2, 2);
        let text = serde_json::to_string(&GraphDocument::from_bipartite(&b)).unwrap();
        let back = parse_json(&text).unwrap().bipartite().unwrap();
        assert_eq!(back.graph().edges(), b.graph().edges());
        assert_eq!(back.u_vertices(), b.u_vertices());
    }
}
