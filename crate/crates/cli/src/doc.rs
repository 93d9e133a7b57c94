//! JSON documents exchanged on the command line, plus DOT export.
//!
//! Digraphs travel as `{"n": ..., "arcs": [[tail, head], ...]}` with an
//! optional `labels` array of length n; undirected graphs use `edges`
//! instead of `arcs`. Parsing reports the offending record by position.

use phylograph::{Digraph, SimpleGraph};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DigraphDocument {
    pub n: usize,
    pub arcs: Vec<(u32, u32)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub labels: Option<Vec<String>>,
}

impl DigraphDocument {
    pub fn from_digraph(d: &Digraph) -> DigraphDocument {
        DigraphDocument {
            n: d.vertex_count(),
            arcs: d.arcs().to_vec(),
            labels: None,
        }
    }

    /// Validates arc by arc so errors name the offending record.
    pub fn to_digraph(&self) -> Result<Digraph, String> {
        for (i, &(t, h)) in self.arcs.iter().enumerate() {
            Digraph::new(self.n, &[(t, h)]).map_err(|e| format!("arc {i} ({t}, {h}): {e}"))?;
        }
        let d = Digraph::new(self.n, &self.arcs).map_err(|e| e.to_string())?;
        if let Some(labels) = &self.labels {
            if labels.len() != self.n {
                return Err(format!(
                    "labels has {} entries for {} vertices",
                    labels.len(),
                    self.n
                ));
            }
        }
        Ok(d)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphDocument {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub labels: Option<Vec<String>>,
}

impl GraphDocument {
    pub fn from_graph(g: &SimpleGraph) -> GraphDocument {
        GraphDocument {
            n: g.vertex_count(),
            edges: g.edges().to_vec(),
            labels: None,
        }
    }

    pub fn to_graph(&self) -> Result<SimpleGraph, String> {
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            SimpleGraph::new(self.n, &[(a, b)]).map_err(|e| format!("edge {i} ({a}, {b}): {e}"))?;
        }
        let g = SimpleGraph::new(self.n, &self.edges).map_err(|e| e.to_string())?;
        if let Some(labels) = &self.labels {
            if labels.len() != self.n {
                return Err(format!(
                    "labels has {} entries for {} vertices",
                    labels.len(),
                    self.n
                ));
            }
        }
        Ok(g)
    }
}

/// DOT rendering of a phylogeny graph: underlying edges solid, cared
/// edges dashed and grey, with their carers in a tooltip attribute.
pub fn phylogeny_dot(
    name: &str,
    n: usize,
    labels: Option<&[String]>,
    underlying: &[(u32, u32)],
    cared: &[((u32, u32), Vec<u32>)],
) -> String {
    let mut out = String::new();
    let label = |v: u32| -> String {
        match labels {
            Some(ls) => format!("{:?}", ls[v as usize]),
            None => format!("{v}"),
        }
    };
    out.push_str(&format!("graph {name} {{\n"));
    for v in 0..n as u32 {
        out.push_str(&format!("  {v} [label={}];\n", label(v)));
    }
    for &(a, b) in underlying {
        out.push_str(&format!("  {a} -- {b};\n"));
    }
    for ((a, b), carers) in cared {
        let carers: Vec<String> = carers.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!(
            "  {a} -- {b} [style=\"dashed\", color=\"grey50\", tooltip=\"cared by {}\"];\n",
            carers.join(",")
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digraph_document_round_trip() {
        let d = Digraph::new(4, &[(0, 1), (1, 2), (0, 3)]).unwrap();
        let doc = DigraphDocument::from_digraph(&d);
        let json = serde_json::to_string(&doc).unwrap();
        let back: DigraphDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_digraph().unwrap(), d);
    }

    #[test]
    fn errors_name_the_offending_record() {
        let doc = DigraphDocument {
            n: 2,
            arcs: vec![(0, 1), (1, 5)],
            labels: None,
        };
        let err = doc.to_digraph().unwrap_err();
        assert!(err.contains("arc 1"), "{err}");
    }
}
