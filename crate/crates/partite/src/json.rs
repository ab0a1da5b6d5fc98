//! JSON interchange format for weighted partite graphs.
//!
//! ```json
//! { "host": {"n": 4, "edges": [[0,1],[0,2]]},
//!   "parts": {"0": [{"id":"a","w":0.5},{"id":"b","w":0.5}]},
//!   "edges": [[["0","a"],["1","c"]]] }
//! ```
//!
//! Weight sums are validated on load; a graph that parses but violates the
//! partite invariants is rejected with the full validation report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{GraphSpec, HostGraph};
use crate::weighted::{Part, PartiteGraph};
use crate::Error;

#[derive(Debug, Serialize, Deserialize)]
struct VertexJson {
    id: String,
    w: f64,
}

type EndpointJson = (String, String);

#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    host: GraphSpec,
    parts: BTreeMap<String, Vec<VertexJson>>,
    edges: Vec<(EndpointJson, EndpointJson)>,
}

/// Serializes a graph; output is byte-deterministic for a given graph.
pub fn to_json(g: &PartiteGraph) -> String {
    let parts: BTreeMap<String, Vec<VertexJson>> = g
        .parts()
        .iter()
        .enumerate()
        .map(|(x, part)| {
            let vs = part
                .ids
                .iter()
                .zip(&part.weights)
                .map(|(id, &w)| VertexJson { id: id.clone(), w })
                .collect();
            (x.to_string(), vs)
        })
        .collect();
    let mut edges = Vec::new();
    for (&(x, y), block) in g.edge_blocks() {
        for a in 0..block.rows() {
            for b in 0..block.cols() {
                if block.get(a, b) {
                    edges.push((
                        (x.to_string(), g.part(x).ids[a].clone()),
                        (y.to_string(), g.part(y).ids[b].clone()),
                    ));
                }
            }
        }
    }
    edges.sort();
    let doc = GraphJson { host: g.host().spec(), parts, edges };
    let mut out = serde_json::to_string_pretty(&doc).expect("graph serialization cannot fail");
    out.push('\n');
    out
}

/// Parses a graph, validating weight sums and structure. `require_valid`
/// controls whether validation violations abort the load (the CLI `validate`
/// verb wants the raw graph to report on).
pub fn from_json(text: &str, require_valid: bool) -> Result<PartiteGraph, Error> {
    let doc: GraphJson = serde_json::from_str(text)
        .map_err(|e| Error::param(format!("malformed graph JSON: {e}")))?;
    let host = HostGraph::new(doc.host.n, &doc.host.edges)?;
    let n = host.n();
    let mut parts = vec![Part::new(Vec::new()); n];
    for (key, vertices) in &doc.parts {
        let x: usize = key
            .parse()
            .map_err(|_| Error::param(format!("part key `{key}` is not a host vertex index")))?;
        if x >= n {
            return Err(Error::param(format!("part key `{key}` is outside 0..{n}")));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in vertices {
            if !seen.insert(&v.id) {
                return Err(Error::param(format!("duplicate vertex id `{}` in part {x}", v.id)));
            }
        }
        parts[x] = Part::new(vertices.iter().map(|v| (v.id.clone(), v.w)).collect());
    }
    let mut g = PartiteGraph::new(host, parts);
    for ((px, ida), (py, idb)) in &doc.edges {
        let x: usize = px
            .parse()
            .map_err(|_| Error::param(format!("edge endpoint part `{px}` is not an index")))?;
        let y: usize = py
            .parse()
            .map_err(|_| Error::param(format!("edge endpoint part `{py}` is not an index")))?;
        if x >= n || y >= n {
            return Err(Error::param(format!("edge endpoint part outside 0..{n}")));
        }
        if x == y {
            return Err(Error::param(format!("edge with both endpoints in part {x}")));
        }
        let a = g
            .part(x)
            .index_of(ida)
            .ok_or_else(|| Error::param(format!("unknown vertex `{ida}` in part {x}")))?;
        let b = g
            .part(y)
            .index_of(idb)
            .ok_or_else(|| Error::param(format!("unknown vertex `{idb}` in part {y}")))?;
        g.add_edge(x, a, y, b);
    }
    if require_valid {
        let report = g.validate();
        if !report.is_valid() {
            return Err(Error::Invalid(report));
        }
    }
    Ok(g)
}
