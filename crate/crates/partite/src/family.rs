//! Forbidden transversal families and the membership test on small graphs.

use serde::{Deserialize, Serialize};

use crate::graph::{GraphSpec, SmallGraph};
use crate::Error;

/// A family of forbidden transversal subgraphs.
///
/// The fast special cases avoid explicit subgraph lists: containing a member
/// of `AllTreesOfOrder(t)` is equivalent to having a connected component on
/// at least `t` vertices, and containing an odd cycle is equivalent to not
/// being bipartite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForbiddenFamily {
    /// All trees on `t` vertices.
    AllTreesOfOrder(usize),
    /// The Hamilton cycle through every host vertex.
    HamiltonCycle,
    /// All cycles of odd length.
    OddCycles,
    /// The clique on `t` vertices.
    Clique(usize),
    /// The path on `len` vertices.
    PathOfOrder(usize),
    /// The cycle on exactly `len` vertices.
    CycleOfOrder(usize),
    /// `copies` pairwise vertex-disjoint copies of a fixed graph.
    Factor { graph: GraphSpec, copies: usize },
    /// An explicit list of forbidden graphs.
    ExplicitList(Vec<GraphSpec>),
}

impl ForbiddenFamily {
    /// True iff `s` contains some member of the family as a subgraph.
    pub fn contains_member(&self, s: &SmallGraph) -> bool {
        match self {
            ForbiddenFamily::AllTreesOfOrder(t) => s.largest_component_size() >= *t,
            ForbiddenFamily::HamiltonCycle => s.has_hamilton_cycle(),
            ForbiddenFamily::OddCycles => !s.is_bipartite(),
            ForbiddenFamily::Clique(t) => s.contains_clique(*t),
            ForbiddenFamily::PathOfOrder(len) => s.contains_path(*len),
            ForbiddenFamily::CycleOfOrder(len) => s.contains_cycle(*len),
            ForbiddenFamily::Factor { graph, copies } => {
                match SmallGraph::from_edges(graph.n, &graph.edges) {
                    Ok(f) => s.contains_disjoint_copies(&f, *copies),
                    Err(_) => false,
                }
            }
            ForbiddenFamily::ExplicitList(list) => list.iter().any(|spec| {
                SmallGraph::from_edges(spec.n, &spec.edges)
                    .map(|f| s.contains_subgraph(&f))
                    .unwrap_or(false)
            }),
        }
    }

    /// Validates the family against a host of `host_n` vertices.
    pub fn validate(&self, host_n: usize) -> Result<(), Error> {
        match self {
            ForbiddenFamily::AllTreesOfOrder(t) | ForbiddenFamily::Clique(t) => {
                if *t < 1 {
                    return Err(Error::param("family order must be at least 1"));
                }
            }
            ForbiddenFamily::PathOfOrder(len) | ForbiddenFamily::CycleOfOrder(len) => {
                if *len < 1 {
                    return Err(Error::param("family order must be at least 1"));
                }
            }
            ForbiddenFamily::ExplicitList(list) => {
                if list.is_empty() {
                    return Err(Error::param("explicit family list is empty"));
                }
                for spec in list {
                    if spec.n == 0 || spec.edges.is_empty() {
                        return Err(Error::param("explicit family member is empty"));
                    }
                    if spec.n > host_n {
                        return Err(Error::param(format!(
                            "family member on {} vertices exceeds the host order {host_n}",
                            spec.n
                        )));
                    }
                    SmallGraph::from_edges(spec.n, &spec.edges)?;
                }
            }
            ForbiddenFamily::Factor { graph, copies } => {
                if *copies == 0 {
                    return Err(Error::param("factor needs at least one copy"));
                }
                SmallGraph::from_edges(graph.n, &graph.edges)?;
                if graph.n * *copies > host_n {
                    return Err(Error::param(format!(
                        "factor of {} copies on {} vertices exceeds the host order {host_n}",
                        copies, graph.n
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Parses the CLI mini-language: `trees:T`, `hamilton`, `oddcycles`,
    /// `clique:T`, `path:L`, `cycle:L`, `factor:K3x2` (or `factor:C5x2`),
    /// `list:<file.json>`.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (text, None),
        };
        let int = |a: Option<&str>| -> Result<usize, Error> {
            a.and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::param(format!("family `{text}` needs an integer argument")))
        };
        match head {
            "trees" => Ok(ForbiddenFamily::AllTreesOfOrder(int(arg)?)),
            "hamilton" => Ok(ForbiddenFamily::HamiltonCycle),
            "oddcycles" => Ok(ForbiddenFamily::OddCycles),
            "clique" => Ok(ForbiddenFamily::Clique(int(arg)?)),
            "path" => Ok(ForbiddenFamily::PathOfOrder(int(arg)?)),
            "cycle" => Ok(ForbiddenFamily::CycleOfOrder(int(arg)?)),
            "factor" => {
                let arg = arg.ok_or_else(|| Error::param("factor needs an argument like K3x2"))?;
                let (graph_part, copies_part) = arg
                    .split_once('x')
                    .ok_or_else(|| Error::param(format!("bad factor spec `{arg}`, expected e.g. K3x2")))?;
                let copies: usize = copies_part
                    .parse()
                    .map_err(|_| Error::param(format!("bad copy count in `{arg}`")))?;
                let graph = parse_factor_graph(graph_part)?;
                Ok(ForbiddenFamily::Factor { graph, copies })
            }
            "list" => {
                let path = arg.ok_or_else(|| Error::param("list needs a file path"))?;
                let data = std::fs::read_to_string(path)
                    .map_err(|e| Error::param(format!("cannot read {path}: {e}")))?;
                let list: Vec<GraphSpec> = serde_json::from_str(&data)
                    .map_err(|e| Error::param(format!("bad graph list in {path}: {e}")))?;
                Ok(ForbiddenFamily::ExplicitList(list))
            }
            _ => Err(Error::param(format!("unknown family `{text}`"))),
        }
    }

    /// Short display form mirroring the parse syntax.
    pub fn describe(&self) -> String {
        match self {
            ForbiddenFamily::AllTreesOfOrder(t) => format!("trees:{t}"),
            ForbiddenFamily::HamiltonCycle => "hamilton".into(),
            ForbiddenFamily::OddCycles => "oddcycles".into(),
            ForbiddenFamily::Clique(t) => format!("clique:{t}"),
            ForbiddenFamily::PathOfOrder(l) => format!("path:{l}"),
            ForbiddenFamily::CycleOfOrder(l) => format!("cycle:{l}"),
            ForbiddenFamily::Factor { graph, copies } => {
                format!("factor:<{}v>x{copies}", graph.n)
            }
            ForbiddenFamily::ExplicitList(list) => format!("list:<{} graphs>", list.len()),
        }
    }
}

fn parse_factor_graph(text: &str) -> Result<GraphSpec, Error> {
    let (kind, num) = text.split_at(1);
    let n: usize = num
        .parse()
        .map_err(|_| Error::param(format!("bad factor graph `{text}`")))?;
    let small = match kind {
        "K" => crate::graph::HostGraph::complete(n),
        "C" => crate::graph::HostGraph::cycle(n),
        "P" => crate::graph::HostGraph::path(n),
        _ => return Err(Error::param(format!("bad factor graph `{text}`, expected K/C/P"))),
    };
    Ok(small.spec())
}
