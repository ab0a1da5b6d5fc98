//! Small graphs on at most 64 vertices, stored as adjacency bit rows, and
//! the host graphs built on top of them.

use serde::{Deserialize, Serialize};

use crate::Error;

/// Hard limit on vertex counts: adjacency rows are single `u64` words.
pub const MAX_VERTICES: usize = 64;

/// An undirected graph on `n <= 64` vertices with bitmask adjacency rows.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SmallGraph {
    n: usize,
    rows: Vec<u64>,
}

impl std::fmt::Debug for SmallGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SmallGraph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl SmallGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices supported");
        SmallGraph { n, rows: vec![0; n] }
    }

    /// Builds a graph from an edge list, rejecting loops and out-of-range
    /// endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        if n > MAX_VERTICES {
            return Err(Error::param(format!(
                "{n} vertices exceed the supported maximum of {MAX_VERTICES}"
            )));
        }
        let mut g = SmallGraph::empty(n);
        for &(u, v) in edges {
            if u == v {
                return Err(Error::param(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::param(format!(
                    "edge ({u},{v}) has an endpoint outside 0..{n}"
                )));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Wraps precomputed adjacency rows (must be symmetric and loop-free).
    pub(crate) fn from_rows(n: usize, rows: Vec<u64>) -> Self {
        debug_assert_eq!(rows.len(), n);
        debug_assert!((0..n).all(|v| rows[v] >> v & 1 == 0));
        SmallGraph { n, rows }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u] &= !(1 << v);
        self.rows[v] &= !(1 << u);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, u: usize) -> u64 {
        self.rows[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.rows[u].count_ones() as usize
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            let mut m = self.rows[u] >> (u + 1) << (u + 1);
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                out.push((u, v));
                m &= m - 1;
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Connected components as vertex bitmasks, ordered by lowest vertex.
    pub fn components(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        let full = self.full_mask();
        while seen != full {
            let start = (!seen & full).trailing_zeros() as usize;
            let mut comp = 1u64 << start;
            loop {
                let mut grown = comp;
                let mut m = comp;
                while m != 0 {
                    let v = m.trailing_zeros() as usize;
                    grown |= self.rows[v];
                    m &= m - 1;
                }
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn largest_component_size(&self) -> usize {
        self.components()
            .iter()
            .map(|c| c.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![-1i8; self.n];
        for s in 0..self.n {
            if color[s] >= 0 {
                continue;
            }
            color[s] = 0;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let mut m = self.rows[u];
                while m != 0 {
                    let v = m.trailing_zeros() as usize;
                    m &= m - 1;
                    if color[v] < 0 {
                        color[v] = 1 - color[u];
                        stack.push(v);
                    } else if color[v] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Exact Hamiltonicity test: backtracking, pruned by the degree-two
    /// requirement and a connectivity pre-check.
    pub fn has_hamilton_cycle(&self) -> bool {
        let n = self.n;
        if n < 3 {
            return false;
        }
        if (0..n).any(|v| self.degree(v) < 2) || !self.is_connected() {
            return false;
        }
        // Path always starts at 0; a cycle must close back into 0.
        let mut path = vec![0usize];
        self.hamilton_extend(&mut path, 1u64)
    }

    fn hamilton_extend(&self, path: &mut Vec<usize>, visited: u64) -> bool {
        let last = *path.last().unwrap();
        if path.len() == self.n {
            return self.has_edge(last, path[0]);
        }
        let mut m = self.rows[last] & !visited;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            path.push(v);
            if self.hamilton_extend(path, visited | 1 << v) {
                return true;
            }
            path.pop();
        }
        false
    }

    /// True iff the graph contains a clique on `t` vertices.
    pub fn contains_clique(&self, t: usize) -> bool {
        if t <= 1 {
            return t == 0 || self.n >= 1;
        }
        self.clique_extend(0, self.full_mask(), t)
    }

    fn clique_extend(&self, size: usize, cand: u64, t: usize) -> bool {
        if size == t {
            return true;
        }
        if size + (cand.count_ones() as usize) < t {
            return false;
        }
        let mut m = cand;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            // Only extend upwards to avoid revisiting vertex sets.
            if self.clique_extend(size + 1, m & self.rows[v], t) {
                return true;
            }
        }
        false
    }

    /// True iff the graph contains a simple path on `len` vertices.
    pub fn contains_path(&self, len: usize) -> bool {
        if len == 0 {
            return true;
        }
        if len == 1 {
            return self.n >= 1;
        }
        if len > self.n {
            return false;
        }
        (0..self.n).any(|s| self.path_extend(s, 1u64 << s, 1, len))
    }

    fn path_extend(&self, last: usize, visited: u64, have: usize, want: usize) -> bool {
        if have == want {
            return true;
        }
        let mut m = self.rows[last] & !visited;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if self.path_extend(v, visited | 1 << v, have + 1, want) {
                return true;
            }
        }
        false
    }

    /// True iff the graph contains a cycle on exactly `len` vertices.
    pub fn contains_cycle(&self, len: usize) -> bool {
        if len < 3 || len > self.n {
            return false;
        }
        // Anchor the cycle at its minimum vertex; only larger vertices may
        // appear on it.
        (0..self.n).any(|s| self.cycle_extend(s, s, 1u64 << s, 1, len))
    }

    fn cycle_extend(&self, start: usize, last: usize, visited: u64, have: usize, want: usize) -> bool {
        if have == want {
            return self.has_edge(last, start);
        }
        let mut m = self.rows[last] & !visited;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if v < start {
                continue;
            }
            if self.cycle_extend(start, v, visited | 1 << v, have + 1, want) {
                return true;
            }
        }
        false
    }

    /// Subgraph isomorphism: true iff `pat` embeds into `self` (as a
    /// subgraph, not necessarily induced). Backtracking over `pat` vertices
    /// in decreasing-degree order with degree pruning.
    pub fn contains_subgraph(&self, pat: &SmallGraph) -> bool {
        if pat.n > self.n || pat.edge_count() > self.edge_count() {
            return false;
        }
        let mut order: Vec<usize> = (0..pat.n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(pat.degree(v)));
        let mut assign = vec![usize::MAX; pat.n];
        self.embed(pat, &order, 0, &mut assign, 0u64)
    }

    fn embed(&self, pat: &SmallGraph, order: &[usize], i: usize, assign: &mut [usize], used: u64) -> bool {
        if i == order.len() {
            return true;
        }
        let u = order[i];
        'cand: for v in 0..self.n {
            if used >> v & 1 == 1 || self.degree(v) < pat.degree(u) {
                continue;
            }
            let mut m = pat.rows[u];
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                m &= m - 1;
                let img = assign[w];
                if img != usize::MAX && !self.has_edge(v, img) {
                    continue 'cand;
                }
            }
            assign[u] = v;
            if self.embed(pat, order, i + 1, assign, used | 1 << v) {
                return true;
            }
            assign[u] = usize::MAX;
        }
        false
    }

    /// True iff `copies` pairwise vertex-disjoint copies of `f` embed into
    /// the graph.
    pub fn contains_disjoint_copies(&self, f: &SmallGraph, copies: usize) -> bool {
        if copies == 0 {
            return true;
        }
        self.factor_extend(f, copies, self.full_mask())
    }

    fn factor_extend(&self, f: &SmallGraph, left: usize, avail: u64) -> bool {
        if left == 0 {
            return true;
        }
        if (avail.count_ones() as usize) < left * f.n {
            return false;
        }
        let v = avail.trailing_zeros() as usize;
        // Either v hosts part of the next copy, or it is skipped entirely.
        let subsets = SubsetsContaining::new(avail, v, f.n);
        for subset in subsets {
            if self.restriction(subset).contains_spanning(f)
                && self.factor_extend(f, left - 1, avail & !subset)
            {
                return true;
            }
        }
        self.factor_extend(f, left, avail & !(1u64 << v))
    }

    /// The subgraph induced on `mask`, relabeled to 0..popcount(mask).
    pub fn restriction(&self, mask: u64) -> SmallGraph {
        let verts: Vec<usize> = (0..self.n).filter(|&v| mask >> v & 1 == 1).collect();
        let mut g = SmallGraph::empty(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// True iff `pat` embeds using *all* vertices of `self` (requires equal
    /// orders).
    fn contains_spanning(&self, pat: &SmallGraph) -> bool {
        pat.n == self.n && self.contains_subgraph(pat)
    }
}

/// Iterator over `size`-subsets of `avail` that contain the fixed vertex
/// `anchor`, as bitmasks.
struct SubsetsContaining {
    rest: Vec<usize>,
    idx: Vec<usize>,
    anchor: u64,
    k: usize,
    done: bool,
}

impl SubsetsContaining {
    fn new(avail: u64, anchor: usize, size: usize) -> Self {
        let rest: Vec<usize> = (0..64)
            .filter(|&v| v != anchor && avail >> v & 1 == 1)
            .collect();
        let k = size - 1;
        let done = rest.len() < k;
        SubsetsContaining { rest, idx: (0..k).collect(), anchor: 1u64 << anchor, k, done }
    }
}

impl Iterator for SubsetsContaining {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        let mask = self.anchor | self.idx.iter().fold(0u64, |m, &i| m | 1 << self.rest[i]);
        // Advance the combination odometer.
        let n = self.rest.len();
        let mut advanced = false;
        let mut i = self.k;
        while i > 0 {
            i -= 1;
            if self.idx[i] + (self.k - i) < n {
                self.idx[i] += 1;
                for j in i + 1..self.k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.done = true;
        }
        Some(mask)
    }
}

/// Plain edge-list form used in JSON files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

/// The pattern graph H whose blow-up hosts everything.
///
/// Vertices are `0..n`. Construction rejects self-loops and out-of-range
/// endpoints, so a `HostGraph` is always structurally sound; connectivity is
/// reported, not required.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostGraph {
    graph: SmallGraph,
}

impl HostGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        Ok(HostGraph { graph: SmallGraph::from_edges(n, edges)? })
    }

    pub fn from_small(graph: SmallGraph) -> Self {
        HostGraph { graph }
    }

    pub fn as_small(&self) -> &SmallGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.graph.edges()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.graph.degree(v)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.graph.has_edge(u, v)
    }

    pub fn is_connected(&self) -> bool {
        self.graph.is_connected()
    }

    pub fn spec(&self) -> GraphSpec {
        GraphSpec { n: self.n(), edges: self.edges() }
    }

    /// All automorphisms as permutation vectors (`perm[v]` is the image of
    /// `v`). Backtracking with degree filtering; fine for the small hosts
    /// this crate targets.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        self.aut_extend(0, &mut perm, 0u64, &mut out);
        out
    }

    fn aut_extend(&self, u: usize, perm: &mut [usize], used: u64, out: &mut Vec<Vec<usize>>) {
        let n = self.n();
        if u == n {
            out.push(perm.to_vec());
            return;
        }
        'cand: for v in 0..n {
            if used >> v & 1 == 1 || self.degree(v) != self.degree(u) {
                continue;
            }
            for w in 0..u {
                if self.has_edge(u, w) != self.has_edge(v, perm[w]) {
                    continue 'cand;
                }
            }
            perm[u] = v;
            self.aut_extend(u + 1, perm, used | 1 << v, out);
            perm[u] = usize::MAX;
        }
    }

    // Builtin hosts.

    pub fn complete(r: usize) -> Self {
        let mut g = SmallGraph::empty(r);
        for u in 0..r {
            for v in u + 1..r {
                g.add_edge(u, v);
            }
        }
        HostGraph { graph: g }
    }

    /// K_r minus the edge {0,1}.
    pub fn complete_minus_edge(r: usize) -> Self {
        let mut h = Self::complete(r);
        h.graph.remove_edge(0, 1);
        h
    }

    /// K_r minus the edge {0,1} and the further matching edges given.
    pub fn complete_minus_matching(r: usize, extra: &[(usize, usize)]) -> Result<Self, Error> {
        let mut h = Self::complete_minus_edge(r);
        let mut touched = 0b11u64;
        for &(u, v) in extra {
            if u == v || u >= r || v >= r {
                return Err(Error::param(format!("bad matching edge ({u},{v})")));
            }
            let m = (1u64 << u) | (1u64 << v);
            if touched & m != 0 {
                return Err(Error::param(format!(
                    "matching edge ({u},{v}) shares an endpoint with another deleted edge"
                )));
            }
            touched |= m;
            h.graph.remove_edge(u, v);
        }
        Ok(h)
    }

    pub fn cycle(r: usize) -> Self {
        let mut g = SmallGraph::empty(r);
        for v in 0..r {
            g.add_edge(v, (v + 1) % r);
        }
        HostGraph { graph: g }
    }

    /// The path 0 - 1 - ... - r-1.
    pub fn path(r: usize) -> Self {
        let mut g = SmallGraph::empty(r);
        for v in 0..r.saturating_sub(1) {
            g.add_edge(v, v + 1);
        }
        HostGraph { graph: g }
    }

    /// The star on `r` vertices, center 0.
    pub fn star(r: usize) -> Self {
        let mut g = SmallGraph::empty(r);
        for v in 1..r {
            g.add_edge(0, v);
        }
        HostGraph { graph: g }
    }

    /// The ladder on `2r` vertices: two paths 0..r and r..2r joined by rungs.
    pub fn ladder(r: usize) -> Self {
        let mut g = SmallGraph::empty(2 * r);
        for v in 0..r.saturating_sub(1) {
            g.add_edge(v, v + 1);
            g.add_edge(r + v, r + v + 1);
        }
        for v in 0..r {
            g.add_edge(v, r + v);
        }
        HostGraph { graph: g }
    }

    /// The d-dimensional hypercube on vertices 0..2^d.
    pub fn hypercube(d: usize) -> Self {
        let n = 1usize << d;
        let mut g = SmallGraph::empty(n);
        for v in 0..n {
            for b in 0..d {
                let u = v ^ (1 << b);
                if u > v {
                    g.add_edge(v, u);
                }
            }
        }
        HostGraph { graph: g }
    }

    /// The triangle {1,2,3} with the pendant edge {0,1}.
    pub fn k4_minus_p3() -> Self {
        HostGraph::new(4, &[(0, 1), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    /// Parses builtin host names: `K5`, `K5-e`, `K4-P3`, `C6`, `P4`,
    /// `star:5`, `ladder:3`, `Q3`.
    pub fn builtin(name: &str) -> Result<Self, Error> {
        let int = |s: &str| -> Result<usize, Error> {
            s.parse()
                .map_err(|_| Error::param(format!("bad number in host name `{name}`")))
        };
        if name == "K4-P3" {
            return Ok(Self::k4_minus_p3());
        }
        if let Some(arg) = name.strip_prefix("star:") {
            let r = int(arg)?;
            if r < 2 {
                return Err(Error::param("star host needs at least 2 vertices"));
            }
            return Ok(Self::star(r));
        }
        if let Some(arg) = name.strip_prefix("ladder:") {
            let r = int(arg)?;
            if r < 2 {
                return Err(Error::param("ladder host needs at least 2 rungs"));
            }
            return Ok(Self::ladder(r));
        }
        if let Some(rest) = name.strip_prefix('K') {
            if let Some(arg) = rest.strip_suffix("-e") {
                let r = int(arg)?;
                if r < 3 {
                    return Err(Error::param("K-e host needs at least 3 vertices"));
                }
                return Ok(Self::complete_minus_edge(r));
            }
            let r = int(rest)?;
            if r < 1 || r > MAX_VERTICES {
                return Err(Error::param(format!("complete host size {r} unsupported")));
            }
            return Ok(Self::complete(r));
        }
        if let Some(arg) = name.strip_prefix('C') {
            let r = int(arg)?;
            if r < 3 {
                return Err(Error::param("cycle host needs at least 3 vertices"));
            }
            return Ok(Self::cycle(r));
        }
        if let Some(arg) = name.strip_prefix('P') {
            let r = int(arg)?;
            if r < 1 {
                return Err(Error::param("path host needs at least 1 vertex"));
            }
            return Ok(Self::path(r));
        }
        if let Some(arg) = name.strip_prefix('Q') {
            let d = int(arg)?;
            if !(1..=6).contains(&d) {
                return Err(Error::param("hypercube host supports d in 1..=6"));
            }
            return Ok(Self::hypercube(d));
        }
        Err(Error::param(format!("unknown builtin host `{name}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_and_connectivity() {
        let g = SmallGraph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(g.largest_component_size(), 3);
        assert!(!g.is_connected());
        assert!(SmallGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap().is_connected());
    }

    #[test]
    fn hamilton_four_cycle() {
        let c4 = SmallGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert!(c4.has_hamilton_cycle());
        let p4 = SmallGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(!p4.has_hamilton_cycle());
        // Two triangles sharing a cut edge: connected, all degrees >= 2, but
        // not Hamiltonian.
        let bowtie_ish = SmallGraph::from_edges(
            6,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)],
        )
        .unwrap();
        assert!(!bowtie_ish.has_hamilton_cycle());
    }

    #[test]
    fn bipartite_odd_even() {
        let c4 = SmallGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert!(c4.is_bipartite());
        let c5 = HostGraph::cycle(5);
        assert!(!c5.as_small().is_bipartite());
    }

    #[test]
    fn cliques_paths_cycles() {
        let g = SmallGraph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]).unwrap();
        assert!(g.contains_clique(3));
        assert!(!g.contains_clique(4));
        assert!(g.contains_path(5));
        assert!(g.contains_cycle(3));
        assert!(!g.contains_cycle(4));
    }

    #[test]
    fn subgraph_embedding() {
        let host = HostGraph::cycle(5);
        let p3 = SmallGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(host.as_small().contains_subgraph(&p3));
        let k3 = SmallGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!host.as_small().contains_subgraph(&k3));
    }

    #[test]
    fn disjoint_copies() {
        // Two disjoint triangles plus an isolated vertex.
        let g = SmallGraph::from_edges(7, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let k3 = SmallGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(g.contains_disjoint_copies(&k3, 2));
        assert!(!g.contains_disjoint_copies(&k3, 3));
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(HostGraph::complete(4).automorphisms().len(), 24);
        assert_eq!(HostGraph::cycle(5).automorphisms().len(), 10);
        assert_eq!(HostGraph::path(4).automorphisms().len(), 2);
        assert_eq!(HostGraph::k4_minus_p3().automorphisms().len(), 2);
        assert_eq!(HostGraph::hypercube(3).automorphisms().len(), 48);
    }

    #[test]
    fn host_rejects_bad_edges() {
        assert!(HostGraph::new(3, &[(0, 0)]).is_err());
        assert!(HostGraph::new(3, &[(0, 3)]).is_err());
    }
}
