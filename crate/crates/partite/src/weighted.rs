//! Weighted H-partite graphs: one weighted vertex class per host vertex,
//! bipartite edge sets between host-adjacent classes, transversal
//! enumeration and the density profile.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::graph::{HostGraph, SmallGraph};
use crate::{Error, WEIGHT_SUM_TOL};

/// One vertex class: parallel id and weight vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Part {
    pub ids: Vec<String>,
    pub weights: Vec<f64>,
}

impl Part {
    pub fn new(vertices: Vec<(String, f64)>) -> Self {
        let (ids, weights) = vertices.into_iter().unzip();
        Part { ids, weights }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|i| i == id)
    }
}

/// Dense biadjacency relation between two parts.
#[derive(Debug, Clone, PartialEq)]
pub struct BiAdjacency {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl BiAdjacency {
    pub fn new(rows: usize, cols: usize) -> Self {
        BiAdjacency { rows, cols, bits: vec![false; rows * cols] }
    }

    pub fn set(&mut self, a: usize, b: usize) {
        self.bits[a * self.cols + b] = true;
    }

    pub fn clear(&mut self, a: usize, b: usize) {
        self.bits[a * self.cols + b] = false;
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.cols + b]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn transposed(&self) -> BiAdjacency {
        let mut t = BiAdjacency::new(self.cols, self.rows);
        for a in 0..self.rows {
            for b in 0..self.cols {
                if self.get(a, b) {
                    t.set(b, a);
                }
            }
        }
        t
    }
}

/// A transversal: one chosen vertex index per part, indexed by host vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transversal(pub Vec<u32>);

impl Transversal {
    pub fn choice(&self, part: usize) -> usize {
        self.0[part] as usize
    }
}

/// One invariant violation found by validation.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    WeightSum { part: usize, sum: f64 },
    WeightRange { part: usize, id: String, weight: f64 },
    EmptyPart { part: usize },
    StrayEdges { pair: (usize, usize), count: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::WeightSum { part, sum } => {
                write!(f, "part {part}: weights sum to {sum}, expected 1")
            }
            Violation::WeightRange { part, id, weight } => {
                write!(f, "part {part}: vertex `{id}` has weight {weight} outside [0,1]")
            }
            Violation::EmptyPart { part } => write!(f, "part {part} is empty"),
            Violation::StrayEdges { pair, count } => write!(
                f,
                "{count} edge(s) between parts {} and {} whose host vertices are not adjacent",
                pair.0, pair.1
            ),
        }
    }
}

/// All violations found in one pass; empty iff the graph is valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "- {v}")?;
        }
        Ok(())
    }
}

/// The per-host-edge bipartite densities and their minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    pub values: BTreeMap<(usize, usize), f64>,
    pub minimum: f64,
}

/// A weighted H-partite graph.
///
/// The structure tolerates invalid data (bad weight sums, stray edge
/// blocks, empty parts) so that [`PartiteGraph::validate`] can report every
/// violation; operations with a validity precondition reject invalid input.
#[derive(Debug, Clone, PartialEq)]
pub struct PartiteGraph {
    host: HostGraph,
    parts: Vec<Part>,
    /// Keyed by ordered part pairs `(x, y)` with `x < y`. Pairs that are not
    /// host edges may be present; validation reports them as stray.
    edges: BTreeMap<(usize, usize), BiAdjacency>,
}

impl PartiteGraph {
    pub fn new(host: HostGraph, parts: Vec<Part>) -> Self {
        assert_eq!(parts.len(), host.n(), "one part per host vertex");
        PartiteGraph { host, parts, edges: BTreeMap::new() }
    }

    pub fn host(&self) -> &HostGraph {
        &self.host
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn part(&self, x: usize) -> &Part {
        &self.parts[x]
    }

    pub fn edge_blocks(&self) -> &BTreeMap<(usize, usize), BiAdjacency> {
        &self.edges
    }

    /// Adds the edge between vertex `a` of part `x` and vertex `b` of part
    /// `y`. Panics on out-of-range indices; stray (non-host-adjacent) pairs
    /// are stored and left to validation.
    pub fn add_edge(&mut self, x: usize, a: usize, y: usize, b: usize) {
        assert!(x != y, "edges join distinct parts");
        let ((x, a), (y, b)) = if x < y { ((x, a), (y, b)) } else { ((y, b), (x, a)) };
        assert!(a < self.parts[x].len() && b < self.parts[y].len(), "vertex index out of range");
        let (rows, cols) = (self.parts[x].len(), self.parts[y].len());
        self.edges
            .entry((x, y))
            .or_insert_with(|| BiAdjacency::new(rows, cols))
            .set(a, b);
    }

    pub fn has_edge(&self, x: usize, a: usize, y: usize, b: usize) -> bool {
        let ((x, a), (y, b)) = if x < y { ((x, a), (y, b)) } else { ((y, b), (x, a)) };
        self.edges.get(&(x, y)).map(|m| m.get(a, b)).unwrap_or(false)
    }

    /// Reports every invariant violation; never aborts.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (x, part) in self.parts.iter().enumerate() {
            if part.is_empty() {
                report.violations.push(Violation::EmptyPart { part: x });
                continue;
            }
            let sum: f64 = part.weights.iter().sum();
            if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
                report.violations.push(Violation::WeightSum { part: x, sum });
            }
            for (i, &w) in part.weights.iter().enumerate() {
                if !(0.0..=1.0 + WEIGHT_SUM_TOL).contains(&w) {
                    report.violations.push(Violation::WeightRange {
                        part: x,
                        id: part.ids[i].clone(),
                        weight: w,
                    });
                }
            }
        }
        for (&(x, y), block) in &self.edges {
            if !self.host.has_edge(x, y) {
                let count = (0..block.rows())
                    .map(|a| (0..block.cols()).filter(|&b| block.get(a, b)).count())
                    .sum();
                if count > 0 {
                    report.violations.push(Violation::StrayEdges { pair: (x, y), count });
                }
            }
        }
        report
    }

    fn ensure_valid(&self) -> Result<(), Error> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::Invalid(report))
        }
    }

    /// The density alpha_xy of one host edge, straight from the definition.
    pub fn pair_density(&self, x: usize, y: usize) -> f64 {
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        let block = match self.edges.get(&(x, y)) {
            Some(b) => b,
            None => return 0.0,
        };
        let wx = &self.parts[x].weights;
        let wy = &self.parts[y].weights;
        let mut total = 0.0;
        for a in 0..wx.len() {
            let mut row = 0.0;
            for b in 0..wy.len() {
                if block.get(a, b) {
                    row += wy[b];
                }
            }
            total += wx[a] * row;
        }
        total
    }

    /// Density profile of a valid graph; invalid input is rejected with the
    /// validation report.
    pub fn density_profile(&self) -> Result<DensityProfile, Error> {
        self.ensure_valid()?;
        Ok(self.density_profile_unchecked())
    }

    /// Mechanical profile over host edges, with no validity check.
    pub fn density_profile_unchecked(&self) -> DensityProfile {
        let mut values = BTreeMap::new();
        let mut minimum = 1.0f64;
        for (x, y) in self.host.edges() {
            let d = self.pair_density(x, y);
            minimum = minimum.min(d);
            values.insert((x, y), d);
        }
        if values.is_empty() {
            minimum = 1.0;
        }
        DensityProfile { values, minimum }
    }

    /// Number of transversals (product of part sizes).
    pub fn transversal_count(&self) -> u128 {
        self.parts.iter().map(|p| p.len() as u128).product()
    }

    fn check_cap(&self, cap: u128) -> Result<u128, Error> {
        let count = self.transversal_count();
        if count > cap {
            Err(Error::EnumerationCap { count, cap })
        } else {
            Ok(count)
        }
    }

    /// Streams every transversal in lexicographic order of choices, calling
    /// `f` with the choice vector. `f` may break early.
    pub fn for_each_transversal<F>(&self, mut f: F)
    where
        F: FnMut(&[u32]) -> ControlFlow<()>,
    {
        let sizes: Vec<u32> = self.parts.iter().map(|p| p.len() as u32).collect();
        if sizes.iter().any(|&s| s == 0) {
            return;
        }
        let mut choices = vec![0u32; sizes.len()];
        loop {
            if let ControlFlow::Break(()) = f(&choices) {
                return;
            }
            // Lexicographic odometer: last part moves fastest.
            let mut i = sizes.len();
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                choices[i] += 1;
                if choices[i] < sizes[i] {
                    break;
                }
                choices[i] = 0;
            }
        }
    }

    /// Lexicographic enumeration with a cap; refuses when the product of
    /// part sizes exceeds it.
    pub fn transversals(&self, cap: u128) -> Result<Vec<Transversal>, Error> {
        self.check_cap(cap)?;
        let mut out = Vec::with_capacity(self.transversal_count() as usize);
        self.for_each_transversal(|c| {
            out.push(Transversal(c.to_vec()));
            ControlFlow::Continue(())
        });
        Ok(out)
    }

    /// The transversal with the given lexicographic index.
    pub fn transversal_at(&self, mut index: u128) -> Transversal {
        let sizes: Vec<u128> = self.parts.iter().map(|p| p.len() as u128).collect();
        let mut choices = vec![0u32; sizes.len()];
        for i in (0..sizes.len()).rev() {
            choices[i] = (index % sizes[i]) as u32;
            index /= sizes[i];
        }
        Transversal(choices)
    }

    /// The spanning subgraph of the host induced by a transversal.
    pub fn transversal_graph(&self, t: &Transversal) -> SmallGraph {
        assert_eq!(t.0.len(), self.parts.len(), "transversal length mismatch");
        for (x, &c) in t.0.iter().enumerate() {
            assert!((c as usize) < self.parts[x].len(), "choice out of range in part {x}");
        }
        self.transversal_graph_choices(&t.0)
    }

    pub(crate) fn transversal_graph_choices(&self, choices: &[u32]) -> SmallGraph {
        let mut g = SmallGraph::empty(self.host.n());
        for (x, y) in self.host.edges() {
            if let Some(block) = self.edges.get(&(x, y)) {
                if block.get(choices[x] as usize, choices[y] as usize) {
                    g.add_edge(x, y);
                }
            }
        }
        g
    }

    /// Maximum over transversals of the largest component order, with the
    /// first transversal attaining it.
    pub fn max_transversal_component(&self, cap: u128) -> Result<(usize, Transversal), Error> {
        self.check_cap(cap)?;
        let mut best = 0usize;
        let mut witness = None;
        self.for_each_transversal(|c| {
            let size = self.transversal_graph_choices(c).largest_component_size();
            if size > best {
                best = size;
                witness = Some(Transversal(c.to_vec()));
            }
            ControlFlow::Continue(())
        });
        let witness = witness.ok_or_else(|| Error::param("graph has an empty part"))?;
        Ok((best, witness))
    }

    /// Uniform-weight blow-up by `n`: every vertex becomes `n*w` clones of
    /// weight `1/n`; requires every `n*w` to be integral within 1e-9.
    /// Zero-weight vertices are dropped.
    pub fn blow_up(&self, n: u64) -> Result<PartiteGraph, Error> {
        if n == 0 {
            return Err(Error::param("blow-up factor must be positive"));
        }
        let mut counts: Vec<Vec<u64>> = Vec::with_capacity(self.parts.len());
        for (x, part) in self.parts.iter().enumerate() {
            let mut c = Vec::with_capacity(part.len());
            for (i, &w) in part.weights.iter().enumerate() {
                let scaled = w * n as f64;
                let rounded = scaled.round();
                if (scaled - rounded).abs() > 1e-9 {
                    return Err(Error::param(format!(
                        "blow-up by {n} is non-integral at part {x} vertex `{}` (weight {w})",
                        part.ids[i]
                    )));
                }
                c.push(rounded as u64);
            }
            counts.push(c);
        }
        let mut parts = Vec::with_capacity(self.parts.len());
        // offsets[x][i] = first clone index of vertex i in the new part x
        let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(self.parts.len());
        for (x, part) in self.parts.iter().enumerate() {
            let mut ids = Vec::new();
            let mut weights = Vec::new();
            let mut offs = Vec::with_capacity(part.len());
            for i in 0..part.len() {
                offs.push(ids.len());
                for k in 0..counts[x][i] {
                    ids.push(format!("{}.{k}", part.ids[i]));
                    weights.push(1.0 / n as f64);
                }
            }
            offsets.push(offs);
            parts.push(Part { ids, weights });
        }
        let mut out = PartiteGraph::new(self.host.clone(), parts);
        for (&(x, y), block) in &self.edges {
            for a in 0..block.rows() {
                if counts[x][a] == 0 {
                    continue;
                }
                for b in 0..block.cols() {
                    if counts[y][b] == 0 || !block.get(a, b) {
                        continue;
                    }
                    for da in 0..counts[x][a] as usize {
                        for db in 0..counts[y][b] as usize {
                            out.add_edge(x, offsets[x][a] + da, y, offsets[y][b] + db);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The same parts and weights over a host with a subset of the edges;
    /// biadjacency blocks of removed host edges are dropped.
    pub fn restrict_host(&self, sub: &HostGraph) -> Result<PartiteGraph, Error> {
        if sub.n() != self.host.n() {
            return Err(Error::param("host restriction must keep the vertex set"));
        }
        for (x, y) in sub.edges() {
            if !self.host.has_edge(x, y) {
                return Err(Error::param(format!(
                    "edge ({x},{y}) of the restricted host is not a host edge"
                )));
            }
        }
        let mut out = PartiteGraph::new(sub.clone(), self.parts.clone());
        for (&(x, y), block) in &self.edges {
            if sub.has_edge(x, y) {
                out.edges.insert((x, y), block.clone());
            }
        }
        Ok(out)
    }

    /// Relabels vertices inside each part by the given permutations
    /// (`perms[x][i]` is the new index of vertex `i`). Used by symmetry
    /// tests.
    pub fn permute_within_parts(&self, perms: &[Vec<usize>]) -> PartiteGraph {
        assert_eq!(perms.len(), self.parts.len());
        let mut parts = Vec::with_capacity(self.parts.len());
        for (x, part) in self.parts.iter().enumerate() {
            let mut ids = vec![String::new(); part.len()];
            let mut weights = vec![0.0; part.len()];
            for i in 0..part.len() {
                ids[perms[x][i]] = part.ids[i].clone();
                weights[perms[x][i]] = part.weights[i];
            }
            parts.push(Part { ids, weights });
        }
        let mut out = PartiteGraph::new(self.host.clone(), parts);
        for (&(x, y), block) in &self.edges {
            for a in 0..block.rows() {
                for b in 0..block.cols() {
                    if block.get(a, b) {
                        out.add_edge(x, perms[x][a], y, perms[y][b]);
                    }
                }
            }
        }
        out
    }

    /// Swaps the biadjacency orientation helper (used by glue).
    pub(crate) fn insert_block(&mut self, x: usize, y: usize, block: BiAdjacency) {
        if x < y {
            self.edges.insert((x, y), block);
        } else {
            self.edges.insert((y, x), block.transposed());
        }
    }
}
