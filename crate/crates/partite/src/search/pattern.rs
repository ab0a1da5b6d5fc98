//! Weight-free combinatorial patterns: the unit of search enumeration.
//!
//! A pattern fixes part sizes and the biadjacency relation of every host
//! edge; family-freeness depends only on this skeleton, never on weights.

use serde::{Deserialize, Serialize};

use crate::family::ForbiddenFamily;
use crate::graph::{HostGraph, SmallGraph};
use crate::weighted::{Part, PartiteGraph};

/// Part sizes plus one biadjacency bitmask per host edge (in the host's
/// sorted edge order): bit `a * s_y + b` joins row vertex `a` to column
/// vertex `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinatorialPattern {
    pub sizes: Vec<u8>,
    pub bits: Vec<u64>,
}

impl CombinatorialPattern {
    /// Byte string whose lexicographic order induces the pattern order used
    /// for canonical keys and tie-breaking.
    pub fn serialize_key(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.sizes.len() + 8 * self.bits.len());
        out.extend_from_slice(&self.sizes);
        for w in &self.bits {
            out.extend_from_slice(&w.to_be_bytes());
        }
        out
    }

    pub fn edge_bit_count(&self, host: &HostGraph) -> usize {
        host.edges()
            .iter()
            .map(|&(x, y)| self.sizes[x] as usize * self.sizes[y] as usize)
            .sum()
    }
}

/// Precomputed host data shared by enumeration, canonicalization and the
/// freeness check.
pub struct PatternContext {
    pub host: HostGraph,
    pub edges: Vec<(usize, usize)>,
    edge_index: Vec<Vec<usize>>,
    automorphisms: Vec<Vec<usize>>,
    perms_by_size: Vec<Vec<Vec<u8>>>,
}

impl PatternContext {
    pub fn new(host: &HostGraph, max_size: usize) -> Self {
        let edges = host.edges();
        let n = host.n();
        let mut edge_index = vec![vec![usize::MAX; n]; n];
        for (k, &(x, y)) in edges.iter().enumerate() {
            edge_index[x][y] = k;
            edge_index[y][x] = k;
        }
        let mut perms_by_size: Vec<Vec<Vec<u8>>> = Vec::with_capacity(max_size + 1);
        for s in 0..=max_size {
            perms_by_size.push(permutations(s as u8));
        }
        PatternContext {
            host: host.clone(),
            edges,
            edge_index,
            automorphisms: host.automorphisms(),
            perms_by_size,
        }
    }

    pub fn automorphisms(&self) -> &[Vec<usize>] {
        &self.automorphisms
    }

    /// Applies a host automorphism and per-part vertex permutations.
    pub fn transform(
        &self,
        p: &CombinatorialPattern,
        sigma: &[usize],
        part_perms: &[&[u8]],
    ) -> CombinatorialPattern {
        let n = p.sizes.len();
        let mut sizes = vec![0u8; n];
        for x in 0..n {
            sizes[sigma[x]] = p.sizes[x];
        }
        let mut bits = vec![0u64; p.bits.len()];
        for (k, &(x, y)) in self.edges.iter().enumerate() {
            let word = p.bits[k];
            if word == 0 {
                continue;
            }
            let (ix, iy) = (sigma[x], sigma[y]);
            let target = self.edge_index[ix][iy];
            let sy = p.sizes[y] as usize;
            let mut w = word;
            while w != 0 {
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                let a = part_perms[x][bit / sy] as usize;
                let b = part_perms[y][bit % sy] as usize;
                // Bit layout of the target edge follows the sorted host pair.
                if ix < iy {
                    bits[target] |= 1 << (a * sizes[iy] as usize + b);
                } else {
                    bits[target] |= 1 << (b * sizes[ix] as usize + a);
                }
            }
        }
        CombinatorialPattern { sizes, bits }
    }

    fn group_elements<'a>(
        &'a self,
        p: &'a CombinatorialPattern,
        caps: &'a [u32],
    ) -> impl Iterator<Item = CombinatorialPattern> + 'a {
        self.automorphisms
            .iter()
            .filter(move |sigma| (0..p.sizes.len()).all(|x| p.sizes[x] as u32 <= caps[sigma[x]]))
            .flat_map(move |sigma| {
                PartPermIter::new(&self.perms_by_size, &p.sizes).map(move |perms| {
                    let refs: Vec<&[u8]> = perms.iter().map(|q| q.as_slice()).collect();
                    self.transform(p, sigma, &refs)
                })
            })
    }

    /// The lexicographic minimum of the serialized pattern over all host
    /// automorphisms respecting `caps` combined with within-part vertex
    /// permutations.
    pub fn canonical_key(&self, p: &CombinatorialPattern, caps: &[u32]) -> Vec<u8> {
        let mut best = p.serialize_key();
        for candidate in self.group_elements(p, caps) {
            let key = candidate.serialize_key();
            if key < best {
                best = key;
            }
        }
        best
    }

    /// True iff the pattern equals the minimum of its orbit; each orbit has
    /// exactly one canonical representative.
    pub fn is_canonical(&self, p: &CombinatorialPattern, caps: &[u32]) -> bool {
        let own = p.serialize_key();
        for candidate in self.group_elements(p, caps) {
            if candidate.serialize_key() < own {
                return false;
            }
        }
        true
    }

    /// Streams every transversal graph of the skeleton into `f`; stops early
    /// when `f` returns false. Returns false iff stopped early.
    fn for_each_transversal_graph<F>(&self, p: &CombinatorialPattern, mut f: F) -> bool
    where
        F: FnMut(&SmallGraph) -> bool,
    {
        let n = p.sizes.len();
        let mut choices = vec![0u8; n];
        let mut rows = vec![0u64; n];
        loop {
            rows.iter_mut().for_each(|r| *r = 0);
            for (k, &(x, y)) in self.edges.iter().enumerate() {
                let bit = choices[x] as usize * p.sizes[y] as usize + choices[y] as usize;
                if p.bits[k] >> bit & 1 == 1 {
                    rows[x] |= 1 << y;
                    rows[y] |= 1 << x;
                }
            }
            let g = SmallGraph::from_rows(n, rows.clone());
            if !f(&g) {
                return false;
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return true;
                }
                i -= 1;
                choices[i] += 1;
                if choices[i] < p.sizes[i] {
                    break;
                }
                choices[i] = 0;
            }
        }
    }

    /// Weight-free family check: true iff every transversal of the skeleton
    /// avoids the family.
    pub fn family_free(&self, p: &CombinatorialPattern, family: &ForbiddenFamily) -> bool {
        self.for_each_transversal_graph(p, |g| !family.contains_member(g))
    }

    /// A family-free pattern is maximal when switching on any absent
    /// biadjacency bit breaks freeness.
    pub fn is_maximal_family_free(&self, p: &CombinatorialPattern, family: &ForbiddenFamily) -> bool {
        let mut probe = p.clone();
        for (k, &(x, y)) in self.edges.iter().enumerate() {
            let full = p.sizes[x] as usize * p.sizes[y] as usize;
            for bit in 0..full {
                if p.bits[k] >> bit & 1 == 0 {
                    probe.bits[k] = p.bits[k] | 1 << bit;
                    let free = self.family_free(&probe, family);
                    probe.bits[k] = p.bits[k];
                    if free {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn transversal_count(&self, p: &CombinatorialPattern) -> u128 {
        p.sizes.iter().map(|&s| s as u128).product()
    }
}

/// Builds the weighted graph realizing a pattern with explicit weights.
pub fn pattern_to_graph(
    host: &HostGraph,
    p: &CombinatorialPattern,
    weights: &[Vec<f64>],
) -> PartiteGraph {
    let parts = p
        .sizes
        .iter()
        .enumerate()
        .map(|(x, &s)| {
            Part::new(
                (0..s as usize)
                    .map(|a| (a.to_string(), weights[x][a]))
                    .collect(),
            )
        })
        .collect();
    let mut g = PartiteGraph::new(host.clone(), parts);
    for (k, &(x, y)) in host.edges().iter().enumerate() {
        let sy = p.sizes[y] as usize;
        let mut w = p.bits[k];
        while w != 0 {
            let bit = w.trailing_zeros() as usize;
            w &= w - 1;
            g.add_edge(x, bit / sy, y, bit % sy);
        }
    }
    g
}

/// All permutations of 0..n as index vectors, in lexicographic order.
fn permutations(n: u8) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // Next lexicographic permutation.
        let len = cur.len();
        if len < 2 {
            return out;
        }
        let mut i = len - 1;
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        let mut j = len - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Cartesian product over per-part permutations.
struct PartPermIter<'a> {
    tables: Vec<&'a [Vec<u8>]>,
    idx: Vec<usize>,
    done: bool,
}

impl<'a> PartPermIter<'a> {
    fn new(perms_by_size: &'a [Vec<Vec<u8>>], sizes: &[u8]) -> Self {
        let tables: Vec<&[Vec<u8>]> = sizes
            .iter()
            .map(|&s| perms_by_size[s as usize].as_slice())
            .collect();
        PartPermIter { idx: vec![0; tables.len()], tables, done: false }
    }
}

impl<'a> Iterator for PartPermIter<'a> {
    type Item = Vec<Vec<u8>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item: Vec<Vec<u8>> = self
            .idx
            .iter()
            .zip(&self.tables)
            .map(|(&i, t)| t[i].clone())
            .collect();
        let mut i = self.tables.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.idx[i] += 1;
            if self.idx[i] < self.tables[i].len() {
                break;
            }
            self.idx[i] = 0;
        }
        Some(item)
    }
}
