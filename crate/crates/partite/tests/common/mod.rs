//! Shared helpers for the integration suites: independent oracles
//! (labeled-tree catalogs, explicit cycle lists) and small deterministic
//! randomness that does not depend on the crate under test.

#![allow(dead_code)]

use partite::graph::{GraphSpec, HostGraph, SmallGraph};
use partite::weighted::{Part, PartiteGraph};

/// SplitMix64; test-side randomness independent of the crate's generator.
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Decodes a Pruefer sequence over `0..t` into a labeled tree edge list.
pub fn pruefer_tree(t: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    assert_eq!(seq.len(), t.saturating_sub(2));
    let mut degree = vec![1usize; t];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(t - 1);
    let mut used = vec![false; t];
    for &v in seq {
        let leaf = (0..t).find(|&u| degree[u] == 1 && !used[u]).unwrap();
        edges.push((leaf, v));
        used[leaf] = true;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..t).filter(|&u| !used[u] && degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Every labeled tree on `t` vertices, by Pruefer enumeration.
pub fn all_labeled_trees(t: usize) -> Vec<GraphSpec> {
    if t == 1 {
        return vec![GraphSpec { n: 1, edges: vec![] }];
    }
    if t == 2 {
        return vec![GraphSpec { n: 2, edges: vec![(0, 1)] }];
    }
    let count = (t as u64).pow(t as u32 - 2);
    let mut out = Vec::with_capacity(count as usize);
    let mut seq = vec![0usize; t - 2];
    loop {
        out.push(GraphSpec { n: t, edges: pruefer_tree(t, &seq) });
        let mut i = seq.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            seq[i] += 1;
            if seq[i] < t {
                break;
            }
            seq[i] = 0;
        }
    }
}

/// AHU canonical string of a tree given as an edge list.
pub fn ahu_canonical(t: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); t];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    // Strip leaves layer by layer to find the one or two centers.
    let mut degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut removed = vec![false; t];
    let mut remaining = t;
    let mut frontier: Vec<usize> = (0..t).filter(|&v| degree[v] <= 1).collect();
    while remaining > 2 {
        let mut next = Vec::new();
        for &v in &frontier {
            removed[v] = true;
            remaining -= 1;
            for &u in &adj[v] {
                if !removed[u] {
                    degree[u] -= 1;
                    if degree[u] == 1 {
                        next.push(u);
                    }
                }
            }
        }
        frontier = next;
    }
    let centers: Vec<usize> = (0..t).filter(|&v| !removed[v]).collect();

    fn encode(adj: &[Vec<usize>], v: usize, parent: Option<usize>) -> String {
        let mut kids: Vec<String> = adj[v]
            .iter()
            .filter(|&&u| Some(u) != parent)
            .map(|&u| encode(adj, u, Some(v)))
            .collect();
        kids.sort();
        format!("({})", kids.concat())
    }

    centers
        .iter()
        .map(|&c| encode(&adj, c, None))
        .min()
        .unwrap()
}

/// Trees on `t` vertices up to isomorphism, via AHU deduplication of the
/// Pruefer catalog.
pub fn distinct_trees(t: usize) -> Vec<GraphSpec> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for tree in all_labeled_trees(t) {
        if seen.insert(ahu_canonical(t, &tree.edges)) {
            out.push(tree);
        }
    }
    out
}

/// All cycles of odd length up to `max_len`, as explicit graphs.
pub fn odd_cycle_list(max_len: usize) -> Vec<GraphSpec> {
    let mut out = Vec::new();
    let mut len = 3;
    while len <= max_len {
        out.push(HostGraph::cycle(len).spec());
        len += 2;
    }
    out
}

/// The SmallGraph with the given edge-set bitmask over `n` vertices, where
/// bit k encodes the k-th pair in lexicographic order.
pub fn graph_from_mask(n: usize, mask: u64) -> SmallGraph {
    let mut g = SmallGraph::empty(n);
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> k & 1 == 1 {
                g.add_edge(u, v);
            }
            k += 1;
        }
    }
    g
}

/// A random valid weighted partite graph over the host with part sizes up
/// to `max_size` and Bernoulli(`edge_p`) biadjacency.
pub fn random_partite_graph(
    host: &HostGraph,
    max_size: usize,
    edge_p: f64,
    rng: &mut TestRng,
) -> PartiteGraph {
    let n = host.n();
    let parts: Vec<Part> = (0..n)
        .map(|_| {
            let size = 1 + rng.below(max_size);
            let raw: Vec<f64> = (0..size).map(|_| rng.next_f64() + 1e-3).collect();
            let total: f64 = raw.iter().sum();
            Part::new(
                raw.iter()
                    .enumerate()
                    .map(|(i, w)| (format!("v{i}"), w / total))
                    .collect(),
            )
        })
        .collect();
    let mut g = PartiteGraph::new(host.clone(), parts);
    for (x, y) in host.edges() {
        for a in 0..g.part(x).len() {
            for b in 0..g.part(y).len() {
                if rng.next_f64() < edge_p {
                    g.add_edge(x, a, y, b);
                }
            }
        }
    }
    g
}

// ----- shared acceptance checks (criterion 7 names these explicitly) -----

use partite::constructions::{ConstructionId, ConstructionSpec};
use partite::family::ForbiddenFamily;
use partite::sampler;
use partite::search::{optimize_weights, pattern_to_graph, CombinatorialPattern, OptimizeOptions};
use partite::{check_family_free, DEFAULT_ENUM_CAP};

pub fn random_pattern(host: &HostGraph, caps: &[u32], rng: &mut TestRng) -> CombinatorialPattern {
    let sizes: Vec<u8> = caps.iter().map(|&c| (1 + rng.below(c as usize)) as u8).collect();
    let bits = host
        .edges()
        .iter()
        .map(|&(x, y)| {
            let span = sizes[x] as usize * sizes[y] as usize;
            rng.next_u64() & ((1u64 << span) - 1)
        })
        .collect();
    CombinatorialPattern { sizes, bits }
}

/// 200 random patterns x 10 weightings: the family-freeness verdict never
/// depends on the weights (including weightings with a zeroed vertex).
pub fn weight_independence_holds() -> Result<String, String> {
    let host = HostGraph::complete(4);
    let caps = vec![3u32; 4];
    let family = ForbiddenFamily::AllTreesOfOrder(4);
    let mut rng = TestRng(7);
    for case in 0..200 {
        let pattern = random_pattern(&host, &caps, &mut rng);
        let skeleton =
            partite::search::pattern_family_free(&host, &pattern, &family, DEFAULT_ENUM_CAP)
                .map_err(|e| e.to_string())?;
        for trial in 0..10 {
            let weights: Vec<Vec<f64>> = pattern
                .sizes
                .iter()
                .map(|&s| {
                    let s = s as usize;
                    let mut raw: Vec<f64> = (0..s).map(|_| rng.next_f64() + 1e-6).collect();
                    if trial % 3 == 0 && s > 1 {
                        raw[rng.below(s)] = 0.0;
                    }
                    let total: f64 = raw.iter().sum();
                    raw.iter().map(|w| w / total).collect()
                })
                .collect();
            let g = pattern_to_graph(&host, &pattern, &weights);
            let verdict = check_family_free(&g, &family, DEFAULT_ENUM_CAP)
                .map_err(|e| e.to_string())?
                .is_family_free();
            if verdict != skeleton {
                return Err(format!(
                    "pattern {case} trial {trial}: weighted verdict {verdict} vs skeleton {skeleton}"
                ));
            }
        }
    }
    Ok("200 patterns x 10 weightings agree".into())
}

/// Blow-ups reproduce the density profile exactly (within 1e-12).
pub fn blow_up_preservation_holds() -> Result<String, String> {
    let cases: Vec<(ConstructionSpec, u64)> = vec![
        (ConstructionSpec::new(ConstructionId::Parity).with_r(5), 2),
        (ConstructionSpec::new(ConstructionId::TwoColour).with_r(4), 2),
        (ConstructionSpec::new(ConstructionId::MissingEdge).with_r(5), 4),
        (ConstructionSpec::new(ConstructionId::Leila).with_r(4).with_alpha(0.5), 6),
        (ConstructionSpec::new(ConstructionId::IntersectingPalette).with_t(2).with_r(6), 2),
        (ConstructionSpec::new(ConstructionId::HypercubeLayers).with_d(3), 2),
    ];
    for (spec, n) in cases {
        let g = spec.build().map_err(|e| e.to_string())?;
        let blown = g.blow_up(n).map_err(|e| e.to_string())?;
        let p0 = g.density_profile().map_err(|e| e.to_string())?;
        let p1 = blown.density_profile().map_err(|e| e.to_string())?;
        for (e, v) in &p0.values {
            if (p1.values[e] - v).abs() >= 1e-12 {
                return Err(format!("{} edge {e:?} drifted under blow-up", spec.id.name()));
            }
        }
    }
    Ok("6 rational-weight constructions preserved exactly".into())
}

/// The optimizer's reported density is reproduced by an independent
/// density-profile recomputation on the rebuilt weighted graph.
pub fn optimizer_soundness_holds() -> Result<String, String> {
    let host = HostGraph::complete(3);
    let caps = vec![2u32; 3];
    let mut rng = TestRng(31);
    let opts = OptimizeOptions { seed: 5, starts: 16 };
    for case in 0..25 {
        let pattern = random_pattern(&host, &caps, &mut rng);
        let (weights, density) = optimize_weights(&host, &pattern, &opts);
        let g = pattern_to_graph(&host, &pattern, &weights);
        let profile = g.density_profile().map_err(|e| e.to_string())?;
        if profile.minimum < density - 1e-9 {
            return Err(format!(
                "case {case}: recomputed min {} below reported {density}",
                profile.minimum
            ));
        }
    }
    Ok("25 random patterns re-verified".into())
}

/// Chi-square 1-dependence non-rejection on parity(6) at the 1% level.
pub fn parity6_chi_square_holds() -> Result<String, String> {
    let g = ConstructionSpec::new(ConstructionId::Parity)
        .with_r(6)
        .build()
        .map_err(|e| e.to_string())?;
    let report = sampler::one_dependence_check(&g, &[0, 1], &[2, 3], 100_000, 7)
        .map_err(|e| e.to_string())?;
    match report.verdict {
        sampler::DependenceVerdict::NotRejected => Ok(format!(
            "chi2 = {:.4}, df = {}, p = {:.4}",
            report.statistic, report.degrees_of_freedom, report.p_value
        )),
        _ => Err(format!("independence rejected or inconclusive: {report:?}")),
    }
}

/// Monte Carlo vs exact agreement within 3 half-widths on >= 99 of 100
/// seeds, over constructions with interior and degenerate probabilities.
pub fn monte_carlo_agreement_holds() -> Result<String, String> {
    let cases = vec![
        (
            ConstructionSpec::new(ConstructionId::TwoColour).with_r(4),
            ForbiddenFamily::AllTreesOfOrder(4),
        ),
        (ConstructionSpec::new(ConstructionId::Parity).with_r(5), ForbiddenFamily::OddCycles),
        (
            ConstructionSpec::new(ConstructionId::Leila).with_r(4),
            ForbiddenFamily::AllTreesOfOrder(3),
        ),
    ];
    let mut summary = Vec::new();
    for (spec, family) in cases {
        let g = spec.build().map_err(|e| e.to_string())?;
        let exact = sampler::exact_property_probability(&g, &family, DEFAULT_ENUM_CAP)
            .map_err(|e| e.to_string())?;
        let mut agreeing = 0;
        for seed in 0..100 {
            let report = sampler::estimate_property(&g, &family, 100_000, seed)
                .map_err(|e| e.to_string())?;
            if (report.estimate - exact).abs() <= 3.0 * report.half_width + 1e-12 {
                agreeing += 1;
            }
        }
        if agreeing < 99 {
            return Err(format!(
                "{} vs {}: only {agreeing}/100 seeds within 3 half-widths",
                spec.id.name(),
                family.describe()
            ));
        }
        summary.push(format!("{}:{agreeing}/100", spec.id.name()));
    }
    Ok(summary.join(", "))
}
