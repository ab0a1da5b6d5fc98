//! Random transversals: exact and Monte Carlo property probabilities,
//! labeled-independence checks, and the star absorption witness.
//!
//! Sampling uses a counter-based generator keyed by (seed, part index,
//! sample index), so parallel sampling over disjoint sample ranges is
//! order-independent and byte-reproducible.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::family::ForbiddenFamily;
use crate::rng::Key;
use crate::weighted::{PartiteGraph, Transversal};
use crate::Error;

/// Monte Carlo estimate with a 95% normal-approximation half-width.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleReport {
    pub estimate: f64,
    pub half_width: f64,
    pub n: u64,
    pub seed: u64,
}

impl std::fmt::Display for SampleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "estimate {:.15} +- {:.15} (n = {}, seed = {})",
            self.estimate, self.half_width, self.n, self.seed
        )
    }
}

fn draw_choice(weights: &[f64], u: f64) -> u32 {
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i as u32;
        }
    }
    weights.len() as u32 - 1
}

/// One random transversal: part `x`'s representative is drawn with
/// probability equal to its weight, independently across parts.
pub fn sample_transversal(g: &PartiteGraph, seed: u64, sample_index: u64) -> Transversal {
    let key = Key::new(seed);
    let choices = g
        .parts()
        .iter()
        .enumerate()
        .map(|(x, part)| {
            let bits = key.derive(x as u64).value(sample_index);
            let u = (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            draw_choice(&part.weights, u)
        })
        .collect();
    Transversal(choices)
}

/// The probability that a random transversal contains a family member:
/// the weight-product sum over violating transversals.
pub fn exact_property_probability(
    g: &PartiteGraph,
    family: &ForbiddenFamily,
    cap: u128,
) -> Result<f64, Error> {
    family.validate(g.host().n())?;
    let count = g.transversal_count();
    if count > cap {
        return Err(Error::EnumerationCap { count, cap });
    }
    let mut total = 0.0;
    g.for_each_transversal(|c| {
        if family.contains_member(&g.transversal_graph_choices(c)) {
            let p: f64 = c
                .iter()
                .enumerate()
                .map(|(x, &i)| g.part(x).weights[i as usize])
                .product();
            total += p;
        }
        ControlFlow::Continue(())
    });
    Ok(total.clamp(0.0, 1.0))
}

/// Monte Carlo counterpart of [`exact_property_probability`].
pub fn estimate_property(
    g: &PartiteGraph,
    family: &ForbiddenFamily,
    n: u64,
    seed: u64,
) -> Result<SampleReport, Error> {
    if n < 100 {
        return Err(Error::param("need at least 100 samples"));
    }
    family.validate(g.host().n())?;
    let mut hits = 0u64;
    for i in 0..n {
        let t = sample_transversal(g, seed, i);
        if family.contains_member(&g.transversal_graph(&t)) {
            hits += 1;
        }
    }
    let estimate = hits as f64 / n as f64;
    let half_width = 1.96 * (estimate * (1.0 - estimate) / n as f64).sqrt();
    Ok(SampleReport { estimate, half_width, n, seed })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DependenceVerdict {
    NotRejected,
    Rejected,
    /// Too few cells after pooling to run the test.
    Inconclusive,
}

/// Chi-square independence check of the induced subgraphs on two disjoint
/// host-vertex sets.
#[derive(Debug, Clone)]
pub struct DependenceReport {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    pub verdict: DependenceVerdict,
    pub cells: usize,
    pub pooled_cells: usize,
    pub n: u64,
    pub seed: u64,
}

/// Samples `n` transversals and tests the joint distribution of the labeled
/// induced subgraphs on `a` and `b` against the product of its marginals.
/// Graphs are keyed by their adjacency bits under the identity labeling;
/// independence must hold labeled, which is the stronger check. Cells with
/// expected count below 5 are pooled; if fewer than two cells survive the
/// test is inconclusive. The null is rejected at the 1% level.
pub fn one_dependence_check(
    g: &PartiteGraph,
    a: &[usize],
    b: &[usize],
    n: u64,
    seed: u64,
) -> Result<DependenceReport, Error> {
    if a.iter().any(|v| b.contains(v)) {
        return Err(Error::param("the two vertex sets must be disjoint"));
    }
    let hn = g.host().n();
    if a.iter().chain(b).any(|&v| v >= hn) {
        return Err(Error::param(format!("vertex sets must lie in 0..{hn}")));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::param("vertex sets must be non-empty"));
    }

    let induced_code = |t: &Transversal, set: &[usize]| -> u64 {
        let graph = g.transversal_graph(t);
        let mut code = 0u64;
        let mut bit = 0;
        for (i, &u) in set.iter().enumerate() {
            for &v in set.iter().skip(i + 1) {
                if graph.has_edge(u, v) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        code
    };

    let mut joint: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for i in 0..n {
        let t = sample_transversal(g, seed, i);
        *joint.entry((induced_code(&t, a), induced_code(&t, b))).or_insert(0) += 1;
    }
    let mut ma: BTreeMap<u64, u64> = BTreeMap::new();
    let mut mb: BTreeMap<u64, u64> = BTreeMap::new();
    for (&(ca, cb), &count) in &joint {
        *ma.entry(ca).or_insert(0) += count;
        *mb.entry(cb).or_insert(0) += count;
    }
    let rows = ma.len();
    let cols = mb.len();
    if rows < 2 || cols < 2 {
        // One-point marginal: independence holds trivially.
        return Ok(DependenceReport {
            statistic: 0.0,
            degrees_of_freedom: 0,
            p_value: 1.0,
            verdict: DependenceVerdict::NotRejected,
            cells: rows * cols,
            pooled_cells: 0,
            n,
            seed,
        });
    }

    let nf = n as f64;
    let mut kept = Vec::new();
    let mut pooled_obs = 0.0;
    let mut pooled_exp = 0.0;
    let mut pooled_cells = 0usize;
    for (&ca, &na) in &ma {
        for (&cb, &nb) in &mb {
            let expected = na as f64 * nb as f64 / nf;
            let observed = joint.get(&(ca, cb)).copied().unwrap_or(0) as f64;
            if expected < 5.0 {
                pooled_obs += observed;
                pooled_exp += expected;
                pooled_cells += 1;
            } else {
                kept.push((observed, expected));
            }
        }
    }
    if pooled_cells > 0 && pooled_exp > 0.0 {
        kept.push((pooled_obs, pooled_exp));
    }
    if kept.len() < 2 {
        return Ok(DependenceReport {
            statistic: 0.0,
            degrees_of_freedom: 0,
            p_value: 1.0,
            verdict: DependenceVerdict::Inconclusive,
            cells: rows * cols,
            pooled_cells,
            n,
            seed,
        });
    }
    let statistic: f64 = kept.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    // Marginals are estimated from the data: lose (rows-1) + (cols-1)
    // degrees beyond the cell count.
    let df = kept.len().saturating_sub(1 + (rows - 1) + (cols - 1)).max(1);
    let p_value = chi_square_upper_tail(df as f64, statistic);
    let verdict = if p_value < 0.01 {
        DependenceVerdict::Rejected
    } else {
        DependenceVerdict::NotRejected
    };
    Ok(DependenceReport {
        statistic,
        degrees_of_freedom: df,
        p_value,
        verdict,
        cells: rows * cols,
        pooled_cells,
        n,
        seed,
    })
}

/// Star absorption: in a star-hosted graph with density at least `p` and a
/// center subset of weight `alpha > 1 - p`, some subset vertex reaches all
/// but at most `floor(((1-p)/alpha) N)` leaf parts. Returns that vertex
/// (searching in weight-descending order) and the leaf host vertices it
/// misses.
pub fn star_absorption_witness(
    g: &PartiteGraph,
    subset: &[usize],
    p: f64,
) -> Result<(usize, Vec<usize>), Error> {
    let host = g.host();
    let n = host.n();
    if n < 2 {
        return Err(Error::param("star host needs at least one leaf"));
    }
    let center = (0..n)
        .find(|&v| host.degree(v) == n - 1)
        .ok_or_else(|| Error::param("host is not a star"))?;
    if (0..n).any(|v| v != center && host.degree(v) != 1) {
        return Err(Error::param("host is not a star"));
    }
    let leaves: Vec<usize> = (0..n).filter(|&v| v != center).collect();
    let big_n = leaves.len() as f64;

    if !(p > 0.5) {
        return Err(Error::param(format!("need density bound p > 1/2, got {p}")));
    }
    let profile = g.density_profile()?;
    if profile.minimum < p - crate::COMPARE_TOL {
        return Err(Error::param(format!(
            "graph density {} is below the required {p}",
            profile.minimum
        )));
    }
    let center_part = g.part(center);
    let mut seen = std::collections::BTreeSet::new();
    for &i in subset {
        if i >= center_part.len() {
            return Err(Error::param(format!("subset index {i} outside the center part")));
        }
        if !seen.insert(i) {
            return Err(Error::param(format!("duplicate subset index {i}")));
        }
    }
    let alpha: f64 = subset.iter().map(|&i| center_part.weights[i]).sum();
    if !(alpha > 1.0 - p + crate::COMPARE_TOL) {
        return Err(Error::param(format!(
            "subset weight {alpha} does not exceed 1 - p = {}",
            1.0 - p
        )));
    }
    let allowed = ((1.0 - p) / alpha * big_n).floor() as usize;

    let mut order: Vec<usize> = subset.to_vec();
    order.sort_by(|&i, &j| {
        center_part.weights[j]
            .partial_cmp(&center_part.weights[i])
            .unwrap()
            .then(i.cmp(&j))
    });
    for &i in &order {
        let missed: Vec<usize> = leaves
            .iter()
            .copied()
            .filter(|&leaf| {
                (0..g.part(leaf).len()).all(|b| !g.has_edge(center, i, leaf, b))
            })
            .collect();
        if missed.len() <= allowed {
            return Ok((i, missed));
        }
    }
    Err(Error::param(
        "no witness found; this contradicts the absorption bound and indicates invalid input",
    ))
}

/// Upper tail of the chi-square distribution via the regularized incomplete
/// gamma function.
pub fn chi_square_upper_tail(df: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    1.0 - lower_regularized_gamma(df / 2.0, x / 2.0)
}

fn lower_regularized_gamma(a: f64, x: f64) -> f64 {
    if x < a + 1.0 {
        // Series expansion.
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..500 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        sum * (-x + a * x.ln() - ln_gamma(a)).exp()
    } else {
        // Continued fraction for the upper tail.
        let mut b = x + 1.0 - a;
        let mut c = 1e300;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < 1e-300 {
                d = 1e-300;
            }
            c = b + an / c;
            if c.abs() < 1e-300 {
                c = 1e-300;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        1.0 - (-x + a * x.ln() - ln_gamma(a)).exp() * h
    }
}

fn ln_gamma(x: f64) -> f64 {
    // Lanczos approximation, g = 7.
    const COEF: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{ConstructionId, ConstructionSpec};
    use crate::graph::HostGraph;
    use crate::weighted::{Part, PartiteGraph};
    use crate::DEFAULT_ENUM_CAP;

    #[test]
    fn degenerate_weight_always_picks_first() {
        let host = HostGraph::new(2, &[(0, 1)]).unwrap();
        let parts = vec![
            Part::new(vec![("a".into(), 1.0), ("b".into(), 0.0)]),
            Part::new(vec![("c".into(), 1.0)]),
        ];
        let g = PartiteGraph::new(host, parts);
        for i in 0..50 {
            assert_eq!(sample_transversal(&g, 9, i).0[0], 0);
        }
    }

    #[test]
    fn parity_frequencies_are_balanced() {
        let g = ConstructionSpec::new(ConstructionId::Parity).with_r(5).build().unwrap();
        let n = 20_000u64;
        let mut count = 0u64;
        for i in 0..n {
            count += sample_transversal(&g, 11, i).0[0] as u64;
        }
        let freq = count as f64 / n as f64;
        assert!((freq - 0.5).abs() < 0.02, "frequency {freq}");
    }

    #[test]
    fn exact_zero_for_parity_odd_cycles() {
        let g = ConstructionSpec::new(ConstructionId::Parity).with_r(5).build().unwrap();
        let p =
            exact_property_probability(&g, &ForbiddenFamily::OddCycles, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(p, 0.0);
        // A transversal of parity(5) is edgeless iff all labels agree.
        let p = exact_property_probability(
            &g,
            &ForbiddenFamily::AllTreesOfOrder(2),
            DEFAULT_ENUM_CAP,
        )
        .unwrap();
        assert!((p - 15.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn complete_singleton_blowup_is_certainly_connected() {
        let host = HostGraph::complete(4);
        let parts = (0..4).map(|_| Part::new(vec![("v".into(), 1.0)])).collect();
        let mut g = PartiteGraph::new(host.clone(), parts);
        for (x, y) in host.edges() {
            g.add_edge(x, 0, y, 0);
        }
        let p = exact_property_probability(&g, &ForbiddenFamily::AllTreesOfOrder(4), DEFAULT_ENUM_CAP)
            .unwrap();
        assert_eq!(p, 1.0);
    }

    #[test]
    fn estimates_are_reproducible() {
        let g = ConstructionSpec::new(ConstructionId::TwoColour).with_r(4).build().unwrap();
        let a = estimate_property(&g, &ForbiddenFamily::AllTreesOfOrder(4), 2000, 3).unwrap();
        let b = estimate_property(&g, &ForbiddenFamily::AllTreesOfOrder(4), 2000, 3).unwrap();
        assert_eq!(a, b);
        let exact =
            exact_property_probability(&g, &ForbiddenFamily::AllTreesOfOrder(4), DEFAULT_ENUM_CAP)
                .unwrap();
        assert!((a.estimate - exact).abs() <= 3.0 * a.half_width + 1e-9);
    }

    #[test]
    fn chi_square_tail_reference_values() {
        // Classic critical values.
        assert!((chi_square_upper_tail(1.0, 3.841458820694124) - 0.05).abs() < 1e-9);
        assert!((chi_square_upper_tail(1.0, 6.634896601021214) - 0.01).abs() < 1e-9);
        assert!((chi_square_upper_tail(4.0, 13.276704135987622) - 0.01).abs() < 1e-9);
    }

    #[test]
    fn parity_one_dependence_not_rejected() {
        let g = ConstructionSpec::new(ConstructionId::Parity).with_r(6).build().unwrap();
        let report = one_dependence_check(&g, &[0, 1], &[2, 3], 20_000, 7).unwrap();
        assert_eq!(report.verdict, DependenceVerdict::NotRejected, "{report:?}");
        assert_eq!(report.degrees_of_freedom, 1);
    }

    #[test]
    fn single_vertex_side_is_trivial() {
        let g = ConstructionSpec::new(ConstructionId::Parity).with_r(6).build().unwrap();
        let report = one_dependence_check(&g, &[0], &[2, 3], 1000, 7).unwrap();
        assert_eq!(report.verdict, DependenceVerdict::NotRejected);
        assert_eq!(report.degrees_of_freedom, 0);
    }

    #[test]
    fn leila_leaf_frequencies_match_the_optimal_weighting() {
        let g = ConstructionSpec::new(ConstructionId::Leila).with_r(4).build().unwrap();
        let alpha = crate::constructions::leila_optimal_alpha(4);
        let n = 100_000u64;
        let mut dead = 0u64;
        for i in 0..n {
            // Index 1 in each leaf part is the shared dead-end vertex.
            dead += sample_transversal(&g, 21, i).0[0] as u64;
        }
        let freq = dead as f64 / n as f64;
        assert!((freq - (1.0 - alpha)).abs() < 0.01, "freq {freq} vs {}", 1.0 - alpha);
    }

    #[test]
    fn hamilton_free_constructions_estimate_zero() {
        let g = ConstructionSpec::new(ConstructionId::RefinedDeadEnd).with_r(4).build().unwrap();
        let report =
            estimate_property(&g, &ForbiddenFamily::HamiltonCycle, 10_000, 5).unwrap();
        assert_eq!(report.estimate, 0.0);
        let g = ConstructionSpec::new(ConstructionId::Parity).with_r(7).build().unwrap();
        let report = estimate_property(&g, &ForbiddenFamily::OddCycles, 10_000, 5).unwrap();
        assert_eq!(report.estimate, 0.0);
        assert_eq!(report.half_width, 0.0);
    }

    #[test]
    fn star_witness_with_half_weight_subset() {
        // Ten leaves, four center vertices of weight 1/4; leaf j misses the
        // single center vertex j mod 4, so every pair density is 3/4.
        let host = HostGraph::star(11);
        let mut parts = vec![Part::new(
            (0..4).map(|i| (format!("c{i}"), 0.25)).collect(),
        )];
        for _ in 1..11 {
            parts.push(Part::new(vec![("x".into(), 1.0)]));
        }
        let mut g = PartiteGraph::new(host, parts);
        for leaf in 1..11usize {
            for c in 0..4usize {
                if (leaf - 1) % 4 != c {
                    g.add_edge(0, c, leaf, 0);
                }
            }
        }
        assert!((g.density_profile().unwrap().minimum - 0.75).abs() < 1e-12);
        // Subset of weight 1/2 under density bound p = 0.6: the witness may
        // miss at most floor((0.4 / 0.5) * 10) = 8 leaf parts.
        let (witness, missed) = star_absorption_witness(&g, &[0, 1], 0.6).unwrap();
        assert_eq!(witness, 0);
        assert!(missed.len() <= 8);
        assert_eq!(missed.len(), 3);
    }

    #[test]
    fn star_witness_full_adjacency_misses_nothing() {
        // Center part of two vertices, both joined everywhere.
        let host = HostGraph::star(4);
        let parts = vec![
            Part::new(vec![("a".into(), 0.5), ("b".into(), 0.5)]),
            Part::new(vec![("x".into(), 1.0)]),
            Part::new(vec![("x".into(), 1.0)]),
            Part::new(vec![("x".into(), 1.0)]),
        ];
        let mut g = PartiteGraph::new(host, parts);
        for leaf in 1..4 {
            g.add_edge(0, 0, leaf, 0);
            g.add_edge(0, 1, leaf, 0);
        }
        let (v, missed) = star_absorption_witness(&g, &[0, 1], 0.9).unwrap();
        assert_eq!(v, 0);
        assert!(missed.is_empty());

        // Subset weight below 1 - p is a precondition failure.
        assert!(star_absorption_witness(&g, &[0], 0.4).is_err());
    }
}
