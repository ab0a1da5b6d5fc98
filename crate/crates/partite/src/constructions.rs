//! Parameterized generators for the extremal constructions, each paired
//! with its claimed density and forbidden family, plus a verifier that
//! re-derives both claims by enumeration.

use crate::family::ForbiddenFamily;
use crate::graph::HostGraph;
use crate::thresholds::bisect_root;
use crate::weighted::{Part, PartiteGraph};
use crate::{Error, COMPARE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionId {
    StarLeaf,
    Leila,
    MissingEdge,
    TwoColour,
    Parity,
    RefinedDeadEnd,
    PendantTriangle,
    IntersectingPalette,
    HypercubeLayers,
}

impl ConstructionId {
    pub const ALL: [ConstructionId; 9] = [
        ConstructionId::StarLeaf,
        ConstructionId::Leila,
        ConstructionId::MissingEdge,
        ConstructionId::TwoColour,
        ConstructionId::Parity,
        ConstructionId::RefinedDeadEnd,
        ConstructionId::PendantTriangle,
        ConstructionId::IntersectingPalette,
        ConstructionId::HypercubeLayers,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstructionId::StarLeaf => "star_leaf",
            ConstructionId::Leila => "leila",
            ConstructionId::MissingEdge => "missing_edge",
            ConstructionId::TwoColour => "two_colour",
            ConstructionId::Parity => "parity",
            ConstructionId::RefinedDeadEnd => "refined_dead_end",
            ConstructionId::PendantTriangle => "pendant_triangle",
            ConstructionId::IntersectingPalette => "intersecting_palette",
            ConstructionId::HypercubeLayers => "hypercube_layers",
        }
    }

    pub fn parse(name: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == name)
            .ok_or_else(|| Error::param(format!("unknown construction `{name}`")))
    }
}

/// A construction id with its parameters; defaults are the optimal values
/// where an optimum is known.
#[derive(Debug, Clone)]
pub struct ConstructionSpec {
    pub id: ConstructionId,
    pub r: Option<usize>,
    pub t: Option<usize>,
    pub d: Option<usize>,
    pub alpha: Option<f64>,
    pub p: Option<(f64, f64, f64)>,
    /// Extra host edges to delete for `missing_edge` (a matching disjoint
    /// from the base missing edge {0,1}).
    pub matching: Vec<(usize, usize)>,
}

impl ConstructionSpec {
    pub fn new(id: ConstructionId) -> Self {
        ConstructionSpec { id, r: None, t: None, d: None, alpha: None, p: None, matching: Vec::new() }
    }

    pub fn with_r(mut self, r: usize) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_t(mut self, t: usize) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = Some(d);
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_p(mut self, p1: f64, p2: f64, p3: f64) -> Self {
        self.p = Some((p1, p2, p3));
        self
    }

    pub fn with_matching(mut self, matching: Vec<(usize, usize)>) -> Self {
        self.matching = matching;
        self
    }

    fn need_r(&self, min: usize) -> Result<usize, Error> {
        let r = self.r.ok_or_else(|| {
            Error::param(format!("construction `{}` needs --r", self.id.name()))
        })?;
        if r < min {
            return Err(Error::param(format!(
                "construction `{}` needs r >= {min}, got {r}",
                self.id.name()
            )));
        }
        Ok(r)
    }

    /// The closed-form density this construction attains with the given
    /// parameters.
    pub fn claimed_density(&self) -> Result<f64, Error> {
        match self.id {
            ConstructionId::StarLeaf => {
                let r = self.need_r(3)?;
                Ok((r as f64 - 2.0) / (r as f64 - 1.0))
            }
            ConstructionId::Leila => {
                let r = self.need_r(3)?;
                let alpha = self.alpha.unwrap_or_else(|| leila_optimal_alpha(r));
                Ok(leila_density(r, alpha))
            }
            ConstructionId::MissingEdge | ConstructionId::TwoColour | ConstructionId::Parity => {
                Ok(0.5)
            }
            ConstructionId::RefinedDeadEnd => {
                let r = self.need_r(4)?;
                let (p1, p2, p3) = self.resolved_triple(r)?;
                Ok(refined_dead_end_density(r, p1, p2, p3))
            }
            ConstructionId::PendantTriangle => Ok(4.0 - 2.0 * 3.0f64.sqrt()),
            ConstructionId::IntersectingPalette => {
                let t = self.need_t()?;
                Ok(1.0 / (t as f64 * t as f64))
            }
            ConstructionId::HypercubeLayers => Ok(0.5),
        }
    }

    fn need_t(&self) -> Result<usize, Error> {
        let t = self.t.ok_or_else(|| Error::param("intersecting_palette needs --t"))?;
        if t < 2 {
            return Err(Error::param(format!("intersecting_palette needs t >= 2, got {t}")));
        }
        Ok(t)
    }

    fn need_d(&self) -> Result<usize, Error> {
        let d = self.d.ok_or_else(|| Error::param("hypercube_layers needs --d"))?;
        if d < 2 {
            return Err(Error::param(format!("hypercube_layers needs d >= 2, got {d}")));
        }
        Ok(d)
    }

    fn resolved_triple(&self, r: usize) -> Result<(f64, f64, f64), Error> {
        match self.p {
            Some((p1, p2, p3)) => {
                for (name, v) in [("p1", p1), ("p2", p2), ("p3", p3)] {
                    if !(0.0..=1.0).contains(&v) || v == 0.0 || v == 1.0 {
                        return Err(Error::param(format!(
                            "refined_dead_end needs {name} in (0,1), got {v}"
                        )));
                    }
                }
                Ok((p1, p2, p3))
            }
            None => Ok(refined_dead_end_optimal(r)),
        }
    }

    /// The family the construction's transversals avoid. For the component
    /// bound constructions this is the tree family one above the bound.
    pub fn claimed_family(&self) -> Result<ForbiddenFamily, Error> {
        match self.id {
            ConstructionId::StarLeaf | ConstructionId::Leila => {
                Ok(ForbiddenFamily::AllTreesOfOrder(self.need_r(3)?))
            }
            ConstructionId::MissingEdge => Ok(ForbiddenFamily::AllTreesOfOrder(self.need_r(4)?)),
            ConstructionId::TwoColour | ConstructionId::RefinedDeadEnd => {
                Ok(ForbiddenFamily::HamiltonCycle)
            }
            ConstructionId::Parity => Ok(ForbiddenFamily::OddCycles),
            ConstructionId::PendantTriangle => Ok(ForbiddenFamily::AllTreesOfOrder(4)),
            ConstructionId::IntersectingPalette => {
                let t = self.need_t()?;
                let r = self.need_r(binomial(2 * t - 1, t))?;
                Ok(ForbiddenFamily::AllTreesOfOrder(palette_component_bound(r, t) + 1))
            }
            ConstructionId::HypercubeLayers => {
                let d = self.need_d()?;
                Ok(ForbiddenFamily::AllTreesOfOrder(hypercube_component_bound(d) + 1))
            }
        }
    }

    pub fn build(&self) -> Result<PartiteGraph, Error> {
        match self.id {
            ConstructionId::StarLeaf => build_star_leaf(self.need_r(3)?),
            ConstructionId::Leila => {
                let r = self.need_r(3)?;
                let alpha = self.alpha.unwrap_or_else(|| leila_optimal_alpha(r));
                if !(0.0..=1.0).contains(&alpha) {
                    return Err(Error::param(format!("leila needs alpha in [0,1], got {alpha}")));
                }
                build_leila(r, alpha)
            }
            ConstructionId::MissingEdge => build_missing_edge(self.need_r(4)?, &self.matching),
            ConstructionId::TwoColour => build_two_colour(self.need_r(4)?),
            ConstructionId::Parity => build_parity(self.need_r(3)?),
            ConstructionId::RefinedDeadEnd => {
                let r = self.need_r(4)?;
                let (p1, p2, p3) = self.resolved_triple(r)?;
                build_refined_dead_end(r, p1, p2, p3)
            }
            ConstructionId::PendantTriangle => build_pendant_triangle(),
            ConstructionId::IntersectingPalette => {
                let t = self.need_t()?;
                let r = self.need_r(binomial(2 * t - 1, t))?;
                build_intersecting_palette(r, t)
            }
            ConstructionId::HypercubeLayers => build_hypercube_layers(self.need_d()?),
        }
    }

    /// Builds, re-measures the density, and checks the forbidden-family or
    /// component claim by exhaustive enumeration.
    pub fn verify(&self, cap: u128) -> Result<VerificationOutcome, Error> {
        let g = self.build()?;
        let claimed = self.claimed_density()?;
        let mut outcome = VerificationOutcome {
            construction: self.id.name().to_string(),
            claimed_density: claimed,
            measured_density: f64::NAN,
            checks: Vec::new(),
        };

        let report = g.validate();
        outcome.push("validation", report.is_valid(), report.to_string());
        if !report.is_valid() {
            return Ok(outcome);
        }

        let profile = g.density_profile()?;
        outcome.measured_density = profile.minimum;
        outcome.push(
            "density",
            (profile.minimum - claimed).abs() <= COMPARE_TOL,
            format!("measured {:.15} vs claimed {:.15}", profile.minimum, claimed),
        );

        match self.id {
            ConstructionId::IntersectingPalette => {
                let t = self.need_t()?;
                let r = self.need_r(binomial(2 * t - 1, t))?;
                let bound = palette_component_bound(r, t);
                let (size, _) = g.max_transversal_component(cap)?;
                outcome.push(
                    "component bound",
                    size <= bound,
                    format!("max transversal component {size}, bound {bound}"),
                );
            }
            ConstructionId::HypercubeLayers => {
                let d = self.need_d()?;
                let bound = hypercube_component_bound(d);
                let (size, _) = g.max_transversal_component(cap)?;
                outcome.push(
                    "component bound",
                    size <= bound,
                    format!("max transversal component {size}, bound {bound}"),
                );
                let windowed = hypercube_components_within_three_layers(&g, cap)?;
                outcome.push(
                    "three-layer window",
                    windowed,
                    "every transversal component spans at most three consecutive layers".into(),
                );
            }
            _ => {
                let family = self.claimed_family()?;
                let cert = crate::certify::check_family_free(&g, &family, cap)?;
                outcome.push(
                    "family-free",
                    cert.is_family_free(),
                    match &cert.witness {
                        Some(w) => format!("violating transversal {:?}", w.0),
                        None => format!("no transversal contains a member of {}", family.describe()),
                    },
                );
            }
        }
        Ok(outcome)
    }
}

/// Pass/fail per check, with the first failure naming the discrepancy.
#[derive(Debug, Clone)]
pub struct VerificationOutcome {
    pub construction: String,
    pub claimed_density: f64,
    pub measured_density: f64,
    pub checks: Vec<(String, bool, String)>,
}

impl VerificationOutcome {
    fn push(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push((name.to_string(), pass, detail));
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|(_, ok, _)| *ok)
    }

    pub fn first_failure(&self) -> Option<String> {
        self.checks
            .iter()
            .find(|(_, ok, _)| !ok)
            .map(|(name, _, detail)| format!("{name}: {detail}"))
    }
}

impl std::fmt::Display for VerificationOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "{}: {}",
            self.construction,
            if self.pass() { "pass" } else { "FAIL" }
        )?;
        for (name, ok, detail) in &self.checks {
            writeln!(f, "  [{}] {name}: {detail}", if *ok { "ok" } else { "FAIL" })?;
        }
        Ok(())
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// The maximin-optimal leaf weight for the dead-end star construction.
pub fn leila_optimal_alpha(r: usize) -> f64 {
    let rf = r as f64;
    (3.0 * rf - 4.0 - (5.0 * rf * rf - 16.0 * rf + 12.0).sqrt()) / (2.0 * (rf - 1.0))
}

/// min((1-a)^2, a(r-2)/(r-1)): the two pair-density classes.
pub fn leila_density(r: usize, alpha: f64) -> f64 {
    let rf = r as f64;
    ((1.0 - alpha) * (1.0 - alpha)).min(alpha * (rf - 2.0) / (rf - 1.0))
}

/// The four pair-density classes of the dead-end Hamiltonicity construction.
pub fn refined_dead_end_classes(r: usize, p1: f64, p2: f64, p3: f64) -> [f64; 4] {
    let rf = r as f64;
    [
        p1 * p1 + (1.0 - p1) * (1.0 - p1),
        p1 * p2,
        (1.0 - p1) + p1 * (1.0 - p3) / (rf - 2.0),
        (1.0 - p2) + p2 * p3,
    ]
}

pub fn refined_dead_end_density(r: usize, p1: f64, p2: f64, p3: f64) -> f64 {
    refined_dead_end_classes(r, p1, p2, p3)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// The parameter triple maximizing the minimum of the four pair-density
/// classes: p1 solves (4r-6)p^3 - (6r-10)p^2 + (4r-8)p - (r-2) = 0 in
/// (1/2, 1), and the other two parameters equalize the remaining classes.
pub fn refined_dead_end_optimal(r: usize) -> (f64, f64, f64) {
    let rf = r as f64;
    let cubic = |p: f64| {
        (4.0 * rf - 6.0) * p * p * p - (6.0 * rf - 10.0) * p * p + (4.0 * rf - 8.0) * p - (rf - 2.0)
    };
    let p1 = bisect_root(cubic, 0.5, 1.0, 1e-14);
    let d1 = p1 * p1 + (1.0 - p1) * (1.0 - p1);
    let p2 = d1 / p1;
    let p3 = 1.0 - (rf - 2.0) * (2.0 * p1 - 1.0);
    (p1, p2, p3)
}

fn build_star_leaf(r: usize) -> Result<PartiteGraph, Error> {
    let host = HostGraph::star(r);
    let w = 1.0 / (r as f64 - 1.0);
    let mut parts = Vec::with_capacity(r);
    parts.push(Part::new((1..r).map(|k| (k.to_string(), w)).collect()));
    for _ in 1..r {
        parts.push(Part::new(vec![("v".into(), 1.0)]));
    }
    let mut g = PartiteGraph::new(host, parts);
    for i in 1..r {
        for k in 1..r {
            if k != i {
                g.add_edge(0, k - 1, i, 0);
            }
        }
    }
    Ok(g)
}

fn build_leila(r: usize, alpha: f64) -> Result<PartiteGraph, Error> {
    let host = HostGraph::complete(r);
    let mut parts = Vec::with_capacity(r);
    // Leaf part for host vertex i carries its own label i+1 plus the shared
    // dead-end label r.
    for i in 0..r - 1 {
        parts.push(Part::new(vec![
            ((i + 1).to_string(), alpha),
            (r.to_string(), 1.0 - alpha),
        ]));
    }
    let w = 1.0 / (r as f64 - 1.0);
    parts.push(Part::new((1..r).map(|k| (k.to_string(), w)).collect()));
    let mut g = PartiteGraph::new(host, parts);
    for i in 0..r - 1 {
        for j in i + 1..r - 1 {
            g.add_edge(i, 1, j, 1);
        }
        // Center vertex labeled k joins the own-label vertex of leaf i
        // unless the labels coincide.
        for k in 1..r {
            if k != i + 1 {
                g.add_edge(r - 1, k - 1, i, 0);
            }
        }
    }
    Ok(g)
}

fn build_missing_edge(r: usize, extra: &[(usize, usize)]) -> Result<PartiteGraph, Error> {
    let host = HostGraph::complete_minus_matching(r, extra)?;
    let mut parts = Vec::with_capacity(r);
    parts.push(Part::new(vec![("1".into(), 1.0)]));
    parts.push(Part::new(vec![("2".into(), 1.0)]));
    for _ in 2..r {
        parts.push(Part::new(vec![("1".into(), 0.5), ("2".into(), 0.5)]));
    }
    let mut g = PartiteGraph::new(host.clone(), parts);
    for (x, y) in host.edges() {
        for a in 0..g.part(x).len() {
            for b in 0..g.part(y).len() {
                if g.part(x).ids[a] == g.part(y).ids[b] {
                    g.add_edge(x, a, y, b);
                }
            }
        }
    }
    Ok(g)
}

fn build_two_colour(r: usize) -> Result<PartiteGraph, Error> {
    let host = HostGraph::complete(r);
    let mut parts = Vec::with_capacity(r);
    for _ in 0..r - 2 {
        parts.push(Part::new(vec![("0".into(), 0.5), ("1".into(), 0.5)]));
    }
    parts.push(Part::new(vec![("0".into(), 1.0)]));
    parts.push(Part::new(vec![("1".into(), 1.0)]));
    let mut g = PartiteGraph::new(host.clone(), parts);
    for (x, y) in host.edges() {
        if (x, y) == (r - 2, r - 1) {
            g.add_edge(x, 0, y, 0);
            continue;
        }
        for a in 0..g.part(x).len() {
            for b in 0..g.part(y).len() {
                if g.part(x).ids[a] == g.part(y).ids[b] {
                    g.add_edge(x, a, y, b);
                }
            }
        }
    }
    Ok(g)
}

fn build_parity(r: usize) -> Result<PartiteGraph, Error> {
    let host = HostGraph::complete(r);
    let parts = (0..r)
        .map(|_| Part::new(vec![("0".into(), 0.5), ("1".into(), 0.5)]))
        .collect();
    let mut g = PartiteGraph::new(host.clone(), parts);
    for (x, y) in host.edges() {
        g.add_edge(x, 0, y, 1);
        g.add_edge(x, 1, y, 0);
    }
    Ok(g)
}

fn build_refined_dead_end(r: usize, p1: f64, p2: f64, p3: f64) -> Result<PartiteGraph, Error> {
    let host = HostGraph::complete(r);
    let spine = "0".to_string();
    let side = (r - 1).to_string();
    let mut parts = Vec::with_capacity(r);
    for _ in 0..r - 2 {
        parts.push(Part::new(vec![(spine.clone(), p1), (side.clone(), 1.0 - p1)]));
    }
    parts.push(Part::new(vec![(spine.clone(), p2), (r.to_string(), 1.0 - p2)]));
    let small = (1.0 - p3) / (r as f64 - 2.0);
    let mut last: Vec<(String, f64)> = (1..=r - 2).map(|k| (k.to_string(), small)).collect();
    last.push(((r - 1).to_string(), p3));
    parts.push(Part::new(last));
    let mut g = PartiteGraph::new(host, parts);
    for i in 0..r - 2 {
        for j in i + 1..r - 2 {
            g.add_edge(i, 0, j, 0);
            g.add_edge(i, 1, j, 1);
        }
        g.add_edge(i, 0, r - 2, 0);
        // Side vertices reach the whole last part; the spine vertex of part
        // i reaches only its private label i+1.
        for b in 0..r - 1 {
            g.add_edge(i, 1, r - 1, b);
        }
        g.add_edge(i, 0, r - 1, i);
    }
    g.add_edge(r - 2, 0, r - 1, r - 2);
    for b in 0..r - 1 {
        g.add_edge(r - 2, 1, r - 1, b);
    }
    Ok(g)
}

fn build_pendant_triangle() -> Result<PartiteGraph, Error> {
    let host = HostGraph::k4_minus_p3();
    let s3 = 3.0f64.sqrt();
    let wa = 2.0 - s3; // 0.26794919243112270
    let wx = 2.0 * s3 - 3.0; // 0.46410161513775461
    let wy = s3 - 1.0; // 0.73205080756887729
    let parts = vec![
        Part::new(vec![("v0".into(), 1.0)]),
        Part::new(vec![("v2".into(), wa), ("v3".into(), wa), ("vX".into(), wx)]),
        Part::new(vec![("v1".into(), wa), ("vY".into(), wy)]),
        Part::new(vec![("v1".into(), wa), ("vY".into(), wy)]),
    ];
    let mut g = PartiteGraph::new(host, parts);
    g.add_edge(0, 0, 1, 0); // v0 - v2
    g.add_edge(0, 0, 1, 1); // v0 - v3
    g.add_edge(2, 0, 1, 0); // v1 in V2 - v2
    g.add_edge(2, 0, 1, 2); // v1 in V2 - vX
    g.add_edge(2, 1, 1, 2); // vY in V2 - vX
    g.add_edge(3, 0, 1, 1); // v1 in V3 - v3
    g.add_edge(3, 0, 1, 2); // v1 in V3 - vX
    g.add_edge(3, 1, 1, 2); // vY in V3 - vX
    g.add_edge(2, 1, 3, 1); // vY - vY
    Ok(g)
}

/// t-subsets of [2t-1] in colexicographic order, as sorted element lists.
fn palette_subsets(t: usize) -> Vec<Vec<usize>> {
    let universe = 2 * t - 1;
    let mut masks: Vec<u32> = (0u32..1 << universe)
        .filter(|m| m.count_ones() as usize == t)
        .collect();
    masks.sort_unstable(); // bitmask order == colex order on subsets
    masks
        .into_iter()
        .map(|m| (0..universe).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect())
        .collect()
}

/// ceil(t/(2t-1) * r): the transversal component bound of the palette
/// construction.
pub fn palette_component_bound(r: usize, t: usize) -> usize {
    (r * t).div_ceil(2 * t - 1)
}

fn build_intersecting_palette(r: usize, t: usize) -> Result<PartiteGraph, Error> {
    let subsets = palette_subsets(t);
    let m = subsets.len();
    debug_assert_eq!(m, binomial(2 * t - 1, t));
    let q = r / m;
    let k = r % m;
    // Balanced block sizes, ceiling blocks first in colex order.
    let mut assignment = Vec::with_capacity(r);
    for (idx, subset) in subsets.iter().enumerate() {
        let size = if idx < k { q + 1 } else { q };
        for _ in 0..size {
            assignment.push(subset.clone());
        }
    }
    let host = HostGraph::complete(r);
    let w = 1.0 / t as f64;
    let parts = assignment
        .iter()
        .map(|subset| Part::new(subset.iter().map(|e| (e.to_string(), w)).collect()))
        .collect();
    let mut g = PartiteGraph::new(host, parts);
    for x in 0..r {
        for y in x + 1..r {
            for (a, ea) in assignment[x].iter().enumerate() {
                for (b, eb) in assignment[y].iter().enumerate() {
                    if ea == eb {
                        g.add_edge(x, a, y, b);
                    }
                }
            }
        }
    }
    Ok(g)
}

/// 1 + the largest total size of three consecutive hypercube layers, minus 1:
/// the component bound for the layered construction.
pub fn hypercube_component_bound(d: usize) -> usize {
    (1..d)
        .map(|l| binomial(d, l - 1) + binomial(d, l) + binomial(d, l + 1))
        .max()
        .unwrap_or(1 << d)
}

fn build_hypercube_layers(d: usize) -> Result<PartiteGraph, Error> {
    let host = HostGraph::hypercube(d);
    let n = host.n();
    let parts = (0..n)
        .map(|x| match (x as u32).count_ones() % 4 {
            0 => Part::new(vec![("0".into(), 1.0)]),
            2 => Part::new(vec![("1".into(), 1.0)]),
            _ => Part::new(vec![("0".into(), 0.5), ("1".into(), 0.5)]),
        })
        .collect();
    let mut g = PartiteGraph::new(host.clone(), parts);
    for (x, y) in host.edges() {
        for a in 0..g.part(x).len() {
            for b in 0..g.part(y).len() {
                if g.part(x).ids[a] == g.part(y).ids[b] {
                    g.add_edge(x, a, y, b);
                }
            }
        }
    }
    Ok(g)
}

/// Checks that every transversal component of the layered construction sits
/// inside three consecutive layers.
pub fn hypercube_components_within_three_layers(
    g: &PartiteGraph,
    cap: u128,
) -> Result<bool, Error> {
    let count = g.transversal_count();
    if count > cap {
        return Err(Error::EnumerationCap { count, cap });
    }
    let mut ok = true;
    g.for_each_transversal(|c| {
        let graph = g.transversal_graph_choices(c);
        for comp in graph.components() {
            let mut min_layer = usize::MAX;
            let mut max_layer = 0usize;
            let mut m = comp;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                let layer = (v as u32).count_ones() as usize;
                min_layer = min_layer.min(layer);
                max_layer = max_layer.max(layer);
            }
            if max_layer - min_layer > 2 {
                ok = false;
                return std::ops::ControlFlow::Break(());
            }
        }
        std::ops::ControlFlow::Continue(())
    });
    Ok(ok)
}

/// The full verification batch: every generator over its documented
/// parameter ranges.
pub fn full_suite() -> Vec<ConstructionSpec> {
    let mut suite = Vec::new();
    for r in 4..=8 {
        suite.push(ConstructionSpec::new(ConstructionId::StarLeaf).with_r(r));
        suite.push(ConstructionSpec::new(ConstructionId::Leila).with_r(r));
        suite.push(ConstructionSpec::new(ConstructionId::MissingEdge).with_r(r));
        suite.push(ConstructionSpec::new(ConstructionId::TwoColour).with_r(r));
        suite.push(ConstructionSpec::new(ConstructionId::RefinedDeadEnd).with_r(r));
    }
    for r in 3..=8 {
        suite.push(ConstructionSpec::new(ConstructionId::Parity).with_r(r));
    }
    suite.push(ConstructionSpec::new(ConstructionId::PendantTriangle));
    for r in 6..=12 {
        suite.push(ConstructionSpec::new(ConstructionId::IntersectingPalette).with_t(2).with_r(r));
    }
    for r in 10..=12 {
        suite.push(ConstructionSpec::new(ConstructionId::IntersectingPalette).with_t(3).with_r(r));
    }
    for d in 2..=4 {
        suite.push(ConstructionSpec::new(ConstructionId::HypercubeLayers).with_d(d));
    }
    suite
}

/// Glues two path-hosted graphs into a cycle-hosted graph by identifying
/// their endpoint parts index-by-index.
pub fn glue_paths(g1: &PartiteGraph, g2: &PartiteGraph) -> Result<PartiteGraph, Error> {
    for (name, g) in [("first", g1), ("second", g2)] {
        let n = g.host().n();
        if *g.host() != HostGraph::path(n) || n < 2 {
            return Err(Error::param(format!(
                "{name} graph must be hosted on the canonical path 0-1-...-(n-1)"
            )));
        }
    }
    let n1 = g1.host().n();
    let n2 = g2.host().n();
    let n = n1 + n2 - 2;
    if n < 4 {
        return Err(Error::param(format!("glued cycle would have length {n}, need at least 4")));
    }
    for (end1, end2) in [(0usize, 0usize), (n1 - 1, n2 - 1)] {
        let a = g1.part(end1);
        let b = g2.part(end2);
        if a.len() != b.len() {
            return Err(Error::param(format!(
                "endpoint parts differ in size ({} vs {})",
                a.len(),
                b.len()
            )));
        }
        for i in 0..a.len() {
            if (a.weights[i] - b.weights[i]).abs() > COMPARE_TOL {
                return Err(Error::param(format!(
                    "endpoint parts differ in weights at index {i}"
                )));
            }
        }
    }
    // Vertex map for the second path: endpoints onto the first path's
    // endpoints, interior shifted past the first path.
    let map2 = |j: usize| -> usize {
        if j == 0 {
            0
        } else if j == n2 - 1 {
            n1 - 1
        } else {
            n1 - 1 + j
        }
    };
    let mut edges = Vec::new();
    for i in 0..n1 - 1 {
        edges.push((i, i + 1));
    }
    for j in 0..n2 - 1 {
        edges.push((map2(j), map2(j + 1)));
    }
    let host = HostGraph::new(n, &edges)?;
    let mut parts: Vec<Part> = g1.parts().to_vec();
    for j in 1..n2 - 1 {
        parts.push(g2.part(j).clone());
    }
    let mut out = PartiteGraph::new(host, parts);
    for (&(x, y), block) in g1.edge_blocks() {
        out.insert_block(x, y, block.clone());
    }
    for (&(x, y), block) in g2.edge_blocks() {
        out.insert_block(map2(x), map2(y), block.clone());
    }
    Ok(out)
}
