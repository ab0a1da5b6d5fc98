//! Extremal density search over weight-free combinatorial patterns.
//!
//! Family-freeness depends only on the pattern skeleton, so the search
//! enumerates patterns (exhaustively, with canonical-form deduplication,
//! or stochastically), filters the family-free ones, and maximizes the
//! minimum pair density over weights for each survivor. Since the maximin
//! objective is monotone in the edge set, only maximal family-free
//! patterns are optimized.
//!
//! The returned density is a certified lower bound on the search target;
//! exhaustive mode is also a heuristic upper bound, limited by the inner
//! optimizer's local nature.

mod lp;
mod optimize;
mod pattern;

use rayon::prelude::*;

pub use optimize::{optimize_weights, project_simplex, OptimizeOptions};
pub use pattern::{pattern_to_graph, CombinatorialPattern, PatternContext};

use crate::certify::{check_family_free, Certificate};
use crate::family::ForbiddenFamily;
use crate::graph::HostGraph;
use crate::rng::{Key, Stream};
use crate::{Error, DEFAULT_ENUM_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Stochastic { restarts: u64, budget: u64 },
}

#[derive(Debug, Clone)]
pub struct SearchProblem {
    pub host: HostGraph,
    pub family: ForbiddenFamily,
    /// Max part size per host vertex. Defaults to the host degree (the
    /// extremal-example bound); raising a cap above the degree widens the
    /// space beyond that guarantee.
    pub caps: Vec<u32>,
    pub mode: SearchMode,
    pub seed: u64,
    /// Multi-start count for the inner weight optimizer.
    pub starts: usize,
    /// Refusal threshold for the exhaustive pattern-space estimate.
    pub pattern_budget: f64,
    /// Canonical-form deduplication (exhaustive mode).
    pub dedup: bool,
}

impl SearchProblem {
    pub fn new(host: HostGraph, family: ForbiddenFamily) -> Self {
        let caps = (0..host.n()).map(|v| host.degree(v).max(1) as u32).collect();
        SearchProblem {
            host,
            family,
            caps,
            mode: SearchMode::Exhaustive,
            seed: 0,
            starts: 64,
            pattern_budget: 2e8,
            dedup: true,
        }
    }

    pub fn with_caps(mut self, caps: Vec<u32>) -> Self {
        self.caps = caps;
        self
    }

    pub fn with_mode(mut self, mode: SearchMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }

    pub fn with_dedup(mut self, dedup: bool) -> Self {
        self.dedup = dedup;
        self
    }

    fn validate(&self) -> Result<(), Error> {
        if self.caps.len() != self.host.n() {
            return Err(Error::param(format!(
                "expected {} caps, got {}",
                self.host.n(),
                self.caps.len()
            )));
        }
        if self.caps.iter().any(|&c| c == 0) {
            return Err(Error::param("caps must be at least 1"));
        }
        for (x, y) in self.host.edges() {
            if self.caps[x] as u64 * self.caps[y] as u64 > 64 {
                return Err(Error::param(format!(
                    "caps at host edge ({x},{y}) exceed the 64-bit biadjacency limit"
                )));
            }
        }
        self.family.validate(self.host.n())?;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_density: f64,
    pub best_pattern: CombinatorialPattern,
    pub best_weights: Vec<Vec<f64>>,
    /// Independent re-verification of the winning weighted graph.
    pub certificate: Certificate,
    /// Raw patterns inspected (before canonical deduplication).
    pub patterns_examined: u64,
    /// Canonical family-free patterns encountered.
    pub patterns_family_free: u64,
    pub notes: Vec<String>,
}

/// True iff every transversal of the skeleton avoids the family; delegates
/// to the weighted kernel under unit-uniform weights.
pub fn pattern_family_free(
    host: &HostGraph,
    p: &CombinatorialPattern,
    family: &ForbiddenFamily,
    cap: u128,
) -> Result<bool, Error> {
    let weights: Vec<Vec<f64>> = p
        .sizes
        .iter()
        .map(|&s| vec![1.0 / s as f64; s as usize])
        .collect();
    let g = pattern_to_graph(host, p, &weights);
    Ok(check_family_free(&g, family, cap)?.is_family_free())
}

/// Canonical key of a pattern under the host's symmetries (all caps wide
/// open). See [`PatternContext::canonical_key`] for the cap-respecting
/// variant used inside search.
pub fn canonical_key(host: &HostGraph, p: &CombinatorialPattern) -> Vec<u8> {
    let max_size = p.sizes.iter().copied().max().unwrap_or(1) as usize;
    let ctx = PatternContext::new(host, max_size);
    let caps = vec![u32::MAX; host.n()];
    ctx.canonical_key(p, &caps)
}

#[derive(Clone)]
struct Candidate {
    density: f64,
    key: Vec<u8>,
    pattern: CombinatorialPattern,
    weights: Vec<Vec<f64>>,
}

impl Candidate {
    /// Total order: higher density first, then smaller canonical key.
    fn better_than(&self, other: &Option<Candidate>) -> bool {
        match other {
            None => true,
            Some(o) => {
                self.density > o.density || (self.density == o.density && self.key < o.key)
            }
        }
    }
}

#[derive(Default)]
struct Tally {
    examined: u64,
    family_free: u64,
    best: Option<Candidate>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.examined += other.examined;
        self.family_free += other.family_free;
        if let Some(c) = other.best {
            if c.better_than(&self.best) {
                self.best = Some(c);
            }
        }
        self
    }
}

pub fn search(problem: &SearchProblem) -> Result<SearchResult, Error> {
    problem.validate()?;
    let mut notes = Vec::new();
    for (v, &cap) in problem.caps.iter().enumerate() {
        let deg = problem.host.degree(v).max(1) as u32;
        if cap > deg {
            notes.push(format!(
                "cap {cap} at host vertex {v} exceeds the degree bound {deg}; the \
                 finite-extremal-example guarantee applies to the degree, not this cap"
            ));
        }
    }
    let max_cap = problem.caps.iter().copied().max().unwrap() as usize;
    let ctx = PatternContext::new(&problem.host, max_cap);
    let tally = match problem.mode {
        SearchMode::Exhaustive => exhaustive(problem, &ctx)?,
        SearchMode::Stochastic { restarts, budget } => stochastic(problem, &ctx, restarts, budget),
    };
    let best = tally.best.ok_or_else(|| {
        Error::param("no family-free pattern exists under these caps (even the empty pattern is violated)")
    })?;
    let graph = pattern_to_graph(&problem.host, &best.pattern, &best.weights);
    let certificate = check_family_free(&graph, &problem.family, DEFAULT_ENUM_CAP)?;
    if !certificate.is_family_free() {
        return Err(Error::param(
            "internal error: winning pattern failed independent re-verification",
        ));
    }
    Ok(SearchResult {
        best_density: best.density,
        best_pattern: best.pattern,
        best_weights: best.weights,
        certificate,
        patterns_examined: tally.examined,
        patterns_family_free: tally.family_free,
        notes,
    })
}

/// Layout of one size vector's pattern block: bit spans per host edge.
struct SizeBlock {
    sizes: Vec<u8>,
    spans: Vec<(usize, u32)>, // (edge position, bit count)
    total_bits: u32,
}

fn size_blocks(problem: &SearchProblem, ctx: &PatternContext) -> Vec<SizeBlock> {
    let n = problem.host.n();
    let mut blocks = Vec::new();
    let mut sizes: Vec<u8> = vec![1; n];
    loop {
        let mut spans = Vec::with_capacity(ctx.edges.len());
        let mut total = 0u32;
        for (k, &(x, y)) in ctx.edges.iter().enumerate() {
            let bits = sizes[x] as u32 * sizes[y] as u32;
            spans.push((k, bits));
            total += bits;
        }
        blocks.push(SizeBlock { sizes: sizes.clone(), spans, total_bits: total });
        let mut i = n;
        loop {
            if i == 0 {
                return blocks;
            }
            i -= 1;
            sizes[i] += 1;
            if sizes[i] as u32 <= problem.caps[i] {
                break;
            }
            sizes[i] = 1;
        }
    }
}

fn exhaustive(problem: &SearchProblem, ctx: &PatternContext) -> Result<Tally, Error> {
    let blocks = size_blocks(problem, ctx);
    let estimate: f64 = blocks.iter().map(|b| 2f64.powi(b.total_bits as i32)).sum();
    if estimate > problem.pattern_budget {
        return Err(Error::SearchBudget { estimate, budget: problem.pattern_budget });
    }
    let opts = OptimizeOptions { seed: problem.seed, starts: problem.starts };

    // Chunked flat enumeration per size vector; chunks are independent, so
    // the merge is worker-count agnostic.
    const CHUNK_BITS: u32 = 14;
    let mut chunks = Vec::new();
    for (bi, block) in blocks.iter().enumerate() {
        let count: u64 = 1u64 << block.total_bits;
        let step = 1u64 << CHUNK_BITS.min(block.total_bits);
        let mut lo = 0u64;
        while lo < count {
            chunks.push((bi, lo, (lo + step).min(count)));
            lo += step;
        }
    }

    let tally = chunks
        .par_iter()
        .map(|&(bi, lo, hi)| {
            let block = &blocks[bi];
            let mut local = Tally::default();
            let mut pattern =
                CombinatorialPattern { sizes: block.sizes.clone(), bits: vec![0; ctx.edges.len()] };
            for code in lo..hi {
                decode(block, code, &mut pattern.bits);
                local.examined += 1;
                if !ctx.family_free(&pattern, &problem.family) {
                    continue;
                }
                if problem.dedup && !ctx.is_canonical(&pattern, &problem.caps) {
                    continue;
                }
                local.family_free += 1;
                if !ctx.is_maximal_family_free(&pattern, &problem.family) {
                    continue;
                }
                let (weights, density) = optimize_weights(&problem.host, &pattern, &opts);
                let cand = Candidate {
                    density,
                    key: ctx.canonical_key(&pattern, &problem.caps),
                    pattern: pattern.clone(),
                    weights,
                };
                if cand.better_than(&local.best) {
                    local.best = Some(cand);
                }
            }
            local
        })
        .reduce(Tally::default, Tally::merge);
    Ok(tally)
}

fn decode(block: &SizeBlock, code: u64, bits: &mut [u64]) {
    let mut offset = 0u32;
    for &(edge, span) in &block.spans {
        let mask = if span == 64 { u64::MAX } else { (1u64 << span) - 1 };
        bits[edge] = (code >> offset) & mask;
        offset += span;
    }
}

fn stochastic(problem: &SearchProblem, ctx: &PatternContext, restarts: u64, budget: u64) -> Tally {
    let opts_quick = OptimizeOptions { seed: problem.seed, starts: problem.starts.min(8).max(1) };
    let key = Key::new(problem.seed);
    let tally = (0..restarts)
        .into_par_iter()
        .map(|restart| {
            let mut local = Tally::default();
            let mut stream = Stream::new(key.derive(restart));
            let mut pattern = random_free_pattern(problem, ctx, &mut stream);
            greedy_fill(problem, ctx, &mut pattern, &mut stream);
            if !ctx.family_free(&pattern, &problem.family) {
                return local; // family forbids even the empty pattern
            }
            let (mut w, mut d) = optimize_weights(&problem.host, &pattern, &opts_quick);
            local.examined += 1;
            local.family_free += 1;
            for _ in 0..budget {
                let mut proposal = pattern.clone();
                mutate(&mut proposal, &mut stream);
                repair(problem, ctx, &mut proposal);
                greedy_fill(problem, ctx, &mut proposal, &mut stream);
                local.examined += 1;
                local.family_free += 1;
                let (pw, pd) = optimize_weights(&problem.host, &proposal, &opts_quick);
                if pd > d {
                    pattern = proposal;
                    w = pw;
                    d = pd;
                }
            }
            local.best = Some(Candidate {
                density: d,
                key: ctx.canonical_key(&pattern, &problem.caps),
                pattern,
                weights: w,
            });
            local
        })
        .reduce(Tally::default, Tally::merge);
    // Re-optimize the winner at full strength.
    let Tally { examined, family_free, best } = tally;
    let best = best.map(|cand| {
        let opts_full = OptimizeOptions { seed: problem.seed, starts: problem.starts };
        let (w, d) = optimize_weights(&problem.host, &cand.pattern, &opts_full);
        if d >= cand.density {
            Candidate { density: d, weights: w, ..cand }
        } else {
            cand
        }
    });
    Tally { examined, family_free, best }
}

fn random_free_pattern(
    problem: &SearchProblem,
    ctx: &PatternContext,
    stream: &mut Stream,
) -> CombinatorialPattern {
    let n = problem.host.n();
    let sizes: Vec<u8> = (0..n)
        .map(|v| (stream.next_below(problem.caps[v] as usize) + 1) as u8)
        .collect();
    let density = 0.2 + 0.75 * stream.next_f64();
    let mut pattern = CombinatorialPattern { sizes, bits: vec![0; ctx.edges.len()] };
    for (k, &(x, y)) in ctx.edges.iter().enumerate() {
        let span = pattern.sizes[x] as usize * pattern.sizes[y] as usize;
        for bit in 0..span {
            if stream.next_f64() < density {
                pattern.bits[k] |= 1 << bit;
            }
        }
    }
    repair(problem, ctx, &mut pattern);
    pattern
}

/// Removes bits until the pattern is family-free (always terminates: the
/// empty pattern is free whenever any pattern is).
fn repair(problem: &SearchProblem, ctx: &PatternContext, pattern: &mut CombinatorialPattern) {
    while !ctx.family_free(pattern, &problem.family) {
        let set: Vec<(usize, u32)> = pattern
            .bits
            .iter()
            .enumerate()
            .flat_map(|(k, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| (k, b)))
            .collect();
        if set.is_empty() {
            return; // family violated even with no edges; caller handles
        }
        // Deterministic: drop the middle set bit.
        let (k, b) = set[set.len() / 2];
        pattern.bits[k] &= !(1u64 << b);
    }
}

/// Adds bits in random order while freeness survives, ending maximal.
fn greedy_fill(
    problem: &SearchProblem,
    ctx: &PatternContext,
    pattern: &mut CombinatorialPattern,
    stream: &mut Stream,
) {
    let mut absent: Vec<(usize, u32)> = Vec::new();
    for (k, &(x, y)) in ctx.edges.iter().enumerate() {
        let span = pattern.sizes[x] as u32 * pattern.sizes[y] as u32;
        for bit in 0..span {
            if pattern.bits[k] >> bit & 1 == 0 {
                absent.push((k, bit));
            }
        }
    }
    stream.shuffle(&mut absent);
    for (k, bit) in absent {
        pattern.bits[k] |= 1 << bit;
        if !ctx.family_free(pattern, &problem.family) {
            pattern.bits[k] &= !(1u64 << bit);
        }
    }
}

fn mutate(pattern: &mut CombinatorialPattern, stream: &mut Stream) {
    let set: Vec<(usize, u32)> = pattern
        .bits
        .iter()
        .enumerate()
        .flat_map(|(k, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| (k, b)))
        .collect();
    let removals = 1 + stream.next_below(2);
    for _ in 0..removals {
        if set.is_empty() {
            break;
        }
        let (k, b) = set[stream.next_below(set.len())];
        pattern.bits[k] &= !(1u64 << b);
    }
}
