//! Maximin weight optimization for a fixed pattern: maximize the minimum
//! host-edge density over the product of per-part probability simplices.
//!
//! Multi-start projected gradient ascent on a softmin smoothing of the
//! objective with a ramped sharpness parameter, followed by coordinate-wise
//! exact polish (each part's subproblem is a maximin of linear functions
//! over a simplex, solved by the small LP in [`super::lp`]). The result is
//! a certified lower bound on the pattern's true optimum; no global
//! optimality is claimed (the bilinear maximin is non-concave).

use crate::graph::HostGraph;
use crate::rng::{Key, Stream};
use crate::search::lp::maximin_simplex;
use crate::search::pattern::CombinatorialPattern;

#[derive(Debug, Clone, Copy)]
pub struct OptimizeOptions {
    pub seed: u64,
    pub starts: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions { seed: 0, starts: 64 }
    }
}

struct EdgeData {
    x: usize,
    y: usize,
    /// Set biadjacency pairs (a, b).
    pairs: Vec<(usize, usize)>,
}

struct Objective {
    n: usize,
    sizes: Vec<usize>,
    edges: Vec<EdgeData>,
    /// Edge positions incident to each part.
    incident: Vec<Vec<usize>>,
}

impl Objective {
    fn new(host: &HostGraph, p: &CombinatorialPattern) -> Self {
        let n = p.sizes.len();
        let mut edges = Vec::new();
        let mut incident = vec![Vec::new(); n];
        for (k, &(x, y)) in host.edges().iter().enumerate() {
            let sy = p.sizes[y] as usize;
            let mut pairs = Vec::new();
            let mut w = p.bits[k];
            while w != 0 {
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                pairs.push((bit / sy, bit % sy));
            }
            incident[x].push(edges.len());
            incident[y].push(edges.len());
            edges.push(EdgeData { x, y, pairs });
        }
        Objective { n, sizes: p.sizes.iter().map(|&s| s as usize).collect(), edges, incident }
    }

    fn density(&self, e: &EdgeData, w: &[Vec<f64>]) -> f64 {
        e.pairs.iter().map(|&(a, b)| w[e.x][a] * w[e.y][b]).sum()
    }

    fn densities(&self, w: &[Vec<f64>]) -> Vec<f64> {
        self.edges.iter().map(|e| self.density(e, w)).collect()
    }

    fn min_density(&self, w: &[Vec<f64>]) -> f64 {
        self.densities(w).into_iter().fold(f64::INFINITY, f64::min).min(1.0)
    }

    /// Gradient of the softmin surrogate at sharpness `beta`.
    fn softmin_gradient(&self, w: &[Vec<f64>], beta: f64) -> Vec<Vec<f64>> {
        let alphas = self.densities(w);
        let amin = alphas.iter().copied().fold(f64::INFINITY, f64::min);
        let mut lambda: Vec<f64> = alphas.iter().map(|a| (-beta * (a - amin)).exp()).collect();
        let norm: f64 = lambda.iter().sum();
        lambda.iter_mut().for_each(|l| *l /= norm);
        let mut grad: Vec<Vec<f64>> = self.sizes.iter().map(|&s| vec![0.0; s]).collect();
        for (e, &l) in self.edges.iter().zip(&lambda) {
            if l == 0.0 {
                continue;
            }
            for &(a, b) in &e.pairs {
                grad[e.x][a] += l * w[e.y][b];
                grad[e.y][b] += l * w[e.x][a];
            }
        }
        grad
    }

    /// Exact coordinate maximin for one part given the others, via LP.
    fn polish_part(&self, w: &mut [Vec<f64>], x: usize) {
        if self.incident[x].is_empty() {
            return;
        }
        let costs: Vec<Vec<f64>> = self.incident[x]
            .iter()
            .map(|&k| {
                let e = &self.edges[k];
                let mut c = vec![0.0; self.sizes[x]];
                for &(a, b) in &e.pairs {
                    if e.x == x {
                        c[a] += w[e.y][b];
                    } else {
                        c[b] += w[e.x][a];
                    }
                }
                c
            })
            .collect();
        let (weights, _) = maximin_simplex(&costs, self.sizes[x]);
        w[x] = weights;
    }
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cssv = 0.0;
    let mut rho = 0usize;
    for (i, &ui) in u.iter().enumerate() {
        cssv += ui;
        if ui - (cssv - 1.0) / (i as f64 + 1.0) > 0.0 {
            rho = i + 1;
        }
    }
    if rho == 0 {
        let mut out = vec![0.0; v.len()];
        out[0] = 1.0;
        return out;
    }
    let theta = (u[..rho].iter().sum::<f64>() - 1.0) / rho as f64;
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Maximizes the minimum pair density of a pattern over per-part weights.
/// Deterministic for fixed options; the reported density is recomputed
/// exactly at the returned weights.
pub fn optimize_weights(
    host: &HostGraph,
    p: &CombinatorialPattern,
    opts: &OptimizeOptions,
) -> (Vec<Vec<f64>>, f64) {
    let obj = Objective::new(host, p);
    let key = Key::new(opts.seed).derive(fnv(&p.serialize_key()));
    let mut best_w: Option<Vec<Vec<f64>>> = None;
    let mut best_v = f64::NEG_INFINITY;
    let starts = opts.starts.max(1);
    for start in 0..starts {
        let mut w = initial_point(&obj, start, key);
        ascend(&obj, &mut w);
        let v = obj.min_density(&w);
        if v > best_v {
            best_v = v;
            best_w = Some(w);
        }
    }
    (best_w.expect("at least one start"), best_v)
}

fn initial_point(obj: &Objective, start: usize, key: Key) -> Vec<Vec<f64>> {
    if start == 0 {
        return obj.sizes.iter().map(|&s| vec![1.0 / s as f64; s]).collect();
    }
    let corners: u128 = obj.sizes.iter().map(|&s| s as u128).product();
    let corner_starts = corners.min(16) as usize;
    if start <= corner_starts {
        // Vertex-indicator extremes, enumerated like transversals.
        let mut index = (start - 1) as u128;
        let mut w: Vec<Vec<f64>> = Vec::with_capacity(obj.n);
        for &s in obj.sizes.iter().rev() {
            let pick = (index % s as u128) as usize;
            index /= s as u128;
            let mut part = vec![0.0; s];
            part[pick] = 1.0;
            w.push(part);
        }
        w.reverse();
        return w;
    }
    // Sparse random starts: Dirichlet with concentration 1/2 favors
    // weightings concentrated on few vertices.
    let mut stream = Stream::new(key.derive(start as u64));
    obj.sizes.iter().map(|&s| stream.dirichlet(s, 0.5)).collect()
}

fn pga_stage(obj: &Objective, w: &mut [Vec<f64>], beta: f64, iters: usize, eta0: f64) {
    for iter in 0..iters {
        let grad = obj.softmin_gradient(w, beta);
        let eta = eta0 / (1.0 + iter as f64 / 30.0);
        for x in 0..obj.n {
            if obj.incident[x].is_empty() {
                continue;
            }
            let moved: Vec<f64> = w[x].iter().zip(&grad[x]).map(|(wi, gi)| wi + eta * gi).collect();
            w[x] = project_simplex(&moved);
        }
    }
}

fn polish(obj: &Objective, w: &mut [Vec<f64>]) {
    // Exact coordinate polish: each pass can only raise the objective.
    let mut current = obj.min_density(w);
    for _ in 0..80 {
        for x in 0..obj.n {
            obj.polish_part(w, x);
        }
        let after = obj.min_density(w);
        if after <= current + 1e-13 {
            break;
        }
        current = after;
    }
}

fn ascend(obj: &Objective, w: &mut Vec<Vec<f64>>) {
    // Smoothed phase: sharpness ramped over four decades, then exact
    // coordinate polish. Coordinate ascent alone plateaus on symmetric
    // patterns, so a few sharper smoothed bursts are interleaved.
    for stage in 0..4 {
        pga_stage(obj, w, 10f64.powi(stage + 1), 60, 0.4);
    }
    polish(obj, w);
    let mut snapshot = w.clone();
    let mut best = obj.min_density(w);
    for stage in 0..3 {
        pga_stage(obj, &mut snapshot, 10f64.powi(stage + 4), 40, 0.1);
        polish(obj, &mut snapshot);
        let v = obj.min_density(&snapshot);
        if v > best {
            best = v;
            w.clone_from(&snapshot);
        }
    }
}

fn fnv(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    h
}
