//! A small dense simplex solver for the per-part maximin subproblem:
//! maximize the minimum of finitely many linear functions over a
//! probability simplex.

/// Maximize `min_j costs[j] . w` over the simplex `w >= 0, sum w = 1`.
/// All cost entries are assumed non-negative (they are weighted densities).
/// Returns the maximizing weights and the attained minimum; with no
/// constraints every point is optimal and the value is +infinity.
pub fn maximin_simplex(costs: &[Vec<f64>], dim: usize) -> (Vec<f64>, f64) {
    assert!(dim > 0);
    if costs.is_empty() {
        return (vec![1.0 / dim as f64; dim], f64::INFINITY);
    }
    if dim == 1 {
        let value = costs.iter().map(|c| c[0]).fold(f64::INFINITY, f64::min);
        return (vec![1.0], value);
    }
    let m = costs.len();
    // Substitute w_last = 1 - sum of the others. Variables are
    // u = (w_0 .. w_{dim-2}, t), all non-negative; constraints:
    //   sum_{a} w_a <= 1
    //   t - sum_a (c_ja - c_j,last) w_a <= c_j,last
    // The origin is feasible because the right-hand sides are >= 0.
    let nv = dim; // dim-1 weight variables plus t
    let mut a = Vec::with_capacity(m + 1);
    let mut b = Vec::with_capacity(m + 1);
    let mut row0 = vec![0.0; nv];
    for v in row0.iter_mut().take(dim - 1) {
        *v = 1.0;
    }
    a.push(row0);
    b.push(1.0);
    for c in costs {
        let last = c[dim - 1];
        let mut row = vec![0.0; nv];
        for (i, v) in row.iter_mut().enumerate().take(dim - 1) {
            *v = -(c[i] - last);
        }
        row[nv - 1] = 1.0;
        a.push(row);
        b.push(last.max(0.0));
    }
    let mut obj = vec![0.0; nv];
    obj[nv - 1] = 1.0;
    let solution = simplex_max(&obj, &a, &b);
    let mut w = vec![0.0; dim];
    let mut rest = 0.0;
    for i in 0..dim - 1 {
        w[i] = solution[i].max(0.0);
        rest += w[i];
    }
    w[dim - 1] = (1.0 - rest).max(0.0);
    let total: f64 = w.iter().sum();
    for v in &mut w {
        *v /= total;
    }
    let value = costs
        .iter()
        .map(|c| c.iter().zip(&w).map(|(ci, wi)| ci * wi).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    (w, value)
}

/// Primal simplex with Bland's rule for `max c.x, A x <= b, x >= 0` with
/// `b >= 0` (slack basis is feasible). Returns the optimal `x`.
fn simplex_max(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    const EPS: f64 = 1e-11;
    let m = a.len();
    let n = c.len();
    let cols = n + m;
    // Tableau rows: constraints then the objective row (reduced costs).
    let mut t = vec![vec![0.0; cols + 1]; m + 1];
    for i in 0..m {
        t[i][..n].copy_from_slice(&a[i]);
        t[i][n + i] = 1.0;
        t[i][cols] = b[i];
    }
    t[m][..n].copy_from_slice(c);
    let mut basis: Vec<usize> = (n..n + m).collect();
    for _ in 0..20_000 {
        // Bland: smallest improving column.
        let Some(e) = (0..cols).find(|&j| t[m][j] > EPS) else {
            break;
        };
        // Ratio test; Bland tie-break on the basis variable index.
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][e] > EPS {
                let ratio = t[i][cols] / t[i][e];
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - EPS || (ratio < lr + EPS && basis[i] < basis[li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((li, _)) = leave else {
            // Unbounded direction; cannot happen for the bounded maximin
            // problem, but bail defensively.
            break;
        };
        let pivot = t[li][e];
        for v in t[li].iter_mut() {
            *v /= pivot;
        }
        for i in 0..=m {
            if i != li {
                let factor = t[i][e];
                if factor != 0.0 {
                    for j in 0..=cols {
                        t[i][j] -= factor * t[li][j];
                    }
                }
            }
        }
        basis[li] = e;
    }
    let mut x = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][cols];
        }
    }
    x
}
