//! Extreme adjacency eigenvalues by Lanczos with full reorthogonalization.
//!
//! Each Lanczos run works in the orthogonal complement of the eigenvectors
//! already locked. After a run converges its Ritz pairs are locked and a
//! fresh run checks the complement for anything larger in magnitude than the
//! current k-th value, which catches multiplicities a single Krylov space
//! cannot see.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_TOL: f64 = 1e-10;

/// Default iteration budget for a graph on `n` nodes.
pub fn default_max_iter(n: usize) -> usize {
    10 * n.max(1)
}

const START_SEED: u64 = 0x6c61_6e63_7a6f_7321;

fn matvec(g: &Graph, x: &[f64], y: &mut [f64]) {
    for (i, yi) in y.iter_mut().enumerate() {
        *yi = g.neighbors(i).iter().map(|&j| x[j]).sum();
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Removes the components of `w` along every vector in `sets` (two passes).
fn orthogonalize(w: &mut [f64], sets: &[&[Vec<f64>]]) {
    for _ in 0..2 {
        for set in sets {
            for v in set.iter() {
                let c = dot(w, v);
                axpy(-c, v, w);
            }
        }
    }
}

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (`off[i]` couples `i` and `i + 1`), by
/// implicit QL with Wilkinson shifts. Returns eigenvalues and eigenvectors
/// stored column-wise (`vecs[row][col]`).
pub(crate) fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numerical {
                    msg: "tridiagonal QL did not converge".into(),
                    residual: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}

struct RitzPair {
    value: f64,
    vector: Vec<f64>,
}

/// Magnitude-descending order, ties broken toward the larger value.
fn by_magnitude(a: f64, b: f64) -> std::cmp::Ordering {
    b.abs()
        .partial_cmp(&a.abs())
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(b.partial_cmp(&a).unwrap_or(std::cmp::Ordering::Equal))
}

/// Within a magnitude-sorted list, puts the positive member of a `+l, -l`
/// pair first when the two magnitudes agree to the solver tolerance.
fn settle_ties(vals: &mut [f64], tol: f64) {
    for i in 1..vals.len() {
        let (a, b) = (vals[i - 1], vals[i]);
        if a < b && a.abs() - b.abs() <= tol * a.abs().max(1.0) {
            vals.swap(i - 1, i);
        }
    }
}

fn within_tol(residual: f64, value: f64, tol: f64) -> bool {
    residual <= tol * value.abs().max(1.0)
}

struct Lanczos<'a> {
    g: &'a Graph,
    k: usize,
    tol: f64,
    budget: usize,
    used: usize,
    worst_residual: f64,
}

impl Lanczos<'_> {
    /// One Lanczos run in the complement of `locked`. Returns up to `k`
    /// converged pairs, or nothing if the complement is empty.
    fn run(&mut self, locked: &[Vec<f64>], start: Vec<f64>) -> Result<Vec<RitzPair>> {
        let n = self.g.n();
        let scale = ((2 * self.g.m()) as f64).sqrt().max(1.0);
        let breakdown = 1e-12 * scale;

        let mut q = start;
        orthogonalize(&mut q, &[locked]);
        let qn = norm(&q);
        if qn <= 1e-8 {
            return Ok(Vec::new());
        }
        q.iter_mut().for_each(|x| *x /= qn);

        let mut basis: Vec<Vec<f64>> = vec![q];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut w = vec![0.0; n];

        loop {
            let j = basis.len() - 1;
            matvec(self.g, &basis[j], &mut w);
            let alpha = dot(&w, &basis[j]);
            axpy(-alpha, &basis[j], &mut w);
            if j > 0 {
                axpy(-betas[j - 1], &basis[j - 1], &mut w);
            }
            orthogonalize(&mut w, &[locked, &basis]);
            let beta = norm(&w);
            alphas.push(alpha);
            self.used += 1;

            let size = alphas.len();
            let exhausted = beta <= breakdown || size + locked.len() >= n;
            let check = exhausted || size >= self.k && (size - self.k).is_multiple_of(4) || self.used >= self.budget;
            if check {
                let (vals, vecs) = tridiagonal_eigen(&alphas, &betas)?;
                let mut order: Vec<usize> = (0..size).collect();
                order.sort_by(|&a, &b| by_magnitude(vals[a], vals[b]));
                let take = self.k.min(size);
                let estimates_ok = exhausted
                    || order[..take]
                        .iter()
                        .all(|&c| within_tol(beta * vecs[size - 1][c].abs(), vals[c], self.tol));
                if estimates_ok {
                    let pairs = self.ritz_pairs(&basis, &vals, &vecs, &order[..take]);
                    let worst = pairs
                        .iter()
                        .map(|p| self.residual(p) / p.value.abs().max(1.0))
                        .fold(0.0, f64::max);
                    self.worst_residual = worst;
                    if worst <= self.tol {
                        return Ok(pairs);
                    }
                    if exhausted {
                        return Err(Error::Numerical {
                            msg: "Lanczos breakdown without converged Ritz pairs".into(),
                            residual: worst,
                        });
                    }
                }
                if self.used >= self.budget {
                    return Err(Error::Numerical {
                        msg: format!("eigensolver did not converge in {} iterations", self.budget),
                        residual: self.worst_residual,
                    });
                }
            }
            if exhausted {
                // unreachable in practice: exhausted always returns above
                return Ok(Vec::new());
            }
            betas.push(beta);
            let next: Vec<f64> = w.iter().map(|x| x / beta).collect();
            basis.push(next);
        }
    }

    fn ritz_pairs(&self, basis: &[Vec<f64>], vals: &[f64], vecs: &[Vec<f64>], cols: &[usize]) -> Vec<RitzPair> {
        let n = self.g.n();
        cols.iter()
            .map(|&c| {
                let mut y = vec![0.0; n];
                for (row, q) in basis.iter().enumerate() {
                    axpy(vecs[row][c], q, &mut y);
                }
                let yn = norm(&y);
                y.iter_mut().for_each(|x| *x /= yn);
                RitzPair {
                    value: vals[c],
                    vector: y,
                }
            })
            .collect()
    }

    fn residual(&self, p: &RitzPair) -> f64 {
        let mut ay = vec![0.0; self.g.n()];
        matvec(self.g, &p.vector, &mut ay);
        axpy(-p.value, &p.vector, &mut ay);
        norm(&ay)
    }
}

/// The `k` largest-magnitude adjacency eigenvalues, ordered by decreasing
/// magnitude (ties: positive first). Every returned pair satisfies
/// `|Av - lv| <= tol * max(1, |l|)` for a unit vector `v`.
pub fn top_eigenvalues(g: &Graph, k: usize, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::Argument(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Argument(format!("tolerance must be positive, got {tol}")));
    }
    let mut solver = Lanczos {
        g,
        k,
        tol,
        budget: max_iter,
        used: 0,
        worst_residual: f64::INFINITY,
    };
    let mut locked_vals: Vec<f64> = Vec::new();
    let mut locked_vecs: Vec<Vec<f64>> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED ^ n as u64);

    loop {
        let start: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
        let found = solver.run(&locked_vecs, start)?;
        let Some(best) = found.first().map(|p| p.value) else {
            break;
        };
        if locked_vals.len() >= k {
            // a value tying the k-th in magnitude still matters if it is the
            // positive member of a +-l pair
            let kth = locked_vals[k - 1];
            let slack = tol * kth.abs().max(1.0);
            if best.abs() < kth.abs() - slack || best.abs() <= kth.abs() + slack && best <= kth + slack {
                break;
            }
        }
        for p in found {
            locked_vals.push(p.value);
            locked_vecs.push(p.vector);
        }
        let mut idx: Vec<usize> = (0..locked_vals.len()).collect();
        idx.sort_by(|&a, &b| by_magnitude(locked_vals[a], locked_vals[b]));
        locked_vals = idx.iter().map(|&i| locked_vals[i]).collect();
        locked_vecs = idx.iter().map(|&i| std::mem::take(&mut locked_vecs[i])).collect();
        if locked_vals.len() >= n {
            break;
        }
    }
    settle_ties(&mut locked_vals, tol);
    locked_vals.truncate(k);
    Ok(locked_vals)
}
