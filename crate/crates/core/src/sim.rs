//! Samplers for the sparse graphon model.
//!
//! Node `i` receives a latent position `xi_i ~ U[0,1]` and each pair `i < j`
//! is joined independently with probability `min(rho_n * w(xi_i, xi_j), 1)`.
//! Stochastic block models are the piecewise-constant special case: the
//! latent interval is cut into consecutive pieces of width `pi_a` and the
//! block of a node is the piece containing its latent position.
//!
//! Randomness is counter based: latents come from one ChaCha stream and row
//! `i` of the upper triangle from stream `i`, so the draw for a pair never
//! depends on the order in which rows are processed.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par;

/// Symmetric kernel `w(u, v) >= 0`.
pub type KernelFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Sparsity schedule `n -> rho_n` with values in `[0, 1]`.
pub type RhoSchedule = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

const LATENT_STREAM: u64 = u64::MAX;

/// Block matrix of the default three-block model.
pub const THREE_BLOCK_B: [[f64; 3]; 3] = [[0.4, 0.1, 0.1], [0.1, 0.5, 0.1], [0.1, 0.1, 0.7]];
/// Block proportions of the default three-block model.
pub const THREE_BLOCK_PI: [f64; 3] = [0.3, 0.3, 0.4];

#[derive(Clone)]
pub enum GraphonModel {
    /// Stochastic block model; `rho_n = 1` with the sparsity inside `b`.
    Sbm { b: Vec<Vec<f64>>, pi: Vec<f64> },
    /// `P(edge) = n^exponent * |u - v|`.
    AbsDiff { exponent: f64 },
    Kernel { w: KernelFn, rho: RhoSchedule },
}

impl fmt::Debug for GraphonModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphonModel::Sbm { b, pi } => f.debug_struct("Sbm").field("b", b).field("pi", pi).finish(),
            GraphonModel::AbsDiff { exponent } => {
                f.debug_struct("AbsDiff").field("exponent", exponent).finish()
            }
            GraphonModel::Kernel { .. } => f.write_str("Kernel { .. }"),
        }
    }
}

/// Validated stochastic block model.
pub fn sbm_model(b: Vec<Vec<f64>>, pi: Vec<f64>) -> Result<GraphonModel> {
    let r = pi.len();
    if r == 0 {
        return Err(Error::Argument("SBM needs at least one block".into()));
    }
    if b.len() != r || b.iter().any(|row| row.len() != r) {
        return Err(Error::Argument(format!("B must be {r}x{r} to match pi")));
    }
    for (a, row) in b.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::Argument(format!("B[{a}][{c}] = {x} not in [0, 1]")));
            }
            if x != b[c][a] {
                return Err(Error::Argument(format!("B is not symmetric at ({a}, {c})")));
            }
        }
    }
    if pi.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
        return Err(Error::Argument("pi entries must be nonnegative".into()));
    }
    let total: f64 = pi.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::Argument(format!("pi sums to {total}, not 1")));
    }
    Ok(GraphonModel::Sbm { b, pi })
}

/// `P(edge) = n^exponent * |u - v|`, `exponent <= 0`.
pub fn absdiff_model(exponent: f64) -> Result<GraphonModel> {
    if !(exponent <= 0.0) {
        return Err(Error::Argument(format!("AbsDiff exponent {exponent} must be <= 0")));
    }
    Ok(GraphonModel::AbsDiff { exponent })
}

pub fn kernel_model<W, R>(w: W, rho: R) -> GraphonModel
where
    W: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    R: Fn(usize) -> f64 + Send + Sync + 'static,
{
    GraphonModel::Kernel {
        w: Arc::new(w),
        rho: Arc::new(rho),
    }
}

/// Kernel `w = weight` everywhere with `rho_n = rho`: an Erdős–Rényi graph
/// with edge probability `min(weight * rho, 1)`.
pub fn constant_model(weight: f64, rho: f64) -> Result<GraphonModel> {
    if !(weight >= 0.0) || !weight.is_finite() {
        return Err(Error::Argument(format!("kernel value {weight} must be finite and >= 0")));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Argument(format!("rho {rho} not in [0, 1]")));
    }
    Ok(kernel_model(move |_, _| weight, move |_| rho))
}

/// Three-block model with [`THREE_BLOCK_B`] and [`THREE_BLOCK_PI`].
pub fn three_block_sbm() -> GraphonModel {
    sbm_model(
        THREE_BLOCK_B.iter().map(|r| r.to_vec()).collect(),
        THREE_BLOCK_PI.to_vec(),
    )
    .expect("reference block model is valid")
}

/// `|u - v|` graphon with `nu_n = n^(-1/3)`.
pub fn cube_root_absdiff() -> GraphonModel {
    GraphonModel::AbsDiff { exponent: -1.0 / 3.0 }
}

impl GraphonModel {
    /// Sparsity level `rho_n` for a graph on `n` nodes.
    pub fn rho(&self, n: usize) -> f64 {
        match self {
            GraphonModel::Sbm { .. } => 1.0,
            GraphonModel::AbsDiff { exponent } => (n as f64).powf(*exponent),
            GraphonModel::Kernel { rho, .. } => rho(n),
        }
    }

    /// Block containing latent position `x` (SBM only).
    fn block_of(pi: &[f64], x: f64) -> usize {
        let mut acc = 0.0;
        for (a, &p) in pi.iter().enumerate() {
            acc += p;
            if x < acc {
                return a;
            }
        }
        pi.len() - 1
    }
}

#[derive(Debug, Clone)]
pub struct SampledGraph {
    pub graph: Graph,
    /// Latent positions; for block models a point inside the block's interval.
    pub latents: Vec<f64>,
    pub rho: f64,
    pub seed: u64,
}

/// Draws a graph of size `n`; a pure function of `(model, n, seed)`.
pub fn sample_graph(model: &GraphonModel, n: usize, seed: u64) -> Result<SampledGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(LATENT_STREAM);
    let latents: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    sample_with_latents(model, latents, seed)
}

/// Draws edges for fixed latent positions.
pub fn sample_with_latents(model: &GraphonModel, latents: Vec<f64>, seed: u64) -> Result<SampledGraph> {
    let n = latents.len();
    if n == 0 {
        return Err(Error::Argument("graph size must be at least 1".into()));
    }
    if latents.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::Argument("latent positions must lie in [0, 1]".into()));
    }
    let rho = model.rho(n);
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Argument(format!("rho_n = {rho} not in [0, 1]")));
    }

    let rows: Vec<Result<Vec<usize>>> = match model {
        GraphonModel::Sbm { b, pi } => {
            let blocks: Vec<usize> = latents.iter().map(|&x| GraphonModel::block_of(pi, x)).collect();
            draw_rows(n, seed, |i, j| Ok(b[blocks[i]][blocks[j]]))
        }
        GraphonModel::AbsDiff { .. } => draw_rows(n, seed, |i, j| Ok(rho * (latents[i] - latents[j]).abs())),
        GraphonModel::Kernel { w, .. } => draw_rows(n, seed, |i, j| {
            let v = w(latents[i], latents[j]);
            if !(v >= 0.0) {
                return Err(Error::Argument(format!("kernel returned {v} at a latent pair")));
            }
            Ok(rho * v)
        }),
    };

    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, row) in rows.into_iter().enumerate() {
        for j in row? {
            lists[i].push(j);
            lists[j].push(i);
        }
    }
    // rows are visited in increasing i, so each list is already sorted
    Ok(SampledGraph {
        graph: Graph::from_sorted_lists(lists),
        latents,
        rho,
        seed,
    })
}

/// Upper-triangle neighbors `j > i` of every row `i`, with edge probability
/// `prob(i, j)` clipped to `[0, 1]`.
fn draw_rows<P>(n: usize, seed: u64, prob: P) -> Vec<Result<Vec<usize>>>
where
    P: Fn(usize, usize) -> Result<f64> + Sync + Send,
{
    par::map_range(n, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let mut row = Vec::new();
        for j in i + 1..n {
            let p = prob(i, j)?.min(1.0);
            // eta in [0, 1): p = 0 never fires, p = 1 always does
            if rng.gen::<f64>() < p {
                row.push(j);
            }
        }
        Ok(row)
    })
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for replicate `index` of a run started from `master`.
///
/// The map is `mix(master + mix(index * GOLDEN))` with a bijective mixer, so
/// for fixed `index` distinct masters never collide and for fixed `master`
/// distinct indices never collide.
pub fn replicate_seed(master: u64, index: u64) -> u64 {
    const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
    mix64(master.wrapping_add(mix64(index.wrapping_mul(GOLDEN))))
}
