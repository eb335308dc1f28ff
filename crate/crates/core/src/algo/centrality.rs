//! Degree, betweenness, eigenvector and Katz centrality.
//!
//! Betweenness reads edge weights (or unit weights on request). The other
//! three metrics read only the unweighted adjacency structure.

use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::paths::HeapItem;
use crate::graph::SurfaceGraph;

/// Relative tolerance under which two path lengths count as equal in the
/// betweenness accumulation.
pub const TIE_EPS: f64 = 1e-10;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;
/// Default Katz alpha as a fraction of `1 / spectral radius`.
pub const DEFAULT_KATZ_FRACTION: f64 = 0.9;

#[derive(Debug, Error, PartialEq)]
pub enum CentralityError {
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("{metric} iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { metric: Metric, iterations: usize, residual: f64 },
    #[error("katz alpha {alpha} must be below 1/lambda_max = {limit}")]
    AlphaTooLarge { alpha: f64, limit: f64 },
    #[error("katz alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Degree,
    Betweenness,
    Eigenvector,
    Katz,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Degree, Metric::Betweenness, Metric::Eigenvector, Metric::Katz];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Degree => "degree",
            Metric::Betweenness => "betweenness",
            Metric::Eigenvector => "eigenvector",
            Metric::Katz => "katz",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown metric '{s}' (expected degree, betweenness, eigenvector or katz)"))
    }
}

/// Edge weights used by betweenness.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeWeights {
    #[default]
    Euclidean,
    Unit,
}

impl FromStr for EdgeWeights {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euclidean" => Ok(EdgeWeights::Euclidean),
            "unit" => Ok(EdgeWeights::Unit),
            _ => Err(format!("unknown edge weighting '{s}' (expected euclidean or unit)")),
        }
    }
}

impl fmt::Display for EdgeWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeWeights::Euclidean => "euclidean",
            EdgeWeights::Unit => "unit",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralityParams {
    /// Katz attenuation actually used.
    pub alpha: Option<f64>,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Iterations performed (0 for the closed-form metrics).
    pub iterations: usize,
    pub weights: EdgeWeights,
}

impl Default for CentralityParams {
    fn default() -> Self {
        CentralityParams {
            alpha: None,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            iterations: 0,
            weights: EdgeWeights::Euclidean,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralityScores {
    pub metric: Metric,
    pub values: Vec<f64>,
    pub params: CentralityParams,
}

/// Knobs for [`compute_centrality`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CentralityOptions {
    pub weights: EdgeWeights,
    /// `None` picks `0.9 / lambda_max`.
    pub katz_alpha: Option<f64>,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for CentralityOptions {
    fn default() -> Self {
        CentralityOptions {
            weights: EdgeWeights::Euclidean,
            katz_alpha: None,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

pub fn compute_centrality(
    g: &SurfaceGraph,
    metric: Metric,
    opts: &CentralityOptions,
) -> Result<CentralityScores, CentralityError> {
    match metric {
        Metric::Degree => Ok(degree_centrality(g)),
        Metric::Betweenness => Ok(betweenness_centrality(g, opts.weights)),
        Metric::Eigenvector => eigenvector_centrality_with(g, opts.tolerance, opts.max_iterations),
        Metric::Katz => {
            let alpha = match opts.katz_alpha {
                Some(a) => a,
                None => default_katz_alpha(g, opts.tolerance, opts.max_iterations),
            };
            katz_centrality_with(g, alpha, opts.tolerance, opts.max_iterations)
        }
    }
}

pub fn degree_centrality(g: &SurfaceGraph) -> CentralityScores {
    CentralityScores {
        metric: Metric::Degree,
        values: (0..g.node_count()).map(|v| g.degree(v) as f64).collect(),
        params: CentralityParams::default(),
    }
}

fn ties(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_EPS * a.abs().max(b.abs()).max(1.0)
}

/// Exact betweenness over unordered pairs (Brandes, Dijkstra inner loop).
pub fn betweenness_centrality(g: &SurfaceGraph, weights: EdgeWeights) -> CentralityScores {
    let n = g.node_count();
    let weight = |e: usize| match weights {
        EdgeWeights::Euclidean => g.edges()[e].weight,
        EdgeWeights::Unit => 1.0,
    };
    let mut bc = vec![0.0; n];
    let mut dist = vec![f64::INFINITY; n];
    let mut sigma = vec![0.0f64; n];
    let mut delta = vec![0.0f64; n];
    let mut settled = vec![false; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut heap = BinaryHeap::new();

    for s in 0..n {
        for v in order.drain(..) {
            dist[v] = f64::INFINITY;
            sigma[v] = 0.0;
            delta[v] = 0.0;
            settled[v] = false;
            preds[v].clear();
        }
        dist[s] = 0.0;
        sigma[s] = 1.0;
        heap.push(HeapItem { dist: 0.0, node: s });
        while let Some(HeapItem { dist: d, node: v }) = heap.pop() {
            if settled[v] || d > dist[v] {
                continue;
            }
            settled[v] = true;
            order.push(v);
            for &(w, e) in g.neighbors(v) {
                if settled[w] {
                    continue;
                }
                let nd = d + weight(e);
                if dist[w].is_infinite() || (nd < dist[w] && !ties(nd, dist[w])) {
                    dist[w] = nd;
                    sigma[w] = sigma[v];
                    preds[w].clear();
                    preds[w].push(v);
                    heap.push(HeapItem { dist: nd, node: w });
                } else if ties(nd, dist[w]) {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        for &w in order.iter().rev() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                bc[w] += delta[w];
            }
        }
    }
    for v in &mut bc {
        *v /= 2.0;
    }
    CentralityScores {
        metric: Metric::Betweenness,
        values: bc,
        params: CentralityParams { weights, ..CentralityParams::default() },
    }
}

fn adjacency_product(g: &SurfaceGraph, x: &[f64], out: &mut [f64]) {
    for (v, o) in out.iter_mut().enumerate() {
        *o = g.neighbors(v).iter().map(|&(w, _)| x[w]).sum();
    }
}

fn max_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn eigenvector_centrality(g: &SurfaceGraph) -> Result<CentralityScores, CentralityError> {
    eigenvector_centrality_with(g, DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS)
}

/// Principal eigenvector of the adjacency matrix, max-norm 1.
///
/// Iterates on `A + I`, which has the same eigenvectors but a strictly
/// dominant Perron root, so bipartite graphs converge too.
pub fn eigenvector_centrality_with(
    g: &SurfaceGraph,
    tolerance: f64,
    max_iterations: usize,
) -> Result<CentralityScores, CentralityError> {
    let n = g.node_count();
    if n == 0 || g.edge_count() == 0 {
        return Err(CentralityError::EmptyGraph);
    }
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iterations {
        adjacency_product(g, &x, &mut y);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += xi;
        }
        let m = max_norm(&y);
        residual = 0.0;
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi /= m;
            residual = f64::max(residual, (*yi - xi).abs());
        }
        std::mem::swap(&mut x, &mut y);
        if residual < tolerance {
            return Ok(CentralityScores {
                metric: Metric::Eigenvector,
                values: x,
                params: CentralityParams { tolerance, max_iterations, iterations: it, ..CentralityParams::default() },
            });
        }
    }
    Err(CentralityError::NoConvergence { metric: Metric::Eigenvector, iterations: max_iterations, residual })
}

/// Largest adjacency eigenvalue, by power iteration on `A + I` and a
/// Rayleigh quotient. Returns 0 for a graph with no edges.
pub fn spectral_radius(g: &SurfaceGraph, tolerance: f64, max_iterations: usize) -> f64 {
    let n = g.node_count();
    if g.edge_count() == 0 {
        return 0.0;
    }
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    for _ in 0..max_iterations {
        adjacency_product(g, &x, &mut y);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += xi;
        }
        let m = max_norm(&y);
        let mut residual: f64 = 0.0;
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi /= m;
            residual = residual.max((*yi - xi).abs());
        }
        std::mem::swap(&mut x, &mut y);
        if residual < tolerance {
            break;
        }
    }
    adjacency_product(g, &x, &mut y);
    let num: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
    let den: f64 = x.iter().map(|a| a * a).sum();
    num / den
}

pub fn default_katz_alpha(g: &SurfaceGraph, tolerance: f64, max_iterations: usize) -> f64 {
    let lambda = spectral_radius(g, tolerance, max_iterations);
    if lambda > 0.0 {
        DEFAULT_KATZ_FRACTION / lambda
    } else {
        DEFAULT_KATZ_FRACTION
    }
}

pub fn katz_centrality(g: &SurfaceGraph, alpha: f64) -> Result<CentralityScores, CentralityError> {
    katz_centrality_with(g, alpha, DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS)
}

/// `x = sum_{i>=1} alpha^i A^i 1`, evaluated as `x <- alpha A (1 + x)`.
///
/// Stops once the geometric tail bound on the remaining terms is below
/// `tolerance`.
pub fn katz_centrality_with(
    g: &SurfaceGraph,
    alpha: f64,
    tolerance: f64,
    max_iterations: usize,
) -> Result<CentralityScores, CentralityError> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(CentralityError::InvalidAlpha(alpha));
    }
    let lambda = spectral_radius(g, tolerance, max_iterations);
    if lambda > 0.0 && alpha * lambda >= 1.0 {
        return Err(CentralityError::AlphaTooLarge { alpha, limit: 1.0 / lambda });
    }
    let ratio = alpha * lambda;
    let n = g.node_count();
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut shifted = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iterations {
        for (s, xi) in shifted.iter_mut().zip(&x) {
            *s = 1.0 + xi;
        }
        adjacency_product(g, &shifted, &mut y);
        residual = 0.0;
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi *= alpha;
            residual = f64::max(residual, (*yi - xi).abs());
        }
        std::mem::swap(&mut x, &mut y);
        let tail = if ratio > 0.0 { residual * ratio / (1.0 - ratio) } else { residual };
        if tail < tolerance || residual == 0.0 {
            return Ok(CentralityScores {
                metric: Metric::Katz,
                values: x,
                params: CentralityParams {
                    alpha: Some(alpha),
                    tolerance,
                    max_iterations,
                    iterations: it,
                    ..CentralityParams::default()
                },
            });
        }
    }
    Err(CentralityError::NoConvergence { metric: Metric::Katz, iterations: max_iterations, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{cycle_graph, path_graph, star_graph, weighted_graph};

    #[test]
    fn degree_of_star() {
        let d = degree_centrality(&star_graph(3)).values;
        assert_eq!(d, vec![3.0, 1.0, 1.0, 1.0]);
        let empty = weighted_graph(3, &[]);
        assert_eq!(degree_centrality(&empty).values, vec![0.0; 3]);
    }

    #[test]
    fn betweenness_small_cases() {
        let p = betweenness_centrality(&path_graph(3), EdgeWeights::Euclidean).values;
        assert_eq!(p, vec![0.0, 1.0, 0.0]);
        let s = betweenness_centrality(&star_graph(3), EdgeWeights::Euclidean).values;
        assert_eq!(s, vec![3.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn betweenness_splits_credit_on_ties() {
        // 4-cycle: opposite pairs have two equal paths
        let c = betweenness_centrality(&cycle_graph(4), EdgeWeights::Euclidean).values;
        for v in c {
            assert!((v - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_weights_ignore_lengths() {
        // triangle where the direct edge 0-2 is long
        let g = weighted_graph(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)]);
        assert_eq!(betweenness_centrality(&g, EdgeWeights::Euclidean).values[1], 1.0);
        assert_eq!(betweenness_centrality(&g, EdgeWeights::Unit).values[1], 0.0);
    }

    #[test]
    fn eigenvector_symmetry_and_dominance() {
        let c = eigenvector_centrality(&cycle_graph(4)).unwrap().values;
        for v in &c {
            assert!((v - 1.0).abs() < 1e-9);
        }
        let s = eigenvector_centrality(&star_graph(3)).unwrap().values;
        assert!((s[0] - 1.0).abs() < 1e-9);
        assert!(s[1..].iter().all(|&v| v < s[0]));
        assert_eq!(eigenvector_centrality(&weighted_graph(2, &[])), Err(CentralityError::EmptyGraph));
    }

    #[test]
    fn katz_on_single_edge() {
        let g = weighted_graph(2, &[(0, 1, 1.0)]);
        let k = katz_centrality(&g, 0.5).unwrap().values;
        for v in k {
            assert!((v - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn katz_rejects_bad_alpha() {
        let g = weighted_graph(2, &[(0, 1, 1.0)]);
        assert!(matches!(katz_centrality(&g, 1.0), Err(CentralityError::AlphaTooLarge { .. })));
        assert!(matches!(katz_centrality(&g, 0.0), Err(CentralityError::InvalidAlpha(_))));
        let empty = weighted_graph(3, &[]);
        assert_eq!(katz_centrality(&empty, 0.3).unwrap().values, vec![0.0; 3]);
    }

    #[test]
    fn spectral_radius_of_known_graphs() {
        assert!((spectral_radius(&star_graph(4), 1e-12, 10_000) - 2.0).abs() < 1e-9);
        assert!((spectral_radius(&cycle_graph(5), 1e-12, 10_000) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn metric_names_round_trip() {
        for m in Metric::ALL {
            assert_eq!(m.to_string().parse::<Metric>().unwrap(), m);
        }
        assert!("closeness".parse::<Metric>().is_err());
    }
}
