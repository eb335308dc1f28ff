//! Brute-force references for small inputs. Slow on purpose: each one
//! recomputes a result from its definition instead of reusing the fast
//! algorithms.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::Serialize;

use crate::algo::centrality::{
    betweenness_centrality, default_katz_alpha, eigenvector_centrality, katz_centrality_with, EdgeWeights,
    DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE,
};
use crate::algo::mst::minimum_spanning_tree;
use crate::analysis::density_classes;
use crate::fixtures;
use crate::graph::SurfaceGraph;
use crate::steiner::build_steiner_tree;

const PATH_EPS: f64 = 1e-10;

fn weight_of(g: &SurfaceGraph, e: usize, weights: EdgeWeights) -> f64 {
    match weights {
        EdgeWeights::Euclidean => g.edges()[e].weight,
        EdgeWeights::Unit => 1.0,
    }
}

/// All-pairs distances; `INFINITY` between components.
pub fn floyd_warshall(g: &SurfaceGraph, weights: EdgeWeights) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for (i, e) in g.edges().iter().enumerate() {
        let w = weight_of(g, i, weights);
        d[e.a][e.b] = d[e.a][e.b].min(w);
        d[e.b][e.a] = d[e.b][e.a].min(w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= PATH_EPS * a.abs().max(b.abs()).max(1.0)
}

/// Every shortest `s`–`t` path, as node lists.
pub fn all_shortest_paths(
    g: &SurfaceGraph,
    d: &[Vec<f64>],
    s: usize,
    t: usize,
    weights: EdgeWeights,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if d[s][t].is_infinite() {
        return out;
    }
    let mut path = vec![s];
    fn walk(
        g: &SurfaceGraph,
        d: &[Vec<f64>],
        t: usize,
        weights: EdgeWeights,
        path: &mut Vec<usize>,
        so_far: f64,
        out: &mut Vec<Vec<usize>>,
    ) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        let s = path[0];
        for &(w, e) in g.neighbors(v) {
            let len = so_far + weight_of(g, e, weights);
            if path.contains(&w) || !same(len + d[w][t], d[s][t]) {
                continue;
            }
            path.push(w);
            walk(g, d, t, weights, path, len, out);
            path.pop();
        }
    }
    walk(g, d, t, weights, &mut path, 0.0, &mut out);
    out
}

/// Betweenness from explicit path enumeration over unordered pairs.
pub fn betweenness_by_enumeration(g: &SurfaceGraph, weights: EdgeWeights) -> Vec<f64> {
    let n = g.node_count();
    let d = floyd_warshall(g, weights);
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let paths = all_shortest_paths(g, &d, s, t, weights);
            if paths.is_empty() {
                continue;
            }
            let share = 1.0 / paths.len() as f64;
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    bc[v] += share;
                }
            }
        }
    }
    bc
}

pub fn adjacency_matrix(g: &SurfaceGraph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut a = DMatrix::zeros(n, n);
    for e in g.edges() {
        a[(e.a, e.b)] = 1.0;
        a[(e.b, e.a)] = 1.0;
    }
    a
}

/// Principal eigenvector from a dense symmetric eigen-decomposition,
/// sign-fixed and scaled to max-norm 1, with its eigenvalue.
pub fn principal_eigenvector(g: &SurfaceGraph) -> (f64, Vec<f64>) {
    let eig = SymmetricEigen::new(adjacency_matrix(g));
    let (k, &lambda) = eig.eigenvalues.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty graph");
    let v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
    let m = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    (lambda, v.iter().map(|x| x.abs() / m).collect())
}

/// `sum_{i=1..} alpha^i A^i 1`, summed with dense matrix powers until the
/// next term is negligible.
pub fn katz_series(g: &SurfaceGraph, alpha: f64) -> Vec<f64> {
    let n = g.node_count();
    let a = adjacency_matrix(g);
    let mut term = nalgebra::DVector::from_element(n, 1.0);
    let mut sum = nalgebra::DVector::zeros(n);
    for _ in 0..100_000 {
        term = (&a * &term) * alpha;
        sum += &term;
        if term.amax() < 1e-14 * sum.amax().max(1.0) {
            break;
        }
    }
    sum.iter().copied().collect()
}

/// Weight of a minimum spanning tree of the subgraph induced by `keep`, or
/// `None` when it is disconnected. Prim on a dense matrix.
fn induced_mst(g: &SurfaceGraph, keep: &[usize]) -> Option<(f64, Vec<(usize, usize)>)> {
    let m = keep.len();
    let w = |i: usize, j: usize| g.edge_between(keep[i], keep[j]).map(|e| e.weight);
    let mut in_tree = vec![false; m];
    let mut best = vec![f64::INFINITY; m];
    let mut link = vec![usize::MAX; m];
    best[0] = 0.0;
    let mut total = 0.0;
    let mut edges = Vec::new();
    for _ in 0..m {
        let u = (0..m).filter(|&i| !in_tree[i]).min_by(|&a, &b| best[a].total_cmp(&best[b]))?;
        if best[u].is_infinite() {
            return None;
        }
        in_tree[u] = true;
        total += best[u];
        if link[u] != usize::MAX {
            edges.push((keep[link[u]], keep[u]));
        }
        for v in 0..m {
            if let (false, Some(x)) = (in_tree[v], w(u, v)) {
                if x < best[v] {
                    best[v] = x;
                    link[v] = u;
                }
            }
        }
    }
    Some((total, edges))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactSteiner {
    pub weight: f64,
    /// Largest leaf count among the optimal trees found.
    pub leaves: usize,
    pub nodes: Vec<usize>,
}

/// Optimal Steiner tree by trying every subset of non-terminal nodes.
/// `None` when the terminals are not connected.
pub fn exact_steiner(g: &SurfaceGraph, terminals: &[usize]) -> Option<ExactSteiner> {
    let mut t = terminals.to_vec();
    t.sort_unstable();
    t.dedup();
    let others: Vec<usize> = (0..g.node_count()).filter(|v| t.binary_search(v).is_err()).collect();
    assert!(others.len() <= 20, "exhaustive search is limited to 20 optional nodes");
    let mut best: Option<ExactSteiner> = None;
    for mask in 0u32..(1 << others.len()) {
        let mut keep = t.clone();
        keep.extend(others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v));
        keep.sort_unstable();
        let Some((weight, edges)) = induced_mst(g, &keep) else {
            continue;
        };
        let mut deg = vec![0usize; g.node_count()];
        for &(a, b) in &edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        let leaves = keep.iter().filter(|&&v| deg[v] <= 1).count();
        let candidate = ExactSteiner { weight, leaves, nodes: keep };
        best = match best {
            None => Some(candidate),
            Some(b) if same(candidate.weight, b.weight) => {
                if candidate.leaves > b.leaves {
                    Some(candidate)
                } else {
                    Some(b)
                }
            }
            Some(b) if candidate.weight < b.weight => Some(candidate),
            keep_b => keep_b,
        };
    }
    best
}

/// Minimum spanning forest weight by trying every subset of
/// `n - components` edges. Small graphs only.
pub fn spanning_forest_brute(g: &SurfaceGraph) -> f64 {
    let n = g.node_count();
    let m = g.edge_count();
    assert!(m <= 24, "edge subsets are enumerated exhaustively");
    let target = n - g.component_count();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != target {
            continue;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let mut acyclic = true;
        let mut total = 0.0;
        for (i, e) in g.edges().iter().enumerate() {
            if mask >> i & 1 == 0 {
                continue;
            }
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
            if ra == rb {
                acyclic = false;
                break;
            }
            parent[ra] = rb;
            total += e.weight;
        }
        if acyclic {
            best = best.min(total);
        }
    }
    if target == 0 {
        0.0
    } else {
        best
    }
}

/// Density class from the first rank at which each value appears:
/// the number of cuts `floor(k n / buckets)` at or below that rank.
pub fn density_by_rank(values: &[f64], buckets: usize) -> Vec<usize> {
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    values
        .iter()
        .map(|&v| {
            let first = sorted.iter().position(|&x| x == v).unwrap();
            (1..buckets).filter(|&k| k * n / buckets >= 1 && k * n / buckets <= first).count()
        })
        .collect()
}

/// Result of one verification suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// First failure, if any.
    pub detail: Option<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn suite(name: &'static str, cases: usize, mut check: impl FnMut(usize) -> Result<(), String>) -> SuiteOutcome {
    let mut failures = 0;
    let mut detail = None;
    for i in 0..cases {
        if let Err(e) = check(i) {
            failures += 1;
            detail.get_or_insert(format!("case {i}: {e}"));
        }
    }
    SuiteOutcome { name, cases, failures, detail }
}

/// Runs every brute-force comparison on seeded random graphs and the
/// bundled fixtures.
pub fn run_suites(seed: u64, cases: usize) -> Vec<SuiteOutcome> {
    let mut out = Vec::new();
    let mut r = fixtures::rng(seed);
    out.push(suite("steiner-2opt", cases, |_| {
        let n = r.random_range(4..=12);
        let p = r.random_range(0.4..=0.8);
        let g = fixtures::random_connected_graph(&mut r, n, p);
        let k = r.random_range(2..=4usize).min(n);
        let terms: Vec<usize> = rand::seq::index::sample(&mut r, n, k).into_iter().collect();
        let approx = build_steiner_tree(&g, &terms).map_err(|e| e.to_string())?;
        let opt = exact_steiner(&g, &terms).ok_or("oracle found no tree")?;
        if approx.total_weight > 2.0 * opt.weight * (1.0 + 1e-12) {
            return Err(format!("{} > 2 * {}", approx.total_weight, opt.weight));
        }
        Ok(())
    }));
    let mut r = fixtures::rng(seed ^ 1);
    out.push(suite("betweenness", cases, |i| {
        let n = r.random_range(3..=30);
        let g = fixtures::random_connected_graph(&mut r, n, (4.0 / n as f64).clamp(0.15, 0.7));
        let w = if i % 2 == 0 { EdgeWeights::Euclidean } else { EdgeWeights::Unit };
        let fast = betweenness_centrality(&g, w).values;
        let slow = betweenness_by_enumeration(&g, w);
        match fast.iter().zip(&slow).position(|(a, b)| (a - b).abs() > 1e-9) {
            Some(v) => Err(format!("node {v}: {} vs {}", fast[v], slow[v])),
            None => Ok(()),
        }
    }));
    let mut r = fixtures::rng(seed ^ 2);
    out.push(suite("eigenvector", cases, |_| {
        let n = r.random_range(3..=20);
        let p = r.random_range(0.2..0.7);
        let g = fixtures::random_connected_graph(&mut r, n, p);
        let ev = eigenvector_centrality(&g).map_err(|e| e.to_string())?.values;
        let (_, want) = principal_eigenvector(&g);
        let err = ev.iter().zip(&want).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if err > 1e-6 {
            Err(format!("max error {err:e}"))
        } else {
            Ok(())
        }
    }));
    let mut r = fixtures::rng(seed ^ 3);
    out.push(suite("katz", cases, |_| {
        let n = r.random_range(3..=20);
        let p = r.random_range(0.2..0.7);
        let g = fixtures::random_connected_graph(&mut r, n, p);
        let alpha = default_katz_alpha(&g, DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS);
        let kz = katz_centrality_with(&g, alpha, 1e-12, 100_000).map_err(|e| e.to_string())?.values;
        let want = katz_series(&g, alpha);
        let err = kz.iter().zip(&want).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if err > 1e-6 {
            Err(format!("max error {err:e}"))
        } else {
            Ok(())
        }
    }));
    let mut r = fixtures::rng(seed ^ 4);
    out.push(suite("mst", cases, |_| {
        let n = r.random_range(2..=7);
        let g = fixtures::random_connected_graph(&mut r, n, 0.5);
        if g.edge_count() > 16 {
            return Ok(());
        }
        let fast = minimum_spanning_tree(&g).total_weight;
        let slow = spanning_forest_brute(&g);
        if (fast - slow).abs() > 1e-12 {
            Err(format!("{fast} vs {slow}"))
        } else {
            Ok(())
        }
    }));
    let mut r = fixtures::rng(seed ^ 5);
    out.push(suite("density", cases, |_| {
        let n = r.random_range(1..=40);
        let values: Vec<f64> = (0..n).map(|_| r.random_range(0..6) as f64).collect();
        let buckets = r.random_range(1..=5);
        let fast = density_classes(&values, buckets).class_of;
        if fast != density_by_rank(&values, buckets) {
            Err("class mismatch".into())
        } else {
            Ok(())
        }
    }));
    let level_cases: [(&str, crate::mesh::RawMesh); 4] = [
        ("corridor", fixtures::corridor_raw()),
        ("hub", fixtures::hub_raw()),
        ("l-corridor", fixtures::l_corridor_raw()),
        ("ramp", fixtures::ramp_raw()),
    ];
    out.push(suite("fixture-betweenness", level_cases.len(), |i| {
        let s = fixtures::surface(level_cases[i].1.clone());
        let g = crate::graph::graph_from_navmesh(&s).map_err(|e| e.to_string())?;
        let fast = betweenness_centrality(&g, EdgeWeights::Euclidean).values;
        let slow = betweenness_by_enumeration(&g, EdgeWeights::Euclidean);
        match fast.iter().zip(&slow).position(|(a, b)| (a - b).abs() > 1e-9) {
            Some(v) => Err(format!("{}: node {v}", level_cases[i].0)),
            None => Ok(()),
        }
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{path_graph, star_graph, weighted_graph};

    #[test]
    fn path_betweenness() {
        assert_eq!(betweenness_by_enumeration(&path_graph(4), EdgeWeights::Unit), vec![0.0, 2.0, 2.0, 0.0]);
    }

    #[test]
    fn square_splits_paths() {
        let g = weighted_graph(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]);
        assert_eq!(betweenness_by_enumeration(&g, EdgeWeights::Euclidean), vec![0.5; 4]);
    }

    #[test]
    fn star_eigenvector() {
        let (lambda, v) = principal_eigenvector(&star_graph(4));
        assert!((lambda - 2.0).abs() < 1e-12);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn steiner_on_a_triangle_with_centre() {
        // terminals 0,1,2 pairwise 1.0 apart; hub 3 at 0.6 from each
        let g = weighted_graph(4, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (0, 3, 0.6), (1, 3, 0.6), (2, 3, 0.6)]);
        let opt = exact_steiner(&g, &[0, 1, 2]).unwrap();
        assert!((opt.weight - 1.8).abs() < 1e-12);
        assert_eq!(opt.leaves, 3);
        assert!((spanning_forest_brute(&g) - 1.8).abs() < 1e-12);
    }

    #[test]
    fn suites_pass() {
        for s in run_suites(3, 10) {
            assert!(s.passed(), "{}: {:?}", s.name, s.detail);
        }
    }

    #[test]
    fn rank_classes() {
        assert_eq!(density_by_rank(&[0.0, 1.0, 2.0], 3), vec![0, 1, 2]);
        assert_eq!(density_by_rank(&[5.0; 4], 3), vec![0; 4]);
    }
}
