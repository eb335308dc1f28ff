//! Shortest paths, spanning trees and centrality.

pub mod centrality;
pub mod mst;
pub mod paths;

pub use centrality::{
    betweenness_centrality, compute_centrality, degree_centrality, eigenvector_centrality, katz_centrality,
    spectral_radius, CentralityError, CentralityOptions, CentralityParams, CentralityScores, EdgeWeights, Metric,
};
pub use mst::{kruskal, minimum_spanning_tree, DisjointSet, SpanningForest};
pub use paths::{dijkstra, shortest_path, Path, PathError, ShortestPaths};
