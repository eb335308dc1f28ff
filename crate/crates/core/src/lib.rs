//! Tree structures extracted from walkable surfaces.
//!
//! A surface (or a pre-built graph) becomes a search graph; a set of
//! terminal nodes is joined by an approximate Steiner tree, which is rooted
//! at its most central node and then collapsed wherever line of sight
//! allows. [`pipeline::run_extract`] runs the whole chain.

pub mod algo;
pub mod analysis;
pub mod export;
pub mod fixtures;
pub mod geom;
pub mod graph;
pub mod mesh;
pub mod oracle;
pub mod pipeline;
pub mod steiner;
pub mod terminals;
pub mod tree;

pub use algo::centrality::{CentralityOptions, CentralityScores, EdgeWeights, Metric};
pub use analysis::{AnalysisReport, Stage, StageReport};
pub use export::ExportFormat;
pub use geom::Vec3;
pub use graph::{NodeSource, SurfaceGraph};
pub use mesh::{BlockerMesh, RawMesh, SurfaceConfig, WalkableSurface};
pub use pipeline::{run_extract, run_with_inputs, Extraction, Inputs, Mode, PipelineConfig, PipelineError};
pub use steiner::{build_steiner_tree, SteinerTree};
pub use terminals::{SelectionMethod, TerminalSet};
pub use tree::{RootedTree, SimplifyConfig};
