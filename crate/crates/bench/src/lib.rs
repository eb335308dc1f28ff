//! Shared inputs for the criterion benches.

use navtree_core::pipeline::{Inputs, PipelineConfig};
use navtree_core::{fixtures, SelectionMethod};

pub struct Level {
    pub name: &'static str,
    pub config: PipelineConfig,
    pub inputs: Inputs,
}

pub fn levels() -> Vec<Level> {
    let comb = fixtures::comb_cells();
    vec![
        Level {
            name: "corridor",
            config: PipelineConfig { experiment: "corridor".into(), ..PipelineConfig::default() },
            inputs: Inputs::from_surface(
                fixtures::surface(fixtures::corridor_raw()),
                Some(fixtures::blockers(fixtures::corridor_blockers_raw())),
            ),
        },
        Level {
            name: "hub",
            config: PipelineConfig { experiment: "hub".into(), ..PipelineConfig::default() },
            inputs: Inputs::from_surface(
                fixtures::surface(fixtures::hub_raw()),
                Some(fixtures::blockers(fixtures::hub_blockers_raw())),
            ),
        },
        Level {
            name: "comb",
            config: PipelineConfig {
                experiment: "comb".into(),
                terminals: SelectionMethod::LeafNodes,
                ..PipelineConfig::default()
            },
            inputs: Inputs::from_graph(
                fixtures::cell_graph(&comb),
                Some(fixtures::blockers(fixtures::cell_walls(&comb, fixtures::WALL_GAP))),
            ),
        },
    ]
}
