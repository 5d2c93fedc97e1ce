//! Failure simulator for three-layer service networks.
//!
//! A shared vertex set carries three graphs: a sparse ER bottom layer (L1)
//! gated to have a gaussian-like hop-count profile, a denser ER middle layer
//! (L2) whose edges require L1 connectivity between their endpoints, and a
//! scale-free top layer (L3) riding on L2 the same way. Edges or nodes of L1
//! fail in descending betweenness-centrality order, either as one static
//! batch ranked once or one at a time with re-ranking, and the simulator
//! records average shortest path length, total shortest path count, and
//! total edge count per layer at every step.
//!
//! Everything is seeded: identical configuration yields byte-identical
//! output, with or without the `parallel` feature (rayon fan-out with a
//! fixed-order reduction).

pub mod calibrate;
pub mod centrality;
pub mod exec;
pub mod fixtures;
pub mod gen;
pub mod graph;
pub mod layers;
pub mod report;
pub mod scenario;
pub mod seed;

pub use centrality::{edge_betweenness, node_betweenness, CentralityMap, EdgeCentralityMap};
pub use gen::{gen_er_min_degree, gen_scale_free, GenerationError};
pub use graph::{Graph, GraphError, HopHistogram, SsspResult};
pub use layers::{Layer, LayeredNetwork, MlcnConfig, MlcnConfigError};
pub use report::{build_report, chaos_index, emit, normalize, OutputFormat, ReportError, RunReport};
pub use scenario::{
    run_replicate, run_replicate_with, run_scenario, MetricsRecord, MetricsSeries, Mode, RunError,
    ScenarioConfig, ScenarioConfigError,
};
