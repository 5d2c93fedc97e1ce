//! The four failure scenarios: edges or nodes of L1 failing in descending
//! betweenness order, ranked once (static batch) or re-ranked after every
//! removal (dynamic).
//!
//! Static runs rebuild the whole network per sweep value K, so their curves
//! carry fresh-draw noise; dynamic runs keep L1 for the life of the
//! replicate and redraw L2/L3 after every step. Each record holds ASPL,
//! TSPC, and TNE for all three layers after the failures of that step.

use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

use crate::centrality::{edge_betweenness, node_betweenness};
use crate::exec;
use crate::gen::GenerationError;
use crate::graph::Graph;
use crate::layers::{
    build_l2, build_l3, build_network, Layer, LayerSeeds, LayeredNetwork, MlcnConfig,
    MlcnConfigError, NodeRemoval,
};
use crate::seed::child_seed;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Failure ordering regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Static edge betweenness: top-K L1 edges fail as one batch.
    Sebc,
    /// Dynamic edge betweenness: the current top L1 edge fails each step.
    Debc,
    /// Static node betweenness: top-K L1 nodes fail as one batch.
    Snbc,
    /// Dynamic node betweenness: the current top L1 node fails each step.
    Dnbc,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Sebc, Mode::Debc, Mode::Snbc, Mode::Dnbc];

    pub fn is_static(self) -> bool {
        matches!(self, Mode::Sebc | Mode::Snbc)
    }

    pub fn is_node_mode(self) -> bool {
        matches!(self, Mode::Snbc | Mode::Dnbc)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Sebc => "sebc",
            Mode::Debc => "debc",
            Mode::Snbc => "snbc",
            Mode::Dnbc => "dnbc",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sebc" => Ok(Mode::Sebc),
            "debc" => Ok(Mode::Debc),
            "snbc" => Ok(Mode::Snbc),
            "dnbc" => Ok(Mode::Dnbc),
            other => Err(format!(
                "unknown mode {other:?} (expected sebc, debc, snbc or dnbc)"
            )),
        }
    }
}

/// Everything one run needs: construction parameters, failure mode and
/// count, master seed, and replicate count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub mlcn: MlcnConfig,
    pub mode: Mode,
    /// Number of edges (edge modes) or nodes (node modes) to fail.
    pub failures: usize,
    pub seed: u64,
    pub replicates: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioConfigError {
    #[error(transparent)]
    Mlcn(#[from] MlcnConfigError),
    #[error("failures must be at least 1")]
    NoFailures,
    #[error("node modes require failures < n, got failures={failures}, n={n}")]
    TooManyNodeFailures { failures: usize, n: usize },
    #[error("replicates must be at least 1")]
    NoReplicates,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ScenarioConfigError> {
        self.mlcn.validate()?;
        if self.failures < 1 {
            return Err(ScenarioConfigError::NoFailures);
        }
        if self.mode.is_node_mode() && self.failures >= self.mlcn.n {
            return Err(ScenarioConfigError::TooManyNodeFailures {
                failures: self.failures,
                n: self.mlcn.n,
            });
        }
        if self.replicates < 1 {
            return Err(ScenarioConfigError::NoReplicates);
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ScenarioConfigError),
    #[error("generation failed at replicate {replicate}, step {step}: {source}")]
    Generation {
        replicate: u32,
        step: u32,
        source: GenerationError,
    },
}

/// One layer's metrics after a step. `aspl` is absent when the layer has no
/// reachable pair left; it is never coerced to 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerMetrics {
    pub aspl: Option<f64>,
    pub tspc: u64,
    pub tne: u64,
}

/// Post-failure metrics of all three layers at one step. Step 0 is the
/// freshly built network before any failure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub step: u32,
    pub l1: LayerMetrics,
    pub l2: LayerMetrics,
    pub l3: LayerMetrics,
}

impl MetricsRecord {
    pub fn layer(&self, layer: Layer) -> &LayerMetrics {
        match layer {
            Layer::L1 => &self.l1,
            Layer::L2 => &self.l2,
            Layer::L3 => &self.l3,
        }
    }
}

/// The ordered per-step records of one replicate, with its config echo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsSeries {
    pub mode: Mode,
    pub replicate: u32,
    pub config: ScenarioConfig,
    /// True when the run stopped early: L1 ran out of edges (edge modes) or
    /// live vertices dropped below 2 (node modes).
    pub truncated: bool,
    pub records: Vec<MetricsRecord>,
}

fn layer_metrics(g: &Graph) -> LayerMetrics {
    let stats = g.apsp_stats();
    LayerMetrics {
        aspl: stats.aspl(),
        tspc: stats.sigma_sum,
        tne: g.tne() as u64,
    }
}

/// Metrics of all three layers in the network's current state.
pub fn record_metrics(net: &LayeredNetwork, step: u32) -> MetricsRecord {
    MetricsRecord {
        step,
        l1: layer_metrics(net.l1()),
        l2: layer_metrics(net.l2()),
        l3: layer_metrics(net.l3()),
    }
}

/// Per-layer seeds for the construction (step 0) or the upper-layer
/// regeneration (step k) of one replicate. Any single draw of a run is
/// reconstructible from the master seed alone.
pub fn seeds_for(master: u64, replicate: u32, step: u32) -> LayerSeeds {
    LayerSeeds {
        l1: child_seed(master, replicate as u64, step as u64, Layer::L1.seed_tag()),
        l2: child_seed(master, replicate as u64, step as u64, Layer::L2.seed_tag()),
        l3: child_seed(master, replicate as u64, step as u64, Layer::L3.seed_tag()),
    }
}

/// Remove the top-k L1 edges by current EBC as one batch, then propagate
/// once. Returns the removed edges in rank order.
pub fn static_edge_batch(net: &mut LayeredNetwork, k: usize) -> Vec<(u32, u32)> {
    let targets = edge_betweenness(net.l1()).top_ranked(k);
    net.remove_l1_edges_batch(&targets)
        .expect("ranked edges exist");
    targets
}

/// Remove the top-k L1 nodes by current NBC as one batch (incident edges in
/// every layer), then propagate once. Returns the removed nodes in rank order.
pub fn static_node_batch(net: &mut LayeredNetwork, k: usize) -> Vec<u32> {
    let targets = node_betweenness(net.l1()).top_ranked(k);
    net.remove_nodes_batch(&targets)
        .expect("ranked nodes are live");
    targets
}

/// Recompute L1 EBC, fail the top edge, propagate. `None` when L1 has no
/// edges left (the run truncates).
pub fn dynamic_edge_step(net: &mut LayeredNetwork) -> Option<(u32, u32)> {
    let top = edge_betweenness(net.l1()).top_ranked(1).first().copied()?;
    net.remove_l1_edge(top.0, top.1).expect("ranked edge exists");
    Some(top)
}

/// Recompute L1 NBC, fail the top node, propagate. `None` when fewer than
/// two live vertices remain (the run truncates).
pub fn dynamic_node_step(net: &mut LayeredNetwork) -> Option<NodeRemoval> {
    if net.live_count() < 2 {
        return None;
    }
    let top = node_betweenness(net.l1()).top_ranked(1)[0];
    Some(net.remove_node(top).expect("ranked node is live"))
}

/// Redraw L2 and L3 over the current live vertices, pruned against current
/// L1 and the new L2 respectively. Dynamic scenarios do this every step.
pub fn regenerate_upper_layers(
    net: &LayeredNetwork,
    cfg: &MlcnConfig,
    l2_seed: u64,
    l3_seed: u64,
) -> LayeredNetwork {
    let l2 = build_l2(cfg, net.l1(), &mut ChaCha8Rng::seed_from_u64(l2_seed));
    let l3 = build_l3(cfg, &l2, &mut ChaCha8Rng::seed_from_u64(l3_seed));
    LayeredNetwork::from_parts(net.l1().clone(), l2, l3).expect("layers share liveness")
}

fn static_sweep(
    cfg: &ScenarioConfig,
    replicate: u32,
    mut observe: impl FnMut(&MetricsRecord, &LayeredNetwork),
) -> Result<MetricsSeries, RunError> {
    let mut records = Vec::with_capacity(cfg.failures + 1);
    for k in 0..=cfg.failures {
        let seeds = seeds_for(cfg.seed, replicate, k as u32);
        let mut net = build_network(&cfg.mlcn, seeds).map_err(|source| RunError::Generation {
            replicate,
            step: k as u32,
            source,
        })?;
        match cfg.mode {
            Mode::Sebc => {
                static_edge_batch(&mut net, k);
            }
            Mode::Snbc => {
                static_node_batch(&mut net, k);
            }
            _ => unreachable!("static sweep only runs static modes"),
        }
        let record = record_metrics(&net, k as u32);
        observe(&record, &net);
        records.push(record);
    }
    Ok(MetricsSeries {
        mode: cfg.mode,
        replicate,
        config: cfg.clone(),
        truncated: false,
        records,
    })
}

fn dynamic_run(
    cfg: &ScenarioConfig,
    replicate: u32,
    mut observe: impl FnMut(&MetricsRecord, &LayeredNetwork),
) -> Result<MetricsSeries, RunError> {
    let seeds = seeds_for(cfg.seed, replicate, 0);
    let mut net = build_network(&cfg.mlcn, seeds).map_err(|source| RunError::Generation {
        replicate,
        step: 0,
        source,
    })?;
    let mut records = Vec::with_capacity(cfg.failures + 1);
    let record = record_metrics(&net, 0);
    observe(&record, &net);
    records.push(record);

    let mut truncated = false;
    for step in 1..=cfg.failures {
        let removed = match cfg.mode {
            Mode::Debc => dynamic_edge_step(&mut net).is_some(),
            Mode::Dnbc => dynamic_node_step(&mut net).is_some(),
            _ => unreachable!("dynamic run only runs dynamic modes"),
        };
        if !removed {
            truncated = true;
            break;
        }
        let record = record_metrics(&net, step as u32);
        observe(&record, &net);
        records.push(record);
        let seeds = seeds_for(cfg.seed, replicate, step as u32);
        net = regenerate_upper_layers(&net, &cfg.mlcn, seeds.l2, seeds.l3);
    }
    Ok(MetricsSeries {
        mode: cfg.mode,
        replicate,
        config: cfg.clone(),
        truncated,
        records,
    })
}

fn run_replicate_inner(
    cfg: &ScenarioConfig,
    replicate: u32,
    observe: impl FnMut(&MetricsRecord, &LayeredNetwork),
) -> Result<MetricsSeries, RunError> {
    if cfg.mode.is_static() {
        static_sweep(cfg, replicate, observe)
    } else {
        dynamic_run(cfg, replicate, observe)
    }
}

/// Run one replicate, invoking `observe` on every recorded step with the
/// network state the record was taken from.
pub fn run_replicate_with(
    cfg: &ScenarioConfig,
    replicate: u32,
    observe: impl FnMut(&MetricsRecord, &LayeredNetwork),
) -> Result<MetricsSeries, RunError> {
    cfg.validate()?;
    run_replicate_inner(cfg, replicate, observe)
}

/// Run one replicate of the configured scenario.
pub fn run_replicate(cfg: &ScenarioConfig, replicate: u32) -> Result<MetricsSeries, RunError> {
    run_replicate_with(cfg, replicate, |_, _| {})
}

/// Run every replicate of the configured scenario. Replicates fan out to
/// worker threads when built with the `parallel` feature; each one depends
/// only on (master seed, replicate index), and the output is always ordered
/// by replicate, so the result does not depend on scheduling.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<MetricsSeries>, RunError> {
    cfg.validate()?;
    let replicates: Vec<u32> = (0..cfg.replicates as u32).collect();
    exec::map(&replicates, |&r| run_replicate_inner(cfg, r, |_, _| {}))
        .into_iter()
        .collect()
}
