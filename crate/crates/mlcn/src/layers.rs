//! The three-layer network: a gaussian-gated ER graph at the bottom, a
//! denser ER graph above it, and a scale-free graph on top, all over one
//! shared vertex set.
//!
//! An upper-layer edge is serviceable only while its endpoints stay
//! connected in the layer beneath; [`LayeredNetwork::propagate_failures`]
//! enforces that bottom-up after every failure.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gen::{
    er_draw_masked, gen_er_min_degree, scale_free_edge_count, scale_free_masked, GenerationError,
};
use crate::graph::{Graph, GraphError};

/// Layer label, ordered bottom to top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Layer {
    L1,
    L2,
    L3,
}

impl Layer {
    pub const ALL: [Layer; 3] = [Layer::L1, Layer::L2, Layer::L3];

    /// Tag used in sub-seed derivation.
    pub fn seed_tag(self) -> u64 {
        match self {
            Layer::L1 => 1,
            Layer::L2 => 2,
            Layer::L3 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Layer::L1 => "L1",
            Layer::L2 => "L2",
            Layer::L3 => "L3",
        }
    }
}

impl std::fmt::Display for Layer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Construction parameters for the three layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlcnConfig {
    /// Shared vertex count.
    pub n: usize,
    /// L1 edge probability.
    pub l1_p: f64,
    /// L2 edge probability.
    pub l2_p: f64,
    /// L3 preferential-attachment edge count per vertex.
    pub l3_m: usize,
    /// Acceptance bound on |sample skewness| of the L1 hop histogram.
    pub gauss_max_skew: f64,
    /// Whole-graph resamples allowed against the gaussian gate.
    pub gauss_attempts: usize,
}

impl Default for MlcnConfig {
    fn default() -> Self {
        // Calibrated so the expected per-layer edge counts order as
        // L1 (~198) < L2 (~743) < L3 (2175) with wide margins and the
        // gaussian gate passes most L1 candidates at n = 100.
        MlcnConfig {
            n: 100,
            l1_p: 0.04,
            l2_p: 0.15,
            l3_m: 25,
            gauss_max_skew: 0.5,
            gauss_attempts: 100,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MlcnConfigError {
    #[error("vertex count must be at least 2, got {n}")]
    TooFewVertices { n: usize },
    #[error("{name} must be in (0, 1], got {value}")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },
    #[error("l3_m must satisfy 1 <= m < n, got m={m}, n={n}")]
    AttachmentOutOfRange { m: usize, n: usize },
    #[error("gauss_max_skew must be positive, got {value}")]
    SkewBoundOutOfRange { value: f64 },
    #[error("gauss_attempts must be at least 1")]
    NoAttemptBudget,
    #[error(
        "expected edge counts must order L1 < L2 < L3, got {l1:.1} / {l2:.1} / {l3} \
         (raise l2_p or l3_m, or lower l1_p)"
    )]
    EdgeOrderingViolated { l1: f64, l2: f64, l3: usize },
}

impl MlcnConfig {
    /// Expected raw edge counts per layer, before any pruning.
    pub fn expected_edges(&self) -> (f64, f64, usize) {
        let pairs = (self.n * (self.n - 1) / 2) as f64;
        (
            self.l1_p * pairs,
            self.l2_p * pairs,
            scale_free_edge_count(self.n, self.l3_m),
        )
    }

    /// Range checks only; calibration probes deliberately skip the edge
    /// ordering so it can report on misordered parameter sets.
    pub fn validate_ranges(&self) -> Result<(), MlcnConfigError> {
        if self.n < 2 {
            return Err(MlcnConfigError::TooFewVertices { n: self.n });
        }
        for (name, value) in [("l1_p", self.l1_p), ("l2_p", self.l2_p)] {
            if !(value > 0.0 && value <= 1.0) {
                return Err(MlcnConfigError::ProbabilityOutOfRange { name, value });
            }
        }
        if self.l3_m < 1 || self.l3_m >= self.n {
            return Err(MlcnConfigError::AttachmentOutOfRange {
                m: self.l3_m,
                n: self.n,
            });
        }
        if !self.gauss_max_skew.is_finite() || self.gauss_max_skew <= 0.0 {
            return Err(MlcnConfigError::SkewBoundOutOfRange {
                value: self.gauss_max_skew,
            });
        }
        if self.gauss_attempts < 1 {
            return Err(MlcnConfigError::NoAttemptBudget);
        }
        Ok(())
    }

    /// Full validation for scenario runs: ranges plus expected edge ordering.
    pub fn validate(&self) -> Result<(), MlcnConfigError> {
        self.validate_ranges()?;
        let (l1, l2, l3) = self.expected_edges();
        if !(l1 < l2 && l2 < l3 as f64) {
            return Err(MlcnConfigError::EdgeOrderingViolated { l1, l2, l3 });
        }
        Ok(())
    }
}

/// Edges pruned from the upper layers by one propagation pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PropagationStats {
    pub l2_pruned: usize,
    pub l3_pruned: usize,
}

/// Outcome of one node failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRemoval {
    pub node: u32,
    /// Incident edges deleted per layer, in L1/L2/L3 order.
    pub incident_edges: [usize; 3],
    pub propagation: PropagationStats,
}

/// The (L1, L2, L3) triple over one shared vertex id space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredNetwork {
    l1: Graph,
    l2: Graph,
    l3: Graph,
}

impl LayeredNetwork {
    /// Assemble from pre-built layers; they must share vertex count and
    /// liveness. No propagation is applied, so tests can assemble states
    /// that violate the dependency invariant on purpose.
    pub fn from_parts(l1: Graph, l2: Graph, l3: Graph) -> Result<Self, GraphError> {
        let n = l1.n();
        for g in [&l2, &l3] {
            if g.n() != n {
                return Err(GraphError::VertexOutOfRange {
                    v: g.n() as u32,
                    n,
                });
            }
        }
        for v in 0..n as u32 {
            let live = l1.is_live(v);
            if l2.is_live(v) != live || l3.is_live(v) != live {
                return Err(GraphError::DeadVertex { v });
            }
        }
        Ok(LayeredNetwork { l1, l2, l3 })
    }

    pub fn n(&self) -> usize {
        self.l1.n()
    }

    pub fn live_count(&self) -> usize {
        self.l1.live_count()
    }

    pub fn l1(&self) -> &Graph {
        &self.l1
    }

    pub fn l2(&self) -> &Graph {
        &self.l2
    }

    pub fn l3(&self) -> &Graph {
        &self.l3
    }

    pub fn layer(&self, layer: Layer) -> &Graph {
        match layer {
            Layer::L1 => &self.l1,
            Layer::L2 => &self.l2,
            Layer::L3 => &self.l3,
        }
    }

    /// Fail one L1 edge, then propagate upward.
    pub fn remove_l1_edge(&mut self, u: u32, v: u32) -> Result<PropagationStats, GraphError> {
        self.l1.remove_edge(u, v)?;
        Ok(self.propagate_failures())
    }

    /// Fail a batch of L1 edges with a single propagation pass afterwards.
    ///
    /// Removing everything first and propagating once lands on the same
    /// state as propagating between removals; static scenarios use this.
    pub fn remove_l1_edges_batch(
        &mut self,
        edges: &[(u32, u32)],
    ) -> Result<PropagationStats, GraphError> {
        for &(u, v) in edges {
            self.l1.remove_edge(u, v)?;
        }
        Ok(self.propagate_failures())
    }

    /// Fail a batch of nodes with a single propagation pass afterwards.
    pub fn remove_nodes_batch(&mut self, nodes: &[u32]) -> Result<PropagationStats, GraphError> {
        for &v in nodes {
            self.l1.kill_vertex(v)?;
            self.l2.kill_vertex(v)?;
            self.l3.kill_vertex(v)?;
        }
        Ok(self.propagate_failures())
    }

    /// Fail one node: dead in every layer, incident edges removed everywhere,
    /// then propagate upward.
    pub fn remove_node(&mut self, v: u32) -> Result<NodeRemoval, GraphError> {
        let d1 = self.l1.kill_vertex(v)?.len();
        let d2 = self.l2.kill_vertex(v)?.len();
        let d3 = self.l3.kill_vertex(v)?.len();
        let propagation = self.propagate_failures();
        Ok(NodeRemoval {
            node: v,
            incident_edges: [d1, d2, d3],
            propagation,
        })
    }

    /// One bottom-up pass: prune L2 edges with L1-disconnected endpoints,
    /// then L3 edges against the pruned L2. Dependencies only point upward,
    /// so a single pass reaches the fixpoint and a second one is a no-op.
    pub fn propagate_failures(&mut self) -> PropagationStats {
        let l2_pruned = prune_unsupported(&mut self.l2, &self.l1);
        let l3_pruned = prune_unsupported(&mut self.l3, &self.l2);
        PropagationStats { l2_pruned, l3_pruned }
    }

    /// Full reachability scan of the dependency invariant.
    pub fn dependency_holds(&self) -> bool {
        unsupported_edges(&self.l2, &self.l1).is_empty()
            && unsupported_edges(&self.l3, &self.l2).is_empty()
    }
}

fn unsupported_edges(upper: &Graph, lower: &Graph) -> Vec<(u32, u32)> {
    let comp = lower.components();
    upper
        .edges()
        .filter(|&(u, v)| comp[u as usize] != comp[v as usize])
        .collect()
}

fn prune_unsupported(upper: &mut Graph, lower: &Graph) -> usize {
    let doomed = unsupported_edges(upper, lower);
    for &(u, v) in &doomed {
        upper.remove_edge(u, v).expect("edge listed above");
    }
    doomed.len()
}

/// Why a candidate L1 graph was rejected by the gaussian-likeness gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateFailure {
    Disconnected,
    /// |sample skewness| of the hop histogram exceeded the bound.
    Skewness(f64),
    /// The modal hop sat at 1 or at the maximum hop.
    NonInteriorMode,
}

/// Gaussian-likeness gate for an L1 candidate: connected, hop-histogram
/// |skewness| within `max_skew`, and an interior modal hop.
pub fn gaussian_gate(g: &Graph, max_skew: f64) -> Result<(), GateFailure> {
    if !g.is_connected() {
        return Err(GateFailure::Disconnected);
    }
    let hist = g.hop_histogram();
    let skew = hist.skewness().expect("connected graph has pairs");
    if skew.abs() > max_skew {
        return Err(GateFailure::Skewness(skew));
    }
    let modal = hist.modal_hop().expect("non-empty histogram");
    let max_hop = hist.max_hop().expect("non-empty histogram");
    if modal == 1 || modal == max_hop {
        return Err(GateFailure::NonInteriorMode);
    }
    Ok(())
}

/// Build the bottom layer: a connected min-degree-1 ER graph whose hop
/// histogram is gaussian-like (|skewness| within bound, modal hop interior).
/// Resamples until a candidate passes or the attempt budget runs out.
pub fn build_l1<R: Rng>(cfg: &MlcnConfig, rng: &mut R) -> Result<Graph, GenerationError> {
    let mut connectivity_failures = 0;
    let mut skew_failures = 0;
    let mut mode_failures = 0;
    for _ in 0..cfg.gauss_attempts {
        let g = gen_er_min_degree(cfg.n, cfg.l1_p, rng)?;
        match gaussian_gate(&g, cfg.gauss_max_skew) {
            Ok(()) => return Ok(g),
            Err(GateFailure::Disconnected) => connectivity_failures += 1,
            Err(GateFailure::Skewness(_)) => skew_failures += 1,
            Err(GateFailure::NonInteriorMode) => mode_failures += 1,
        }
    }
    Err(GenerationError::GaussianGateBudgetExhausted {
        attempts: cfg.gauss_attempts,
        max_skew: cfg.gauss_max_skew,
        connectivity_failures,
        skew_failures,
        mode_failures,
    })
}

/// Build the middle layer: an ER draw over the live vertices, with every
/// edge whose endpoints are not L1-connected pruned away.
pub fn build_l2<R: Rng>(cfg: &MlcnConfig, l1: &Graph, rng: &mut R) -> Graph {
    let mut g = er_draw_masked(l1.live_mask(), cfg.l2_p, rng);
    prune_unsupported(&mut g, l1);
    g
}

/// Build the top layer: a scale-free draw over the live vertices, with every
/// edge whose endpoints are not L2-connected pruned away.
pub fn build_l3<R: Rng>(cfg: &MlcnConfig, l2: &Graph, rng: &mut R) -> Graph {
    let mut g = scale_free_masked(l2.live_mask(), cfg.l3_m, rng);
    prune_unsupported(&mut g, l2);
    g
}

/// Independent per-layer seeds for one network construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerSeeds {
    pub l1: u64,
    pub l2: u64,
    pub l3: u64,
}

/// Build a full network from per-layer seeds.
pub fn build_network(cfg: &MlcnConfig, seeds: LayerSeeds) -> Result<LayeredNetwork, GenerationError> {
    let l1 = build_l1(cfg, &mut ChaCha8Rng::seed_from_u64(seeds.l1))?;
    let l2 = build_l2(cfg, &l1, &mut ChaCha8Rng::seed_from_u64(seeds.l2));
    let l3 = build_l3(cfg, &l2, &mut ChaCha8Rng::seed_from_u64(seeds.l3));
    Ok(LayeredNetwork { l1, l2, l3 })
}
