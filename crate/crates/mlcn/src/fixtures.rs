//! Small deterministic reference graphs with hand-derived expected values,
//! written out as edge-list files plus JSON sidecars.
//!
//! The sidecar numbers are baked literals, not recomputed at write time, so
//! they stay valid documentation even if the library regresses; the test
//! suite asserts the library reproduces every one of them.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::layers::LayeredNetwork;
use crate::report::ReportError;

/// Expected metric and centrality values of one fixture graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphExpectations {
    pub aspl: f64,
    pub tspc: u64,
    pub tne: u64,
    /// [vertex, node betweenness] pairs, ascending by vertex.
    pub nbc: Vec<(u32, f64)>,
    /// [[u, v], edge betweenness] entries, ascending by edge.
    pub ebc: Vec<((u32, u32), f64)>,
    /// First node by NBC under the descending-score, ascending-id order.
    pub nbc_top: u32,
    /// First edge by EBC under the same order.
    pub ebc_top: (u32, u32),
}

pub struct GraphFixture {
    pub name: &'static str,
    pub graph: Graph,
    pub expected: GraphExpectations,
}

/// Path 0-1-2.
pub fn p3() -> GraphFixture {
    GraphFixture {
        name: "p3",
        graph: Graph::from_edges(3, &[(0, 1), (1, 2)]),
        expected: GraphExpectations {
            aspl: 4.0 / 3.0,
            tspc: 3,
            tne: 2,
            nbc: vec![(0, 0.0), (1, 1.0), (2, 0.0)],
            ebc: vec![((0, 1), 2.0), ((1, 2), 2.0)],
            nbc_top: 1,
            ebc_top: (0, 1),
        },
    }
}

/// Path 0-1-2-3. The middle edge (1, 2) is the unique EBC maximum.
pub fn p4() -> GraphFixture {
    GraphFixture {
        name: "p4",
        graph: Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]),
        expected: GraphExpectations {
            aspl: 10.0 / 6.0,
            tspc: 6,
            tne: 3,
            nbc: vec![(0, 0.0), (1, 2.0), (2, 2.0), (3, 0.0)],
            ebc: vec![((0, 1), 3.0), ((1, 2), 4.0), ((2, 3), 3.0)],
            nbc_top: 1,
            ebc_top: (1, 2),
        },
    }
}

/// Cycle 0-1-2-3-0. Everything ties: NBC 0.5, EBC 2.0.
pub fn c4() -> GraphFixture {
    GraphFixture {
        name: "c4",
        graph: Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]),
        expected: GraphExpectations {
            aspl: 8.0 / 6.0,
            tspc: 8,
            tne: 4,
            nbc: vec![(0, 0.5), (1, 0.5), (2, 0.5), (3, 0.5)],
            ebc: vec![
                ((0, 1), 2.0),
                ((0, 3), 2.0),
                ((1, 2), 2.0),
                ((2, 3), 2.0),
            ],
            nbc_top: 0,
            ebc_top: (0, 1),
        },
    }
}

/// Star: centre 0 with leaves 1, 2, 3.
pub fn star4() -> GraphFixture {
    GraphFixture {
        name: "star4",
        graph: Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]),
        expected: GraphExpectations {
            aspl: 9.0 / 6.0,
            tspc: 6,
            tne: 3,
            nbc: vec![(0, 3.0), (1, 0.0), (2, 0.0), (3, 0.0)],
            ebc: vec![((0, 1), 3.0), ((0, 2), 3.0), ((0, 3), 3.0)],
            nbc_top: 0,
            ebc_top: (0, 1),
        },
    }
}

/// Two disjoint edges: 0-1 and 2-3. Only intra-component pairs count.
pub fn two_pairs() -> GraphFixture {
    GraphFixture {
        name: "two_pairs",
        graph: Graph::from_edges(4, &[(0, 1), (2, 3)]),
        expected: GraphExpectations {
            aspl: 1.0,
            tspc: 2,
            tne: 2,
            nbc: vec![(0, 0.0), (1, 0.0), (2, 0.0), (3, 0.0)],
            ebc: vec![((0, 1), 1.0), ((2, 3), 1.0)],
            nbc_top: 0,
            ebc_top: (0, 1),
        },
    }
}

pub fn graph_fixtures() -> Vec<GraphFixture> {
    vec![p3(), p4(), c4(), star4(), two_pairs()]
}

/// Expected propagation of the layered chain fixture: failing L1 edge
/// (1, 2) splits L1, which prunes L2 (0, 2), which in turn strands L3 (0, 2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainExpectations {
    pub remove_l1_edge: (u32, u32),
    pub l2_edges_after: Vec<(u32, u32)>,
    pub l3_edges_after: Vec<(u32, u32)>,
}

pub struct ChainFixture {
    pub name: &'static str,
    pub network: LayeredNetwork,
    pub expected: ChainExpectations,
}

/// Four-node propagation chain: l1 path 0-1-2-3, l2 {(0,2), (2,3)},
/// l3 {(0,2)}.
pub fn chain4() -> ChainFixture {
    let network = LayeredNetwork::from_parts(
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]),
        Graph::from_edges(4, &[(0, 2), (2, 3)]),
        Graph::from_edges(4, &[(0, 2)]),
    )
    .expect("consistent fixture layers");
    ChainFixture {
        name: "chain4",
        network,
        expected: ChainExpectations {
            remove_l1_edge: (1, 2),
            l2_edges_after: vec![(2, 3)],
            l3_edges_after: vec![],
        },
    }
}

#[derive(Serialize)]
struct GraphSidecar<'a> {
    name: &'a str,
    nodes: usize,
    edges: Vec<(u32, u32)>,
    #[serde(flatten)]
    expected: &'a GraphExpectations,
}

#[derive(Serialize)]
struct ChainSidecar<'a> {
    name: &'a str,
    nodes: usize,
    l1_edges: Vec<(u32, u32)>,
    l2_edges: Vec<(u32, u32)>,
    l3_edges: Vec<(u32, u32)>,
    #[serde(flatten)]
    expected: &'a ChainExpectations,
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<PathBuf, ReportError> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(path)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut body = serde_json::to_string_pretty(value).expect("sidecar serializes");
    body.push('\n');
    body
}

/// Write every fixture as `<name>.edges` (+ per-layer lists for the chain)
/// with a `<name>.expected.json` sidecar. Returns the written paths.
pub fn write_fixtures(dir: &Path) -> Result<Vec<PathBuf>, ReportError> {
    fs::create_dir_all(dir).map_err(|source| ReportError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut written = Vec::new();
    for fixture in graph_fixtures() {
        written.push(write_file(
            dir,
            &format!("{}.edges", fixture.name),
            &fixture.graph.edge_list_text(),
        )?);
        let sidecar = GraphSidecar {
            name: fixture.name,
            nodes: fixture.graph.n(),
            edges: fixture.graph.edges().collect(),
            expected: &fixture.expected,
        };
        written.push(write_file(
            dir,
            &format!("{}.expected.json", fixture.name),
            &to_json(&sidecar),
        )?);
    }

    let chain = chain4();
    for (layer, graph) in [
        ("l1", chain.network.l1()),
        ("l2", chain.network.l2()),
        ("l3", chain.network.l3()),
    ] {
        written.push(write_file(
            dir,
            &format!("{}.{layer}.edges", chain.name),
            &graph.edge_list_text(),
        )?);
    }
    let sidecar = ChainSidecar {
        name: chain.name,
        nodes: chain.network.n(),
        l1_edges: chain.network.l1().edges().collect(),
        l2_edges: chain.network.l2().edges().collect(),
        l3_edges: chain.network.l3().edges().collect(),
        expected: &chain.expected,
    };
    written.push(write_file(
        dir,
        &format!("{}.expected.json", chain.name),
        &to_json(&sidecar),
    )?);
    Ok(written)
}
