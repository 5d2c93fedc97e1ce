//! Undirected simple graph over a dense id space, with BFS shortest-path
//! counting and the per-layer metrics derived from it.
//!
//! Vertex ids stay stable for the whole life of a graph: removing a node
//! marks it dead and strips its edges instead of renumbering, so per-step
//! records of a failure series remain joinable.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

/// Sentinel hop distance for unreachable vertices.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("vertex count must be at least 2, got {n}")]
    TooFewVertices { n: usize },
    #[error("edge probability must be in (0, 1], got {p}")]
    InvalidProbability { p: f64 },
    #[error("attachment count must satisfy 1 <= m < n, got m={m}, n={n}")]
    InvalidAttachment { m: usize, n: usize },
    #[error("vertex {v} is out of range for a graph of {n} vertices")]
    VertexOutOfRange { v: u32, n: usize },
    #[error("vertex {v} is dead")]
    DeadVertex { v: u32 },
    #[error("edge ({u}, {v}) is not in the graph")]
    MissingEdge { u: u32, v: u32 },
    #[error("self-loop ({v}, {v}) rejected")]
    SelfLoop { v: u32 },
}

/// Undirected simple graph. No self-loops, no parallel edges; each edge is
/// stored once and adjacency is kept symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    alive: Vec<bool>,
    adj: Vec<BTreeSet<u32>>,
    edge_count: usize,
}

impl Graph {
    /// Edgeless graph on `n` live vertices 0..n-1.
    pub fn new(n: usize) -> Self {
        Graph {
            alive: vec![true; n],
            adj: vec![BTreeSet::new(); n],
            edge_count: 0,
        }
    }

    /// Graph with the given edge list; panics on invalid edges (test/fixture helper).
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.insert_edge(u, v).expect("invalid fixture edge");
        }
        g
    }

    /// Size of the id space (live and dead vertices together).
    pub fn n(&self) -> usize {
        self.alive.len()
    }

    pub fn is_live(&self, v: u32) -> bool {
        (v as usize) < self.alive.len() && self.alive[v as usize]
    }

    pub fn live_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    /// Liveness per vertex id.
    pub fn live_mask(&self) -> &[bool] {
        &self.alive
    }

    /// Live vertex ids in ascending order.
    pub fn live_vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| i as u32)
    }

    fn check_live(&self, v: u32) -> Result<(), GraphError> {
        if (v as usize) >= self.alive.len() {
            return Err(GraphError::VertexOutOfRange { v, n: self.n() });
        }
        if !self.alive[v as usize] {
            return Err(GraphError::DeadVertex { v });
        }
        Ok(())
    }

    /// Insert edge (u, v). Returns false if it was already present.
    pub fn insert_edge(&mut self, u: u32, v: u32) -> Result<bool, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop { v });
        }
        self.check_live(u)?;
        self.check_live(v)?;
        let added = self.adj[u as usize].insert(v);
        if added {
            self.adj[v as usize].insert(u);
            self.edge_count += 1;
        }
        Ok(added)
    }

    /// Remove edge (u, v); the edge must exist.
    pub fn remove_edge(&mut self, u: u32, v: u32) -> Result<(), GraphError> {
        let present = (u as usize) < self.adj.len() && self.adj[u as usize].contains(&v);
        if !present {
            return Err(GraphError::MissingEdge { u, v });
        }
        self.adj[u as usize].remove(&v);
        self.adj[v as usize].remove(&u);
        self.edge_count -= 1;
        Ok(())
    }

    /// Mark `v` dead and strip its incident edges. Returns the former neighbors.
    pub fn kill_vertex(&mut self, v: u32) -> Result<Vec<u32>, GraphError> {
        self.check_live(v)?;
        let neighbors: Vec<u32> = self.adj[v as usize].iter().copied().collect();
        for &w in &neighbors {
            self.adj[w as usize].remove(&v);
        }
        self.edge_count -= neighbors.len();
        self.adj[v as usize].clear();
        self.alive[v as usize] = false;
        Ok(neighbors)
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        (u as usize) < self.adj.len() && self.adj[u as usize].contains(&v)
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[v as usize].iter().copied()
    }

    /// All edges as (u, v) pairs with u < v, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            let u = u as u32;
            nbrs.iter().copied().filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    /// Total number of edges in the graph.
    pub fn tne(&self) -> usize {
        self.edge_count
    }

    /// Component id per vertex; dead vertices get `UNREACHABLE`.
    pub fn components(&self) -> Vec<u32> {
        let n = self.n();
        let mut comp = vec![UNREACHABLE; n];
        let mut next = 0u32;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if !self.alive[s] || comp[s] != UNREACHABLE {
                continue;
            }
            comp[s] = next;
            queue.push_back(s as u32);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v as usize] {
                    if comp[w as usize] == UNREACHABLE {
                        comp[w as usize] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// True when every live vertex is in one component (vacuous for < 2 live).
    pub fn is_connected(&self) -> bool {
        let comp = self.components();
        let mut seen = None;
        for v in self.live_vertices() {
            let c = comp[v as usize];
            match seen {
                None => seen = Some(c),
                Some(first) if first != c => return false,
                _ => {}
            }
        }
        true
    }

    /// Single-source BFS with shortest-path counting.
    pub fn sssp(&self, source: u32) -> Result<SsspResult, GraphError> {
        self.check_live(source)?;
        let n = self.n();
        let mut dist = vec![UNREACHABLE; n];
        let mut sigma = vec![0u64; n];
        dist[source as usize] = 0;
        sigma[source as usize] = 1;
        let mut queue = VecDeque::new();
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v as usize];
            for &w in &self.adj[v as usize] {
                let wi = w as usize;
                if dist[wi] == UNREACHABLE {
                    dist[wi] = dv + 1;
                    queue.push_back(w);
                }
                if dist[wi] == dv + 1 {
                    sigma[wi] += sigma[v as usize];
                }
            }
        }
        Ok(SsspResult { source, dist, sigma })
    }

    /// Distance sum, reachable pair count, and geodesic count over all
    /// unordered reachable pairs of live vertices, in one BFS sweep.
    pub fn apsp_stats(&self) -> ApspStats {
        let sources: Vec<u32> = self.live_vertices().collect();
        let per_source = crate::exec::map(&sources, |&s| {
            let r = self.sssp(s).expect("live source");
            let mut dist_sum = 0u64;
            let mut pairs = 0u64;
            let mut sigma_sum = 0u64;
            for v in self.live_vertices() {
                if v == s {
                    continue;
                }
                let d = r.dist[v as usize];
                if d != UNREACHABLE {
                    dist_sum += u64::from(d);
                    pairs += 1;
                    sigma_sum += r.sigma[v as usize];
                }
            }
            (dist_sum, pairs, sigma_sum)
        });
        // Ordered sweep counts every unordered pair twice.
        let mut total = (0u64, 0u64, 0u64);
        for (d, p, s) in per_source {
            total.0 += d;
            total.1 += p;
            total.2 += s;
        }
        ApspStats {
            dist_sum: total.0 / 2,
            reachable_pairs: total.1 / 2,
            sigma_sum: total.2 / 2,
        }
    }

    /// Average shortest path length over reachable pairs; `None` when no
    /// pair is reachable (never reported as 0 downstream).
    pub fn aspl(&self) -> Option<f64> {
        self.apsp_stats().aspl()
    }

    /// Total shortest path count: sum of geodesic counts over unordered
    /// reachable pairs. An edgeless graph yields 0.
    pub fn tspc(&self) -> u64 {
        self.apsp_stats().sigma_sum
    }

    /// Histogram of pairwise hop distances over unordered reachable pairs.
    pub fn hop_histogram(&self) -> HopHistogram {
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        for s in self.live_vertices() {
            let r = self.sssp(s).expect("live source");
            for v in self.live_vertices() {
                if v == s {
                    continue;
                }
                let d = r.dist[v as usize];
                if d != UNREACHABLE {
                    *counts.entry(d).or_insert(0) += 1;
                }
            }
        }
        for c in counts.values_mut() {
            *c /= 2;
        }
        counts.retain(|_, c| *c > 0);
        HopHistogram { counts }
    }

    /// Edge list as text, one `u v` pair per line, ascending.
    pub fn edge_list_text(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").expect("string write");
        }
        out
    }
}

/// Aggregate all-pairs shortest-path statistics over unordered reachable pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApspStats {
    pub dist_sum: u64,
    pub reachable_pairs: u64,
    pub sigma_sum: u64,
}

impl ApspStats {
    pub fn aspl(&self) -> Option<f64> {
        if self.reachable_pairs == 0 {
            None
        } else {
            Some(self.dist_sum as f64 / self.reachable_pairs as f64)
        }
    }
}

/// Result of a counting BFS from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsspResult {
    pub source: u32,
    /// Hop distance per vertex; `UNREACHABLE` for unreachable or dead vertices.
    pub dist: Vec<u32>,
    /// Number of distinct shortest paths from the source; 0 iff unreachable.
    pub sigma: Vec<u64>,
}

impl SsspResult {
    pub fn distance(&self, v: u32) -> Option<u32> {
        match self.dist[v as usize] {
            UNREACHABLE => None,
            d => Some(d),
        }
    }
}

/// Counts of unordered reachable vertex pairs per hop distance (>= 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopHistogram {
    counts: BTreeMap<u32, u64>,
}

impl HopHistogram {
    pub fn counts(&self) -> &BTreeMap<u32, u64> {
        &self.counts
    }

    pub fn total_pairs(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Smallest hop with the maximum pair count.
    pub fn modal_hop(&self) -> Option<u32> {
        let best = self.counts.values().max()?;
        self.counts
            .iter()
            .find(|(_, c)| *c == best)
            .map(|(&h, _)| h)
    }

    pub fn max_hop(&self) -> Option<u32> {
        self.counts.keys().next_back().copied()
    }

    /// Sample skewness of the hop distribution; 0 for a zero-variance sample,
    /// `None` for an empty histogram.
    pub fn skewness(&self) -> Option<f64> {
        let n = self.total_pairs();
        if n == 0 {
            return None;
        }
        let nf = n as f64;
        let mean = self
            .counts
            .iter()
            .map(|(&h, &c)| f64::from(h) * c as f64)
            .sum::<f64>()
            / nf;
        let m2 = self
            .counts
            .iter()
            .map(|(&h, &c)| (f64::from(h) - mean).powi(2) * c as f64)
            .sum::<f64>()
            / nf;
        if m2 == 0.0 {
            return Some(0.0);
        }
        let m3 = self
            .counts
            .iter()
            .map(|(&h, &c)| (f64::from(h) - mean).powi(3) * c as f64)
            .sum::<f64>()
            / nf;
        Some(m3 / m2.powf(1.5))
    }
}
