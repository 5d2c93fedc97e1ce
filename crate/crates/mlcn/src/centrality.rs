//! Exact betweenness centrality for nodes and edges via Brandes-style
//! dependency accumulation, plus deterministic descending ranking.
//!
//! Scores are unnormalized sums over unordered vertex pairs: only the rank
//! order feeds the failure engine, and min-max normalization downstream
//! removes scale anyway. Pairs with no connecting path contribute zero, so
//! both maps stay defined arbitrarily deep into a failure run.
//!
//! Per-source passes fan out through [`crate::exec::map`]; the final
//! reduction always runs in ascending source order so the floating-point
//! sums are byte-stable regardless of thread count.

use std::collections::{BTreeMap, VecDeque};

use crate::exec;
use crate::graph::{Graph, UNREACHABLE};

/// Node betweenness scores for every live vertex (0 for isolated ones).
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityMap {
    scores: BTreeMap<u32, f64>,
}

impl CentralityMap {
    pub fn scores(&self) -> &BTreeMap<u32, f64> {
        &self.scores
    }

    pub fn score(&self, v: u32) -> Option<f64> {
        self.scores.get(&v).copied()
    }

    /// Vertex ids by score descending, ties broken by ascending id;
    /// returns at most `k` ids.
    pub fn top_ranked(&self, k: usize) -> Vec<u32> {
        rank_desc(&self.scores, k)
    }

    #[cfg(test)]
    pub(crate) fn from_entries(entries: &[(u32, f64)]) -> Self {
        CentralityMap {
            scores: entries.iter().copied().collect(),
        }
    }
}

/// Edge betweenness scores for every edge, keyed by (u, v) with u < v.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCentralityMap {
    scores: BTreeMap<(u32, u32), f64>,
}

impl EdgeCentralityMap {
    pub fn scores(&self) -> &BTreeMap<(u32, u32), f64> {
        &self.scores
    }

    pub fn score(&self, u: u32, v: u32) -> Option<f64> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.scores.get(&key).copied()
    }

    /// Edges by score descending, ties broken by ascending (u, v);
    /// returns at most `k` edges.
    pub fn top_ranked(&self, k: usize) -> Vec<(u32, u32)> {
        rank_desc(&self.scores, k)
    }
}

fn rank_desc<K: Ord + Copy>(scores: &BTreeMap<K, f64>, k: usize) -> Vec<K> {
    let mut items: Vec<(K, f64)> = scores.iter().map(|(&id, &s)| (id, s)).collect();
    items.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    items.truncate(k);
    items.into_iter().map(|(id, _)| id).collect()
}

/// One counting BFS worth of state, shared by both betweenness variants.
struct BrandesPass {
    /// Vertices in non-decreasing distance order from the source.
    order: Vec<u32>,
    preds: Vec<Vec<u32>>,
    sigma: Vec<f64>,
}

fn brandes_pass(g: &Graph, source: u32) -> BrandesPass {
    let n = g.n();
    let mut dist = vec![UNREACHABLE; n];
    let mut sigma = vec![0.0f64; n];
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    dist[source as usize] = 0;
    sigma[source as usize] = 1.0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        let dv = dist[v as usize];
        for w in g.neighbors(v) {
            let wi = w as usize;
            if dist[wi] == UNREACHABLE {
                dist[wi] = dv + 1;
                queue.push_back(w);
            }
            if dist[wi] == dv + 1 {
                sigma[wi] += sigma[v as usize];
                preds[wi].push(v);
            }
        }
    }
    BrandesPass { order, preds, sigma }
}

/// Per-source dependency of every other vertex, indexed by vertex id.
fn node_dependencies(g: &Graph, source: u32) -> Vec<f64> {
    let pass = brandes_pass(g, source);
    let mut delta = vec![0.0f64; g.n()];
    for &w in pass.order.iter().rev() {
        let wi = w as usize;
        for &v in &pass.preds[wi] {
            let vi = v as usize;
            delta[vi] += pass.sigma[vi] / pass.sigma[wi] * (1.0 + delta[wi]);
        }
    }
    delta[source as usize] = 0.0;
    delta
}

/// Per-source dependency of every edge, indexed like `edge_list`.
fn edge_dependencies(
    g: &Graph,
    edge_index: &BTreeMap<(u32, u32), usize>,
    source: u32,
) -> Vec<f64> {
    let pass = brandes_pass(g, source);
    let mut delta = vec![0.0f64; g.n()];
    let mut edge_delta = vec![0.0f64; edge_index.len()];
    for &w in pass.order.iter().rev() {
        let wi = w as usize;
        for &v in &pass.preds[wi] {
            let vi = v as usize;
            let c = pass.sigma[vi] / pass.sigma[wi] * (1.0 + delta[wi]);
            let key = if v < w { (v, w) } else { (w, v) };
            edge_delta[edge_index[&key]] += c;
            delta[vi] += c;
        }
    }
    edge_delta
}

fn fold_node_scores(g: &Graph, per_source: Vec<Vec<f64>>) -> CentralityMap {
    let mut total = vec![0.0f64; g.n()];
    for delta in per_source {
        for (t, d) in total.iter_mut().zip(delta) {
            *t += d;
        }
    }
    let scores = g
        .live_vertices()
        .map(|v| (v, total[v as usize] / 2.0))
        .collect();
    CentralityMap { scores }
}

/// Node betweenness of every live vertex: for each unordered pair of other
/// vertices, the fraction of their shortest paths passing through it.
pub fn node_betweenness(g: &Graph) -> CentralityMap {
    let sources: Vec<u32> = g.live_vertices().collect();
    fold_node_scores(g, exec::map(&sources, |&s| node_dependencies(g, s)))
}

/// Sequential variant of [`node_betweenness`], kept for benchmark comparison.
pub fn node_betweenness_seq(g: &Graph) -> CentralityMap {
    let sources: Vec<u32> = g.live_vertices().collect();
    fold_node_scores(g, exec::map_seq(&sources, |&s| node_dependencies(g, s)))
}

fn fold_edge_scores(
    edge_list: Vec<(u32, u32)>,
    per_source: Vec<Vec<f64>>,
) -> EdgeCentralityMap {
    let mut total = vec![0.0f64; edge_list.len()];
    for delta in per_source {
        for (t, d) in total.iter_mut().zip(delta) {
            *t += d;
        }
    }
    let scores = edge_list
        .into_iter()
        .zip(total)
        .map(|(e, s)| (e, s / 2.0))
        .collect();
    EdgeCentralityMap { scores }
}

/// Edge betweenness of every edge: for each unordered reachable pair, the
/// fraction of their shortest paths traversing it. Endpoint pairs count,
/// so an edge (u, v) receives 1 from the pair {u, v} itself.
pub fn edge_betweenness(g: &Graph) -> EdgeCentralityMap {
    let edge_list: Vec<(u32, u32)> = g.edges().collect();
    let edge_index: BTreeMap<(u32, u32), usize> = edge_list
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();
    let sources: Vec<u32> = g.live_vertices().collect();
    let per_source = exec::map(&sources, |&s| edge_dependencies(g, &edge_index, s));
    fold_edge_scores(edge_list, per_source)
}

/// Sequential variant of [`edge_betweenness`], kept for benchmark comparison.
pub fn edge_betweenness_seq(g: &Graph) -> EdgeCentralityMap {
    let edge_list: Vec<(u32, u32)> = g.edges().collect();
    let edge_index: BTreeMap<(u32, u32), usize> = edge_list
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();
    let sources: Vec<u32> = g.live_vertices().collect();
    let per_source = exec::map_seq(&sources, |&s| edge_dependencies(g, &edge_index, s));
    fold_edge_scores(edge_list, per_source)
}
