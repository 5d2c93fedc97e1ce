//! Shared test machinery: a brute-force all-shortest-paths oracle that is
//! independent of the library's BFS/Brandes code paths, a naive propagation
//! fixpoint, random fixture builders, and small statistics helpers.
#![allow(dead_code)]
// Floyd-Warshall and the helper signatures read best in index form.
#![allow(clippy::needless_range_loop, clippy::type_complexity)]

use std::collections::BTreeMap;

use mlcn::graph::Graph;
use mlcn::layers::LayeredNetwork;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Everything the oracle derives from exhaustive geodesic enumeration.
pub struct OracleMetrics {
    pub dist_sum: u64,
    pub reachable_pairs: u64,
    pub tspc: u64,
    /// Geodesic count per ordered (source, target) pair.
    pub sigma: BTreeMap<(u32, u32), u64>,
    pub nbc: BTreeMap<u32, f64>,
    pub ebc: BTreeMap<(u32, u32), f64>,
}

/// Floyd-Warshall hop distances over live vertices; deliberately not BFS so
/// the oracle shares no algorithmic path with the implementation.
fn fw_distances(g: &Graph) -> Vec<Vec<Option<u64>>> {
    let n = g.n();
    let mut dist: Vec<Vec<Option<u64>>> = vec![vec![None; n]; n];
    for v in g.live_vertices() {
        dist[v as usize][v as usize] = Some(0);
    }
    for (u, v) in g.edges() {
        dist[u as usize][v as usize] = Some(1);
        dist[v as usize][u as usize] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            let Some(dik) = dist[i][k] else { continue };
            for j in 0..n {
                let Some(dkj) = dist[k][j] else { continue };
                let through = dik + dkj;
                if dist[i][j].is_none_or(|d| through < d) {
                    dist[i][j] = Some(through);
                }
            }
        }
    }
    dist
}

/// All geodesics from x to y as vertex sequences, by depth-first extension
/// along distance-decreasing neighbors.
fn enumerate_geodesics(
    g: &Graph,
    dist: &[Vec<Option<u64>>],
    x: u32,
    y: u32,
) -> Vec<Vec<u32>> {
    let mut paths = Vec::new();
    let mut current = vec![x];
    fn extend(
        g: &Graph,
        dist: &[Vec<Option<u64>>],
        y: u32,
        current: &mut Vec<u32>,
        paths: &mut Vec<Vec<u32>>,
    ) {
        let u = *current.last().expect("non-empty path");
        if u == y {
            paths.push(current.clone());
            return;
        }
        let remaining = dist[u as usize][y as usize].expect("reachable");
        for w in g.neighbors(u) {
            if dist[w as usize][y as usize] == Some(remaining - 1) {
                current.push(w);
                extend(g, dist, y, current, paths);
                current.pop();
            }
        }
    }
    extend(g, dist, y, &mut current, &mut paths);
    paths
}

pub fn oracle_metrics(g: &Graph) -> OracleMetrics {
    let dist = fw_distances(g);
    let live: Vec<u32> = g.live_vertices().collect();
    let mut out = OracleMetrics {
        dist_sum: 0,
        reachable_pairs: 0,
        tspc: 0,
        sigma: BTreeMap::new(),
        nbc: live.iter().map(|&v| (v, 0.0)).collect(),
        ebc: g.edges().map(|e| (e, 0.0)).collect(),
    };
    for (i, &x) in live.iter().enumerate() {
        for &y in &live[i + 1..] {
            let Some(d) = dist[x as usize][y as usize] else {
                out.sigma.insert((x, y), 0);
                out.sigma.insert((y, x), 0);
                continue;
            };
            let paths = enumerate_geodesics(g, &dist, x, y);
            let sigma = paths.len() as u64;
            assert!(sigma >= 1, "reachable pair without a geodesic");
            out.dist_sum += d;
            out.reachable_pairs += 1;
            out.tspc += sigma;
            out.sigma.insert((x, y), sigma);
            out.sigma.insert((y, x), sigma);

            let mut through_node: BTreeMap<u32, u64> = BTreeMap::new();
            let mut through_edge: BTreeMap<(u32, u32), u64> = BTreeMap::new();
            for path in &paths {
                for &v in &path[1..path.len() - 1] {
                    *through_node.entry(v).or_insert(0) += 1;
                }
                for pair in path.windows(2) {
                    let e = if pair[0] < pair[1] {
                        (pair[0], pair[1])
                    } else {
                        (pair[1], pair[0])
                    };
                    *through_edge.entry(e).or_insert(0) += 1;
                }
            }
            for (v, count) in through_node {
                *out.nbc.get_mut(&v).expect("live vertex") += count as f64 / sigma as f64;
            }
            for (e, count) in through_edge {
                *out.ebc.get_mut(&e).expect("graph edge") += count as f64 / sigma as f64;
            }
        }
    }
    out
}

/// A random small graph: n in 2..=8, random density, sometimes with dead
/// vertices, fully determined by the seed.
pub fn random_small_graph(seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=8);
    let p = rng.gen_range(0.15..0.85);
    let mut g = Graph::new(n);
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if rng.gen_bool(p) {
                g.insert_edge(u, v).unwrap();
            }
        }
    }
    // Kill up to two vertices in a third of the graphs.
    if n > 3 && rng.gen_bool(0.33) {
        let kills = rng.gen_range(1..=2);
        for _ in 0..kills {
            let v = rng.gen_range(0..n as u32);
            if g.is_live(v) {
                g.kill_vertex(v).unwrap();
            }
        }
    }
    g
}

/// A random layered state that usually violates the dependency invariant,
/// for exercising propagation against the naive fixpoint.
pub fn random_layered_state(seed: u64) -> LayeredNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(4..=10);
    let mut layers = Vec::with_capacity(3);
    for p in [0.25, 0.4, 0.5] {
        let mut g = Graph::new(n);
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                if rng.gen_bool(p) {
                    g.insert_edge(u, v).unwrap();
                }
            }
        }
        layers.push(g);
    }
    // Dead vertices must be dead in every layer.
    if rng.gen_bool(0.4) {
        let v = rng.gen_range(0..n as u32);
        for g in &mut layers {
            g.kill_vertex(v).unwrap();
        }
    }
    let mut it = layers.into_iter();
    LayeredNetwork::from_parts(
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    )
    .unwrap()
}

/// Component labels from an edge list, by label propagation until stable;
/// independent of the library's BFS-based components().
fn naive_components(n: usize, live: &[bool], edges: &[(u32, u32)]) -> Vec<usize> {
    let mut comp: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for &(u, v) in edges {
            let (cu, cv) = (comp[u as usize], comp[v as usize]);
            if cu != cv {
                let c = cu.min(cv);
                comp[u as usize] = c;
                comp[v as usize] = c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for (v, &alive) in live.iter().enumerate() {
        if !alive {
            comp[v] = usize::MAX;
        }
    }
    comp
}

/// Repeatedly prune upper-layer edges whose endpoints fall in different
/// lower-layer components until nothing changes; returns the surviving
/// (l2, l3) edge sets.
pub fn naive_prune_fixpoint(net: &LayeredNetwork) -> (Vec<(u32, u32)>, Vec<(u32, u32)>) {
    let n = net.n();
    let live: Vec<bool> = (0..n as u32).map(|v| net.l1().is_live(v)).collect();
    let l1_edges: Vec<(u32, u32)> = net.l1().edges().collect();
    let mut l2_edges: Vec<(u32, u32)> = net.l2().edges().collect();
    let mut l3_edges: Vec<(u32, u32)> = net.l3().edges().collect();
    loop {
        let mut changed = false;
        let l1_comp = naive_components(n, &live, &l1_edges);
        let kept: Vec<(u32, u32)> = l2_edges
            .iter()
            .copied()
            .filter(|&(u, v)| l1_comp[u as usize] == l1_comp[v as usize])
            .collect();
        if kept.len() != l2_edges.len() {
            changed = true;
            l2_edges = kept;
        }
        let l2_comp = naive_components(n, &live, &l2_edges);
        let kept: Vec<(u32, u32)> = l3_edges
            .iter()
            .copied()
            .filter(|&(u, v)| l2_comp[u as usize] == l2_comp[v as usize])
            .collect();
        if kept.len() != l3_edges.len() {
            changed = true;
            l3_edges = kept;
        }
        if !changed {
            return (l2_edges, l3_edges);
        }
    }
}

/// Spearman rank correlation with tie-averaged ranks.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rx = ranks(xs);
    let ry = ranks(ys);
    pearson(&rx, &ry)
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx).powi(2);
        vy += (y - my).powi(2);
    }
    cov / (vx.sqrt() * vy.sqrt())
}

/// Population standard deviation of consecutive differences.
pub fn diff_dispersion(values: &[f64]) -> f64 {
    assert!(values.len() >= 2, "need at least one difference");
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / diffs.len() as f64;
    var.sqrt()
}
