//! Sequential vs rayon-parallel timings for the per-source betweenness
//! kernels and for replicate fan-out in a dynamic scenario.
//!
//! Both paths produce bit-identical results (fixed-order reduction); these
//! benches measure what the `parallel` feature actually buys on this
//! machine. Build with `--no-default-features` to time the pure-sequential
//! core: the comparison groups then collapse to the sequential path only.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mlcn::centrality::{
    edge_betweenness, edge_betweenness_seq, node_betweenness, node_betweenness_seq,
};
use mlcn::gen::{gen_er_min_degree, gen_scale_free};
use mlcn::graph::Graph;
use mlcn::scenario::{run_scenario, Mode, ScenarioConfig};
use mlcn::MlcnConfig;

fn bench_graphs() -> Vec<(&'static str, Graph)> {
    let er = gen_er_min_degree(100, 0.04, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
    let ba = gen_scale_free(100, 25, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
    let er_large = gen_er_min_degree(300, 0.02, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
    vec![("er100", er), ("ba100", ba), ("er300", er_large)]
}

fn betweenness(c: &mut Criterion) {
    for (name, g) in bench_graphs() {
        let mut group = c.benchmark_group(format!("node_betweenness/{name}"));
        group.bench_function("seq", |b| b.iter(|| node_betweenness_seq(&g)));
        group.bench_function("par", |b| b.iter(|| node_betweenness(&g)));
        group.finish();

        let mut group = c.benchmark_group(format!("edge_betweenness/{name}"));
        group.bench_function("seq", |b| b.iter(|| edge_betweenness_seq(&g)));
        group.bench_function("par", |b| b.iter(|| edge_betweenness(&g)));
        group.finish();
    }
}

fn scenario_cfg(replicates: usize) -> ScenarioConfig {
    ScenarioConfig {
        mlcn: MlcnConfig::default(),
        mode: Mode::Debc,
        failures: 15,
        seed: 5,
        replicates,
    }
}

#[cfg(feature = "parallel")]
fn replicate_fanout(c: &mut Criterion) {
    let mut group = c.benchmark_group("debc_replicates");
    group.sample_size(10);
    for threads in [1usize, 2, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(threads), &threads, |b, _| {
            b.iter(|| pool.install(|| run_scenario(&scenario_cfg(4)).unwrap()))
        });
    }
    group.finish();
}

#[cfg(not(feature = "parallel"))]
fn replicate_fanout(c: &mut Criterion) {
    let mut group = c.benchmark_group("debc_replicates");
    group.sample_size(10);
    group.bench_with_input(BenchmarkId::from_parameter(1usize), &1usize, |b, _| {
        b.iter(|| run_scenario(&scenario_cfg(4)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, betweenness, replicate_fanout);
criterion_main!(benches);
