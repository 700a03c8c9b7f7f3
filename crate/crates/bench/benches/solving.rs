use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use setsat::sgp::{build_instance, SgpConfig, SgpVariant};
use setsat::{solve_internal, unit_propagate, Budget};

fn internal(c: &mut Criterion) {
    let mut group = c.benchmark_group("internal-solve");
    group.sample_size(10);
    for (g, p, w) in [(5, 3, 6), (5, 3, 7)] {
        let config = SgpConfig::new(g, p, w).unwrap();
        for v in [SgpVariant::SCE_SBM, SgpVariant::SCE_SBC] {
            let formula = unit_propagate(&build_instance(config, v).unwrap().formula).formula;
            group.bench_function(BenchmarkId::new(format!("{}_UP", v.name()), config), |b| {
                b.iter(|| black_box(solve_internal(&formula, Budget::seconds(120)).status))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, internal);
criterion_main!(benches);
