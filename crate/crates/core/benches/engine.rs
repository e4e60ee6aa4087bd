use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rectsimplex::normality::{is_normal_with, is_very_ample_with};
use rectsimplex::{EngineConfig, Exec, RectSimplex};

fn engine(c: &mut Criterion) {
    let mut g = c.benchmark_group("is_normal");
    g.sample_size(10);
    for lambda in [vec![3u64, 7, 11, 23], vec![5, 11, 23, 29], vec![4, 9, 10, 11, 12]] {
        let s = RectSimplex::new(lambda).unwrap();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let cfg = EngineConfig::enumeration_only().with_exec(exec);
            g.bench_with_input(BenchmarkId::new(format!("{exec:?}"), &s), &s, |b, s| {
                b.iter(|| is_normal_with(s, &cfg).unwrap())
            });
        }
    }
    g.finish();

    let mut g = c.benchmark_group("is_very_ample");
    g.sample_size(10);
    for lambda in [vec![2u64, 3, 5], vec![6, 10, 15, 21], vec![12, 18, 30, 45]] {
        let s = RectSimplex::new(lambda).unwrap();
        let cfg = EngineConfig::enumeration_only();
        g.bench_with_input(BenchmarkId::from_parameter(&s), &s, |b, s| {
            b.iter(|| is_very_ample_with(s, &cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, engine);
criterion_main!(benches);
