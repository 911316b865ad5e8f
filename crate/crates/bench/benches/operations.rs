use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use lambda_forge::operations::{additive_to_gamma, star_compose};
use lambda_forge::towers::{sigma, tower_lift_to_depth};
use lambda_forge::scalar::rat;
use lambda_forge::{BaseSpace, ScalarDomain, TruncSeries};
use lambda_forge_bench::{element, op_pair};

fn star(c: &mut Criterion) {
    let mut g = c.benchmark_group("star_compose");
    for n in [8usize, 16, 32] {
        let (f, h) = op_pair(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| star_compose(black_box(&f), black_box(&h)).unwrap())
        });
    }
    g.finish();
}

fn lambda(c: &mut Criterion) {
    let mut g = c.benchmark_group("lambda_series");
    for dims in [vec![3u32], vec![2, 2], vec![5]] {
        let s = BaseSpace::product(&dims);
        let x = element(&s, 4);
        g.bench_with_input(BenchmarkId::from_parameter(s.to_string()), &x, |b, x| {
            b.iter(|| x.lambda_series_nf(6).unwrap())
        });
    }
    g.finish();
}

fn gamma(c: &mut Criterion) {
    let (f, _) = op_pair(10);
    let mut coeffs = f.series().coeffs().to_vec();
    coeffs[0] = rat(0);
    let f = lambda_forge::AdditiveOpSeries::new(TruncSeries::new(ScalarDomain::Integers, coeffs).unwrap()).unwrap();
    c.bench_function("additive_to_gamma/10", |b| b.iter(|| additive_to_gamma(black_box(&f), 10).unwrap()));
}

fn towers(c: &mut Criterion) {
    let geo: Vec<i64> = (0..=24).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    let f = TruncSeries::from_ints(ScalarDomain::Integers, &geo).unwrap();
    c.bench_function("tower_lift/24x20", |b| b.iter(|| tower_lift_to_depth(black_box(&f), 20).unwrap()));
    let a: Vec<_> = (0..=24).map(|n| rat(1 << (n % 10))).collect();
    c.bench_function("sigma/24", |b| b.iter(|| sigma(black_box(&a), 24).unwrap()));
}

criterion_group!(benches, star, lambda, gamma, towers);
criterion_main!(benches);
