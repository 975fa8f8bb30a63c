use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gft_core::exponential::exp_imag;
use gft_core::theorems::{random_multivector, random_supported_field};
use gft_core::transform::default_freqs;
use gft_core::{gft, Grid, Multivector, Preset, Signature};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn geometric_product(c: &mut Criterion) {
    let mut group = c.benchmark_group("gp");
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (p, q) in [(2, 0), (3, 1), (4, 0), (3, 3)] {
        let s = Signature::new(p, q).unwrap();
        let (x, y) = (random_multivector(s, &mut rng), random_multivector(s, &mut rng));
        group.bench_with_input(BenchmarkId::from_parameter(s), &(x, y), |b, (x, y)| b.iter(|| x.gp(y)));
    }
    group.finish();
}

fn exponential(c: &mut Criterion) {
    let s = Signature::new(3, 1).unwrap();
    let f = Multivector::parse(s, "0.3*e12 + 1.1*e13").unwrap();
    c.bench_function("exp_imag G(3,1)", |b| b.iter(|| exp_imag(&f, 1e-10).unwrap()));
}

fn transform(c: &mut Criterion) {
    let mut group = c.benchmark_group("gft");
    group.sample_size(10);
    for (preset, n) in
        [("clifford:2", 16), ("quaternionic", 16), ("color-image", 8), ("clifford:3", 6), ("spacetime", 4)]
    {
        let spec: Preset = preset.parse().unwrap();
        let spec = spec.build().unwrap();
        let grid = Grid::centered(spec.dim(), n).unwrap();
        let freqs = default_freqs(&grid, 1.0).unwrap();
        let field = random_supported_field(spec.sig(), &grid, &mut ChaCha8Rng::seed_from_u64(1));
        group.bench_function(BenchmarkId::new(preset, grid.len()), |b| b.iter(|| gft(&spec, &field, &freqs).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, geometric_product, exponential, transform);
criterion_main!(benches);
