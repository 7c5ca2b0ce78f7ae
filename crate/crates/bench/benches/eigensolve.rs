use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use drumhead::spectral::{smallest_eigenpairs_with, Preconditioner, SolverOptions, SparseCholesky};
use drumhead_bench::{laplacian, sawtooth_square, unit_square};
use std::hint::black_box;

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigensolve");
    group.sample_size(10);
    let (g, a) = laplacian(&unit_square(), 1.0 / 64.0);
    let g = Arc::new(g);
    for (label, pre) in [
        ("exact", Preconditioner::Exact),
        ("mic0", Preconditioner::Incomplete { omega: 0.95 }),
    ] {
        let opts = SolverOptions { preconditioner: pre, ..SolverOptions::default() };
        group.bench_function(format!("square_h1/64_k4_{label}"), |b| {
            b.iter(|| smallest_eigenpairs_with(black_box(&a), g.clone(), 4, opts).unwrap())
        });
    }
    let (gs, s) = laplacian(&sawtooth_square(), 1.0 / 64.0);
    let gs = Arc::new(gs);
    group.bench_function("sawtooth_h1/64_k20_exact", |b| {
        b.iter(|| smallest_eigenpairs_with(black_box(&s), gs.clone(), 20, SolverOptions::default()).unwrap())
    });
    group.finish();
}

fn factor(c: &mut Criterion) {
    let (g, a) = laplacian(&unit_square(), 1.0 / 128.0);
    let coords: Vec<(i64, i64)> = (0..g.len()).map(|k| g.lattice(k)).collect();
    let perm = drumhead::spectral::lattice_nested_dissection(&coords);
    c.bench_function("cholesky_nested_dissection_square_h1/128", |b| {
        b.iter(|| SparseCholesky::new(black_box(&a), Some(perm.clone())).unwrap())
    });
}

criterion_group!(benches, solve, factor);
criterion_main!(benches);
