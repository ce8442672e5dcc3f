use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use goodtrace::laurent::{fitting_check_with, LaurentPoly};
use goodtrace::polytope::Polytope;
use goodtrace::simplicial::{lifting_oracle_with, TraceVector};
use goodtrace::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn lifting_oracle(c: &mut Criterion) {
    let v = TraceVector::from_i64(&[1, 2, 3, 5, 9, 17]).unwrap();
    let mut group = c.benchmark_group("lifting_oracle");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| lifting_oracle_with(&v, 1, 5, exec).unwrap())
        });
    }
    group.finish();
}

fn fitting(c: &mut Criterion) {
    let p = LaurentPoly::from_terms(2, &[(&[0, 0], 2), (&[1, 0], 3), (&[0, 1], 5)]).unwrap();
    let circle = LaurentPoly::from_terms(
        2,
        &[
            (&[2, 0], 1),
            (&[1, 0], -6),
            (&[0, 2], 1),
            (&[0, 1], -6),
            (&[0, 0], 17),
        ],
    )
    .unwrap();
    let mut group = c.benchmark_group("fitting");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| fitting_check_with(&p, std::slice::from_ref(&circle), 32, exec).unwrap())
        });
    }
    group.finish();
}

fn vertex_lps(c: &mut Criterion) {
    let points: Vec<Vec<i64>> = (0..6)
        .flat_map(|i| (0..6).map(move |j| vec![i, j, (i * j) % 5]))
        .collect();
    let mut group = c.benchmark_group("vertex_lps");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| Polytope::new_with(points.clone(), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, lifting_oracle, fitting, vertex_lps);
criterion_main!(benches);
