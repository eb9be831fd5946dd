use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use circwl::closure::{wl_closure_with, Digraph};
use circwl::families::{family_graph, FamilySpec};
use circwl::par::Exec;
use circwl::sring::schur_wielandt_closure;

fn closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("closure");
    group.sample_size(10);
    let cases = [
        FamilySpec::F2 { k: 7 },
        FamilySpec::G6 { p: 29 },
        FamilySpec::F1 { p: 7, q: 11 },
    ];
    for spec in cases {
        let (n, s) = family_graph(&spec).unwrap();
        let g = Digraph::cayley(&s).unwrap();
        for exec in [Exec::Sequential, Exec::Parallel] {
            group.bench_with_input(BenchmarkId::new(format!("wl/{exec:?}"), spec), &g, |b, g| {
                b.iter(|| black_box(wl_closure_with(g, exec).rank()))
            });
        }
        group.bench_with_input(BenchmarkId::new("schur-wielandt", spec), &s, |b, s| {
            b.iter(|| black_box(schur_wielandt_closure(n, s).unwrap().rank()))
        });
    }
    group.finish();
}

criterion_group!(benches, closure);
criterion_main!(benches);
