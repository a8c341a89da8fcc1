use criterion::{black_box, criterion_group, criterion_main, Criterion};
use stretchlab::graph::{gamma_bar_girth_implicit, verify_girth_lemma};

fn girth(c: &mut Criterion) {
    c.bench_function("girth bfs (11, 40)", |b| b.iter(|| verify_girth_lemma(black_box(11), black_box(40)).unwrap()));
    c.bench_function("girth implicit (11, 40)", |b| {
        b.iter(|| gamma_bar_girth_implicit(black_box(11), black_box(40)).unwrap())
    });
    // nk ~ 1e8: only the implicit variant is feasible
    c.bench_function("girth implicit (9973, 10007)", |b| {
        b.iter(|| gamma_bar_girth_implicit(black_box(9973), black_box(10007)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = girth
}
criterion_main!(benches);
