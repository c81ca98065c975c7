use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;

use tracehom::{analyze, smith_normal_form, AnalyzeOptions, InputKind, ScopeChoice, SparseIntMatrix};
use tracehom_bench::{chain_net, XorShift};

fn bench_chain_net_analysis(c: &mut Criterion) {
    let mut group = c.benchmark_group("analyze_chain_net");
    group.sample_size(20);
    for stages in [3usize, 4, 5, 6] {
        let net = chain_net(stages);
        let options = AnalyzeOptions {
            scope: ScopeChoice::ReachableFromInitial,
            max_dim: None,
        };
        group.bench_with_input(BenchmarkId::from_parameter(stages), &stages, |b, _| {
            b.iter(|| {
                let sys = net.compile();
                let analysis = analyze(&sys, InputKind::Net, &options).unwrap();
                black_box(analysis.report.homology.len())
            })
        });
    }
    group.finish();
}

fn random_sign_matrix(rows: usize, cols: usize, fill_per_col: usize, seed: u64) -> SparseIntMatrix {
    let mut rng = XorShift(seed);
    let mut triplets = Vec::new();
    for c in 0..cols {
        for _ in 0..fill_per_col {
            let r = (rng.next_u64() as usize) % rows;
            let sign = if rng.next_u64() & 1 == 0 { 1 } else { -1 };
            triplets.push((r, c, BigInt::from(sign)));
        }
    }
    SparseIntMatrix::from_triplets(rows, cols, triplets).unwrap()
}

fn bench_smith_normal_form(c: &mut Criterion) {
    let mut group = c.benchmark_group("smith_normal_form");
    group.sample_size(20);
    for (rows, cols) in [(30usize, 60usize), (60, 120)] {
        let matrix = random_sign_matrix(rows, cols, 4, 0x5eed);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{rows}x{cols}")),
            &matrix,
            |b, m| b.iter(|| black_box(smith_normal_form(m).rank)),
        );
    }
    group.finish();
}

fn bench_normal_form(c: &mut Criterion) {
    use tracehom::trace::{EventId, IndependenceRelation, Word};
    // Six letters, independence on alternating pairs; 240-letter word.
    let pairs = (0..6)
        .flat_map(|a| (a + 1..6).filter(move |b| (a + b) % 2 == 1).map(move |b| (EventId(a), EventId(b))))
        .collect::<Vec<_>>();
    let rel = IndependenceRelation::new(6, pairs).unwrap();
    let mut rng = XorShift(7);
    let word = Word((0..240).map(|_| EventId((rng.next_u64() % 6) as usize)).collect());
    c.bench_function("trace_normal_form_240", |b| {
        b.iter(|| black_box(rel.normal_form(&word).len()))
    });
}

criterion_group!(
    benches,
    bench_chain_net_analysis,
    bench_smith_normal_form,
    bench_normal_form
);
criterion_main!(benches);
