use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use farey_core::dynamics::{constant_a, empirical_corr, CPolicy};
use farey_core::farey::{farey_stream, index_stream};
use farey_core::moments::{decompose_check, moment_direct_with, MomentMethod, MomentQuery};
use farey_core::BFreeSpec;

fn streams(c: &mut Criterion) {
    let mut g = c.benchmark_group("stream");
    for q in [500u64, 2000] {
        let n = farey_core::dynamics::farey_length(q).unwrap();
        g.bench_with_input(BenchmarkId::new("index", q), &q, |b, &q| {
            b.iter(|| index_stream(q, n).unwrap().map(|(_, nu)| nu as u64).sum::<u64>())
        });
        g.bench_with_input(BenchmarkId::new("windows", q), &q, |b, &q| {
            b.iter(|| farey_stream(q).unwrap().map(|w| w.cur.den).sum::<u64>())
        });
    }
    g.finish();
}

fn moments(c: &mut Criterion) {
    let mut g = c.benchmark_group("moments");
    let b2 = BFreeSpec::primes(vec![2]).unwrap();
    for (name, method) in [("closed", MomentMethod::ClosedForm), ("enumeration", MomentMethod::Enumeration)] {
        let query = MomentQuery::new(3, 2000, b2.clone(), 3, 1).unwrap();
        g.bench_function(name, |b| b.iter(|| moment_direct_with(black_box(&query), method).unwrap()));
    }
    g.bench_function("decompose_l2_k12", |b| b.iter(|| decompose_check(2, 200, &b2, 12, 5).unwrap()));
    g.finish();
}

fn dynamics(c: &mut Criterion) {
    let mut g = c.benchmark_group("dynamics");
    g.sample_size(10);
    for h in [1u64, 2, 3] {
        g.bench_with_input(BenchmarkId::new("constant_a", h), &h, |b, &h| b.iter(|| constant_a(&[h], CPolicy::Lemma).unwrap()));
    }
    g.bench_function("corr_h1_q1000", |b| b.iter(|| empirical_corr(&[1], 1000, None).unwrap()));
    g.finish();
}

criterion_group!(benches, streams, moments, dynamics);
criterion_main!(benches);
