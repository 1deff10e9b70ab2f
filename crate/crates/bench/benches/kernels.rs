use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use circmaj_core::exact::{echelon, rank};
use circmaj_core::geninv::{drazin, moore_penrose};
use circmaj_core::preserver::random_preserver;
use circmaj_core::random::{combination, dense_operator, int_matrix, trial_rng};
use circmaj_core::{decide_h, decide_hc, decide_hc_preserver};

fn elimination(c: &mut Criterion) {
    let mut group = c.benchmark_group("elimination");
    for n in [3, 4, 5] {
        let t = dense_operator(&mut trial_rng(0, n as u64), n, -3, 3);
        group.bench_with_input(BenchmarkId::new("rank", n * n), t.rep(), |b, a| b.iter(|| rank(a)));
        group.bench_with_input(BenchmarkId::new("echelon", n * n), t.rep(), |b, a| b.iter(|| echelon(a)));
    }
    group.finish();
}

fn inverses(c: &mut Criterion) {
    let mut group = c.benchmark_group("inverses");
    for n in [3, 4, 5] {
        let t = random_preserver(&mut trial_rng(1, n as u64), n, None).unwrap();
        group.bench_with_input(BenchmarkId::new("moore_penrose", n), &t, |b, t| b.iter(|| moore_penrose(t)));
        group.bench_with_input(BenchmarkId::new("drazin", n), &t, |b, t| b.iter(|| drazin(t)));
    }
    group.finish();
}

fn decisions(c: &mut Criterion) {
    let mut group = c.benchmark_group("decisions");
    for n in [3, 5, 8] {
        let mut rng = trial_rng(2, n as u64);
        let y = int_matrix(&mut rng, n, -3, 3);
        let x = combination(&mut rng, n).to_matrix().hadamard(&y).unwrap();
        group.bench_with_input(BenchmarkId::new("decide_hc", n), &(&x, &y), |b, (x, y)| {
            b.iter(|| decide_hc(x, y).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("decide_h", n), &(&x, &y), |b, (x, y)| {
            b.iter(|| decide_h(x, y).unwrap())
        });
    }
    for n in [3, 4, 5] {
        let mut rng = trial_rng(3, n as u64);
        let t = random_preserver(&mut rng, n, None).unwrap();
        let dense = dense_operator(&mut rng, n, -3, 3);
        group.bench_with_input(BenchmarkId::new("preserver_accept", n), &t, |b, t| {
            b.iter(|| decide_hc_preserver(t))
        });
        group.bench_with_input(BenchmarkId::new("preserver_reject", n), &dense, |b, t| {
            b.iter(|| decide_hc_preserver(t))
        });
    }
    group.finish();
}

criterion_group!(benches, elimination, inverses, decisions);
criterion_main!(benches);
