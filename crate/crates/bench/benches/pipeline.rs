use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use surfcoh_bench::{code, matching, simulator};
use surfcoh_core::majorana::encode;
use surfcoh_core::sampler::RotationProfile;
use surfcoh_core::sweep::sample_rng;
use surfcoh_core::twirl::run_twirl_trial;
use surfcoh_core::LatticeFamily;

const ETA: f64 = 0.1 * PI;

fn bench_encode(c: &mut Criterion) {
    let mut g = c.benchmark_group("encode");
    for (fam, size) in [(LatticeFamily::Square, 9), (LatticeFamily::Hexagonal, 9)] {
        let code = code(fam, size);
        g.bench_with_input(BenchmarkId::new(fam.name(), code.n), &code, |b, code| b.iter(|| encode(black_box(code)).unwrap()));
    }
    g.finish();
}

fn bench_coherent_sample(c: &mut Criterion) {
    let mut g = c.benchmark_group("coherent_sample");
    g.sample_size(20);
    for (fam, size) in [(LatticeFamily::Square, 7), (LatticeFamily::Square, 13), (LatticeFamily::Hexagonal, 11)] {
        let sim = simulator(fam, size);
        let profile = RotationProfile::uniform(sim.code.n, ETA);
        let mut i = 0;
        g.bench_function(BenchmarkId::new(fam.name(), sim.code.n), |b| {
            b.iter(|| {
                i += 1;
                sim.sample(&profile, &mut sample_rng(1, 2, i)).unwrap()
            })
        });
    }
    g.finish();
}

fn bench_twirl_trial(c: &mut Criterion) {
    let mut g = c.benchmark_group("twirl_trial");
    for size in [9, 17] {
        let code = code(LatticeFamily::Square, size);
        let ctx = matching(&code);
        let mut i = 0;
        g.bench_function(BenchmarkId::new("square", code.n), |b| {
            b.iter(|| {
                i += 1;
                run_twirl_trial(&code, &ctx, ETA, &mut sample_rng(3, 4, i)).unwrap().failed
            })
        });
    }
    g.finish();
}

criterion_group!(benches, bench_encode, bench_coherent_sample, bench_twirl_trial);
criterion_main!(benches);
