use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mhdlab::inequality::{check_inequality, run_campaign, CampaignFamily, InequalityKind};
use mhdlab_bench::grid;

fn single_checks(c: &mut Criterion) {
    let family = CampaignFamily::new(&grid(128), 8, 1.0, 0);
    for kind in [
        InequalityKind::TrilinearAniso,
        InequalityKind::LogSobolev,
        InequalityKind::Commutator,
    ] {
        let inputs = family.sample_inputs(kind, 7).unwrap();
        let refs: Vec<_> = inputs.iter().collect();
        c.bench_function(&format!("check_{kind}_128"), |b| {
            b.iter(|| check_inequality(kind, black_box(&refs)).unwrap())
        });
    }
}

fn campaign(c: &mut Criterion) {
    let family = CampaignFamily::new(&grid(64), 8, 1.0, 0);
    let mut group = c.benchmark_group("campaign");
    group.sample_size(10);
    group.bench_function("ladyzhenskaya_64_x100", |b| {
        b.iter(|| run_campaign(InequalityKind::Ladyzhenskaya, black_box(&family), 100).unwrap())
    });
    group.finish();
}

criterion_group!(benches, single_checks, campaign);
criterion_main!(benches);
