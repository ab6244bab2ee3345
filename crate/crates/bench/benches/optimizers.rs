//! Hot-path benchmarks: the clock optimizer, the joint placement/rate/clock
//! optimizer on wired and wireless ingress, a full request batch, and the
//! slotted age simulator.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};
use fog2c_bench::{
    campus_workload, device_request, edge_campus, reference_cpu, sensing_pipeline, two_fog,
    wired_ingress_request,
};
use fog2c_core::models::optimal_frequency;
use fog2c_core::{optimize_full, simulate, AccountingScope, Strategy};

fn clock_optimizer(c: &mut Criterion) {
    let cpu = reference_cpu();
    c.bench_function("clock_optimizer", |b| {
        b.iter(|| optimal_frequency(black_box(&cpu), black_box(8e8), black_box(0.4)).unwrap())
    });
}

fn joint_optimizer(c: &mut Criterion) {
    let wired = two_fog();
    let wired_req = wired_ingress_request();
    let campus = edge_campus();
    let campus_req = device_request();
    let mut rng = fog2c_core::seed::stream(0, "bench");
    c.bench_function("joint_optimizer_wired_ingress", |b| {
        b.iter(|| {
            optimize_full(
                black_box(&wired_req),
                &wired,
                AccountingScope::FOG_CLOUD,
                &mut rng,
            )
            .unwrap()
        })
    });
    c.bench_function("joint_optimizer_wireless_ingress", |b| {
        b.iter(|| {
            optimize_full(black_box(&campus_req), &campus, AccountingScope::ALL, &mut rng)
                .unwrap()
        })
    });
}

fn request_batch(c: &mut Criterion) {
    let topo = edge_campus();
    let requests = campus_workload(1000);
    let strategies =
        [Strategy::FullOpt, Strategy::Collocated, Strategy::NearestOptFreq];
    let mut group = c.benchmark_group("batch");
    group.sample_size(10).measurement_time(Duration::from_secs(10));
    group.bench_function("1000_requests_3_strategies", |b| {
        b.iter(|| {
            fog2c_core::run_scenario(
                black_box(&requests),
                &topo,
                &strategies,
                AccountingScope::ALL,
                7,
            )
            .unwrap()
        })
    });
    group.finish();
}

fn age_simulator(c: &mut Criterion) {
    let near_optimum = sensing_pipeline(953.0);
    c.bench_function("age_simulate_30s_horizon", |b| {
        b.iter(|| simulate(black_box(&near_optimum)).unwrap())
    });
}

criterion_group!(benches, clock_optimizer, joint_optimizer, request_batch, age_simulator);
criterion_main!(benches);
