use std::f64::consts::FRAC_PI_2;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qcm_core::boolnet::{CircuitBuilder, DEFAULT_VAR_CAP};
use qcm_core::engines::{continuous_evolve, zeno_convergence_scan, Drive};
use qcm_core::fixtures;
use qcm_core::hilbert::constraint_projector;
use qcm_core::protocol::{prepare_state9, random_loop_network, solve_sat, SolveOptions};
use qcm_core::{BasisState, BoolNetwork, StateVector, VarId};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `y` is the AND of `m` inputs: one solution among `2^m` assignments.
fn and_net(m: usize) -> BoolNetwork {
    let mut b = CircuitBuilder::new(m);
    let inputs: Vec<VarId> = (0..m).map(VarId).collect();
    let y = b.and_all(&inputs);
    b.finish(y).unwrap()
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("brute_force");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [8, 12, 16] {
        let net = random_loop_network(&mut rng, n, n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &net, |b, net| {
            b.iter(|| net.brute_force_solutions(DEFAULT_VAR_CAP).unwrap())
        });
    }
    g.finish();
}

fn projector(c: &mut Criterion) {
    let mut g = c.benchmark_group("constraint_projector");
    for m in [6, 10, 14] {
        let net = and_net(m);
        g.bench_with_input(BenchmarkId::from_parameter(m), &net, |b, net| {
            b.iter(|| constraint_projector(black_box(net), false).unwrap())
        });
    }
    g.finish();
}

fn continuous(c: &mut Criterion) {
    let mut g = c.benchmark_group("continuous_sweep");
    for m in [6, 10, 14] {
        let net = and_net(m);
        let p = constraint_projector(&net, false).unwrap();
        let prepared = prepare_state9(&net).unwrap();
        let drive = Drive::for_angle(prepared.y, 1.0, FRAC_PI_2).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(m), &prepared.state, |b, s| {
            b.iter(|| continuous_evolve(s, &p, &drive, 4).unwrap())
        });
    }
    g.finish();
}

fn zeno(c: &mut Criterion) {
    let net = fixtures::identity();
    let p = constraint_projector(&net, false).unwrap();
    let initial = StateVector::basis(BasisState::parse("00").unwrap());
    let drive = Drive::for_angle(VarId(1), 1.0, FRAC_PI_2).unwrap();
    let counts: Vec<usize> = (0..=10).map(|k| 1 << k).collect();
    c.bench_function("zeno_scan_identity_1_to_1024", |b| {
        b.iter(|| zeno_convergence_scan(&initial, &p, &drive, black_box(&counts)).unwrap())
    });
}

fn solve(c: &mut Criterion) {
    let net = fixtures::fig1_open();
    let opts = SolveOptions {
        max_trials: 1000,
        seed: 0,
        stop_at_first: false,
    };
    c.bench_function("solve_fig1_open_1000_trials", |b| {
        b.iter(|| solve_sat(&net, "fig1-open", opts).unwrap())
    });
}

criterion_group!(benches, oracle, projector, continuous, zeno, solve);
criterion_main!(benches);
