use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use qlm_core::{
    apply_gate, apply_hamiltonian, build_zero_momentum_hamiltonian, eigendecompose, random_schedule, Chain,
};

fn gates(c: &mut Criterion) {
    let chain = Chain::new(40).unwrap();
    let psi = chain.to_full(&chain.vacuum()).unwrap();
    let sched = random_schedule(7, 0, 1, 40, 0.1);
    c.bench_function("trotter step L=40 (20 gates)", |b| {
        b.iter_batched(
            || psi.clone(),
            |mut s| {
                for &j in sched.gates() {
                    apply_gate(chain.gates(), &mut s, j as usize, 0.1).unwrap();
                }
                s
            },
            BatchSize::LargeInput,
        )
    });
    c.bench_function("apply_hamiltonian L=40", |b| {
        b.iter(|| apply_hamiltonian(chain.gates(), black_box(&psi)).unwrap())
    });
    c.bench_function("half-chain entropy L=40", |b| b.iter(|| chain.half_cut().entropy(black_box(&psi)).unwrap()));
}

fn spectrum(c: &mut Criterion) {
    let chain = Chain::new(28).unwrap();
    let h = build_zero_momentum_hamiltonian(chain.basis(), chain.sector());
    let mut group = c.benchmark_group("eigendecompose");
    group.sample_size(10);
    group.bench_function(format!("L=28 (dim {})", h.dim()), |b| b.iter(|| eigendecompose(black_box(&h)).unwrap()));
    group.finish();
}

fn basis(c: &mut Criterion) {
    c.bench_function("Chain::new L=40", |b| b.iter(|| Chain::new(black_box(40)).unwrap()));
}

criterion_group!(benches, gates, spectrum, basis);
criterion_main!(benches);
