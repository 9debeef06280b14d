//! Cross-checks against brute-force constructions written independently of
//! the library internals: dense operators on all 2^L strings, matrix
//! exponentials, explicit reduced density matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qlm_core::circuit::time_grid;
use qlm_core::{
    apply_gate, apply_hamiltonian, build_zero_momentum_hamiltonian, eigendecompose, exact_evolution, run_circuit,
    BasisKind, Chain, CircuitSchedule, Observables, SequentialOrder, StateVector,
};

fn bit(bits: u64, site: usize, len: usize) -> u64 {
    (bits >> ((site - 1) % len)) & 1
}

fn gauss_ok(bits: u64, len: usize) -> bool {
    (1..len).step_by(2).all(|j| {
        let left = bit(bits, if j == 1 { len } else { j - 1 }, len);
        bit(bits, j, len) + 1 == left + bit(bits, j + 1, len)
    })
}

/// `H_j` as a dense matrix over the physical strings found by scanning all 2^L.
fn dense_term(chain: &Chain, j: usize) -> DMatrix<Complex64> {
    let len = chain.sites();
    let d = chain.basis().dim();
    let sites = [2 * j - 1, 2 * j, 2 * j + 1];
    let mut h = DMatrix::zeros(d, d);
    for (x, c) in chain.basis().iter().enumerate() {
        let b = c.bits();
        let triple: Vec<u64> = sites.iter().map(|&s| bit(b, s, len)).collect();
        if triple.iter().all(|&t| t == triple[0]) {
            let flipped = sites.iter().fold(b, |acc, &s| acc ^ (1 << ((s - 1) % len)));
            let y = chain.basis().index_of(flipped).expect("flipped string is physical");
            h[(y, x)] = Complex64::new(1.0, 0.0);
        }
    }
    h
}

fn dense_hamiltonian(chain: &Chain) -> DMatrix<Complex64> {
    (1..=chain.sites() / 2)
        .map(|j| dense_term(chain, j))
        .fold(DMatrix::zeros(chain.basis().dim(), chain.basis().dim()), |acc, t| acc + t)
}

fn pseudo_random_state(dim: usize, seed: u64) -> StateVector {
    let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let amps = (0..dim).map(|_| Complex64::new(next(), next())).collect();
    let mut s = StateVector::new(BasisKind::Full, amps);
    s.normalize().unwrap();
    s
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn basis_matches_brute_force_scan() {
    for len in [4, 6, 8, 10, 12, 14, 16] {
        let chain = Chain::new(len).unwrap();
        let scan: Vec<u64> = (0..1u64 << len).filter(|&b| gauss_ok(b, len)).collect();
        assert_eq!(chain.basis().raw(), &scan[..], "L={len}");
    }
}

#[test]
fn gate_equals_matrix_exponential() {
    let chain = Chain::new(8).unwrap();
    assert_eq!(chain.basis().dim(), 7);
    let psi = pseudo_random_state(7, 1);
    for tau in [0.1, 0.7, 2.3] {
        for j in 1..=4 {
            let u = (dense_term(&chain, j) * Complex64::new(0.0, -tau)).exp();
            let expected = &u * DVector::from_column_slice(psi.amplitudes());
            let mut got = psi.clone();
            apply_gate(chain.gates(), &mut got, j, tau).unwrap();
            let err = max_diff(got.amplitudes(), expected.as_slice());
            assert!(err < 1e-12, "τ={tau} j={j} err={err:e}");
        }
    }
}

#[test]
fn hamiltonian_application_matches_dense() {
    for len in [8, 12] {
        let chain = Chain::new(len).unwrap();
        let h = dense_hamiltonian(&chain);
        let psi = pseudo_random_state(chain.basis().dim(), len as u64);
        let expected = &h * DVector::from_column_slice(psi.amplitudes());
        let got = apply_hamiltonian(chain.gates(), &psi).unwrap();
        assert!(max_diff(got.amplitudes(), expected.as_slice()) < 1e-13);
    }
}

#[test]
fn zero_momentum_hamiltonian_is_projected_full_hamiltonian() {
    for len in [8, 12] {
        let chain = Chain::new(len).unwrap();
        let d = chain.basis().dim();
        let k = chain.sector().dim();
        // isometry columns: normalized orbit sums built from explicit translations
        let mut p = DMatrix::<f64>::zeros(d, k);
        for (f, orbit) in chain.sector().orbits().iter().enumerate() {
            let mut members = vec![orbit.representative().bits()];
            loop {
                let last = *members.last().unwrap();
                let mask = (1u64 << len) - 1;
                let next = ((last << 2) | (last >> (len - 2))) & mask;
                if next == members[0] {
                    break;
                }
                members.push(next);
            }
            for m in &members {
                p[(chain.basis().index_of(*m).unwrap(), f)] = 1.0 / (members.len() as f64).sqrt();
            }
        }
        let h_full = dense_hamiltonian(&chain).map(|c| c.re);
        let projected = p.transpose() * h_full * &p;
        let h = build_zero_momentum_hamiltonian(chain.basis(), chain.sector());
        let err = (projected - h.matrix()).amax();
        assert!(err < 1e-12, "L={len} err={err:e}");
    }
}

#[test]
fn hamiltonian_commutes_with_translation() {
    let chain = Chain::new(16).unwrap();
    let basis = chain.basis();
    let len = 16;
    let translate = |s: &StateVector| {
        let mut out = StateVector::zeros(BasisKind::Full, basis.dim());
        for (i, c) in basis.iter().enumerate() {
            let t = basis.index_of(c.translate2().bits()).unwrap();
            out.amplitudes_mut()[t] = s.amplitudes()[i];
        }
        out
    };
    let psi = pseudo_random_state(basis.dim(), 7);
    let a = apply_hamiltonian(chain.gates(), &translate(&psi)).unwrap();
    let b = translate(&apply_hamiltonian(chain.gates(), &psi).unwrap());
    assert!(max_diff(a.amplitudes(), b.amplitudes()) < 1e-14);
    // a single gate is moved to its neighbour by the translation
    let mut g1 = translate(&psi);
    apply_gate(chain.gates(), &mut g1, 2, 0.3).unwrap();
    let mut g0 = psi.clone();
    apply_gate(chain.gates(), &mut g0, 1, 0.3).unwrap();
    assert!(max_diff(g1.amplitudes(), translate(&g0).amplitudes()) < 1e-14);
    assert_eq!(len / 2, chain.gates().gate_count());
}

#[test]
fn disjoint_gates_commute() {
    let chain = Chain::new(16).unwrap();
    let psi = pseudo_random_state(chain.basis().dim(), 3);
    for (j, k) in [(1, 3), (2, 5), (1, 7), (4, 8)] {
        let mut a = psi.clone();
        apply_gate(chain.gates(), &mut a, j, 0.4).unwrap();
        apply_gate(chain.gates(), &mut a, k, 0.9).unwrap();
        let mut b = psi.clone();
        apply_gate(chain.gates(), &mut b, k, 0.9).unwrap();
        apply_gate(chain.gates(), &mut b, j, 0.4).unwrap();
        assert!(max_diff(a.amplitudes(), b.amplitudes()) < 1e-12, "gates {j} and {k}");
    }
    // reversing the odd layer of a step changes nothing
    let mut a = psi.clone();
    let mut b = psi.clone();
    for j in [1, 3, 5, 7] {
        apply_gate(chain.gates(), &mut a, j, 0.2).unwrap();
    }
    for j in [7, 5, 3, 1] {
        apply_gate(chain.gates(), &mut b, j, 0.2).unwrap();
    }
    assert!(max_diff(a.amplitudes(), b.amplitudes()) < 1e-12);
}

#[test]
fn entropy_matches_reduced_density_matrix() {
    let len = 12;
    let chain = Chain::new(len).unwrap();
    let psi = pseudo_random_state(chain.basis().dim(), 11);
    let half = len / 2;
    let dim_a = 1usize << half;
    // ρ_A over all 2^{L/2} left strings, zero rows for strings absent from the basis
    let mut rho = DMatrix::<Complex64>::zeros(dim_a, dim_a);
    for (x, cx) in chain.basis().iter().enumerate() {
        for (y, cy) in chain.basis().iter().enumerate() {
            if cx.bits() >> half == cy.bits() >> half {
                let (l1, l2) = ((cx.bits() & (dim_a as u64 - 1)) as usize, (cy.bits() & (dim_a as u64 - 1)) as usize);
                rho[(l1, l2)] += psi.amplitudes()[x] * psi.amplitudes()[y].conj();
            }
        }
    }
    let eig = rho.symmetric_eigenvalues();
    let expected: f64 = eig.iter().filter(|&&p| p > 1e-14).map(|&p| -p * p.ln()).sum();
    let got = chain.half_cut().entropy(&psi).unwrap();
    assert!((got - expected).abs() < 1e-10, "{got} vs {expected}");
}

#[test]
fn trotter_circuit_converges_to_exact_evolution() {
    let chain = Chain::new(12).unwrap();
    let h = build_zero_momentum_hamiltonian(chain.basis(), chain.sector());
    let sd = eigendecompose(&h).unwrap();
    let vac = chain.vacuum();
    let obs = Observables::new(7);
    let mut errors = Vec::new();
    for tau in [0.02f64, 0.01] {
        let steps = (1.0 / tau).round() as usize;
        let exact = exact_evolution(&chain, &sd, &vac, &time_grid(tau, steps), obs).unwrap();
        let seq =
            run_circuit(&chain, &vac, &CircuitSchedule::sequential(12, tau, steps, SequentialOrder::Product), obs)
                .unwrap();
        assert!((exact.loschmidt[0] - 1.0).abs() < 1e-12);
        assert!((exact.sigma_z[0] - seq.sigma_z[0]).abs() < 1e-12);
        errors.push((exact.sigma_z[steps] - seq.sigma_z[steps]).abs());
    }
    assert!(errors[1] < errors[0] && errors[1] < 1e-3, "{errors:?}");
}

#[test]
fn exact_evolution_matches_dense_propagator() {
    let chain = Chain::new(8).unwrap();
    let h = build_zero_momentum_hamiltonian(chain.basis(), chain.sector());
    let sd = eigendecompose(&h).unwrap();
    let ff = chain.fully_filled();
    let t = 1.3;
    let u = (h.matrix().map(|x| Complex64::new(0.0, -t * x))).exp();
    let evolved = &u * DVector::from_column_slice(ff.amplitudes());
    let echo = evolved.iter().zip(ff.amplitudes()).map(|(a, b)| b.conj() * a).sum::<Complex64>().norm_sqr();
    let series = exact_evolution(&chain, &sd, &ff, &[0.0, t], Observables::new(1)).unwrap();
    assert!((series.loschmidt[1] - echo).abs() < 1e-12);
    assert!((series.norm[1] - 1.0).abs() < 1e-12);
}
