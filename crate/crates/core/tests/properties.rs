use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;
use qlm_core::stats::normalized_deviation;
use qlm_core::{
    apply_gate, build_zero_momentum_hamiltonian, classify_scars, eigendecompose, eigenstate_diagnostics,
    gauss_residual, pxp_to_qlm, qlm_to_pxp, random_schedule, scar_projection, BasisKind, Chain, EigenstateDiagnostics,
    ScarCriteria, ScarMode, SpectralData, StateVector,
};

struct Fixture {
    chain: Chain,
    spectral: SpectralData,
    diagnostics: Vec<EigenstateDiagnostics>,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let chain = Chain::new(16).unwrap();
        let h = build_zero_momentum_hamiltonian(chain.basis(), chain.sector());
        let spectral = eigendecompose(&h).unwrap();
        let diagnostics = eigenstate_diagnostics(&chain, &spectral, &chain.vacuum(), 9).unwrap();
        Fixture { chain, spectral, diagnostics }
    })
}

fn state_from(raw: &[(f64, f64)], kind: BasisKind) -> Option<StateVector> {
    let mut s = StateVector::new(kind, raw.iter().map(|&(a, b)| Complex64::new(a, b)).collect());
    s.normalize().ok()?;
    Some(s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deviation_is_scale_invariant(
        pairs in prop::collection::vec((-5.0f64..5.0, 0.1f64..5.0), 1..40),
        c in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0],
    ) {
        let q: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let r: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let d = normalized_deviation(&q, &r).unwrap();
        let qs: Vec<f64> = q.iter().map(|x| c * x).collect();
        let rs: Vec<f64> = r.iter().map(|x| c * x).collect();
        let ds = normalized_deviation(&qs, &rs).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert!((d - ds).abs() <= 1e-12 * d.max(1.0));
    }

    #[test]
    fn gates_preserve_norm(seed in any::<u64>(), tau in -4.0f64..4.0, steps in 1usize..20) {
        let chain = &fixture().chain;
        let sched = random_schedule(seed, 0, steps, 16, tau);
        let mut psi = chain.to_full(&chain.fully_filled()).unwrap();
        for &j in sched.gates() {
            apply_gate(chain.gates(), &mut psi, j as usize, tau).unwrap();
        }
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_schedules_are_reproducible(seed in any::<u64>(), run in any::<u64>(), steps in 0usize..30) {
        let a = random_schedule(seed, run, steps, 40, 0.1);
        prop_assert_eq!(a.gates().len(), steps * 20);
        prop_assert!(a.gates().iter().all(|&g| (1..=20).contains(&g)));
        prop_assert_eq!(&a, &random_schedule(seed, run, steps, 40, 0.1));
    }

    #[test]
    fn scar_projection_complements(a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let f = fixture();
        let crit = ScarCriteria::defaults_for(&f.diagnostics, 5).unwrap();
        let scars = classify_scars(&f.diagnostics, &crit).unwrap();
        let d = f.spectral.dim();
        let amps: Vec<(f64, f64)> = (0..d).map(|i| ((a + i as f64).sin(), (b * i as f64).cos())).collect();
        let Some(psi) = state_from(&amps, BasisKind::ZeroMomentum) else { return Ok(()) };
        let p = scar_projection(&psi, &scars, &f.spectral).unwrap();
        let coeffs = f.spectral.coefficients(&psi).unwrap();
        let rest: f64 = (0..d).filter(|n| !scars.contains(*n)).map(|n| coeffs[n].norm_sqr()).sum();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&p));
        prop_assert!((p + rest - 1.0).abs() < 1e-10);
    }

    #[test]
    fn scar_classification_ignores_overlap_scale(scale in 1e-3f64..1e3) {
        let f = fixture();
        let crit = ScarCriteria::defaults_for(&f.diagnostics, 5).unwrap();
        let base = classify_scars(&f.diagnostics, &crit).unwrap();
        let scaled: Vec<EigenstateDiagnostics> = f
            .diagnostics
            .iter()
            .map(|d| EigenstateDiagnostics { vacuum_overlap: d.vacuum_overlap * scale, ..d.clone() })
            .collect();
        let again = classify_scars(&scaled, &ScarCriteria { mode: ScarMode::Window, ..crit }).unwrap();
        prop_assert_eq!(base.indices(), again.indices());
    }

    #[test]
    fn translation_keeps_configurations_physical(idx in 0usize..2207) {
        let chain = &fixture().chain;
        let c = chain.basis().config(idx % chain.basis().dim());
        let t = c.translate2();
        prop_assert!(chain.basis().index_of(t.bits()).is_some());
        for site in (1..16).step_by(2) {
            prop_assert_eq!(gauss_residual(&t, site).unwrap(), 0);
        }
    }

    #[test]
    fn pxp_round_trip(digits in prop::collection::vec(0u8..2, 2..24)) {
        match pxp_to_qlm(&digits) {
            Ok(c) => {
                prop_assert!(c.is_physical());
                prop_assert_eq!(qlm_to_pxp(&c).unwrap(), digits);
            }
            Err(_) => {
                let n = digits.len();
                prop_assert!((0..n).any(|i| digits[i] == 0 && digits[(i + 1) % n] == 0));
            }
        }
    }
}
