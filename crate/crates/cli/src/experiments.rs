//! Experiment pipelines. Each returns its output files as in-memory buffers
//! plus a summary for the manifest; nothing touches the disk here.

use nalgebra::DVector;
use qlm_core::circuit::time_grid;
use qlm_core::export::{
    write_deviation_curve_csv, write_scar_csv, write_spectral_csv, write_statistics_csv, write_trajectory_csv,
};
use qlm_core::scars::{median_entropy, tower_frequency};
use qlm_core::spectral::{thermal_beta, thermal_expectation};
use qlm_core::{
    build_zero_momentum_hamiltonian, classify_scars, dimension_formula, eigendecompose_with_pivots,
    eigenstate_diagnostics, ensemble_statistics, exact_evolution, normalized_deviation, run_circuit, scar_projection,
    Chain, CircuitSchedule, EigenstateDiagnostics, HamiltonianMatrix, Observables, ScarCriteria, ScarSet, SpectralData,
    StateVector,
};
use serde_json::{json, Map, Value};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::CliError;

pub struct Artifacts {
    pub files: Vec<(String, Vec<u8>)>,
    pub results: Map<String, Value>,
}

impl Artifacts {
    fn new() -> Self {
        Self { files: Vec::new(), results: Map::new() }
    }

    fn file(&mut self, name: &str, write: impl FnOnce(&mut Vec<u8>) -> qlm_core::Result<()>) -> Result<(), CliError> {
        let mut buf = Vec::new();
        write(&mut buf)?;
        self.files.push((name.to_string(), buf));
        Ok(())
    }

    fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let chain = Chain::new(cfg.sites)?;
    match cfg.experiment {
        Experiment::BasisReport => basis_report(&chain),
        Experiment::ScarSpectrum => scar_spectrum(cfg, &chain),
        Experiment::SequentialVsExact => sequential_vs_exact(cfg, &chain),
        Experiment::RandomEnsemble => random_ensemble(cfg, &chain),
        Experiment::EntropyEvolution | Experiment::LoschmidtEvolution => sequential_only(cfg, &chain),
        Experiment::MagnetizationEvolution => magnetization(cfg, &chain),
    }
}

struct Spectrum {
    h: HamiltonianMatrix,
    spectral: SpectralData,
}

fn spectrum(chain: &Chain) -> Result<Spectrum, CliError> {
    let h = build_zero_momentum_hamiltonian(chain.basis(), chain.sector());
    let vac = chain.vacuum();
    let pivot = DVector::from_iterator(vac.dim(), vac.amplitudes().iter().map(|c| c.re));
    let spectral = eigendecompose_with_pivots(&h, &[pivot])?;
    Ok(Spectrum { h, spectral })
}

fn scar_set(cfg: &ExperimentConfig, diagnostics: &[EigenstateDiagnostics]) -> Result<ScarSet, CliError> {
    let defaults = ScarCriteria::defaults_for(diagnostics, cfg.scar_peaks.min(diagnostics.len()))?;
    let criteria = ScarCriteria {
        overlap_floor: cfg.overlap_floor.unwrap_or(defaults.overlap_floor),
        entropy_ceiling: cfg.entropy_ceiling.unwrap_or(defaults.entropy_ceiling),
        window: cfg.window.unwrap_or(defaults.window),
        mode: cfg.scar_mode,
    };
    Ok(classify_scars(diagnostics, &criteria)?)
}

fn initial_state(cfg: &ExperimentConfig, chain: &Chain) -> Result<StateVector, CliError> {
    let occupied = cfg.initial.occupations(cfg.sites)?;
    Ok(chain.matter_state(&occupied)?)
}

fn energy(h: &HamiltonianMatrix, state: &StateVector) -> f64 {
    let a = DVector::from_iterator(state.dim(), state.amplitudes().iter().map(|c| c.re));
    a.dot(&(h.matrix() * &a))
}

fn basis_report(chain: &Chain) -> Result<Artifacts, CliError> {
    let mut out = Artifacts::new();
    out.file("basis.txt", |w| Ok(chain.basis().export(w)?))?;
    out.file("orbits.csv", |w| {
        use std::io::Write;
        writeln!(w, "orbit,representative,multiplicity")?;
        for (i, o) in chain.sector().orbits().iter().enumerate() {
            writeln!(w, "{i},{},{}", o.representative(), o.multiplicity())?;
        }
        Ok(())
    })?;
    out.result("dim_full", chain.basis().dim());
    out.result("dim_zero_momentum", chain.sector().dim());
    out.result("dim_formula", dimension_formula(chain.sites()).ok().map(|d| d as u64));
    let mut multiplicities = std::collections::BTreeMap::new();
    for o in chain.sector().orbits() {
        *multiplicities.entry(o.multiplicity().to_string()).or_insert(0u64) += 1;
    }
    out.result("orbits_by_multiplicity", json!(multiplicities));
    Ok(out)
}

fn scar_spectrum(cfg: &ExperimentConfig, chain: &Chain) -> Result<Artifacts, CliError> {
    let sp = spectrum(chain)?;
    let diagnostics = eigenstate_diagnostics(chain, &sp.spectral, &chain.vacuum(), cfg.site)?;
    let scars = scar_set(cfg, &diagnostics)?;
    let mut out = Artifacts::new();
    out.file("spectral.csv", |w| write_spectral_csv(w, &diagnostics, cfg.site))?;
    out.file("scars.csv", |w| write_scar_csv(w, &diagnostics, &scars))?;

    let eigs = sp.spectral.eigenvalues();
    let z: Vec<f64> = diagnostics.iter().map(|d| d.sigma_z).collect();
    let psi = initial_state(cfg, chain)?;
    let e0 = energy(&sp.h, &psi);
    let beta = thermal_beta(e0, eigs)?;
    let full_z = chain.sigma_z_diagonal(cfg.site)?;
    let c = scars.criteria();
    out.result("eigenvalue_count", eigs.len());
    out.result("scar_count", scars.len());
    out.result("scar_indices", scars.indices().to_vec());
    out.result("scar_energies", scars.energies(&diagnostics));
    out.result("runner_up_indices", scars.runner_ups().to_vec());
    out.result("gap_spread", scars.gap_spread(&diagnostics));
    out.result("tower_frequency", tower_frequency(&scars.energies(&diagnostics)));
    out.result(
        "criteria",
        json!({
            "mode": c.mode.name(),
            "overlap_floor": c.overlap_floor,
            "entropy_ceiling": c.entropy_ceiling,
            "window": c.window,
        }),
    );
    out.result("median_entropy", median_entropy(&diagnostics));
    out.result(
        "fraction_entropy_above_3",
        diagnostics.iter().filter(|d| d.entropy > 3.0).count() as f64 / diagnostics.len() as f64,
    );
    out.result("initial_energy", e0);
    out.result("thermal_beta", beta);
    out.result("thermal_sigma_z", thermal_expectation(&z, eigs, beta));
    out.result("infinite_temperature_sigma_z_full", full_z.iter().sum::<f64>() / full_z.len() as f64);
    Ok(out)
}

fn sequential(cfg: &ExperimentConfig) -> CircuitSchedule {
    CircuitSchedule::sequential(cfg.sites, cfg.tau, cfg.steps, cfg.order)
}

fn observables(cfg: &ExperimentConfig) -> Observables {
    let obs = Observables::new(cfg.site);
    if cfg.entropy {
        obs.with_entropy()
    } else {
        obs
    }
}

fn sequential_vs_exact(cfg: &ExperimentConfig, chain: &Chain) -> Result<Artifacts, CliError> {
    let sp = spectrum(chain)?;
    let psi = initial_state(cfg, chain)?;
    let exact = exact_evolution(chain, &sp.spectral, &psi, &time_grid(cfg.tau, cfg.steps), observables(cfg))?;
    let circuit = run_circuit(chain, &psi, &sequential(cfg), observables(cfg))?;
    let dz = normalized_deviation(&circuit.sigma_z, &exact.sigma_z)?;
    let dl = normalized_deviation(&circuit.loschmidt, &exact.loschmidt)?;
    let mut out = Artifacts::new();
    out.file("exact.csv", |w| write_trajectory_csv(w, &exact))?;
    out.file("sequential.csv", |w| write_trajectory_csv(w, &circuit))?;
    out.file("statistics.csv", |w| write_statistics_csv(w, &[dz], &[dl]))?;
    out.result("delta_sigma_z", dz);
    out.result("delta_loschmidt", dl);
    out.result("final_norm", circuit.norm.last().copied());
    Ok(out)
}

fn random_ensemble(cfg: &ExperimentConfig, chain: &Chain) -> Result<Artifacts, CliError> {
    let psi = initial_state(cfg, chain)?;
    let reference = run_circuit(chain, &psi, &sequential(cfg), Observables::new(cfg.site))?;
    let result = ensemble_statistics(chain, &psi, cfg.seed, cfg.runs, cfg.group_size, cfg.tau, cfg.steps, &reference)?;

    let sp = spectrum(chain)?;
    let diagnostics = eigenstate_diagnostics(chain, &sp.spectral, &chain.vacuum(), cfg.site)?;
    let scars = scar_set(cfg, &diagnostics)?;
    let projection = scar_projection(&psi, &scars, &sp.spectral)?;

    let mut out = Artifacts::new();
    out.file("reference.csv", |w| write_trajectory_csv(w, &reference))?;
    out.file("statistics.csv", |w| {
        write_statistics_csv(w, &result.sigma_z.group_deltas, &result.loschmidt.group_deltas)
    })?;
    out.file("deviation_curve.csv", |w| write_deviation_curve_csv(w, &result))?;
    out.file("summary.csv", |w| {
        use qlm_core::export::fmt17;
        use std::io::Write;
        writeln!(
            w,
            "initial,scar_projection,delta_sigma_z_mean,delta_sigma_z_error,delta_loschmidt_mean,delta_loschmidt_error"
        )?;
        writeln!(
            w,
            "{},{},{},{},{},{}",
            cfg.initial.label(),
            fmt17(projection),
            fmt17(result.sigma_z.mean),
            fmt17(result.sigma_z.error),
            fmt17(result.loschmidt.mean),
            fmt17(result.loschmidt.error)
        )?;
        Ok(())
    })?;
    out.result("groups", result.sigma_z.group_deltas.len());
    out.result("scar_projection", projection);
    out.result("scar_count", scars.len());
    out.result(
        "delta_sigma_z",
        json!({"mean": result.sigma_z.mean, "error": result.sigma_z.error, "groups": result.sigma_z.group_deltas}),
    );
    out.result(
        "delta_loschmidt",
        json!({"mean": result.loschmidt.mean, "error": result.loschmidt.error, "groups": result.loschmidt.group_deltas}),
    );
    Ok(out)
}

fn sequential_only(cfg: &ExperimentConfig, chain: &Chain) -> Result<Artifacts, CliError> {
    let psi = initial_state(cfg, chain)?;
    let circuit = run_circuit(chain, &psi, &sequential(cfg), observables(cfg))?;
    let mut out = Artifacts::new();
    out.file("sequential.csv", |w| write_trajectory_csv(w, &circuit))?;
    if let Some(e) = &circuit.entropy {
        out.result("entropy_initial", e[0]);
        out.result("entropy_final", e[e.len() - 1]);
    }
    out.result("loschmidt_final", circuit.loschmidt.last().copied());
    Ok(out)
}

fn magnetization(cfg: &ExperimentConfig, chain: &Chain) -> Result<Artifacts, CliError> {
    let sp = spectrum(chain)?;
    let psi = initial_state(cfg, chain)?;
    let exact = exact_evolution(chain, &sp.spectral, &psi, &time_grid(cfg.tau, cfg.steps), observables(cfg))?;
    let circuit = run_circuit(chain, &psi, &sequential(cfg), observables(cfg))?;

    let diagnostics = eigenstate_diagnostics(chain, &sp.spectral, &chain.vacuum(), cfg.site)?;
    let z: Vec<f64> = diagnostics.iter().map(|d| d.sigma_z).collect();
    let beta = thermal_beta(energy(&sp.h, &psi), sp.spectral.eigenvalues())?;

    let mut out = Artifacts::new();
    out.file("exact.csv", |w| write_trajectory_csv(w, &exact))?;
    out.file("sequential.csv", |w| write_trajectory_csv(w, &circuit))?;
    out.result("thermal_beta", beta);
    out.result("thermal_sigma_z", thermal_expectation(&z, sp.spectral.eigenvalues(), beta));
    out.result("delta_sigma_z", normalized_deviation(&circuit.sigma_z, &exact.sigma_z)?);
    Ok(out)
}
