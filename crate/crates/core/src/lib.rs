//! Simulation and analysis of the spin-1/2 Schwinger quantum link model.
//!
//! The crate builds the gauge-invariant Hilbert space of an `L`-site periodic
//! chain, diagonalizes the Hamiltonian in the zero-momentum sector, classifies
//! quantum many-body scar eigenstates, and evolves states with sequential and
//! randomized circuits of three-body gates `exp(-i H_j τ)`.
//!
//! The bit convention (bit `b` ↔ `σᶻ = 1 − 2b`, bit `i − 1` ↔ site `i`) is
//! documented in [`basis`] and shared by every module.
//!
//! ```
//! use qlm_core::Chain;
//!
//! let chain = Chain::new(8).unwrap();
//! assert_eq!(chain.basis().dim(), 7);
//! assert_eq!(chain.sector().dim(), 3);
//! ```

pub mod basis;
pub mod circuit;
pub mod entropy;
pub mod error;
pub mod export;
pub mod hamiltonian;
pub mod initial;
pub mod scars;
pub mod sector;
pub mod spectral;
pub mod state;
pub mod stats;

pub use basis::{
    dimension_formula, enumerate_physical_basis, gauge_completions, gauss_residual, pxp_to_qlm, qlm_to_pxp,
    PhysicalBasis, SpinConfiguration,
};
pub use circuit::{
    apply_gate, exact_evolution, random_schedule, run_circuit, CircuitSchedule, ObservableSeries, Observables,
    ScheduleKind, SequentialOrder,
};
pub use entropy::EntanglementCut;
pub use error::{Error, Result};
pub use hamiltonian::{apply_hamiltonian, build_zero_momentum_hamiltonian, GateTable, HamiltonianMatrix};
pub use initial::{expand_named_state, InitialState, NamedState};
pub use scars::{classify_scars, revival_prediction, scar_projection, ScarCriteria, ScarMode, ScarSet};
pub use sector::{orbit_decomposition, zero_momentum_state, MomentumState, TranslationOrbit, ZeroMomentumSector};
pub use spectral::{
    eigendecompose, eigendecompose_with_pivots, eigenstate_diagnostics, thermal_beta, thermal_expectation,
    EigenstateDiagnostics, SpectralData,
};
pub use state::{BasisKind, StateVector};
pub use stats::{ensemble_statistics, normalized_deviation, EnsembleResult, RunStatistics};

use num_complex::Complex64;

use crate::error::argument;

/// Everything derived from the chain length that the simulations share:
/// the physical basis, its orbit decomposition, the gate pairing table and the
/// half-chain entanglement layout.
#[derive(Clone, Debug)]
pub struct Chain {
    basis: PhysicalBasis,
    sector: ZeroMomentumSector,
    gates: GateTable,
    half_cut: EntanglementCut,
}

impl Chain {
    pub fn new(sites: usize) -> Result<Self> {
        let basis = enumerate_physical_basis(sites)?;
        let sector = orbit_decomposition(&basis);
        let gates = GateTable::new(&basis)?;
        let half_cut = EntanglementCut::new(&basis, sites / 2)?;
        Ok(Self { basis, sector, gates, half_cut })
    }

    pub fn sites(&self) -> usize {
        self.basis.sites()
    }

    pub fn basis(&self) -> &PhysicalBasis {
        &self.basis
    }

    pub fn sector(&self) -> &ZeroMomentumSector {
        &self.sector
    }

    pub fn gates(&self) -> &GateTable {
        &self.gates
    }

    /// Bipartition into the first and last `L/2` sites.
    pub fn half_cut(&self) -> &EntanglementCut {
        &self.half_cut
    }

    /// `σᶻ_site` on every basis configuration.
    pub fn sigma_z_diagonal(&self, site: usize) -> Result<Vec<f64>> {
        if site == 0 || site > self.sites() {
            return Err(argument(format!("site {site} outside 1..={}", self.sites())));
        }
        Ok(self.basis.iter().map(|c| c.z(site) as f64).collect())
    }

    /// Number of occupied matter sites on every basis configuration.
    pub fn particle_number_diagonal(&self) -> Vec<f64> {
        self.basis.iter().map(|c| c.particle_number() as f64).collect()
    }

    /// Equal-weight zero-momentum superposition of the orbits of every physical
    /// configuration with the given matter occupations.
    pub fn matter_state(&self, occupied: &[usize]) -> Result<StateVector> {
        let configs = gauge_completions(occupied, self.sites())?;
        let mut orbits: Vec<usize> = configs
            .iter()
            .map(|c| {
                let idx = self.basis.index_of(c.bits()).expect("gauge completion is physical");
                self.sector.orbit_of(idx)
            })
            .collect();
        orbits.sort_unstable();
        orbits.dedup();
        let w = Complex64::new(1.0 / (orbits.len() as f64).sqrt(), 0.0);
        let mut state = StateVector::zeros(BasisKind::ZeroMomentum, self.sector.dim());
        for o in orbits {
            state.amplitudes_mut()[o] = w;
        }
        Ok(state)
    }

    /// Zero-momentum vacuum (no particles).
    pub fn vacuum(&self) -> StateVector {
        self.matter_state(&[]).expect("vacuum always has a gauge completion")
    }

    /// Zero-momentum fully-filled state.
    pub fn fully_filled(&self) -> StateVector {
        let all: Vec<usize> = (1..self.sites()).step_by(2).collect();
        self.matter_state(&all).expect("fully-filled always has a gauge completion")
    }

    /// Expands a zero-momentum state into the full basis; full states pass through.
    pub fn to_full(&self, state: &StateVector) -> Result<StateVector> {
        match state.kind() {
            BasisKind::Full => {
                state.expect(BasisKind::Full, self.basis.dim())?;
                Ok(state.clone())
            }
            BasisKind::ZeroMomentum => self.sector.expand(state),
        }
    }
}
