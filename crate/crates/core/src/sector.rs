//! Two-site translation orbits and the zero-momentum sector.

use num_complex::Complex64;

use crate::basis::{translate2, PhysicalBasis, SpinConfiguration};
use crate::error::{argument, Result};
use crate::state::{BasisKind, StateVector};

/// A cyclic family `f, T₂f, T₂²f, …` of physical configurations.
#[derive(Clone, Debug)]
pub struct TranslationOrbit {
    representative: SpinConfiguration,
    /// Basis indices of `T₂^k f` for `k = 0..multiplicity`.
    members: Vec<usize>,
}

impl TranslationOrbit {
    /// The member with the smallest integer encoding.
    pub fn representative(&self) -> SpinConfiguration {
        self.representative
    }

    /// Smallest `k >= 1` with `T₂^k f = f`.
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }
}

/// Partition of a physical basis into translation orbits.
#[derive(Clone, Debug)]
pub struct ZeroMomentumSector {
    orbits: Vec<TranslationOrbit>,
    orbit_of: Vec<u32>,
}

impl ZeroMomentumSector {
    pub fn dim(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbits(&self) -> &[TranslationOrbit] {
        &self.orbits
    }

    pub fn orbit(&self, index: usize) -> &TranslationOrbit {
        &self.orbits[index]
    }

    /// Orbit containing the configuration at `basis_index`.
    #[inline]
    pub fn orbit_of(&self, basis_index: usize) -> usize {
        self.orbit_of[basis_index] as usize
    }

    /// Full-basis dimension this sector was built from.
    pub fn full_dim(&self) -> usize {
        self.orbit_of.len()
    }

    /// Embeds a zero-momentum state into the full physical basis: each orbit
    /// amplitude is spread as `a_f / √m_f` over the orbit's members.
    pub fn expand(&self, state: &StateVector) -> Result<StateVector> {
        state.expect(BasisKind::ZeroMomentum, self.dim())?;
        let mut full = StateVector::zeros(BasisKind::Full, self.full_dim());
        let out = full.amplitudes_mut();
        for (orbit, &a) in self.orbits.iter().zip(state.amplitudes()) {
            let w = a / (orbit.multiplicity() as f64).sqrt();
            for &m in &orbit.members {
                out[m] = w;
            }
        }
        Ok(full)
    }

    /// Projects a full-basis state onto the zero-momentum sector (`P† ψ`).
    ///
    /// The returned state is not renormalized; its norm measures the weight
    /// inside the sector.
    pub fn project(&self, state: &StateVector) -> Result<StateVector> {
        state.expect(BasisKind::Full, self.full_dim())?;
        let amps = state.amplitudes();
        let proj = self
            .orbits
            .iter()
            .map(|orbit| {
                let s: Complex64 = orbit.members.iter().map(|&m| amps[m]).sum();
                s / (orbit.multiplicity() as f64).sqrt()
            })
            .collect();
        Ok(StateVector::new(BasisKind::ZeroMomentum, proj))
    }

    /// Orbit average of a diagonal full-basis observable, i.e. its diagonal in
    /// the zero-momentum basis.
    pub fn orbit_average(&self, diag: &[f64]) -> Vec<f64> {
        self.orbits.iter().map(|o| o.members.iter().map(|&m| diag[m]).sum::<f64>() / o.multiplicity() as f64).collect()
    }
}

/// Decomposes the basis into orbits under two-site translation.
///
/// Orbits are listed in ascending order of their representatives, which are
/// the first members met while scanning the (ascending) basis.
pub fn orbit_decomposition(basis: &PhysicalBasis) -> ZeroMomentumSector {
    const UNSEEN: u32 = u32::MAX;
    let len = basis.sites();
    let mut orbit_of = vec![UNSEEN; basis.dim()];
    let mut orbits = Vec::new();
    for (start, &bits) in basis.raw().iter().enumerate() {
        if orbit_of[start] != UNSEEN {
            continue;
        }
        let id = orbits.len() as u32;
        let mut members = vec![start];
        orbit_of[start] = id;
        let mut next = translate2(bits, len);
        while next != bits {
            let idx = basis.index_of(next).expect("physical basis is closed under translation");
            orbit_of[idx] = id;
            members.push(idx);
            next = translate2(next, len);
        }
        orbits.push(TranslationOrbit { representative: basis.config(start), members });
    }
    ZeroMomentumSector { orbits, orbit_of }
}

/// `Σ_k T₂^{k-1}|f⟩ / √m_f` as a full-basis state.
pub fn zero_momentum_state(basis: &PhysicalBasis, orbit: &TranslationOrbit) -> StateVector {
    let mut s = StateVector::zeros(BasisKind::Full, basis.dim());
    let w = Complex64::new(1.0 / (orbit.multiplicity() as f64).sqrt(), 0.0);
    for &m in orbit.members() {
        s.amplitudes_mut()[m] = w;
    }
    s
}

/// A translation eigenstate built on one orbit. Only momentum zero is supported.
#[derive(Clone, Copy, Debug)]
pub struct MomentumState {
    orbit: usize,
    momentum: f64,
}

impl MomentumState {
    pub fn new(orbit: usize, momentum: f64) -> Result<Self> {
        if momentum != 0.0 {
            return Err(argument(format!("only the zero-momentum sector is implemented, got p = {momentum}")));
        }
        Ok(Self { orbit, momentum })
    }

    pub fn orbit(&self) -> usize {
        self.orbit
    }

    pub fn momentum(&self) -> f64 {
        self.momentum
    }

    pub fn to_full(&self, basis: &PhysicalBasis, sector: &ZeroMomentumSector) -> StateVector {
        zero_momentum_state(basis, sector.orbit(self.orbit))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::enumerate_physical_basis;

    #[test]
    fn vacuum_orbit_at_eight_sites() {
        let basis = enumerate_physical_basis(8).unwrap();
        let sector = orbit_decomposition(&basis);
        let vac = SpinConfiguration::parse("00010001").unwrap();
        let idx = basis.index_of(vac.bits()).unwrap();
        let orbit = sector.orbit(sector.orbit_of(idx));
        assert_eq!(orbit.multiplicity(), 2);
        let names: Vec<String> = orbit.members().iter().map(|&m| basis.config(m).to_string()).collect();
        assert!(names.contains(&"01000100".to_string()));

        let state = zero_momentum_state(&basis, orbit);
        let other = basis.index_of(SpinConfiguration::parse("01000100").unwrap().bits()).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((state.amplitudes()[idx].re - r).abs() < 1e-15);
        assert!((state.amplitudes()[other].re - r).abs() < 1e-15);
        assert!(state.is_normalized(1e-14));
    }

    #[test]
    fn fully_filled_is_its_own_orbit() {
        let basis = enumerate_physical_basis(12).unwrap();
        let sector = orbit_decomposition(&basis);
        let ff = SpinConfiguration::fully_filled(12).unwrap();
        let idx = basis.index_of(ff.bits()).unwrap();
        let orbit = sector.orbit(sector.orbit_of(idx));
        assert_eq!(orbit.multiplicity(), 1);
        let s = zero_momentum_state(&basis, orbit);
        assert_eq!(s.amplitudes()[idx], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn multiplicities_divide_half_length() {
        for len in [8, 12, 16, 20] {
            let basis = enumerate_physical_basis(len).unwrap();
            let sector = orbit_decomposition(&basis);
            let total: usize = sector.orbits().iter().map(|o| o.multiplicity()).sum();
            assert_eq!(total, basis.dim());
            for o in sector.orbits() {
                assert_eq!((len / 2) % o.multiplicity(), 0);
                let min = o.members().iter().map(|&m| basis.raw()[m]).min().unwrap();
                assert_eq!(o.representative().bits(), min);
            }
        }
    }

    #[test]
    fn expand_then_project_is_identity() {
        let basis = enumerate_physical_basis(12).unwrap();
        let sector = orbit_decomposition(&basis);
        let amps: Vec<f64> = (0..sector.dim()).map(|i| (i as f64 * 0.37).sin()).collect();
        let s = StateVector::from_real(BasisKind::ZeroMomentum, &amps);
        let back = sector.project(&sector.expand(&s).unwrap()).unwrap();
        for (a, b) in s.amplitudes().iter().zip(back.amplitudes()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn nonzero_momentum_rejected() {
        assert!(MomentumState::new(0, 0.5).is_err());
        assert!(MomentumState::new(0, 0.0).is_ok());
    }
}
