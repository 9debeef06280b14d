//! Bipartite entanglement entropy of full-basis states.
//!
//! Subsystem A is the block of sites `1..=cut`. The coefficient matrix
//! `ψ[left substring, right substring]` is block diagonal, because the Gauss
//! constraint ties the boundary bits of the two halves together; the blocks are
//! found once per cut as connected components of the (left, right) pairs that
//! occur in the physical basis, and each block is decomposed on its own.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::{low_mask, PhysicalBasis};
use crate::error::{argument, Result};
use crate::state::{BasisKind, StateVector};

/// Schmidt weights below this are discarded.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;

/// Tolerance on the input norm.
const ENTROPY_NORM_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
struct Block {
    rows: usize,
    cols: usize,
    /// (basis index, row, column)
    entries: Vec<(u32, u32, u32)>,
}

/// Precomputed layout of the coefficient matrix for one bipartition.
#[derive(Clone, Debug)]
pub struct EntanglementCut {
    cut: usize,
    dim: usize,
    left_count: usize,
    right_count: usize,
    blocks: Vec<Block>,
}

impl EntanglementCut {
    /// Bipartition into sites `1..=cut` and `cut+1..=L`.
    pub fn new(basis: &PhysicalBasis, cut: usize) -> Result<Self> {
        let len = basis.sites();
        if cut == 0 || cut >= len {
            return Err(argument(format!("cut must lie in 1..{len}, got {cut}")));
        }
        let mask = low_mask(cut);
        let mut lefts: Vec<u64> = basis.raw().iter().map(|&b| b & mask).collect();
        let mut rights: Vec<u64> = basis.raw().iter().map(|&b| b >> cut).collect();
        lefts.sort_unstable();
        lefts.dedup();
        rights.sort_unstable();
        rights.dedup();
        let nl = lefts.len();

        // union-find over left keys [0, nl) and right keys [nl, nl + nr)
        let mut parent: Vec<usize> = (0..nl + rights.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let coords: Vec<(usize, usize)> = basis
            .raw()
            .iter()
            .map(|&b| {
                let l = lefts.binary_search(&(b & mask)).unwrap();
                let r = rights.binary_search(&(b >> cut)).unwrap();
                (l, r)
            })
            .collect();
        for &(l, r) in &coords {
            let (a, b) = (find(&mut parent, l), find(&mut parent, nl + r));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }

        let mut block_of_root = vec![usize::MAX; parent.len()];
        let mut local = vec![u32::MAX; parent.len()];
        let mut blocks: Vec<Block> = Vec::new();
        for (idx, &(l, r)) in coords.iter().enumerate() {
            let root = find(&mut parent, l);
            if block_of_root[root] == usize::MAX {
                block_of_root[root] = blocks.len();
                blocks.push(Block { rows: 0, cols: 0, entries: Vec::new() });
            }
            let block = &mut blocks[block_of_root[root]];
            if local[l] == u32::MAX {
                local[l] = block.rows as u32;
                block.rows += 1;
            }
            if local[nl + r] == u32::MAX {
                local[nl + r] = block.cols as u32;
                block.cols += 1;
            }
            block.entries.push((idx as u32, local[l], local[nl + r]));
        }

        Ok(Self { cut, dim: basis.dim(), left_count: nl, right_count: rights.len(), blocks })
    }

    pub fn cut(&self) -> usize {
        self.cut
    }

    /// Number of distinct substrings on the left and right of the cut.
    pub fn substring_counts(&self) -> (usize, usize) {
        (self.left_count, self.right_count)
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Squared Schmidt coefficients above the cutoff, in no particular order.
    pub fn schmidt_weights(&self, state: &StateVector) -> Result<Vec<f64>> {
        state.expect(BasisKind::Full, self.dim)?;
        if !state.is_normalized(ENTROPY_NORM_TOL) {
            return Err(argument(format!("entanglement entropy needs a normalized state, norm = {}", state.norm())));
        }
        let amps = state.amplitudes();
        let mut weights = Vec::new();
        for block in &self.blocks {
            if block.entries.len() == 1 {
                let p = amps[block.entries[0].0 as usize].norm_sqr();
                if p > SCHMIDT_CUTOFF * SCHMIDT_CUTOFF {
                    weights.push(p);
                }
                continue;
            }
            let mut m = DMatrix::<Complex64>::zeros(block.rows, block.cols);
            for &(idx, r, c) in &block.entries {
                m[(r as usize, c as usize)] = amps[idx as usize];
            }
            let sv = m.singular_values();
            weights.extend(sv.iter().filter(|&&s| s > SCHMIDT_CUTOFF).map(|s| s * s));
        }
        Ok(weights)
    }

    /// Von Neumann entropy of subsystem A in nats.
    pub fn entropy(&self, state: &StateVector) -> Result<f64> {
        let w = self.schmidt_weights(state)?;
        Ok(w.iter().map(|&p| -p * p.ln()).sum::<f64>().max(0.0))
    }
}

/// Entropy for every cut position `1..L`, for scaling studies.
pub fn entropy_profile(basis: &PhysicalBasis, state: &StateVector) -> Result<Vec<(usize, f64)>> {
    (1..basis.sites()).map(|cut| Ok((cut, EntanglementCut::new(basis, cut)?.entropy(state)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::enumerate_physical_basis;
    use crate::sector::{orbit_decomposition, zero_momentum_state};

    #[test]
    fn product_state_has_zero_entropy() {
        let basis = enumerate_physical_basis(12).unwrap();
        let cut = EntanglementCut::new(&basis, 6).unwrap();
        for i in 0..basis.dim() {
            let s = StateVector::basis_state(BasisKind::Full, basis.dim(), i);
            assert_eq!(cut.entropy(&s).unwrap(), 0.0);
        }
    }

    #[test]
    fn two_term_superposition_gives_ln2() {
        let basis = enumerate_physical_basis(12).unwrap();
        let sector = orbit_decomposition(&basis);
        let cut = EntanglementCut::new(&basis, 6).unwrap();
        // vacuum pair: the two Néel patterns differ on both halves
        let orbit = sector
            .orbits()
            .iter()
            .find(|o| o.multiplicity() == 2 && o.representative().particle_number() == 0)
            .unwrap();
        let s = zero_momentum_state(&basis, orbit);
        assert!((cut.entropy(&s).unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn unnormalized_state_rejected() {
        let basis = enumerate_physical_basis(8).unwrap();
        let cut = EntanglementCut::new(&basis, 4).unwrap();
        let s = StateVector::zeros(BasisKind::Full, basis.dim());
        assert!(cut.entropy(&s).is_err());
        assert!(EntanglementCut::new(&basis, 8).is_err());
    }

    #[test]
    fn schmidt_weights_sum_to_one() {
        let basis = enumerate_physical_basis(16).unwrap();
        let cut = EntanglementCut::new(&basis, 8).unwrap();
        let amps: Vec<Complex64> =
            (0..basis.dim()).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let mut s = StateVector::new(BasisKind::Full, amps);
        s.normalize().unwrap();
        let total: f64 = cut.schmidt_weights(&s).unwrap().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
