//! The link-model Hamiltonian `H = Σ_j H_j`, `H_j = σ⁺_{2j-1} σ⁺_{2j} σ⁺_{2j+1} + h.c.`,
//! in units of `J/2` with zero mass.
//!
//! In the configuration basis `H_j` only connects a configuration whose triple
//! `(2j-1, 2j, 2j+1)` is all ones with the same configuration with that triple
//! cleared. Every matrix element is `+1`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::{triple_mask, PhysicalBasis};
use crate::error::{argument, Error, Result};
use crate::sector::ZeroMomentumSector;
use crate::state::{BasisKind, StateVector};

/// For every gate `j`, the list of basis-index pairs `(x, y)` where `x` has the
/// triple all ones and `y = x` with the triple cleared.
#[derive(Clone, Debug)]
pub struct GateTable {
    sites: usize,
    dim: usize,
    pairs: Vec<Vec<(u32, u32)>>,
}

impl GateTable {
    /// Builds the pairing table and checks that it is complete: every
    /// configuration with an all-one or all-zero triple has its partner in the
    /// physical basis.
    pub fn new(basis: &PhysicalBasis) -> Result<Self> {
        let len = basis.sites();
        let n = len / 2;
        let mut pairs = Vec::with_capacity(n);
        for j in 1..=n {
            let mask = triple_mask(j, len);
            let mut list = Vec::new();
            let mut cleared = 0usize;
            for (x, &bits) in basis.raw().iter().enumerate() {
                match bits & mask {
                    m if m == mask => {
                        let y = basis.index_of(bits & !mask).ok_or_else(|| Error::Constraint {
                            site: 2 * j - 1,
                            reason: format!("gate {j} maps {} outside the physical basis", basis.config(x)),
                        })?;
                        list.push((x as u32, y as u32));
                    }
                    0 => cleared += 1,
                    _ => {}
                }
            }
            if cleared != list.len() {
                return Err(Error::Constraint {
                    site: 2 * j - 1,
                    reason: format!("gate {j}: {cleared} cleared triples but {} filled partners", list.len()),
                });
            }
            pairs.push(list);
        }
        Ok(Self { sites: len, dim: basis.dim(), pairs })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn gate_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Pairs acted on by gate `j` (1-based).
    pub fn pairs(&self, j: usize) -> &[(u32, u32)] {
        &self.pairs[j - 1]
    }
}

/// Matrix-free `H|ψ⟩` on the full physical basis.
pub fn apply_hamiltonian(table: &GateTable, state: &StateVector) -> Result<StateVector> {
    state.expect(BasisKind::Full, table.dim())?;
    let a = state.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); a.len()];
    for list in &table.pairs {
        for &(x, y) in list {
            let (x, y) = (x as usize, y as usize);
            out[x] += a[y];
            out[y] += a[x];
        }
    }
    Ok(StateVector::new(BasisKind::Full, out))
}

/// Dense real symmetric Hamiltonian.
#[derive(Clone, Debug)]
pub struct HamiltonianMatrix {
    matrix: DMatrix<f64>,
}

impl HamiltonianMatrix {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(argument(format!("Hamiltonian must be square, got {}x{}", matrix.nrows(), matrix.ncols())));
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Largest `|H_ab - H_ba|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..a {
                worst = worst.max((self.matrix[(a, b)] - self.matrix[(b, a)]).abs());
            }
        }
        worst
    }
}

/// `⟨Φ_g|H|Φ_f⟩` in the zero-momentum orbit basis.
///
/// `H` is applied to each orbit representative; a transition into orbit `g`
/// contributes `√(m_f / m_g)`.
pub fn build_zero_momentum_hamiltonian(basis: &PhysicalBasis, sector: &ZeroMomentumSector) -> HamiltonianMatrix {
    let len = basis.sites();
    let dim = sector.dim();
    // integer transition counts c(g, f) from the representative of f into orbit g;
    // c(g, f)·m_f = c(f, g)·m_g, so writing the element as that integer over
    // sqrt(m_f m_g) makes the matrix exactly symmetric
    let mut counts = vec![0u32; dim * dim];
    for (f, orbit) in sector.orbits().iter().enumerate() {
        let rep = orbit.representative().bits();
        for j in 1..=len / 2 {
            let mask = triple_mask(j, len);
            let t = rep & mask;
            if t != mask && t != 0 {
                continue;
            }
            let idx = basis.index_of(rep ^ mask).expect("gate pairing is closed on the physical basis");
            counts[sector.orbit_of(idx) * dim + f] += 1;
        }
    }
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for g in 0..dim {
        let mg = sector.orbit(g).multiplicity() as f64;
        for f in 0..dim {
            let c = counts[g * dim + f];
            if c > 0 {
                let mf = sector.orbit(f).multiplicity() as f64;
                h[(g, f)] = (c as f64 * mf) / (mf * mg).sqrt();
            }
        }
    }
    HamiltonianMatrix { matrix: h }
}
