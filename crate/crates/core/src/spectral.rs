//! Dense diagonalization of the zero-momentum Hamiltonian, per-eigenstate
//! diagnostics and canonical (β-matched) thermal values.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{argument, Error, Result};
use crate::hamiltonian::HamiltonianMatrix;
use crate::state::{BasisKind, StateVector};
use crate::Chain;

/// Eigenvalues closer than this (relative to the spectral radius) are treated
/// as one degenerate cluster.
const DEGENERACY_TOL: f64 = 1e-9;

/// Vacuum overlaps below this are reported as suppressed.
pub const OVERLAP_CUTOFF: f64 = 1e-12;

/// Ascending spectrum and orthonormal eigenvectors (columns).
#[derive(Clone, Debug)]
pub struct SpectralData {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()))
    }

    /// Eigenvector `n` as a zero-momentum state.
    pub fn eigenstate(&self, n: usize) -> StateVector {
        let col = self.eigenvectors.column(n);
        StateVector::from_real(BasisKind::ZeroMomentum, col.as_slice())
    }

    /// Coefficients `⟨E_n|ψ⟩` of a zero-momentum state.
    pub fn coefficients(&self, state: &StateVector) -> Result<Vec<num_complex::Complex64>> {
        state.expect(BasisKind::ZeroMomentum, self.dim())?;
        let a = state.amplitudes();
        Ok((0..self.dim()).map(|n| self.eigenvectors.column(n).iter().zip(a).map(|(&v, &x)| x * v).sum()).collect())
    }

    /// Largest `‖H v_n − E_n v_n‖`.
    pub fn max_residual(&self, h: &HamiltonianMatrix) -> f64 {
        let hv = h.matrix() * &self.eigenvectors;
        (0..self.dim())
            .map(|n| (hv.column(n) - self.eigenvectors.column(n) * self.eigenvalues[n]).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|VᵀV − 1|`.
    pub fn orthonormality_error(&self) -> f64 {
        let g = self.eigenvectors.transpose() * &self.eigenvectors;
        let n = self.dim();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((g[(a, b)] - target).abs());
            }
        }
        worst
    }
}

/// Full spectrum via a dense symmetric eigensolver.
///
/// Degenerate clusters are rotated onto a canonical basis obtained by
/// projecting the unit vectors `e_0, e_1, …` onto the cluster in order and
/// orthonormalizing, so the result does not depend on solver internals.
pub fn eigendecompose(h: &HamiltonianMatrix) -> Result<SpectralData> {
    eigendecompose_with_pivots(h, &[])
}

/// Like [`eigendecompose`], but the given vectors are projected onto each
/// degenerate cluster before the unit vectors. Passing the vacuum makes a
/// single eigenvector carry all of its weight inside a degenerate cluster.
pub fn eigendecompose_with_pivots(h: &HamiltonianMatrix, pivots: &[DVector<f64>]) -> Result<SpectralData> {
    let n = h.dim();
    let scale = h.matrix().amax().max(1.0);
    if h.asymmetry() > 1e-12 * scale {
        return Err(argument(format!("Hamiltonian is not symmetric (asymmetry {:e})", h.asymmetry())));
    }
    if let Some(p) = pivots.iter().find(|p| p.len() != n) {
        return Err(argument(format!("pivot of length {} for a {n}-dimensional matrix", p.len())));
    }
    let eig = SymmetricEigen::try_new(h.matrix().clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }

    let radius = eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs())).max(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] <= DEGENERACY_TOL * radius {
            end += 1;
        }
        if end - start > 1 {
            canonicalize_cluster(&mut vectors, start, end, pivots);
        }
        start = end;
    }
    for c in 0..n {
        fix_sign(&mut vectors, c);
    }
    Ok(SpectralData { eigenvalues, eigenvectors: vectors })
}

fn canonicalize_cluster(vectors: &mut DMatrix<f64>, start: usize, end: usize, pivots: &[DVector<f64>]) {
    let n = vectors.nrows();
    let d = end - start;
    let q = vectors.columns(start, d).into_owned();
    let mut accepted: Vec<DVector<f64>> = Vec::with_capacity(d);

    let candidates = pivots.iter().map(|p| q.transpose() * p).chain((0..n).map(|i| q.row(i).transpose().into_owned()));
    for threshold in [1e-3, 1e-8] {
        for c in candidates.clone() {
            if accepted.len() == d {
                break;
            }
            let mut r = c;
            for _ in 0..2 {
                for b in &accepted {
                    let proj = b.dot(&r);
                    r.axpy(-proj, b, 1.0);
                }
            }
            let norm = r.norm();
            if norm > threshold {
                accepted.push(r / norm);
            }
        }
        if accepted.len() == d {
            break;
        }
    }
    debug_assert_eq!(accepted.len(), d);
    for (k, coeffs) in accepted.iter().enumerate() {
        let col = &q * coeffs;
        vectors.set_column(start + k, &col);
    }
}

/// Makes the largest-magnitude component (lowest index on ties) positive.
fn fix_sign(vectors: &mut DMatrix<f64>, c: usize) {
    let col = vectors.column(c);
    let max = col.amax();
    let pivot = col.iter().position(|v| v.abs() >= max * (1.0 - 1e-9)).unwrap_or(0);
    if col[pivot] < 0.0 {
        vectors.column_mut(c).neg_mut();
    }
}

/// Per-eigenstate diagnostics row.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenstateDiagnostics {
    pub n: usize,
    pub energy: f64,
    /// Half-chain entanglement entropy in nats.
    pub entropy: f64,
    /// `|⟨vac|E_n⟩|²`.
    pub vacuum_overlap: f64,
    /// `⟨E_n|σᶻ_site|E_n⟩`.
    pub sigma_z: f64,
}

impl EigenstateDiagnostics {
    pub fn overlap_suppressed(&self) -> bool {
        self.vacuum_overlap < OVERLAP_CUTOFF
    }
}

/// Entropy, overlap with `reference` (a zero-momentum state) and `σᶻ_site`
/// for every eigenstate. Rows are computed in parallel but each row only
/// depends on its own eigenvector.
pub fn eigenstate_diagnostics(
    chain: &Chain,
    spectral: &SpectralData,
    reference: &StateVector,
    site: usize,
) -> Result<Vec<EigenstateDiagnostics>> {
    reference.expect(BasisKind::ZeroMomentum, spectral.dim())?;
    let z_orbit = chain.sector().orbit_average(&chain.sigma_z_diagonal(site)?);
    let coeffs = spectral.coefficients(reference)?;
    (0..spectral.dim())
        .into_par_iter()
        .map(|n| {
            let v = spectral.eigenvectors().column(n);
            let sigma_z = v.iter().zip(&z_orbit).map(|(a, z)| a * a * z).sum();
            let full = chain.sector().expand(&spectral.eigenstate(n))?;
            let entropy = chain.half_cut().entropy(&full)?;
            Ok(EigenstateDiagnostics {
                n,
                energy: spectral.eigenvalues()[n],
                entropy,
                vacuum_overlap: coeffs[n].norm_sqr(),
                sigma_z,
            })
        })
        .collect()
}

/// Canonical mean energy `Σ E e^{-βE} / Σ e^{-βE}`.
pub fn thermal_energy(eigenvalues: &[f64], beta: f64) -> f64 {
    let w = boltzmann_weights(eigenvalues, beta);
    let z: f64 = w.iter().sum();
    eigenvalues.iter().zip(&w).map(|(e, w)| e * w).sum::<f64>() / z
}

fn boltzmann_weights(eigenvalues: &[f64], beta: f64) -> Vec<f64> {
    let shift = eigenvalues.iter().map(|e| -beta * e).fold(f64::NEG_INFINITY, f64::max);
    eigenvalues.iter().map(|e| (-beta * e - shift).exp()).collect()
}

/// Inverse temperature whose canonical energy equals `energy`, found by
/// bisection on `[-50, 50]`. Negative β is returned for upper-spectrum energies.
pub fn thermal_beta(energy: f64, eigenvalues: &[f64]) -> Result<f64> {
    const BRACKET: f64 = 50.0;
    const TOL: f64 = 1e-10;
    let (lo_e, hi_e) =
        eigenvalues.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)));
    if eigenvalues.is_empty() || !(energy > lo_e && energy < hi_e) {
        return Err(argument(format!("energy {energy} outside the open spectral range ({lo_e}, {hi_e})")));
    }
    // the canonical energy decreases monotonically in β
    let f = |b: f64| thermal_energy(eigenvalues, b) - energy;
    let (mut lo, mut hi) = (-BRACKET, BRACKET);
    let (flo, fhi) = (f(lo), f(hi));
    if flo < 0.0 || fhi > 0.0 {
        return Err(Error::Numerical(format!("β bracket [-50, 50] does not contain the root for energy {energy}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() <= TOL {
            return Ok(mid);
        }
        if fm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Numerical(format!("β bisection did not reach |residual| <= {TOL}")))
}

/// `Σ_n O_nn e^{-βE_n} / Z` given the diagonal `O_nn = ⟨E_n|O|E_n⟩`.
pub fn thermal_expectation(diagonal: &[f64], eigenvalues: &[f64], beta: f64) -> f64 {
    let w = boltzmann_weights(eigenvalues, beta);
    let z: f64 = w.iter().sum();
    diagonal.iter().zip(&w).map(|(o, w)| o * w).sum::<f64>() / z
}
