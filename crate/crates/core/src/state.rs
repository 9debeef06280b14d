use num_complex::Complex64;

use crate::error::{argument, Result};

/// Which basis a [`StateVector`]'s amplitudes refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// One amplitude per physical configuration, in basis order.
    Full,
    /// One amplitude per translation orbit (zero-momentum combinations).
    ZeroMomentum,
}

/// Tolerance used when a state is required to be normalized.
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    kind: BasisKind,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(kind: BasisKind, amps: Vec<Complex64>) -> Self {
        Self { kind, amps }
    }

    pub fn zeros(kind: BasisKind, dim: usize) -> Self {
        Self { kind, amps: vec![Complex64::new(0.0, 0.0); dim] }
    }

    pub fn from_real(kind: BasisKind, amps: &[f64]) -> Self {
        Self { kind, amps: amps.iter().map(|&a| Complex64::new(a, 0.0)).collect() }
    }

    /// A single basis element.
    pub fn basis_state(kind: BasisKind, dim: usize, index: usize) -> Self {
        let mut s = Self::zeros(kind, dim);
        s.amps[index] = Complex64::new(1.0, 0.0);
        s
    }

    #[inline]
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(argument("cannot normalize a zero or non-finite state"));
        }
        self.amps.iter_mut().for_each(|a| *a /= n);
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_space(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Expectation of an operator that is diagonal in this basis.
    pub fn diagonal_expectation(&self, diag: &[f64]) -> f64 {
        self.amps.iter().zip(diag).map(|(a, d)| a.norm_sqr() * d).sum()
    }

    pub(crate) fn check_same_space(&self, other: &StateVector) -> Result<()> {
        if self.kind != other.kind || self.dim() != other.dim() {
            return Err(argument(format!(
                "basis mismatch: {:?}[{}] vs {:?}[{}]",
                self.kind,
                self.dim(),
                other.kind,
                other.dim()
            )));
        }
        Ok(())
    }

    pub(crate) fn expect(&self, kind: BasisKind, dim: usize) -> Result<()> {
        if self.kind != kind || self.dim() != dim {
            return Err(argument(format!(
                "expected a {kind:?} state of dimension {dim}, got {:?}[{}]",
                self.kind,
                self.dim()
            )));
        }
        Ok(())
    }
}
