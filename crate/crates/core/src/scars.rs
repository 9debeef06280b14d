//! Scar classification from the per-eigenstate diagnostics table, projections
//! onto the scar subspace and the revival formula for equally spaced towers.

use std::f64::consts::PI;

use crate::error::{argument, Result};
use crate::spectral::{EigenstateDiagnostics, SpectralData};
use crate::state::{BasisKind, StateVector};

/// Number of overlap peaks used to estimate the default window width.
pub const DEFAULT_PEAKS: usize = 5;
pub const DEFAULT_OVERLAP_FLOOR: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ScarMode {
    /// Every eigenstate with overlap ≥ floor and entropy ≤ ceiling.
    Threshold,
    /// One eigenstate per energy band: the largest overlap, kept if its
    /// entropy is ≤ ceiling.
    #[default]
    Window,
}

impl ScarMode {
    pub fn name(&self) -> &'static str {
        match self {
            ScarMode::Threshold => "threshold",
            ScarMode::Window => "window",
        }
    }
}

impl std::str::FromStr for ScarMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "threshold" => Ok(ScarMode::Threshold),
            "window" => Ok(ScarMode::Window),
            _ => Err(argument(format!("unknown scar mode {s:?} (expected threshold or window)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScarCriteria {
    pub overlap_floor: f64,
    /// Entanglement entropy ceiling in nats.
    pub entropy_ceiling: f64,
    /// Width of the energy bands in window mode.
    pub window: f64,
    pub mode: ScarMode,
}

impl ScarCriteria {
    pub fn validate(&self) -> Result<()> {
        if !(self.overlap_floor > 0.0 && self.overlap_floor < 1.0) {
            return Err(argument(format!("overlap floor must lie in (0, 1), got {}", self.overlap_floor)));
        }
        if !(self.entropy_ceiling > 0.0 && self.entropy_ceiling.is_finite()) {
            return Err(argument(format!("entropy ceiling must be positive, got {}", self.entropy_ceiling)));
        }
        if !(self.window > 0.0 && self.window.is_finite()) {
            return Err(argument(format!("window must be positive, got {}", self.window)));
        }
        Ok(())
    }

    /// Defaults derived from the table: floor `1e-3`, ceiling one nat below
    /// the median entropy (kept positive for tiny chains), and a window equal to the mean energy gap between
    /// the `peaks` largest overlaps.
    pub fn defaults_for(diagnostics: &[EigenstateDiagnostics], peaks: usize) -> Result<Self> {
        if diagnostics.len() < 2 {
            return Err(argument("scar defaults need at least two eigenstates"));
        }
        if peaks < 2 || peaks > diagnostics.len() {
            return Err(argument(format!("peak count must lie in 2..={}, got {peaks}", diagnostics.len())));
        }
        Ok(Self {
            overlap_floor: DEFAULT_OVERLAP_FLOOR,
            entropy_ceiling: (median_entropy(diagnostics) - 1.0).max(f64::EPSILON),
            window: peak_spacing(diagnostics, peaks),
            mode: ScarMode::Window,
        })
    }
}

pub fn median_entropy(diagnostics: &[EigenstateDiagnostics]) -> f64 {
    let mut s: Vec<f64> = diagnostics.iter().map(|d| d.entropy).collect();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Mean energy gap between the `peaks` largest-overlap eigenstates.
pub fn peak_spacing(diagnostics: &[EigenstateDiagnostics], peaks: usize) -> f64 {
    let mut by_overlap: Vec<&EigenstateDiagnostics> = diagnostics.iter().collect();
    by_overlap.sort_by(|a, b| b.vacuum_overlap.total_cmp(&a.vacuum_overlap).then(a.n.cmp(&b.n)));
    let (lo, hi) = by_overlap[..peaks]
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| (lo.min(d.energy), hi.max(d.energy)));
    (hi - lo) / (peaks - 1) as f64
}

/// Classified scar eigenstates.
#[derive(Clone, Debug, PartialEq)]
pub struct ScarSet {
    indices: Vec<usize>,
    /// Second-largest overlap per band (window mode only).
    runner_ups: Vec<usize>,
    criteria: ScarCriteria,
}

impl ScarSet {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn runner_ups(&self) -> &[usize] {
        &self.runner_ups
    }

    pub fn criteria(&self) -> &ScarCriteria {
        &self.criteria
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, n: usize) -> bool {
        self.indices.binary_search(&n).is_ok()
    }

    pub fn energies(&self, diagnostics: &[EigenstateDiagnostics]) -> Vec<f64> {
        self.indices.iter().map(|&n| diagnostics[n].energy).collect()
    }

    /// Coefficient of variation (std / mean) of consecutive energy gaps.
    pub fn gap_spread(&self, diagnostics: &[EigenstateDiagnostics]) -> Option<f64> {
        let e = self.energies(diagnostics);
        if e.len() < 3 {
            return None;
        }
        let gaps: Vec<f64> = e.windows(2).map(|w| w[1] - w[0]).collect();
        let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
        let var = gaps.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / gaps.len() as f64;
        Some(var.sqrt() / mean)
    }
}

/// Selects scar eigenstates from a diagnostics table ordered by index.
///
/// Window bands are `[mid + (k − ½)w, mid + (k + ½)w)` around the spectral
/// midpoint `mid`, so a symmetric spectrum gives a symmetric band layout.
/// Overlap ties go to the lower index.
pub fn classify_scars(diagnostics: &[EigenstateDiagnostics], criteria: &ScarCriteria) -> Result<ScarSet> {
    criteria.validate()?;
    if diagnostics.iter().enumerate().any(|(i, d)| d.n != i) {
        return Err(argument("diagnostics rows must be ordered by eigenstate index"));
    }
    let mut indices = Vec::new();
    let mut runner_ups = Vec::new();
    match criteria.mode {
        ScarMode::Threshold => {
            indices.extend(
                diagnostics
                    .iter()
                    .filter(|d| d.vacuum_overlap >= criteria.overlap_floor && d.entropy <= criteria.entropy_ceiling)
                    .map(|d| d.n),
            );
        }
        ScarMode::Window => {
            let (lo, hi) = diagnostics
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| (lo.min(d.energy), hi.max(d.energy)));
            let mid = 0.5 * (lo + hi);
            let band = |e: f64| ((e - mid) / criteria.window + 0.5).floor() as i64;
            let mut bands: std::collections::BTreeMap<i64, (Option<usize>, Option<usize>)> = Default::default();
            for d in diagnostics {
                let slot = bands.entry(band(d.energy)).or_default();
                let better = |cur: Option<usize>| cur.is_none_or(|c| d.vacuum_overlap > diagnostics[c].vacuum_overlap);
                if better(slot.0) {
                    slot.1 = slot.0;
                    slot.0 = Some(d.n);
                } else if better(slot.1) {
                    slot.1 = Some(d.n);
                }
            }
            for (best, second) in bands.into_values() {
                let best = best.expect("bands are created with a member");
                if diagnostics[best].entropy <= criteria.entropy_ceiling {
                    indices.push(best);
                }
                runner_ups.extend(second);
            }
        }
    }
    indices.sort_unstable();
    runner_ups.sort_unstable();
    Ok(ScarSet { indices, runner_ups, criteria: *criteria })
}

/// `Σ_s |⟨E_s|ψ⟩|²` for a zero-momentum state.
pub fn scar_projection(state: &StateVector, scars: &ScarSet, spectral: &SpectralData) -> Result<f64> {
    state.expect(BasisKind::ZeroMomentum, spectral.dim())?;
    if let Some(&n) = scars.indices.iter().find(|&&n| n >= spectral.dim()) {
        return Err(argument(format!("scar index {n} outside a {}-dimensional spectrum", spectral.dim())));
    }
    let a = state.amplitudes();
    Ok(scars
        .indices
        .iter()
        .map(|&n| {
            let c: num_complex::Complex64 = spectral.eigenvectors().column(n).iter().zip(a).map(|(&v, &x)| x * v).sum();
            c.norm_sqr()
        })
        .fold(0.0, |acc, p| acc + p))
}

/// Equal-weight superposition of the given eigenstates, normalized.
pub fn equal_superposition(spectral: &SpectralData, indices: &[usize]) -> Result<StateVector> {
    let mut amps = vec![0.0; spectral.dim()];
    for &n in indices {
        if n >= spectral.dim() {
            return Err(argument(format!("eigenstate index {n} outside 0..{}", spectral.dim())));
        }
        for (a, v) in amps.iter_mut().zip(spectral.eigenvectors().column(n).iter()) {
            *a += v;
        }
    }
    let mut s = StateVector::from_real(BasisKind::ZeroMomentum, &amps);
    s.normalize()?;
    Ok(s)
}

/// Least-squares slope of the sorted scar energies against their rank.
pub fn tower_frequency(energies: &[f64]) -> Option<f64> {
    let n = energies.len();
    if n < 2 {
        return None;
    }
    let mut e = energies.to_vec();
    e.sort_by(f64::total_cmp);
    let mean_k = (n - 1) as f64 / 2.0;
    let mean_e = e.iter().sum::<f64>() / n as f64;
    let (num, den) = e.iter().enumerate().fold((0.0, 0.0), |(num, den), (k, &x)| {
        let dk = k as f64 - mean_k;
        (num + dk * (x - mean_e), den + dk * dk)
    });
    Some(num / den)
}

/// Echo of an equal-weight tower of `N + 1` levels spaced by `ω`:
/// `|Σ_{n=0}^{N} cos(nωt) / (N + 1)|²`, which is 1 at `t = 2πk/ω`.
pub fn revival_prediction(omega: f64, levels: usize, t: f64) -> f64 {
    let s = cosine_sum(omega, levels, t);
    (s / (levels + 1) as f64).powi(2)
}

/// The same sum normalized by `N` instead of `N + 1`; its value at the
/// revival times is `((N + 1)/N)²`.
pub fn revival_sum_over_n(omega: f64, levels: usize, t: f64) -> f64 {
    let s = cosine_sum(omega, levels, t);
    (s / levels as f64).powi(2)
}

fn cosine_sum(omega: f64, levels: usize, t: f64) -> f64 {
    // reduce ωt modulo 2π first so t = 2πk/ω lands exactly on whole turns
    let phase = (omega * t).rem_euclid(2.0 * PI);
    let phase = if (2.0 * PI - phase) < 1e-12 * omega.abs().max(1.0) * t.abs().max(1.0) { 0.0 } else { phase };
    (0..=levels).map(|n| (n as f64 * phase).cos()).sum()
}

/// Revival times `2πk/ω` for `k = 1..=count`.
pub fn revival_times(omega: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|k| 2.0 * PI * k as f64 / omega).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, energy: f64, entropy: f64, overlap: f64) -> EigenstateDiagnostics {
        EigenstateDiagnostics { n, energy, entropy, vacuum_overlap: overlap, sigma_z: 0.0 }
    }

    fn table() -> Vec<EigenstateDiagnostics> {
        vec![
            row(0, -2.0, 0.5, 0.2),
            row(1, -1.1, 3.0, 0.01),
            row(2, -0.9, 1.0, 0.1),
            row(3, 0.0, 1.2, 0.3),
            row(4, 0.1, 3.5, 0.05),
            row(5, 1.0, 0.9, 0.1),
            row(6, 2.0, 0.4, 0.2),
        ]
    }

    fn crit(mode: ScarMode) -> ScarCriteria {
        ScarCriteria { overlap_floor: 0.08, entropy_ceiling: 2.0, window: 1.0, mode }
    }

    #[test]
    fn window_mode_picks_band_maxima() {
        let s = classify_scars(&table(), &crit(ScarMode::Window)).unwrap();
        assert_eq!(s.indices(), &[0, 2, 3, 5, 6]);
        assert_eq!(s.runner_ups(), &[1, 4]);
        assert!(s.gap_spread(&table()).unwrap() < 0.1);
    }

    #[test]
    fn threshold_mode() {
        let s = classify_scars(&table(), &crit(ScarMode::Threshold)).unwrap();
        assert_eq!(s.indices(), &[0, 2, 3, 5, 6]);
        let strict = ScarCriteria { overlap_floor: 0.25, ..crit(ScarMode::Threshold) };
        assert_eq!(classify_scars(&table(), &strict).unwrap().indices(), &[3]);
        let none = ScarCriteria { overlap_floor: 0.9, ..crit(ScarMode::Threshold) };
        assert!(classify_scars(&table(), &none).unwrap().is_empty());
    }

    #[test]
    fn invalid_criteria() {
        for c in [
            ScarCriteria { overlap_floor: 0.0, ..crit(ScarMode::Window) },
            ScarCriteria { overlap_floor: 1.0, ..crit(ScarMode::Window) },
            ScarCriteria { entropy_ceiling: -1.0, ..crit(ScarMode::Window) },
            ScarCriteria { window: 0.0, ..crit(ScarMode::Window) },
        ] {
            assert!(classify_scars(&table(), &c).is_err());
        }
    }

    #[test]
    fn defaults_from_table() {
        let c = ScarCriteria::defaults_for(&table(), 3).unwrap();
        assert_eq!(c.overlap_floor, 1e-3);
        // median 1 minus one nat, clamped positive
        assert_eq!(c.entropy_ceiling, f64::EPSILON);
        // top three overlaps at -2, 0, 2
        assert!((c.window - 2.0).abs() < 1e-15);
    }

    #[test]
    fn revival_formula() {
        for k in 0..=3 {
            let t = 2.0 * PI * k as f64 / 1.7;
            assert_eq!(revival_prediction(1.7, 10, t), 1.0);
        }
        assert!((revival_prediction(1.0, 2, PI) - 1.0 / 9.0).abs() < 1e-15);
        assert!((revival_sum_over_n(1.0, 2, PI) - 0.25).abs() < 1e-15);
        assert!(revival_prediction(1.0, 10, 1.0) < 0.1);
    }

    #[test]
    fn tower_slope() {
        let e = [3.0, -1.0, 1.0, 5.0];
        assert!((tower_frequency(&e).unwrap() - 2.0).abs() < 1e-15);
        assert!(tower_frequency(&[1.0]).is_none());
    }
}
