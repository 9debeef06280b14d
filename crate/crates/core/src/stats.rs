//! Normalized deviations between observable series and random-circuit
//! ensemble statistics.

use rayon::prelude::*;

use crate::circuit::{random_schedule, run_circuit, ObservableSeries, Observables};
use crate::error::{argument, Error, Result};
use crate::state::StateVector;
use crate::Chain;

/// `Δ(Q) = sqrt(Σ_n (Q_n − Q̄_n)² / Σ_n Q̄_n²)` over every sample including `n = 0`.
pub fn normalized_deviation(q: &[f64], reference: &[f64]) -> Result<f64> {
    if q.len() != reference.len() {
        return Err(argument(format!("series lengths differ: {} vs {}", q.len(), reference.len())));
    }
    let num: f64 = q.iter().zip(reference).map(|(a, b)| (a - b).powi(2)).sum();
    let den: f64 = reference.iter().map(|b| b * b).sum();
    if den == 0.0 {
        return Err(Error::Numerical("reference series is identically zero".into()));
    }
    Ok((num / den).sqrt())
}

/// Δ restricted to the samples `0..=n`, for every `n`. Prefixes whose
/// reference is still identically zero give 0.
pub fn deviation_evolution(q: &[f64], reference: &[f64]) -> Result<Vec<f64>> {
    if q.len() != reference.len() {
        return Err(argument(format!("series lengths differ: {} vs {}", q.len(), reference.len())));
    }
    let (mut num, mut den) = (0.0, 0.0);
    Ok(q.iter()
        .zip(reference)
        .map(|(a, b)| {
            num += (a - b).powi(2);
            den += b * b;
            if den == 0.0 {
                0.0
            } else {
                (num / den).sqrt()
            }
        })
        .collect())
}

/// Group deviations `Δ_k`, their mean and the spread
/// `Err = sqrt(Σ_k (Δ_k − Δ̄)² / (M/K))`.
#[derive(Clone, Debug, PartialEq)]
pub struct RunStatistics {
    pub group_deltas: Vec<f64>,
    pub mean: f64,
    pub error: f64,
    /// Runs per group.
    pub k: usize,
    /// Total runs.
    pub m: usize,
}

impl RunStatistics {
    pub fn from_group_deltas(group_deltas: Vec<f64>, k: usize) -> Self {
        let g = group_deltas.len() as f64;
        let mean = group_deltas.iter().sum::<f64>() / g;
        let error = (group_deltas.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / g).sqrt();
        Self { m: group_deltas.len() * k, group_deltas, mean, error, k }
    }

    /// Whether `[mean − error, mean + error]` intervals are disjoint.
    pub fn separated_from(&self, other: &RunStatistics) -> bool {
        self.mean - self.error > other.mean + other.error || other.mean - other.error > self.mean + self.error
    }
}

/// Ensemble-mean series of one group of `K` runs.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupMeans {
    pub sigma_z: Vec<f64>,
    pub loschmidt: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleResult {
    pub times: Vec<f64>,
    pub groups: Vec<GroupMeans>,
    pub sigma_z: RunStatistics,
    pub loschmidt: RunStatistics,
    /// Group-averaged `Δ_k` over the samples `0..=n`, per `n`.
    pub sigma_z_curve: Vec<f64>,
    pub loschmidt_curve: Vec<f64>,
}

/// Runs `m` random circuits from `initial` and compares group means of `k`
/// runs against `reference` (normally the sequential circuit at the same `τ`
/// and `N`).
///
/// Run `r` uses stream `r` of the master seed. Runs execute in parallel and
/// are reduced in ascending run order, so the result does not depend on the
/// thread count.
#[allow(clippy::too_many_arguments)]
pub fn ensemble_statistics(
    chain: &Chain,
    initial: &StateVector,
    master_seed: u64,
    m: usize,
    k: usize,
    tau: f64,
    steps: usize,
    reference: &ObservableSeries,
) -> Result<EnsembleResult> {
    if k == 0 || m == 0 || !m.is_multiple_of(k) {
        return Err(argument(format!("K = {k} must be positive and divide M = {m}")));
    }
    if reference.len() != steps + 1 {
        return Err(argument(format!("reference has {} samples, expected {}", reference.len(), steps + 1)));
    }
    let obs = Observables::new(reference.sigma_z_site);
    let runs: Vec<ObservableSeries> = (0..m as u64)
        .into_par_iter()
        .map(|r| run_circuit(chain, initial, &random_schedule(master_seed, r, steps, chain.sites(), tau), obs))
        .collect::<Result<_>>()?;

    let samples = steps + 1;
    let groups: Vec<GroupMeans> = runs
        .chunks(k)
        .map(|group| {
            let mut z = vec![0.0; samples];
            let mut l = vec![0.0; samples];
            for run in group {
                for n in 0..samples {
                    z[n] += run.sigma_z[n];
                    l[n] += run.loschmidt[n];
                }
            }
            z.iter_mut().chain(l.iter_mut()).for_each(|x| *x /= k as f64);
            GroupMeans { sigma_z: z, loschmidt: l }
        })
        .collect();

    let dz: Vec<f64> =
        groups.iter().map(|g| normalized_deviation(&g.sigma_z, &reference.sigma_z)).collect::<Result<_>>()?;
    let dl: Vec<f64> =
        groups.iter().map(|g| normalized_deviation(&g.loschmidt, &reference.loschmidt)).collect::<Result<_>>()?;
    let curve = |pick: fn(&GroupMeans) -> &[f64], reference: &[f64]| -> Result<Vec<f64>> {
        let mut acc = vec![0.0; samples];
        for g in &groups {
            for (a, d) in acc.iter_mut().zip(deviation_evolution(pick(g), reference)?) {
                *a += d;
            }
        }
        Ok(acc.into_iter().map(|a| a / groups.len() as f64).collect())
    };
    let sigma_z_curve = curve(|g| &g.sigma_z, &reference.sigma_z)?;
    let loschmidt_curve = curve(|g| &g.loschmidt, &reference.loschmidt)?;

    Ok(EnsembleResult {
        times: reference.times.clone(),
        sigma_z: RunStatistics::from_group_deltas(dz, k),
        loschmidt: RunStatistics::from_group_deltas(dl, k),
        groups,
        sigma_z_curve,
        loschmidt_curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CircuitSchedule, SequentialOrder};

    #[test]
    fn deviation_basics() {
        let a = [1.0, 0.5, -0.25];
        assert_eq!(normalized_deviation(&a, &a).unwrap(), 0.0);
        let b = [1.0, 0.0, 0.0];
        assert!((normalized_deviation(&a, &b).unwrap() - (0.3125f64).sqrt()).abs() < 1e-15);
        assert!(normalized_deviation(&a, &[0.0; 3]).is_err());
        assert!(normalized_deviation(&a, &b[..2]).is_err());
        let ev = deviation_evolution(&a, &b).unwrap();
        assert_eq!(ev[0], 0.0);
        assert!((ev[2] - normalized_deviation(&a, &b).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn error_formula() {
        let s = RunStatistics::from_group_deltas(vec![1.0, 3.0], 5);
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.error, 1.0);
        assert_eq!(s.m, 10);
    }

    #[test]
    fn ensemble_is_deterministic() {
        let chain = Chain::new(12).unwrap();
        let vac = chain.vacuum();
        let seq = CircuitSchedule::sequential(12, 0.1, 10, SequentialOrder::Product);
        let reference = run_circuit(&chain, &vac, &seq, Observables::new(7)).unwrap();
        let a = ensemble_statistics(&chain, &vac, 3, 20, 5, 0.1, 10, &reference).unwrap();
        let b = ensemble_statistics(&chain, &vac, 3, 20, 5, 0.1, 10, &reference).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sigma_z.group_deltas.len(), 4);
        assert!(a.loschmidt.mean >= 0.0 && a.loschmidt.error >= 0.0);
        assert!(ensemble_statistics(&chain, &vac, 3, 20, 6, 0.1, 10, &reference).is_err());
    }
}
