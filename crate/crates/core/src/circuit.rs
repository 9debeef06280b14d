//! Trotter circuits of three-body gates and exact reference evolution.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{argument, Result};
use crate::hamiltonian::GateTable;
use crate::spectral::SpectralData;
use crate::state::{BasisKind, StateVector};
use crate::Chain;

/// Tolerance for the weight of an exact-evolution input outside the zero-momentum sector.
const SECTOR_LEAK_TOL: f64 = 1e-10;

/// `exp(-i H_j τ)` applied in place.
///
/// On each pair `(x, y)` of gate `j` this is the rotation
/// `a_x ← cos τ·a_x − i sin τ·a_y`, `a_y ← −i sin τ·a_x + cos τ·a_y`;
/// configurations outside the pairs are untouched.
pub fn apply_gate(table: &GateTable, state: &mut StateVector, j: usize, tau: f64) -> Result<()> {
    if j == 0 || j > table.gate_count() {
        return Err(argument(format!("gate index {j} outside 1..={}", table.gate_count())));
    }
    state.expect(BasisKind::Full, table.dim())?;
    rotate_pairs(table.pairs(j), state.amplitudes_mut(), tau.cos(), tau.sin());
    Ok(())
}

#[inline]
fn rotate_pairs(pairs: &[(u32, u32)], amps: &mut [Complex64], c: f64, s: f64) {
    for &(x, y) in pairs {
        let (x, y) = (x as usize, y as usize);
        let (a, b) = (amps[x], amps[y]);
        // -i s z = (s z.im, -s z.re)
        amps[x] = Complex64::new(c * a.re + s * b.im, c * a.im - s * b.re);
        amps[y] = Complex64::new(c * b.re + s * a.im, c * b.im - s * a.re);
    }
}

/// Gate order inside one sequential Trotter step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SequentialOrder {
    /// `j = 1, 2, …, L/2`.
    #[default]
    Product,
    /// Odd `j` first, then even `j`: two layers of mutually commuting gates.
    Layered,
}

impl SequentialOrder {
    pub fn name(&self) -> &'static str {
        match self {
            SequentialOrder::Product => "product",
            SequentialOrder::Layered => "layered",
        }
    }

    fn step(&self, gates: usize) -> Vec<u16> {
        match self {
            SequentialOrder::Product => (1..=gates as u16).collect(),
            SequentialOrder::Layered => (1..=gates as u16).step_by(2).chain((2..=gates as u16).step_by(2)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleKind {
    Sequential(SequentialOrder),
    /// Uniform random gates from ChaCha8 seeded with `seed`, stream `run`.
    Random {
        seed: u64,
        run: u64,
    },
}

/// Ordered gate indices with a common time step.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitSchedule {
    tau: f64,
    steps: usize,
    gates_per_step: usize,
    gates: Vec<u16>,
    kind: ScheduleKind,
}

impl CircuitSchedule {
    /// `steps` repetitions of one sequential Trotter step.
    pub fn sequential(sites: usize, tau: f64, steps: usize, order: SequentialOrder) -> Self {
        let per = sites / 2;
        let one = order.step(per);
        let gates = one.iter().copied().cycle().take(per * steps).collect();
        Self { tau, steps, gates_per_step: per, gates, kind: ScheduleKind::Sequential(order) }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn gates_per_step(&self) -> usize {
        self.gates_per_step
    }

    pub fn gates(&self) -> &[u16] {
        &self.gates
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }
}

/// `steps·L/2` gate indices drawn independently and uniformly from `1..=L/2`.
///
/// Each run owns the ChaCha8 stream `run` of the generator seeded with
/// `master_seed`, so schedules are reproducible and independent of how runs are
/// distributed over threads.
pub fn random_schedule(master_seed: u64, run: u64, steps: usize, sites: usize, tau: f64) -> CircuitSchedule {
    let per = sites / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(run);
    let gates = (0..per * steps).map(|_| rng.random_range(1..=per as u16)).collect();
    CircuitSchedule { tau, steps, gates_per_step: per, gates, kind: ScheduleKind::Random { seed: master_seed, run } }
}

/// Which observables to record along a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Observables {
    /// Site of the recorded `σᶻ` expectation (1-based).
    pub sigma_z_site: usize,
    /// Half-chain entanglement entropy; the most expensive observable.
    pub entropy: bool,
}

impl Observables {
    pub fn new(sigma_z_site: usize) -> Self {
        Self { sigma_z_site, entropy: false }
    }

    pub fn with_entropy(mut self) -> Self {
        self.entropy = true;
        self
    }
}

/// Observables sampled at `t = 0, τ, …, Nτ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableSeries {
    pub sigma_z_site: usize,
    pub times: Vec<f64>,
    pub loschmidt: Vec<f64>,
    pub sigma_z: Vec<f64>,
    pub particle_number: Vec<f64>,
    pub norm: Vec<f64>,
    pub entropy: Option<Vec<f64>>,
}

impl ObservableSeries {
    fn with_capacity(obs: Observables, n: usize) -> Self {
        Self {
            sigma_z_site: obs.sigma_z_site,
            times: Vec::with_capacity(n),
            loschmidt: Vec::with_capacity(n),
            sigma_z: Vec::with_capacity(n),
            particle_number: Vec::with_capacity(n),
            norm: Vec::with_capacity(n),
            entropy: obs.entropy.then(|| Vec::with_capacity(n)),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

struct Recorder<'a> {
    chain: &'a Chain,
    initial: &'a StateVector,
    z: Vec<f64>,
    particles: Vec<f64>,
    series: ObservableSeries,
}

impl<'a> Recorder<'a> {
    fn new(chain: &'a Chain, initial: &'a StateVector, obs: Observables, samples: usize) -> Result<Self> {
        Ok(Self {
            chain,
            initial,
            z: chain.sigma_z_diagonal(obs.sigma_z_site)?,
            particles: chain.particle_number_diagonal(),
            series: ObservableSeries::with_capacity(obs, samples),
        })
    }

    fn record(&mut self, t: f64, state: &StateVector) -> Result<()> {
        let overlap = self.initial.inner(state)?;
        let s = &mut self.series;
        s.times.push(t);
        s.loschmidt.push(overlap.norm_sqr().min(1.0));
        s.sigma_z.push(state.diagonal_expectation(&self.z));
        s.particle_number.push(state.diagonal_expectation(&self.particles));
        s.norm.push(state.norm());
        if let Some(e) = s.entropy.as_mut() {
            e.push(self.chain.half_cut().entropy(state)?);
        }
        Ok(())
    }
}

/// Applies the schedule to `initial` and records observables at `t = 0` and
/// after every block of `L/2` gates.
///
/// The evolution runs in the full physical basis; zero-momentum inputs are
/// expanded first.
pub fn run_circuit(
    chain: &Chain,
    initial: &StateVector,
    schedule: &CircuitSchedule,
    obs: Observables,
) -> Result<ObservableSeries> {
    if schedule.gates_per_step != chain.sites() / 2 {
        return Err(argument(format!(
            "schedule built for {} sites, chain has {}",
            2 * schedule.gates_per_step,
            chain.sites()
        )));
    }
    let psi0 = chain.to_full(initial)?;
    let mut psi = psi0.clone();
    let mut rec = Recorder::new(chain, &psi0, obs, schedule.steps + 1)?;
    rec.record(0.0, &psi)?;
    let (c, s) = (schedule.tau.cos(), schedule.tau.sin());
    let table = chain.gates();
    for (n, block) in schedule.gates.chunks(schedule.gates_per_step).enumerate() {
        for &j in block {
            rotate_pairs(table.pairs(j as usize), psi.amplitudes_mut(), c, s);
        }
        rec.record((n + 1) as f64 * schedule.tau, &psi)?;
    }
    Ok(rec.series)
}

/// `|ψ(t)⟩ = Σ_n e^{-iE_n t} ⟨E_n|ψ₀⟩ |E_n⟩` in the zero-momentum sector,
/// sampled at `times`.
///
/// `initial` may be given in either basis but must lie in the sector.
pub fn exact_evolution(
    chain: &Chain,
    spectral: &SpectralData,
    initial: &StateVector,
    times: &[f64],
    obs: Observables,
) -> Result<ObservableSeries> {
    let sector = chain.sector();
    let start = match initial.kind() {
        BasisKind::ZeroMomentum => initial.clone(),
        BasisKind::Full => {
            let p = sector.project(initial)?;
            let leak = (initial.norm_sqr() - p.norm_sqr()).abs();
            if leak > SECTOR_LEAK_TOL {
                return Err(argument(format!("initial state has weight {leak:e} outside the zero-momentum sector")));
            }
            p
        }
    };
    let coeffs = spectral.coefficients(&start)?;
    let weights: Vec<f64> = coeffs.iter().map(|c| c.norm_sqr()).collect();
    let z = sector.orbit_average(&chain.sigma_z_diagonal(obs.sigma_z_site)?);
    let particles = sector.orbit_average(&chain.particle_number_diagonal());
    let v = spectral.eigenvectors();
    let energies = spectral.eigenvalues();

    let mut series = ObservableSeries::with_capacity(obs, times.len());
    for &t in times {
        let phases: Vec<Complex64> = energies.iter().map(|&e| Complex64::from_polar(1.0, -e * t)).collect();
        let echo: Complex64 = weights.iter().zip(&phases).map(|(w, p)| p * w).sum();
        let b: Vec<Complex64> = coeffs.iter().zip(&phases).map(|(c, p)| c * p).collect();
        let re = v * DVector::from_iterator(b.len(), b.iter().map(|x| x.re));
        let im = v * DVector::from_iterator(b.len(), b.iter().map(|x| x.im));
        let amps: Vec<Complex64> = re.iter().zip(im.iter()).map(|(&r, &i)| Complex64::new(r, i)).collect();
        let state = StateVector::new(BasisKind::ZeroMomentum, amps);

        series.times.push(t);
        series.loschmidt.push(echo.norm_sqr().min(1.0));
        series.sigma_z.push(state.diagonal_expectation(&z));
        series.particle_number.push(state.diagonal_expectation(&particles));
        series.norm.push(state.norm());
        if let Some(e) = series.entropy.as_mut() {
            e.push(chain.half_cut().entropy(&sector.expand(&state)?)?);
        }
    }
    Ok(series)
}

/// `t_n = nτ` for `n = 0..=steps`.
pub fn time_grid(tau: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|n| n as f64 * tau).collect()
}
