//! `key = value` experiment configuration files.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use qlm_core::{InitialState, ScarMode, SequentialOrder};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    BasisReport,
    ScarSpectrum,
    SequentialVsExact,
    RandomEnsemble,
    EntropyEvolution,
    MagnetizationEvolution,
    LoschmidtEvolution,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::BasisReport,
        Experiment::ScarSpectrum,
        Experiment::SequentialVsExact,
        Experiment::RandomEnsemble,
        Experiment::EntropyEvolution,
        Experiment::MagnetizationEvolution,
        Experiment::LoschmidtEvolution,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::BasisReport => "basis-report",
            Experiment::ScarSpectrum => "scar-spectrum",
            Experiment::SequentialVsExact => "sequential-vs-exact",
            Experiment::RandomEnsemble => "random-ensemble",
            Experiment::EntropyEvolution => "entropy-evolution",
            Experiment::MagnetizationEvolution => "magnetization-evolution",
            Experiment::LoschmidtEvolution => "loschmidt-evolution",
        }
    }

    pub fn summary(&self) -> &'static str {
        match self {
            Experiment::BasisReport => "physical basis, translation orbits and dimensions",
            Experiment::ScarSpectrum => "eigenstate diagnostics and scar classification",
            Experiment::SequentialVsExact => "sequential Trotter circuit against exact evolution",
            Experiment::RandomEnsemble => "random circuit ensemble deviations from the sequential circuit",
            Experiment::EntropyEvolution => "half-chain entropy under the sequential circuit",
            Experiment::MagnetizationEvolution => "local magnetization, exact and sequential circuit",
            Experiment::LoschmidtEvolution => "Loschmidt echo under the sequential circuit",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Experiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| CliError::UnknownExperiment(s.to_string()))
    }
}

/// Fully resolved experiment parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub sites: usize,
    pub tau: f64,
    pub final_time: f64,
    /// `N = T / τ`.
    pub steps: usize,
    pub runs: usize,
    pub group_size: usize,
    pub seed: u64,
    pub initial: InitialState,
    pub site: usize,
    pub output: PathBuf,
    pub order: SequentialOrder,
    pub entropy: bool,
    pub scar_mode: ScarMode,
    pub overlap_floor: Option<f64>,
    pub entropy_ceiling: Option<f64>,
    pub window: Option<f64>,
    pub scar_peaks: usize,
}

const KEYS: &[&str] = &[
    "experiment",
    "L",
    "tau",
    "T",
    "M",
    "K",
    "seed",
    "initial",
    "site",
    "output",
    "order",
    "entropy",
    "scar_mode",
    "overlap_floor",
    "entropy_ceiling",
    "window",
    "scar_peaks",
];

/// Relative tolerance for `T / τ` to count as an integer.
const STEP_TOL: f64 = 1e-9;

/// Splits the file into key/value pairs. Blank lines and `#` comments are
/// ignored; unknown and repeated keys are errors.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Syntax { line: i + 1, reason: "expected `key = value`".into() })?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(CliError::Syntax { line: i + 1, reason: format!("unknown key {key:?}") });
        }
        if value.is_empty() {
            return Err(CliError::Syntax { line: i + 1, reason: format!("empty value for {key:?}") });
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::Syntax { line: i + 1, reason: format!("duplicate key {key:?}") });
        }
    }
    Ok(map)
}

fn value<T: FromStr>(map: &BTreeMap<String, String>, key: &str, default: T) -> Result<T, CliError> {
    match map.get(key) {
        None => Ok(default),
        Some(v) => {
            v.parse().map_err(|_| CliError::InvalidValue { key: key.into(), reason: format!("cannot parse {v:?}") })
        }
    }
}

fn optional<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError> {
    map.get(key)
        .map(|v| {
            v.parse().map_err(|_| CliError::InvalidValue { key: key.into(), reason: format!("cannot parse {v:?}") })
        })
        .transpose()
}

fn invalid(key: &str, reason: impl Into<String>) -> CliError {
    CliError::InvalidValue { key: key.into(), reason: reason.into() }
}

impl ExperimentConfig {
    /// Parses and validates; nothing is computed or written.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let map = parse_pairs(text)?;
        let experiment: Experiment =
            map.get("experiment").ok_or_else(|| invalid("experiment", "missing experiment name"))?.parse()?;
        let sites: usize = value(&map, "L", 40)?;
        if !(4..=qlm_core::basis::MAX_SITES).contains(&sites) || !sites.is_multiple_of(2) {
            return Err(invalid(
                "L",
                format!("must be even and within 4..={}, got {sites}", qlm_core::basis::MAX_SITES),
            ));
        }
        let tau: f64 = value(&map, "tau", 0.1)?;
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(invalid("tau", "must be positive"));
        }
        let final_time: f64 = value(&map, "T", 10.0)?;
        if !(final_time >= 0.0 && final_time.is_finite()) {
            return Err(invalid("T", "must be non-negative"));
        }
        let ratio = final_time / tau;
        if (ratio - ratio.round()).abs() > STEP_TOL * ratio.max(1.0) {
            return Err(CliError::NonIntegerSteps { final_time, tau });
        }
        let steps = ratio.round() as usize;
        let runs: usize = value(&map, "M", 1000)?;
        let group_size: usize = value(&map, "K", 100)?;
        if group_size == 0 || runs == 0 || !runs.is_multiple_of(group_size) {
            return Err(CliError::GroupSize { runs, group_size });
        }
        let seed: u64 = value(&map, "seed", 0)?;
        let initial: InitialState = match map.get("initial") {
            None => InitialState::Named(qlm_core::NamedState::Vacuum),
            Some(v) => v.parse().map_err(|e: qlm_core::Error| CliError::InvalidInitialState(e.to_string()))?,
        };
        let occupied = initial.occupations(sites).map_err(|e| CliError::InvalidInitialState(e.to_string()))?;
        if let Some(&bad) = occupied.iter().find(|&&s| s == 0 || s > sites || s % 2 == 0) {
            return Err(CliError::InvalidInitialState(format!(
                "site {bad} is not an odd site of the {sites}-site chain"
            )));
        }
        qlm_core::gauge_completions(&occupied, sites).map_err(|e| CliError::InvalidInitialState(e.to_string()))?;
        // the centre site, 21 on the 40-site chain
        let site: usize = value(&map, "site", sites / 2 + 1)?;
        if site == 0 || site > sites {
            return Err(invalid("site", format!("must lie in 1..={sites}, got {site}")));
        }
        let output = PathBuf::from(value(&map, "output", "output".to_string())?);
        let order = match map.get("order").map(String::as_str) {
            None | Some("product") => SequentialOrder::Product,
            Some("layered") => SequentialOrder::Layered,
            Some(other) => return Err(invalid("order", format!("expected product or layered, got {other:?}"))),
        };
        let entropy = value(&map, "entropy", experiment == Experiment::EntropyEvolution)?;
        let scar_mode = match map.get("scar_mode") {
            None => ScarMode::Window,
            Some(v) => v.parse().map_err(|e: qlm_core::Error| invalid("scar_mode", e.to_string()))?,
        };
        let overlap_floor: Option<f64> = optional(&map, "overlap_floor")?;
        if overlap_floor.is_some_and(|f| !(f > 0.0 && f < 1.0)) {
            return Err(invalid("overlap_floor", "must lie in (0, 1)"));
        }
        let entropy_ceiling: Option<f64> = optional(&map, "entropy_ceiling")?;
        if entropy_ceiling.is_some_and(|c| !(c > 0.0 && c.is_finite())) {
            return Err(invalid("entropy_ceiling", "must be positive"));
        }
        let window: Option<f64> = optional(&map, "window")?;
        if window.is_some_and(|w| !(w > 0.0 && w.is_finite())) {
            return Err(invalid("window", "must be positive"));
        }
        let scar_peaks: usize = value(&map, "scar_peaks", qlm_core::scars::DEFAULT_PEAKS)?;
        if scar_peaks < 2 {
            return Err(invalid("scar_peaks", "needs at least two peaks"));
        }
        Ok(Self {
            experiment,
            sites,
            tau,
            final_time,
            steps,
            runs,
            group_size,
            seed,
            initial,
            site,
            output,
            order,
            entropy,
            scar_mode,
            overlap_floor,
            entropy_ceiling,
            window,
            scar_peaks,
        })
    }
}
