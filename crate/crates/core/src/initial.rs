//! Named initial states used by the experiments.
//!
//! The `phi` states are defined by explicit site numbers of a 40-site chain and
//! are only available there.

use std::fmt;
use std::str::FromStr;

use crate::error::{argument, Error, Result};

const PHI_SITES: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedState {
    Vacuum,
    FullyFilled,
    /// Two particles at sites 1 and 3.
    Phi1,
    /// Two particles at sites 1 and 19.
    Phi2,
    /// Four particles at sites 1, 3, 5 and 7.
    Phi3,
    /// Every matter site occupied except 1 and 3.
    Phi4,
}

impl NamedState {
    pub const ALL: [NamedState; 6] = [
        NamedState::Vacuum,
        NamedState::FullyFilled,
        NamedState::Phi1,
        NamedState::Phi2,
        NamedState::Phi3,
        NamedState::Phi4,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            NamedState::Vacuum => "vacuum",
            NamedState::FullyFilled => "fully-filled",
            NamedState::Phi1 => "phi1",
            NamedState::Phi2 => "phi2",
            NamedState::Phi3 => "phi3",
            NamedState::Phi4 => "phi4",
        }
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedState::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| argument(format!("unknown named state {s:?}")))
    }
}

/// Odd-site occupations of a named state on an `L`-site chain.
pub fn expand_named_state(state: NamedState, sites: usize) -> Result<Vec<usize>> {
    let all_odd = || (1..sites).step_by(2);
    let needs_forty = || {
        if sites != PHI_SITES {
            Err(argument(format!("{state} is defined only for L = {PHI_SITES}, got L = {sites}")))
        } else {
            Ok(())
        }
    };
    Ok(match state {
        NamedState::Vacuum => Vec::new(),
        NamedState::FullyFilled => all_odd().collect(),
        NamedState::Phi1 => {
            needs_forty()?;
            vec![1, 3]
        }
        NamedState::Phi2 => {
            needs_forty()?;
            vec![1, 19]
        }
        NamedState::Phi3 => {
            needs_forty()?;
            vec![1, 3, 5, 7]
        }
        NamedState::Phi4 => {
            needs_forty()?;
            all_odd().filter(|&s| s != 1 && s != 3).collect()
        }
    })
}

/// An initial state given either by name or by an explicit occupation list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InitialState {
    Named(NamedState),
    Occupations(Vec<usize>),
}

impl InitialState {
    pub fn occupations(&self, sites: usize) -> Result<Vec<usize>> {
        match self {
            InitialState::Named(n) => expand_named_state(*n, sites),
            InitialState::Occupations(o) => Ok(o.clone()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            InitialState::Named(n) => n.name().to_string(),
            InitialState::Occupations(o) => {
                let parts: Vec<String> = o.iter().map(|s| s.to_string()).collect();
                format!("occupations:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for InitialState {
    type Err = Error;

    /// Accepts a state name or `occupations:<site>,<site>,…` (possibly empty).
    fn from_str(s: &str) -> Result<Self> {
        if let Some(list) = s.strip_prefix("occupations:") {
            let mut sites = Vec::new();
            for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let site: usize = part.parse().map_err(|_| argument(format!("invalid occupation site {part:?}")))?;
                sites.push(site);
            }
            sites.sort_unstable();
            sites.dedup();
            return Ok(InitialState::Occupations(sites));
        }
        s.parse().map(InitialState::Named)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_occupations() {
        assert_eq!(expand_named_state(NamedState::Phi2, 40).unwrap(), vec![1, 19]);
        assert!(expand_named_state(NamedState::Vacuum, 40).unwrap().is_empty());
        assert_eq!(expand_named_state(NamedState::Phi4, 40).unwrap().len(), 18);
        assert_eq!(expand_named_state(NamedState::FullyFilled, 8).unwrap(), vec![1, 3, 5, 7]);
        assert!(expand_named_state(NamedState::Phi1, 20).is_err());
    }

    #[test]
    fn parse_initial_state() {
        assert_eq!("phi3".parse::<InitialState>().unwrap(), InitialState::Named(NamedState::Phi3));
        assert_eq!("occupations:3, 1".parse::<InitialState>().unwrap(), InitialState::Occupations(vec![1, 3]));
        assert!("occupations:x".parse::<InitialState>().is_err());
        assert!("neel".parse::<InitialState>().is_err());
    }
}
