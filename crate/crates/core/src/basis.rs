//! Gauge-invariant configuration space of the spin-1/2 link model.
//!
//! Site and bit conventions used throughout the crate:
//!
//! * sites are numbered `1..=L` with periodic boundary conditions, `L` even;
//! * odd sites carry matter, even sites carry the gauge field;
//! * bit `b` on a site corresponds to the σᶻ eigenvalue `z = 1 - 2b`, so bit 0 is
//!   spin up and bit 1 is spin down. On a matter site bit 1 means a particle is
//!   present, matching the number operator `(1 - σᶻ)/2`;
//! * a configuration is stored as a `u64` with bit `i - 1` holding site `i`.
//!
//! With these conventions the particle-free vacuum at `L = 8` reads `00010001`
//! (site 1 leftmost) and the fully-filled state is all ones.
//!
//! Gauss's law at an odd site `j` is `z_j - z_{j-1} - z_{j+1} - 1 = 0`, which in bits
//! becomes `b_j = b_{j-1} + b_{j+1} - 1`: adjacent gauge bits may never both be 0
//! and every matter bit is fixed by its two gauge neighbours.

use std::fmt;
use std::io::Write;

use crate::error::{argument, Error, Result};

/// Largest chain length supported by the `u64` encoding and the dense workflows.
pub const MAX_SITES: usize = 48;

/// A basis configuration of an `L`-site chain.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinConfiguration {
    bits: u64,
    len: usize,
}

impl SpinConfiguration {
    pub fn from_bits(bits: u64, len: usize) -> Result<Self> {
        check_length(len)?;
        if len < 64 && bits >> len != 0 {
            return Err(argument(format!("bit pattern {bits:#x} does not fit in {len} sites")));
        }
        Ok(Self { bits, len })
    }

    /// All bits 0 (every spin up).
    pub fn all_up(len: usize) -> Result<Self> {
        Self::from_bits(0, len)
    }

    /// Every matter site occupied, every gauge bit 1.
    pub fn fully_filled(len: usize) -> Result<Self> {
        Self::from_bits(low_mask(len), len)
    }

    /// Parses an `L`-character 0/1 string with site 1 leftmost.
    pub fn parse(s: &str) -> Result<Self> {
        let len = s.len();
        let mut bits = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << i,
                other => return Err(argument(format!("unexpected character {other:?} in configuration"))),
            }
        }
        Self::from_bits(bits, len)
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.len
    }

    /// Bit on 1-based `site`, taken modulo `L`.
    #[inline]
    pub fn bit(&self, site: usize) -> u8 {
        site_bit(self.bits, site, self.len)
    }

    /// σᶻ eigenvalue on 1-based `site`.
    #[inline]
    pub fn z(&self, site: usize) -> i32 {
        1 - 2 * self.bit(site) as i32
    }

    /// Two-site translation: the content of site `i` moves to site `i + 2`.
    #[inline]
    pub fn translate2(&self) -> Self {
        Self { bits: translate2(self.bits, self.len), len: self.len }
    }

    /// Number of occupied matter sites.
    pub fn particle_number(&self) -> u32 {
        (self.bits & matter_mask(self.len)).count_ones()
    }

    pub fn is_physical(&self) -> bool {
        is_physical(self.bits, self.len)
    }
}

impl fmt::Display for SpinConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for site in 1..=self.len {
            f.write_str(if self.bit(site) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SpinConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{self}⟩")
    }
}

fn check_length(len: usize) -> Result<()> {
    if !len.is_multiple_of(2) {
        return Err(argument(format!("chain length must be even, got {len}")));
    }
    if !(4..=MAX_SITES).contains(&len) {
        return Err(argument(format!("chain length must lie in 4..={MAX_SITES}, got {len}")));
    }
    Ok(())
}

#[inline]
pub(crate) fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Bits of all odd (matter) sites.
#[inline]
pub(crate) fn matter_mask(len: usize) -> u64 {
    (0..len).step_by(2).fold(0, |m, i| m | 1 << i)
}

#[inline]
pub(crate) fn site_bit(bits: u64, site: usize, len: usize) -> u8 {
    let i = (site + len - 1) % len;
    ((bits >> i) & 1) as u8
}

#[inline]
pub(crate) fn translate2(bits: u64, len: usize) -> u64 {
    ((bits << 2) | (bits >> (len - 2))) & low_mask(len)
}

/// Bit mask of the triple `(2j-1, 2j, 2j+1)` acted on by gate `j` (1-based).
#[inline]
pub(crate) fn triple_mask(j: usize, len: usize) -> u64 {
    let first = 2 * j - 2;
    (1 << first) | (1 << (first + 1)) | (1 << ((first + 2) % len))
}

fn is_physical(bits: u64, len: usize) -> bool {
    (1..len).step_by(2).all(|site| residual_bits(bits, site, len) == 0)
}

#[inline]
fn residual_bits(bits: u64, site: usize, len: usize) -> i32 {
    let z = |s: usize| 1 - 2 * site_bit(bits, s, len) as i32;
    z(site) - z(site + len - 1) - z(site + 1) - 1
}

/// Gauss-law residual `z_j - z_{j-1} - z_{j+1} - 1` at the odd `site`.
///
/// Zero iff the constraint holds there; the value always lies in `-4..=2`.
pub fn gauss_residual(config: &SpinConfiguration, site: usize) -> Result<i32> {
    if site.is_multiple_of(2) || site == 0 || site >= config.len {
        return Err(argument(format!("Gauss residual needs an odd site in 1..={}, got {site}", config.len - 1)));
    }
    Ok(residual_bits(config.bits, site, config.len))
}

/// All configurations obeying Gauss's law at every odd site, in ascending
/// order of their integer encoding.
#[derive(Clone, Debug)]
pub struct PhysicalBasis {
    len: usize,
    configs: Vec<u64>,
}

impl PhysicalBasis {
    #[inline]
    pub fn sites(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    #[inline]
    pub fn raw(&self) -> &[u64] {
        &self.configs
    }

    pub fn config(&self, index: usize) -> SpinConfiguration {
        SpinConfiguration { bits: self.configs[index], len: self.len }
    }

    pub fn iter(&self) -> impl Iterator<Item = SpinConfiguration> + '_ {
        self.configs.iter().map(move |&bits| SpinConfiguration { bits, len: self.len })
    }

    /// Position of a configuration in the basis.
    #[inline]
    pub fn index_of(&self, bits: u64) -> Option<usize> {
        self.configs.binary_search(&bits).ok()
    }

    /// Writes the basis as text: a `# L=<L> dim=<D>` header followed by one
    /// configuration per line, site 1 leftmost.
    pub fn export<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# L={} dim={}", self.len, self.dim())?;
        for config in self.iter() {
            writeln!(out, "{config}")?;
        }
        Ok(())
    }
}

/// Enumerates the gauge-invariant configurations of an `L`-site chain.
///
/// Gauge bits form a cyclic string of length `L/2` without two adjacent zeros;
/// matter bits follow from the Gauss rule, so the cost is proportional to the
/// basis size rather than `2^L`.
pub fn enumerate_physical_basis(len: usize) -> Result<PhysicalBasis> {
    check_length(len)?;
    let n = len / 2;
    let mut configs = Vec::new();
    let mut gauge = vec![0u8; n];
    fill_gauge(&mut gauge, 0, &mut |g| configs.push(assemble(g)));
    configs.sort_unstable();
    Ok(PhysicalBasis { len, configs })
}

fn fill_gauge(gauge: &mut [u8], pos: usize, emit: &mut impl FnMut(&[u8])) {
    let n = gauge.len();
    if pos == n {
        if gauge[n - 1] == 1 || gauge[0] == 1 {
            emit(gauge);
        }
        return;
    }
    for value in [0u8, 1] {
        if value == 0 && pos > 0 && gauge[pos - 1] == 0 {
            continue;
        }
        gauge[pos] = value;
        fill_gauge(gauge, pos + 1, emit);
    }
}

/// Builds the full configuration from gauge bits `alpha[k]` on site `2(k+1)`.
fn assemble(alpha: &[u8]) -> u64 {
    let n = alpha.len();
    let mut bits = 0u64;
    for k in 0..n {
        if alpha[k] == 1 {
            bits |= 1 << (2 * k + 1);
        }
        // matter site 2k+1 sits between gauge sites 2k (alpha[k-1]) and 2k+2 (alpha[k])
        let left = alpha[(k + n - 1) % n];
        if left == 1 && alpha[k] == 1 {
            bits |= 1 << (2 * k);
        }
    }
    bits
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed-form dimension of the spin-1/2 physical Hilbert space.
///
/// Requires `L >= 8` with `L/2` even.
pub fn dimension_formula(len: usize) -> Result<u128> {
    let n = len / 2;
    if !len.is_multiple_of(2) || len < 8 || !n.is_multiple_of(2) {
        return Err(argument(format!("dimension formula needs L >= 8 with L/2 even, got {len}")));
    }
    let n = n as u128;
    let first: u128 = (1..=(n - 2) / 2)
        .map(|i| {
            let rest = (n - 2 * i) / 2;
            binomial(2 * i + rest, 2 * i)
        })
        .sum();
    let second: u128 = (1..=(n - 4) / 2)
        .map(|i| {
            let rest = (n - 2 - 2 * i) / 2;
            binomial(2 * i + rest, 2 * i)
        })
        .sum();
    Ok(2 + first + 1 + second + 1)
}

/// Maps a PXP string `α_1 … α_N` onto the `2N`-site link-model configuration:
/// `α_j` becomes the gauge bit on site `2j`, matter bits follow from Gauss's law.
///
/// Bit 0 is the Rydberg-excited state, so two cyclically adjacent zeros are
/// rejected.
pub fn pxp_to_qlm(pxp: &[u8]) -> Result<SpinConfiguration> {
    let n = pxp.len();
    check_length(2 * n)?;
    for (k, &a) in pxp.iter().enumerate() {
        if a > 1 {
            return Err(argument(format!("PXP digit {a} at position {} is not binary", k + 1)));
        }
        if a == 0 && pxp[(k + 1) % n] == 0 {
            return Err(Error::Constraint {
                site: k + 1,
                reason: format!("blockade violated between PXP sites {} and {}", k + 1, (k + 1) % n + 1),
            });
        }
    }
    Ok(SpinConfiguration { bits: assemble(pxp), len: 2 * n })
}

/// Inverse of [`pxp_to_qlm`]: the even-site bits of a physical configuration.
pub fn qlm_to_pxp(config: &SpinConfiguration) -> Result<Vec<u8>> {
    if let Some(site) = (1..config.len).step_by(2).find(|&s| residual_bits(config.bits, s, config.len) != 0) {
        return Err(Error::Constraint { site, reason: "configuration violates Gauss's law".into() });
    }
    Ok((1..=config.len / 2).map(|j| config.bit(2 * j)).collect())
}

/// All physical configurations whose matter occupations equal `occupied`
/// (a set of odd sites).
///
/// Gauge bits solve `b_{2j} = m_{2j-1} + 1 - b_{2j-2}` around the ring, seeded
/// by the two possible values of the gauge bit on site `L`. Zero, one or two
/// seeds close consistently.
pub fn gauge_completions(occupied: &[usize], len: usize) -> Result<Vec<SpinConfiguration>> {
    check_length(len)?;
    let mut matter = vec![0i32; len + 1];
    for &site in occupied {
        if site % 2 == 0 || site == 0 || site >= len {
            return Err(argument(format!("occupation site {site} is not an odd site in 1..={}", len - 1)));
        }
        matter[site] = 1;
    }

    let mut found = Vec::new();
    let mut furthest_failure = 0usize;
    for seed in [0i32, 1] {
        let mut prev = seed;
        let mut bits = 0u64;
        let mut failed_at = None;
        for j in 1..=len / 2 {
            let m = matter[2 * j - 1];
            let g = m + 1 - prev;
            if !(0..=1).contains(&g) {
                failed_at = Some(2 * j - 1);
                break;
            }
            if m == 1 {
                bits |= 1 << (2 * j - 2);
            }
            if g == 1 {
                bits |= 1 << (2 * j - 1);
            }
            prev = g;
        }
        if failed_at.is_none() && prev != seed {
            failed_at = Some(len - 1);
        }
        match failed_at {
            None => {
                debug_assert!(is_physical(bits, len));
                found.push(SpinConfiguration { bits, len });
            }
            Some(site) => furthest_failure = furthest_failure.max(site),
        }
    }
    if found.is_empty() {
        return Err(Error::Constraint {
            site: furthest_failure,
            reason: "matter occupations admit no gauge completion".into(),
        });
    }
    found.sort();
    found.dedup();
    Ok(found)
}
