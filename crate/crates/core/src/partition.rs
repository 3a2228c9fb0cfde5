//! Integer partitions and their fermionic (Maya diagram) encoding.
//!
//! A partition `λ` is identified with the set `S(λ) = {λ_i - i + 1/2}` of
//! half-integers. Throughout the crate a half-integer `k` is stored as the
//! integer `m = k - 1/2`, so `S(λ)` becomes `{λ_i - i : i >= 1}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest size accepted by [`enumerate_partitions`].
pub const ENUMERATION_CAP: usize = 40;

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition, dropping trailing zeros. Fails if the parts are
    /// not weakly decreasing.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid(format!("parts {parts:?} are not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `|λ|`
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `ℓ(λ)`, the number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// `λ_1`, zero for the empty partition.
    pub fn first_part(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Transpose of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.first_part();
        let parts = (1..=cols)
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count())
            .collect();
        Partition { parts }
    }

    /// The set `{λ_i - i}` down to `window_low` (inclusive).
    pub fn fermionic_set(&self, window_low: i64) -> Result<FermionicSet> {
        let required = -(self.length() as i64);
        if window_low > required {
            return Err(Error::WindowTooHigh {
                window_low,
                required,
            });
        }
        let elements = (1..)
            .map(|i: i64| self.parts.get(i as usize - 1).copied().unwrap_or(0) as i64 - i)
            .take_while(|&m| m >= window_low)
            .collect();
        Ok(FermionicSet {
            window_low,
            elements,
        })
    }

    /// Number of standard Young tableaux, by the hook length formula.
    pub fn hook_count(&self) -> BigUint {
        let conj = self.conjugate();
        let mut numerator: BigUint = (1..=self.size()).map(BigUint::from).product();
        let mut denominator = BigUint::one();
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                let arm = row - j - 1;
                let leg = conj.parts[j] - i - 1;
                denominator *= BigUint::from(arm + leg + 1);
            }
        }
        numerator /= denominator;
        numerator
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.parts {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses the comma-separated form, e.g. `"4,2,1"`; the empty string is `∅`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::invalid(format!("bad part {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// The integer-encoded set `S(λ)` restricted to `[window_low, ∞)`.
///
/// Everything below `window_low` is implicitly occupied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermionicSet {
    window_low: i64,
    elements: Vec<i64>,
}

impl FermionicSet {
    /// Builds a set from arbitrary occupied positions `>= window_low`.
    pub fn from_elements(window_low: i64, mut elements: Vec<i64>) -> Result<Self> {
        elements.sort_unstable_by(|a, b| b.cmp(a));
        elements.dedup();
        if elements.last().is_some_and(|&m| m < window_low) {
            return Err(Error::invalid("element below the window"));
        }
        Ok(FermionicSet {
            window_low,
            elements,
        })
    }

    pub fn window_low(&self) -> i64 {
        self.window_low
    }

    /// Occupied positions, strictly decreasing.
    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn max(&self) -> Option<i64> {
        self.elements.first().copied()
    }

    /// Smallest unoccupied position (everything below the window is occupied).
    pub fn min_hole(&self) -> i64 {
        let mut expected = self.window_low;
        for &m in self.elements.iter().rev() {
            if m != expected {
                break;
            }
            expected += 1;
        }
        expected
    }

    /// Inverse of [`Partition::fermionic_set`]. Fails when the configuration
    /// does not have charge zero relative to the filled-below convention.
    pub fn to_partition(&self) -> Result<Partition> {
        let count = self.elements.len() as i64;
        if self.window_low > 0 || count != -self.window_low {
            return Err(Error::invalid(format!(
                "configuration with {count} particles in a window starting at {} is not charge neutral",
                self.window_low
            )));
        }
        let parts = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, &m)| m + i as i64 + 1)
            .collect::<Vec<_>>();
        if parts.iter().any(|&p| p < 0) {
            return Err(Error::invalid("negative part in reconstruction"));
        }
        Partition::new(parts.into_iter().map(|p| p as usize).collect())
    }
}

/// Iterator over all partitions of size at most `max_size`, ordered by size
/// and then lexicographically descending.
#[derive(Debug, Clone)]
pub struct Partitions {
    max_size: usize,
    size: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.current.take()?;
        let out = Partition {
            parts: current.clone(),
        };
        self.current = next_reverse_lex(current).or_else(|| {
            self.size += 1;
            (self.size <= self.max_size).then(|| vec![self.size])
        });
        Some(out)
    }
}

fn next_reverse_lex(mut parts: Vec<usize>) -> Option<Vec<usize>> {
    let mut ones = 0;
    while parts.last() == Some(&1) {
        parts.pop();
        ones += 1;
    }
    let last = parts.last_mut()?;
    *last -= 1;
    let cap = *last;
    let mut rest = ones + 1;
    while rest > 0 {
        let p = rest.min(cap);
        parts.push(p);
        rest -= p;
    }
    Some(parts)
}

/// Enumerates partitions with `|λ| <= max_size` (cap [`ENUMERATION_CAP`]).
pub fn enumerate_partitions(max_size: usize) -> Result<Partitions> {
    enumerate_partitions_with_cap(max_size, ENUMERATION_CAP)
}

pub fn enumerate_partitions_with_cap(max_size: usize, cap: usize) -> Result<Partitions> {
    if max_size > cap {
        return Err(Error::EnumerationCap {
            requested: max_size,
            cap,
        });
    }
    Ok(Partitions {
        max_size,
        size: 0,
        current: Some(Vec::new()),
    })
}
