//! ±1 spin sequences and their text encodings.
//!
//! Two textual forms are accepted: sign strings (`+-+`) and bitstrings
//! (`010`). Bitstrings use the fixed convention `0 -> +1`, `1 -> -1`, which is
//! also how measured qubit bitstrings map onto spins.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SpinSequence {
    spins: Vec<i8>,
}

impl SpinSequence {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.len() < 2 {
            return Err(Error::TooShort(spins.len()));
        }
        if let Some(bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput(format!("spin value {bad} is not +1 or -1")));
        }
        Ok(Self { spins })
    }

    pub fn all_up(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    /// Decodes a bitstring with `b_j` the value of qubit `j + 1`.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let spins = bits
            .iter()
            .map(|&b| match b {
                0 => Ok(1),
                1 => Ok(-1),
                other => Err(Error::InvalidInput(format!("bit value {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(spins)
    }

    /// Decodes a computational basis index; qubit 1 is the most significant bit.
    pub fn from_basis_index(index: u64, n: usize) -> Result<Self> {
        let spins = (0..n)
            .map(|j| if (index >> (n - 1 - j)) & 1 == 0 { 1 } else { -1 })
            .collect();
        Self::new(spins)
    }

    pub fn basis_index(&self) -> u64 {
        self.spins
            .iter()
            .fold(0u64, |acc, &s| (acc << 1) | u64::from(s < 0))
    }

    pub fn to_bitstring(&self) -> String {
        self.spins.iter().map(|&s| if s > 0 { '0' } else { '1' }).collect()
    }

    pub fn to_signs(&self) -> String {
        self.spins.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.spins.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    #[inline]
    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    #[inline]
    pub fn get(&self, i: usize) -> i8 {
        self.spins[i]
    }

    /// Flips spin `i` (0-based) in place.
    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.spins[i] = -self.spins[i];
    }

    pub fn flipped(&self, i: usize) -> Result<Self> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.len() });
        }
        let mut out = self.clone();
        out.flip(i);
        Ok(out)
    }

    pub fn negated(&self) -> Self {
        Self { spins: self.spins.iter().map(|&s| -s).collect() }
    }

    pub fn reversed(&self) -> Self {
        Self { spins: self.spins.iter().rev().copied().collect() }
    }

    /// The four images under global flip and reversal, starting with `self`.
    pub fn orbit(&self) -> [SpinSequence; 4] {
        let rev = self.reversed();
        [self.clone(), self.negated(), rev.negated(), rev]
    }

    /// Lexicographically smallest orbit member, ordering `-1 < +1`.
    pub fn canonical_form(&self) -> Self {
        let [a, b, c, d] = self.orbit();
        [a, b, c, d].into_iter().min().expect("orbit is nonempty")
    }

    /// Concatenates `self[..cut]` with `other[cut..]`.
    pub fn splice(&self, other: &Self, cut: usize) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        if cut > self.len() {
            return Err(Error::IndexOutOfRange { index: cut, len: self.len() });
        }
        let mut spins = self.spins[..cut].to_vec();
        spins.extend_from_slice(&other.spins[cut..]);
        Ok(Self { spins })
    }
}

impl FromStr for SpinSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let spins = s
            .chars()
            .map(|c| match c {
                '+' | '0' => Ok(1),
                '-' | '1' => Ok(-1),
                other => Err(Error::InvalidInput(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let signs = s.contains(['+', '-']);
        let bits = s.contains(['0', '1']);
        if signs && bits {
            return Err(Error::InvalidInput("mixed sign and bit encodings".into()));
        }
        Self::new(spins)
    }
}

impl fmt::Display for SpinSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_signs())
    }
}

impl TryFrom<String> for SpinSequence {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SpinSequence> for String {
    fn from(s: SpinSequence) -> String {
        s.to_signs()
    }
}
