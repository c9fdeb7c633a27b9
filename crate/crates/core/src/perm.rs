//! Permutation and word value types.
//!
//! Positions and values are 1-based throughout the public API and in error
//! messages; the underlying storage is a plain vector.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("empty sequence")]
    Empty,
    #[error("not a bijection on 1..={n}: value {value} at position {position}")]
    NotBijection { n: usize, value: u32, position: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("empty sequence")]
    Empty,
    #[error("alphabet size must be >= 1")]
    EmptyAlphabet,
    #[error("digit {digit} at position {position} outside 1..={alphabet_size}")]
    DigitOutOfRange { digit: u32, position: usize, alphabet_size: u32 },
}

/// A permutation of `{1..n}` in one-line notation: `values()[i]` is the image
/// of position `i + 1`.
///
/// Read as a shuffle outcome, the one-line form is the new deck from the
/// top: position `i + 1` of the shuffled deck holds the card labeled
/// `values()[i]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Validates that `values` is a bijection on `1..=values.len()`.
    pub fn from_one_line(values: Vec<u32>) -> Result<Self, PermError> {
        if values.is_empty() {
            return Err(PermError::Empty);
        }
        let n = values.len();
        let mut seen = vec![false; n];
        for (i, &v) in values.iter().enumerate() {
            if v < 1 || v as usize > n || seen[v as usize - 1] {
                return Err(PermError::NotBijection { n, value: v, position: i + 1 });
            }
            seen[v as usize - 1] = true;
        }
        Ok(Self { values })
    }

    /// Bypasses validation; callers must guarantee the bijection invariant.
    pub(crate) fn from_one_line_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Self::from_one_line(values.clone()).is_ok());
        Self { values }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutation size must be >= 1");
        Self { values: (1..=n as u32).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Image of 1-based position `i`.
    pub fn image(&self, i: usize) -> u32 {
        self.values[i - 1]
    }

    /// The inverse permutation: `invert(p).image(p.image(i)) == i`.
    pub fn invert(&self) -> Self {
        let mut inv = vec![0u32; self.values.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Self { values: inv }
    }

    /// Composite shuffle pattern: `self` rearranges the deck first, then
    /// `next` is applied to the result. In one-line terms,
    /// `result[j] = self[next[j]]`.
    pub fn then(&self, next: &Self) -> Self {
        assert_eq!(self.len(), next.len(), "composition requires equal sizes");
        let values = next
            .values
            .iter()
            .map(|&j| self.values[j as usize - 1])
            .collect();
        Self { values }
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for v in &self.values {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// A word of digits over the alphabet `{1..=alphabet_size}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word {
    digits: Vec<u32>,
    alphabet_size: u32,
}

impl Word {
    pub fn new(digits: Vec<u32>, alphabet_size: u32) -> Result<Self, WordError> {
        if alphabet_size < 1 {
            return Err(WordError::EmptyAlphabet);
        }
        if digits.is_empty() {
            return Err(WordError::Empty);
        }
        for (i, &d) in digits.iter().enumerate() {
            if d < 1 || d > alphabet_size {
                return Err(WordError::DigitOutOfRange {
                    digit: d,
                    position: i + 1,
                    alphabet_size,
                });
            }
        }
        Ok(Self { digits, alphabet_size })
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }
}
