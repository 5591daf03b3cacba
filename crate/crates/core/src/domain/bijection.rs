use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A map on support positions, stored as a lookup table `i -> table[i]`.
///
/// Construction does not insist on bijectivity so that malformed families can
/// still be represented and reported by validation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bijection(pub Vec<usize>);

impl Bijection {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// True when the table is a permutation of `0..len`.
    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        for &j in &self.0 {
            if j >= seen.len() || seen[j] {
                return false;
            }
            seen[j] = true;
        }
        true
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_bijective() {
            return Err(Error::Malformed("map is not bijective".into()));
        }
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Ok(Self(inv))
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn after(&self, inner: &Bijection) -> Result<Self> {
        if inner.0.iter().any(|&j| j >= self.0.len()) {
            return Err(Error::DimensionMismatch { expected: self.0.len(), found: inner.0.len() });
        }
        Ok(Self(inner.0.iter().map(|&j| self.0[j]).collect()))
    }
}
