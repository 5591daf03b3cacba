use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A factor combination (a, b), zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub a: usize,
    pub b: usize,
}

impl Cell {
    pub const fn new(a: usize, b: usize) -> Self {
        Self { a, b }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// |A| and |B|. Cells are linearly indexed as `a * |B| + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorSizes {
    pub a: usize,
    pub b: usize,
}

impl FactorSizes {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::Malformed(format!("factor sizes must be positive, got {a}x{b}")));
        }
        Ok(Self { a, b })
    }

    pub fn cell_count(&self) -> usize {
        self.a * self.b
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.a < self.a && c.b < self.b
    }

    pub fn check(&self, c: Cell) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::CellOutOfRange(c))
        }
    }

    pub fn index(&self, c: Cell) -> usize {
        c.a * self.b + c.b
    }

    pub fn cell(&self, idx: usize) -> Cell {
        Cell::new(idx / self.b, idx % self.b)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.cell_count()).map(|i| self.cell(i))
    }
}

/// Partition of the grid into observed cells S and unseen cells U.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Split {
    sizes: FactorSizes,
    support: BTreeSet<Cell>,
    unknown: BTreeSet<Cell>,
}

impl Split {
    pub fn new(sizes: FactorSizes, support: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let support: BTreeSet<Cell> = support.into_iter().collect();
        if support.is_empty() {
            return Err(Error::InvalidSplit("support set is empty".into()));
        }
        for &c in &support {
            sizes.check(c)?;
        }
        let unknown = sizes.cells().filter(|c| !support.contains(c)).collect();
        Ok(Self { sizes, support, unknown })
    }

    /// S = E.
    pub fn full(sizes: FactorSizes) -> Self {
        Self { sizes, support: sizes.cells().collect(), unknown: BTreeSet::new() }
    }

    /// Every nonempty support set, ordered by the bitmask over linear cell indices.
    pub fn enumerate_all(sizes: FactorSizes) -> Result<Vec<Split>> {
        let n = sizes.cell_count();
        if n > 20 {
            return Err(Error::ExplosionGuard { count: 1u128 << n.min(127), cap: 1 << 20 });
        }
        (1u32..(1u32 << n))
            .map(|mask| Split::new(sizes, (0..n).filter(|i| mask >> i & 1 == 1).map(|i| sizes.cell(i))))
            .collect()
    }

    pub fn sizes(&self) -> FactorSizes {
        self.sizes
    }

    pub fn support(&self) -> &BTreeSet<Cell> {
        &self.support
    }

    pub fn unknown(&self) -> &BTreeSet<Cell> {
        &self.unknown
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.support.contains(&c)
    }

    pub fn is_full(&self) -> bool {
        self.unknown.is_empty()
    }

    pub fn require_base(&self, base: Cell) -> Result<()> {
        if self.contains(base) {
            Ok(())
        } else {
            Err(Error::InvalidSplit(format!("base cell {base} is not in the support set")))
        }
    }

    /// The same split with `c` moved from U into S.
    pub fn with_cell(&self, c: Cell) -> Result<Split> {
        self.sizes.check(c)?;
        Split::new(self.sizes, self.support.iter().copied().chain([c]))
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trips() {
        let s = FactorSizes::new(3, 4).unwrap();
        for (i, c) in s.cells().enumerate() {
            assert_eq!(s.index(c), i);
        }
    }

    #[test]
    fn split_partitions_grid() {
        let s = FactorSizes::new(2, 2).unwrap();
        let sp = Split::new(s, [Cell::new(0, 0), Cell::new(1, 1)]).unwrap();
        assert_eq!(sp.unknown().len(), 2);
        assert!(Split::new(s, []).is_err());
        assert!(Split::new(s, [Cell::new(2, 0)]).is_err());
        assert_eq!(Split::enumerate_all(s).unwrap().len(), 15);
    }
}
