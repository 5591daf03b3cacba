use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::{Bijection, Cell, CellMeasures, FactorSizes};
use crate::error::{Error, Result};
use crate::prob::{FiniteDistribution, Rational};
use crate::rules::{motion_position_map, FactorMaps};

/// How cells relate geometrically, which decides what a factor motion is.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Geometry {
    /// Motions are arbitrary permutations of support positions.
    Positional,
    /// Support elements carry integer coordinates; motions are translations.
    /// `a_axes[i]` marks coordinate axes moved only by factor A (the rest
    /// only by B), when that structure is known.
    Lattice { dims: usize, a_axes: Option<Vec<bool>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellSpec {
    /// Data-space elements of this cell, in position order.
    pub support: Vec<usize>,
    /// Declared per-position weights; required on the base cell.
    pub weights: Option<Vec<Rational>>,
    /// Per-position coordinates under lattice geometry.
    pub coords: Option<Vec<Vec<i64>>>,
}

/// Everything about a family except which bijections connect the cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Skeleton {
    data_space_size: usize,
    factors: FactorSizes,
    base_cell: Cell,
    cells: Vec<CellSpec>,
    geometry: Geometry,
}

impl Skeleton {
    pub fn new(
        data_space_size: usize,
        factors: FactorSizes,
        base_cell: Cell,
        cells: Vec<CellSpec>,
        geometry: Geometry,
    ) -> Result<Self> {
        factors.check(base_cell)?;
        if cells.len() != factors.cell_count() {
            return Err(Error::DimensionMismatch { expected: factors.cell_count(), found: cells.len() });
        }
        for (idx, spec) in cells.iter().enumerate() {
            let c = factors.cell(idx);
            if spec.support.is_empty() {
                return Err(Error::Malformed(format!("cell {c} has an empty support")));
            }
            let mut seen = HashSet::new();
            for &z in &spec.support {
                if z >= data_space_size {
                    return Err(Error::Malformed(format!(
                        "cell {c} lists element {z} outside a data space of size {data_space_size}"
                    )));
                }
                if !seen.insert(z) {
                    return Err(Error::Malformed(format!("cell {c} lists element {z} twice")));
                }
            }
            if let Some(w) = &spec.weights {
                if w.len() != spec.support.len() {
                    return Err(Error::DimensionMismatch { expected: spec.support.len(), found: w.len() });
                }
                FiniteDistribution::new(w.clone()).map_err(|e| Error::Malformed(format!("cell {c} weights: {e}")))?;
            }
            match (&geometry, &spec.coords) {
                (Geometry::Positional, Some(_)) => {
                    return Err(Error::Malformed(format!("cell {c} has coordinates under positional geometry")))
                }
                (Geometry::Lattice { .. }, None) => {
                    return Err(Error::Malformed(format!("cell {c} lacks coordinates under lattice geometry")))
                }
                (Geometry::Lattice { dims, .. }, Some(coords)) => {
                    if coords.len() != spec.support.len() || coords.iter().any(|v| v.len() != *dims) {
                        return Err(Error::Malformed(format!("cell {c} coordinates have the wrong shape")));
                    }
                }
                (Geometry::Positional, None) => {}
            }
        }
        if let Geometry::Lattice { dims, a_axes: Some(axes) } = &geometry {
            if axes.len() != *dims {
                return Err(Error::DimensionMismatch { expected: *dims, found: axes.len() });
            }
        }
        let base = &cells[factors.index(base_cell)];
        match &base.weights {
            None => return Err(Error::Malformed("base cell has no weights".into())),
            Some(w) if w.iter().any(|x| !x.is_positive()) => {
                return Err(Error::Malformed("base weights must be strictly positive".into()))
            }
            _ => {}
        }
        Ok(Self { data_space_size, factors, base_cell, cells, geometry })
    }

    pub fn data_space_size(&self) -> usize {
        self.data_space_size
    }

    pub fn factors(&self) -> FactorSizes {
        self.factors
    }

    pub fn base_cell(&self) -> Cell {
        self.base_cell
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn cell(&self, c: Cell) -> &CellSpec {
        &self.cells[self.factors.index(c)]
    }

    pub fn cells(&self) -> &[CellSpec] {
        &self.cells
    }

    pub fn support(&self, c: Cell) -> &[usize] {
        &self.cell(c).support
    }

    pub fn base_support(&self) -> &[usize] {
        self.support(self.base_cell)
    }

    pub fn base_weights(&self) -> &[Rational] {
        self.cell(self.base_cell).weights.as_deref().expect("checked at construction")
    }

    pub fn declared_weights(&self, c: Cell) -> Option<&[Rational]> {
        self.cell(c).weights.as_deref()
    }

    pub fn coords(&self, c: Cell, pos: usize) -> Option<&[i64]> {
        self.cell(c).coords.as_ref().map(|v| v[pos].as_slice())
    }

    pub fn position_of_coord(&self, c: Cell, coord: &[i64]) -> Option<usize> {
        self.cell(c).coords.as_ref()?.iter().position(|v| v == coord)
    }

    /// Every cell shares the base support size.
    pub fn uniform_cardinality(&self) -> Option<usize> {
        let k = self.base_support().len();
        self.cells.iter().all(|s| s.support.len() == k).then_some(k)
    }

    /// Same cells, with `new_base` as the base cell carrying `weights`.
    pub fn with_base(&self, new_base: Cell, weights: Vec<Rational>) -> Result<Self> {
        let mut cells = self.cells.clone();
        let idx = self.factors.index(new_base);
        cells[idx].weights = Some(weights);
        Self::new(self.data_space_size, self.factors, new_base, cells, self.geometry.clone())
    }
}

/// The bijections of a family, base position -> cell position, one per cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompositionRule {
    pub maps: Vec<Bijection>,
    pub factors: Option<FactorMaps>,
}

impl CompositionRule {
    pub fn new(maps: Vec<Bijection>) -> Self {
        Self { maps, factors: None }
    }

    pub fn with_factors(maps: Vec<Bijection>, factors: FactorMaps) -> Self {
        Self { maps, factors: Some(factors) }
    }

    pub fn map(&self, sizes: FactorSizes, c: Cell) -> &Bijection {
        &self.maps[sizes.index(c)]
    }
}

/// A skeleton together with the rule that generates every cell from the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionalFamily {
    skeleton: Arc<Skeleton>,
    rule: CompositionRule,
}

impl CompositionalFamily {
    pub fn new(skeleton: Arc<Skeleton>, rule: CompositionRule) -> Result<Self> {
        let sizes = skeleton.factors();
        if rule.maps.len() != sizes.cell_count() {
            return Err(Error::DimensionMismatch { expected: sizes.cell_count(), found: rule.maps.len() });
        }
        let k = skeleton.base_support().len();
        for (idx, m) in rule.maps.iter().enumerate() {
            let c = sizes.cell(idx);
            if m.len() != k {
                return Err(Error::DimensionMismatch { expected: k, found: m.len() });
            }
            let n = skeleton.support(c).len();
            if let Some(&bad) = m.0.iter().find(|&&j| j >= n) {
                return Err(Error::Malformed(format!("map of cell {c} points at position {bad} of {n}")));
            }
        }
        Ok(Self { skeleton, rule })
    }

    pub fn skeleton(&self) -> &Arc<Skeleton> {
        &self.skeleton
    }

    pub fn rule(&self) -> &CompositionRule {
        &self.rule
    }

    pub fn factors(&self) -> FactorSizes {
        self.skeleton.factors()
    }

    pub fn base_cell(&self) -> Cell {
        self.skeleton.base_cell()
    }

    pub fn map(&self, c: Cell) -> &Bijection {
        self.rule.map(self.factors(), c)
    }

    /// Mass on each support position of `c`, pushed forward from the base.
    pub fn position_weights(&self, c: Cell) -> Vec<Rational> {
        let mut w = vec![Rational::zero(); self.skeleton.support(c).len()];
        for (j, bw) in self.skeleton.base_weights().iter().enumerate() {
            w[self.map(c).apply(j)] += bw;
        }
        w
    }

    pub fn cell_distribution(&self, c: Cell) -> Result<FiniteDistribution> {
        self.factors().check(c)?;
        let mut w = vec![Rational::zero(); self.skeleton.data_space_size()];
        for (pos, m) in self.position_weights(c).into_iter().enumerate() {
            w[self.skeleton.support(c)[pos]] += m;
        }
        FiniteDistribution::new(w)
    }

    /// Cell distributions over the raw data space.
    pub fn measures(&self) -> CellMeasures {
        let sizes = self.factors();
        let atoms = sizes
            .cells()
            .map(|c| {
                let support = self.skeleton.support(c);
                self.position_weights(c)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, w)| !w.is_zero())
                    .map(|(pos, w)| (support[pos], w))
                    .collect()
            })
            .collect();
        CellMeasures::new(self.skeleton.data_space_size(), sizes, atoms).expect("family measures are well formed")
    }

    /// Cell distributions over the labeled space `(cell, base position, cell position)`,
    /// indexed as `cell * k² + i * k + j`. Cell `c` puts mass `w_i` on `(c, i, map_c(i))`.
    pub fn labeled_measures(&self) -> Result<CellMeasures> {
        let k = self
            .skeleton
            .uniform_cardinality()
            .ok_or_else(|| Error::Malformed("labeled space needs equal support sizes".into()))?;
        let sizes = self.factors();
        let base = self.skeleton.base_weights();
        let atoms = sizes
            .cells()
            .enumerate()
            .map(|(ci, c)| (0..k).map(|i| (labeled_index(k, ci, i, self.map(c).apply(i)), base[i].clone())).collect())
            .collect();
        CellMeasures::new(sizes.cell_count() * k * k, sizes, atoms)
    }

    /// The same family described with `new_base` as the base cell.
    pub fn rebase(&self, new_base: Cell) -> Result<Self> {
        self.factors().check(new_base)?;
        let to_new = self.map(new_base).inverse()?;
        let skeleton = Arc::new(self.skeleton.with_base(new_base, self.position_weights(new_base))?);
        let maps = self.rule.maps.iter().map(|m| m.after(&to_new)).collect::<Result<Vec<_>>>()?;
        let rule = CompositionRule { maps, factors: self.rule.factors.clone() };
        Self::new(skeleton, rule)
    }
}

pub fn labeled_index(k: usize, cell_index: usize, i: usize, j: usize) -> usize {
    cell_index * k * k + i * k + j
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    SupportOverlap { element: usize, first: Cell, second: Cell },
    CardinalityMismatch { cell: Cell, expected: usize, found: usize },
    NonIdentityBaseMap,
    NotBijective { cell: Cell },
    MeasureNotPreserved { cell: Cell },
    DuplicateCoordinate { cell: Cell },
    FactorizationMismatch { from: Cell, to: Cell },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SupportOverlap { element, first, second } => {
                write!(f, "support overlap at element {element} (cells {first} and {second})")
            }
            Self::CardinalityMismatch { cell, expected, found } => {
                write!(f, "cardinality mismatch at cell {cell}: base has {expected}, cell has {found}")
            }
            Self::NonIdentityBaseMap => write!(f, "base cell map is not the identity"),
            Self::NotBijective { cell } => write!(f, "map of cell {cell} is not a bijection"),
            Self::MeasureNotPreserved { cell } => write!(f, "measure not preserved at cell {cell}"),
            Self::DuplicateCoordinate { cell } => write!(f, "duplicate lattice coordinate within cell {cell}"),
            Self::FactorizationMismatch { from, to } => {
                write!(f, "attached factor maps do not reproduce the map {from} -> {to}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every structural condition of a compositional family.
pub fn validate_family(family: &CompositionalFamily) -> ValidationReport {
    let sk = family.skeleton();
    let sizes = family.factors();
    let mut violations = Vec::new();

    let mut owner: BTreeMap<usize, Cell> = BTreeMap::new();
    for c in sizes.cells() {
        for &z in sk.support(c) {
            if let Some(&first) = owner.get(&z) {
                violations.push(Violation::SupportOverlap { element: z, first, second: c });
            } else {
                owner.insert(z, c);
            }
        }
    }

    let k = sk.base_support().len();
    if !family.map(family.base_cell()).is_identity() {
        violations.push(Violation::NonIdentityBaseMap);
    }
    for c in sizes.cells() {
        let n = sk.support(c).len();
        if n != k {
            violations.push(Violation::CardinalityMismatch { cell: c, expected: k, found: n });
        } else if !family.map(c).is_bijective() {
            violations.push(Violation::NotBijective { cell: c });
        }
        if let Some(declared) = sk.declared_weights(c) {
            if c != family.base_cell() && declared != family.position_weights(c).as_slice() {
                violations.push(Violation::MeasureNotPreserved { cell: c });
            }
        }
        if let Some(coords) = &sk.cell(c).coords {
            let distinct: HashSet<&Vec<i64>> = coords.iter().collect();
            if distinct.len() != coords.len() {
                violations.push(Violation::DuplicateCoordinate { cell: c });
            }
        }
    }

    if let Some(fm) = &family.rule().factors {
        if violations.is_empty() {
            'outer: for c1 in sizes.cells() {
                for c2 in sizes.cells() {
                    let expected = pairwise(family, c1, c2);
                    let via = fm.motion_between(c1, c2).and_then(|m| motion_position_map(sk, &m, c1, c2));
                    if expected.is_none() || via != expected {
                        violations.push(Violation::FactorizationMismatch { from: c1, to: c2 });
                        break 'outer;
                    }
                }
            }
        }
    }
    ValidationReport { violations }
}

fn pairwise(family: &CompositionalFamily, from: Cell, to: Cell) -> Option<Bijection> {
    family.map(to).after(&family.map(from).inverse().ok()?).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::ratio;

    fn two_by_two(weights: [(i64, i64); 2], overlap: bool) -> CompositionalFamily {
        let sizes = FactorSizes::new(2, 2).unwrap();
        let w: Vec<Rational> = weights.iter().map(|&(n, d)| ratio(n, d)).collect();
        let cells = (0..4)
            .map(|i| {
                let mut support = vec![2 * i, 2 * i + 1];
                if overlap && i == 3 {
                    support[0] = 0;
                }
                CellSpec { support, weights: (i == 0).then(|| w.clone()), coords: None }
            })
            .collect();
        let sk = Arc::new(Skeleton::new(8, sizes, Cell::new(0, 0), cells, Geometry::Positional).unwrap());
        CompositionalFamily::new(sk, CompositionRule::new(vec![Bijection::identity(2); 4])).unwrap()
    }

    #[test]
    fn valid_family_passes() {
        let f = two_by_two([(1, 2), (1, 2)], false);
        assert!(validate_family(&f).is_valid());
    }

    #[test]
    fn overlap_is_reported_with_element() {
        let f = two_by_two([(1, 2), (1, 2)], true);
        let r = validate_family(&f);
        assert_eq!(
            r.violations,
            vec![Violation::SupportOverlap { element: 0, first: Cell::new(0, 0), second: Cell::new(1, 1) }]
        );
        assert!(r.violations[0].to_string().starts_with("support overlap at element 0"));
    }

    #[test]
    fn declared_weights_must_be_preserved() {
        let sizes = FactorSizes::new(1, 2).unwrap();
        let cells = vec![
            CellSpec { support: vec![0, 1], weights: Some(vec![ratio(3, 5), ratio(2, 5)]), coords: None },
            CellSpec { support: vec![2, 3], weights: Some(vec![ratio(3, 5), ratio(2, 5)]), coords: None },
        ];
        let sk = Arc::new(Skeleton::new(4, sizes, Cell::new(0, 0), cells, Geometry::Positional).unwrap());
        let swapped = CompositionRule::new(vec![Bijection::identity(2), Bijection(vec![1, 0])]);
        let f = CompositionalFamily::new(sk, swapped).unwrap();
        let r = validate_family(&f);
        assert_eq!(r.violations, vec![Violation::MeasureNotPreserved { cell: Cell::new(0, 1) }]);
    }

    #[test]
    fn non_bijective_and_base_map_reported() {
        let sizes = FactorSizes::new(1, 2).unwrap();
        let cells = vec![
            CellSpec { support: vec![0, 1], weights: Some(vec![ratio(1, 2), ratio(1, 2)]), coords: None },
            CellSpec { support: vec![2, 3], weights: None, coords: None },
        ];
        let sk = Arc::new(Skeleton::new(4, sizes, Cell::new(0, 0), cells, Geometry::Positional).unwrap());
        let rule = CompositionRule::new(vec![Bijection(vec![1, 0]), Bijection(vec![0, 0])]);
        let f = CompositionalFamily::new(sk, rule).unwrap();
        let r = validate_family(&f);
        assert!(r.violations.contains(&Violation::NonIdentityBaseMap));
        assert!(r.violations.contains(&Violation::NotBijective { cell: Cell::new(0, 1) }));
    }

    #[test]
    fn rebase_preserves_distributions() {
        let sizes = FactorSizes::new(2, 2).unwrap();
        let w = vec![ratio(1, 2), ratio(1, 3), ratio(1, 6)];
        let cells = (0..4)
            .map(|i| CellSpec {
                support: vec![3 * i, 3 * i + 1, 3 * i + 2],
                weights: (i == 0).then(|| w.clone()),
                coords: None,
            })
            .collect();
        let sk = Arc::new(Skeleton::new(12, sizes, Cell::new(0, 0), cells, Geometry::Positional).unwrap());
        let maps = vec![
            Bijection(vec![0, 1, 2]),
            Bijection(vec![1, 2, 0]),
            Bijection(vec![2, 0, 1]),
            Bijection(vec![0, 2, 1]),
        ];
        let f = CompositionalFamily::new(sk, CompositionRule::new(maps)).unwrap();
        let g = f.rebase(Cell::new(1, 0)).unwrap();
        assert!(g.map(Cell::new(1, 0)).is_identity());
        for c in sizes.cells() {
            assert_eq!(f.cell_distribution(c).unwrap(), g.cell_distribution(c).unwrap());
        }
    }
}
