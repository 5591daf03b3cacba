use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rand::distributions::{Distribution, WeightedIndex};

use super::{Cell, FactorSizes, Split};
use crate::error::{Error, Result};
use crate::learners::FunctionSpace;
use crate::prob::{ratio, to_f64, FiniteDistribution, Rational, FLOAT_SUM_TOL};
use crate::rng::{stream, Rng};

/// One distribution per cell, stored sparsely over a shared space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellMeasures {
    space_size: usize,
    factors: FactorSizes,
    atoms: Vec<Vec<(usize, Rational)>>,
}

impl CellMeasures {
    pub fn new(space_size: usize, factors: FactorSizes, atoms: Vec<Vec<(usize, Rational)>>) -> Result<Self> {
        if atoms.len() != factors.cell_count() {
            return Err(Error::DimensionMismatch { expected: factors.cell_count(), found: atoms.len() });
        }
        for (idx, cell_atoms) in atoms.iter().enumerate() {
            let mut total = Rational::zero();
            for (z, w) in cell_atoms {
                if *z >= space_size {
                    return Err(Error::IndexOutOfRange { index: *z, size: space_size });
                }
                if w.is_negative() {
                    return Err(Error::InvalidDistribution(format!("negative mass in cell {}", factors.cell(idx))));
                }
                total += w;
            }
            if !total.is_one() {
                return Err(Error::InvalidDistribution(format!("cell {} does not sum to 1", factors.cell(idx))));
            }
        }
        Ok(Self { space_size, factors, atoms })
    }

    /// Each cell a point mass on its own element; the "profile" view where a
    /// function's value at element `i` is its error on cell `i`.
    pub fn point_masses(factors: FactorSizes) -> Self {
        let atoms = (0..factors.cell_count()).map(|i| vec![(i, Rational::one())]).collect();
        Self { space_size: factors.cell_count(), factors, atoms }
    }

    pub fn space_size(&self) -> usize {
        self.space_size
    }

    pub fn factors(&self) -> FactorSizes {
        self.factors
    }

    pub fn atoms(&self, c: Cell) -> &[(usize, Rational)] {
        &self.atoms[self.factors.index(c)]
    }

    pub fn cell_distribution(&self, c: Cell) -> Result<FiniteDistribution> {
        self.factors.check(c)?;
        let mut w = vec![Rational::zero(); self.space_size];
        for (z, m) in self.atoms(c) {
            w[*z] += m;
        }
        FiniteDistribution::new(w)
    }

    fn check_fn(&self, len: usize) -> Result<()> {
        if len != self.space_size {
            return Err(Error::DimensionMismatch { expected: self.space_size, found: len });
        }
        Ok(())
    }

    pub fn err_cell(&self, c: Cell, f: &[Rational]) -> Result<Rational> {
        self.factors.check(c)?;
        self.check_fn(f.len())?;
        Ok(self.atoms(c).iter().map(|(z, w)| w * &f[*z]).sum())
    }

    pub fn err_cell_f64(&self, c: Cell, f: &[f64]) -> f64 {
        self.atoms(c).iter().map(|(z, w)| to_f64(w) * f[*z]).sum()
    }

    /// Error under the uniform mixture of the given cells.
    pub fn err_mixture<'a>(&self, cells: impl IntoIterator<Item = &'a Cell>, f: &[Rational]) -> Result<Rational> {
        self.check_fn(f.len())?;
        let mut total = Rational::zero();
        let mut n = 0i64;
        for &c in cells {
            total += self.err_cell(c, f)?;
            n += 1;
        }
        if n == 0 {
            return Err(Error::EmptyCellSet);
        }
        Ok(total / ratio(n, 1))
    }

    /// The uniform mixture of the given cells as one distribution.
    pub fn mixture<'a>(&self, cells: impl IntoIterator<Item = &'a Cell>) -> Result<FiniteDistribution> {
        let mut w = vec![Rational::zero(); self.space_size];
        let mut n = 0i64;
        for &c in cells {
            self.factors.check(c)?;
            for (z, m) in self.atoms(c) {
                w[*z] += m;
            }
            n += 1;
        }
        if n == 0 {
            return Err(Error::EmptyCellSet);
        }
        FiniteDistribution::normalized(w)
    }
}

pub fn err(p: &FiniteDistribution, f: &[Rational]) -> Result<Rational> {
    p.expect(f)
}

/// P(z | cell = c) from a joint distribution and a cell labelling.
pub fn subdistribution(joint: &FiniteDistribution, cell_of: &[Option<Cell>], c: Cell) -> Result<FiniteDistribution> {
    if cell_of.len() != joint.len() {
        return Err(Error::DimensionMismatch { expected: joint.len(), found: cell_of.len() });
    }
    let w: Vec<Rational> = joint
        .weights()
        .iter()
        .zip(cell_of)
        .map(|(w, lab)| if *lab == Some(c) { w.clone() } else { Rational::zero() })
        .collect();
    if w.iter().all(Zero::is_zero) {
        return Err(Error::ZeroMassCell(c));
    }
    FiniteDistribution::normalized(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sample {
    pub element: usize,
    pub cell: Cell,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dataset {
    pub samples: Vec<Sample>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Element -> multiplicity.
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for s in &self.samples {
            *h.entry(s.element).or_insert(0) += 1;
        }
        h
    }

    pub fn cells(&self) -> BTreeSet<Cell> {
        self.samples.iter().map(|s| s.cell).collect()
    }
}

pub fn err_dataset(d: &Dataset, f: &[Rational]) -> Result<Rational> {
    if d.is_empty() {
        return Err(Error::InvalidInput("empty dataset".into()));
    }
    let mut total = Rational::zero();
    for (z, n) in d.histogram() {
        let v = f.get(z).ok_or(Error::IndexOutOfRange { index: z, size: f.len() })?;
        total += v * ratio(n as i64, 1);
    }
    Ok(total / ratio(d.len() as i64, 1))
}

/// Draws `n` i.i.d. samples: a cell from `cell_weights` (uniform over S when
/// `None`), then an element from that cell.
pub fn sample_dataset(
    measures: &CellMeasures,
    split: &Split,
    cell_weights: Option<&BTreeMap<Cell, f64>>,
    n: usize,
    seed: u64,
) -> Result<Dataset> {
    let mut rng = stream(seed, "dataset");
    sample_dataset_with(&mut rng, measures, split, cell_weights, n)
}

pub fn sample_dataset_with(
    rng: &mut Rng,
    measures: &CellMeasures,
    split: &Split,
    cell_weights: Option<&BTreeMap<Cell, f64>>,
    n: usize,
) -> Result<Dataset> {
    let sampler = DatasetSampler::new(measures, split, cell_weights)?;
    sampler.draw(rng, n)
}

/// Precomputed samplers for repeated dataset draws.
pub struct DatasetSampler {
    cells: Vec<Cell>,
    cell_pick: WeightedIndex<f64>,
    within: Vec<(Vec<usize>, WeightedIndex<f64>)>,
}

impl DatasetSampler {
    pub fn new(measures: &CellMeasures, split: &Split, cell_weights: Option<&BTreeMap<Cell, f64>>) -> Result<Self> {
        let cells: Vec<Cell> = split.support().iter().copied().collect();
        let weights: Vec<f64> = match cell_weights {
            None => vec![1.0 / cells.len() as f64; cells.len()],
            Some(map) => {
                if let Some(c) = map.keys().find(|c| !split.contains(**c)) {
                    return Err(Error::InvalidSplit(format!("sampling weight given for unseen cell {c}")));
                }
                let w: Vec<f64> = cells.iter().map(|c| map.get(c).copied().unwrap_or(0.0)).collect();
                let s: f64 = w.iter().sum();
                if (s - 1.0).abs() > FLOAT_SUM_TOL || w.iter().any(|x| *x < 0.0) {
                    return Err(Error::InvalidDistribution(format!("cell weights sum to {s}")));
                }
                w
            }
        };
        let cell_pick = WeightedIndex::new(&weights).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
        let within = cells
            .iter()
            .map(|&c| {
                let (elems, ws): (Vec<usize>, Vec<f64>) =
                    measures.atoms(c).iter().map(|(z, w)| (*z, to_f64(w))).unzip();
                let idx = WeightedIndex::new(&ws).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
                Ok((elems, idx))
            })
            .collect::<Result<_>>()?;
        Ok(Self { cells, cell_pick, within })
    }

    pub fn draw(&self, rng: &mut Rng, n: usize) -> Result<Dataset> {
        if n == 0 {
            return Err(Error::InvalidInput("dataset size must be at least 1".into()));
        }
        let samples = (0..n)
            .map(|_| {
                let ci = self.cell_pick.sample(rng);
                let (elems, idx) = &self.within[ci];
                Sample { element: elems[idx.sample(rng)], cell: self.cells[ci] }
            })
            .collect();
        Ok(Dataset { samples })
    }
}

/// ε = min over the space of the worst per-cell error.
pub fn epsilon(measures: &CellMeasures, space: &FunctionSpace) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for f in space.functions() {
        let mut worst = Rational::zero();
        for c in measures.factors().cells() {
            let e = measures.err_cell(c, f)?;
            if e > worst {
                worst = e;
            }
        }
        if best.as_ref().is_none_or(|b| worst < *b) {
            best = Some(worst);
        }
    }
    best.ok_or(Error::InvalidInput("empty function space".into()))
}
