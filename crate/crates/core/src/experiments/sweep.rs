use std::collections::HashSet;

use rand::seq::{index, SliceRandom};
use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{bendavid_divergence, w1_emd, MetricTable, DISAGREEMENT_TOL};
use crate::domain::{Cell, FactorSizes, Split};
use crate::error::{Error, Result};
use crate::learners::{run_learner_on_profiles, Learner, ProfileOutput, ProfileSpace};
use crate::rng::{stream, Rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example {
    One,
    Two,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub example: Example,
    pub support_sizes: Vec<usize>,
    pub seeds: usize,
    /// Number of nonzero error profiles in Example 1 (the zero profile is added).
    pub function_count: usize,
    /// Range of the per-cell constants c in Example 2.
    pub c_range: (f64, f64),
    pub seed: u64,
}

impl SweepConfig {
    pub fn new(example: Example) -> Self {
        Self {
            example,
            support_sizes: (1..=10).map(|i| 10 * i).collect(),
            seeds: 50,
            function_count: 200,
            c_range: (0.8, 1.0),
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        let cells = GRID.a * GRID.b;
        if self.support_sizes.is_empty() || self.support_sizes.iter().any(|&s| s == 0 || s > cells) {
            return Err(Error::InvalidInput(format!("support sizes must lie in [1, {cells}]")));
        }
        let (lo, hi) = self.c_range;
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(Error::InvalidInput("c range must be an interval inside [0, 1]".into()));
        }
        if self.seeds == 0 {
            return Err(Error::InvalidInput("at least one seed is needed".into()));
        }
        Ok(())
    }
}

/// Both examples use a 10 x 10 grid with base cell (0,0).
pub const GRID: FactorSizes = FactorSizes { a: 10, b: 10 };
/// Cells each nonzero Example 1 profile errs on.
pub const ERR_CELLS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub support_size: usize,
    pub seed: usize,
    pub measured: f64,
    pub our_bound: f64,
    pub bendavid_bound: f64,
}

/// A random order of the non-base cells; support sets are the base cell plus
/// a prefix, so every |S| sees a uniform subset and sizes are nested.
fn growth_path(rng: &mut Rng) -> Vec<Cell> {
    let mut rest: Vec<Cell> = GRID.cells().filter(|c| *c != Cell::new(0, 0)).collect();
    rest.shuffle(rng);
    std::iter::once(Cell::new(0, 0)).chain(rest).collect()
}

fn split_of(path: &[Cell], size: usize) -> Result<Split> {
    Split::new(GRID, path[..size].iter().copied())
}

/// One zero profile plus `count` distinct profiles erring on random 10-cell sets.
pub fn example1_profiles(rng: &mut Rng, count: usize) -> Vec<Vec<f64>> {
    let n = GRID.cell_count();
    let mut seen = HashSet::new();
    let mut profiles = vec![vec![0.0; n]];
    while profiles.len() < count + 1 {
        let mut set: Vec<usize> = index::sample(rng, n, ERR_CELLS).into_vec();
        set.sort_unstable();
        if seen.insert(set.clone()) {
            let mut p = vec![0.0; n];
            for i in set {
                p[i] = 1.0;
            }
            profiles.push(p);
        }
    }
    profiles
}

fn mean_over(cells: &std::collections::BTreeSet<Cell>, p: &[f64]) -> f64 {
    cells.iter().map(|&c| p[GRID.index(c)]).sum::<f64>() / cells.len() as f64
}

/// One Example 1 row: uniform ERM over the profiles; the bound is
/// L·W1(P_{f_S}, δ_zero) under the sup metric on profiles, with GenIID = 0.
pub fn example1_row(profiles: &[Vec<f64>], metric: &MetricTable, split: &Split, seed: usize) -> Result<SweepRow> {
    let space = ProfileSpace::Explicit(profiles.to_vec());
    let ProfileOutput::Mixture(w) = run_learner_on_profiles(&Learner::uniform_erm(), &space, GRID, split)? else {
        unreachable!("explicit spaces give mixtures")
    };
    let measured = if split.is_full() {
        0.0
    } else {
        let g: f64 = w
            .iter()
            .zip(profiles)
            .map(|(wi, p)| wi * (mean_over(split.unknown(), p) - mean_over(split.support(), p)))
            .sum();
        g.abs()
    };
    let mut zero = vec![0.0; profiles.len()];
    zero[0] = 1.0;
    let our_bound = w1_emd(&w, &zero, metric)?;
    let bendavid_bound = if split.is_full() { 0.0 } else { bendavid_profiles(profiles, split)? };
    Ok(SweepRow { support_size: split.support().len(), seed, measured, our_bound, bendavid_bound })
}

/// Ben-David divergence with cells as points and uniform S and U mixtures.
fn bendavid_profiles(profiles: &[Vec<f64>], split: &Split) -> Result<f64> {
    let n = GRID.cell_count();
    let mut p_s = vec![0.0; n];
    let mut p_u = vec![0.0; n];
    for &c in split.support() {
        p_s[GRID.index(c)] = 1.0 / split.support().len() as f64;
    }
    for &c in split.unknown() {
        p_u[GRID.index(c)] = 1.0 / split.unknown().len() as f64;
    }
    bendavid_divergence(profiles, &p_s, &p_u, DISAGREEMENT_TOL)
}

pub fn run_example1(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let per_seed = (0..config.seeds)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream(config.seed, &format!("ex1/{s}"));
            let profiles = example1_profiles(&mut rng, config.function_count);
            let metric = MetricTable::err_profile_sup(&profiles)?;
            let path = growth_path(&mut rng);
            config.support_sizes.iter().map(|&m| example1_row(&profiles, &metric, &split_of(&path, m)?, s)).collect()
        })
        .collect::<Result<Vec<Vec<SweepRow>>>>()?;
    Ok(sorted(per_seed))
}

/// One Example 2 row for per-cell constants `c` (linear cell index).
pub fn example2_row(c: &[f64], split: &Split, seed: usize) -> Result<SweepRow> {
    let learner = Learner::profile_sampler(c.to_vec());
    let ProfileOutput::Law(law) = run_learner_on_profiles(&learner, &ProfileSpace::Complete(GRID), GRID, split)? else {
        unreachable!("the complete space gives a law")
    };
    if split.is_full() {
        return Ok(SweepRow {
            support_size: GRID.cell_count(),
            seed,
            measured: 0.0,
            our_bound: 0.0,
            bendavid_bound: 0.0,
        });
    }
    let measured =
        split.unknown().iter().map(|&u| law.expected_error(GRID.index(u))).sum::<f64>() / split.unknown().len() as f64;
    // δ_zero is a point mass, so transport only needs each profile's distance
    // to zero: 0 for the zero profile, 1 (sup metric) for any other 0/1 profile.
    let zero = law.all_zero_prob();
    let metric = MetricTable::discrete(2);
    let our_bound = w1_emd(&[zero, 1.0 - zero], &[1.0, 0.0], &metric)?;
    // The complete space contains the pair disagreeing exactly on U.
    let bendavid_bound = 2.0;
    Ok(SweepRow { support_size: split.support().len(), seed, measured, our_bound, bendavid_bound })
}

pub fn run_example2(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let (lo, hi) = config.c_range;
    let per_seed = (0..config.seeds)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream(config.seed, &format!("ex2/{s}"));
            let c: Vec<f64> =
                (0..GRID.cell_count()).map(|_| if lo == hi { lo } else { rng.gen_range(lo..=hi) }).collect();
            let path = growth_path(&mut rng);
            config.support_sizes.iter().map(|&m| example2_row(&c, &split_of(&path, m)?, s)).collect()
        })
        .collect::<Result<Vec<Vec<SweepRow>>>>()?;
    Ok(sorted(per_seed))
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    match config.example {
        Example::One => run_example1(config),
        Example::Two => run_example2(config),
    }
}

fn sorted(per_seed: Vec<Vec<SweepRow>>) -> Vec<SweepRow> {
    let mut rows: Vec<SweepRow> = per_seed.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.support_size, r.seed));
    rows
}

/// (|S|, mean measured, mean ours, mean Ben-David), by increasing |S|.
pub fn means_by_size(rows: &[SweepRow]) -> Vec<(usize, f64, f64, f64)> {
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.support_size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
        .into_iter()
        .map(|s| {
            let sel: Vec<&SweepRow> = rows.iter().filter(|r| r.support_size == s).collect();
            let n = sel.len() as f64;
            (
                s,
                sel.iter().map(|r| r.measured).sum::<f64>() / n,
                sel.iter().map(|r| r.our_bound).sum::<f64>() / n,
                sel.iter().map(|r| r.bendavid_bound).sum::<f64>() / n,
            )
        })
        .collect()
}

fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| x[i].total_cmp(&x[j]));
    let mut r = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            r[idx[k]] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation with average ranks for ties; 0 when either
/// side is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks(x), ranks(y));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        0.0
    } else {
        cov / (vx * vy).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn full_support_gives_zero() {
        let mut rng = stream(0, "t");
        let profiles = example1_profiles(&mut rng, 20);
        let metric = MetricTable::err_profile_sup(&profiles).unwrap();
        let r = example1_row(&profiles, &metric, &Split::full(GRID), 0).unwrap();
        assert_eq!((r.measured, r.our_bound, r.bendavid_bound), (0.0, 0.0, 0.0));
        let r2 = example2_row(&vec![1.0; 100], &Split::full(GRID), 0).unwrap();
        assert_eq!(r2.measured, 0.0);
    }

    #[test]
    fn hitting_support_leaves_only_zero_function() {
        // Each profile errs on one whole row; S takes one cell per row.
        let mut profiles = vec![vec![0.0; 100]];
        for a in 0..10 {
            let mut p = vec![0.0; 100];
            for b in 0..10 {
                p[GRID.index(Cell::new(a, b))] = 1.0;
            }
            profiles.push(p);
        }
        let split = Split::new(GRID, (0..10).map(|a| Cell::new(a, 0))).unwrap();
        let metric = MetricTable::err_profile_sup(&profiles).unwrap();
        let r = example1_row(&profiles, &metric, &split, 0).unwrap();
        assert_eq!((r.measured, r.our_bound), (0.0, 0.0));
    }

    #[test]
    fn example2_matches_closed_form() {
        let c = vec![0.9; 100];
        let mut path: Vec<Cell> = GRID.cells().collect();
        path.retain(|x| *x != Cell::new(9, 9));
        let split = Split::new(GRID, path.into_iter().take(50)).unwrap();
        let r = example2_row(&c, &split, 0).unwrap();
        assert_abs_diff_eq!(r.measured, 1.0 - 0.9 * 0.5, epsilon = 1e-12);
        assert!(r.our_bound >= r.measured);
    }

    #[test]
    fn spearman_basics() {
        assert_abs_diff_eq!(spearman(&[1.0, 2.0, 3.0], &[2.0, 4.0, 9.0]), 1.0);
        assert_abs_diff_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), -1.0);
        assert_eq!(spearman(&[1.0, 2.0], &[5.0, 5.0]), 0.0);
    }
}
