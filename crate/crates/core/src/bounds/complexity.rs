use num_traits::Signed;
use rand::Rng as _;
use rayon::prelude::*;

use crate::domain::{CellMeasures, DatasetSampler, Split};
use crate::error::{Error, Result};
use crate::learners::{dataset_erm, run_learner, run_learner_on_dataset, FunctionSpace, Learner, LearnerKind};
use crate::prob::{to_f64, FiniteDistribution, Rational};
use crate::rng::stream;

/// Below this the κ denominator is treated as zero.
pub const GAP_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleSize {
    Finite(usize),
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenIidMode {
    /// 2L √(2 ln|F| / n).
    Massart,
    /// Twice a Monte Carlo estimate of the empirical Rademacher complexity.
    MonteCarlo { trials: usize },
}

/// In-distribution generalization term for the support mixture.
pub fn gen_iid(
    space: &FunctionSpace,
    measures: &CellMeasures,
    split: &Split,
    n: SampleSize,
    mode: GenIidMode,
    seed: u64,
) -> Result<f64> {
    let n = match n {
        SampleSize::Infinite => return Ok(0.0),
        SampleSize::Finite(0) => return Err(Error::InvalidInput("sample size must be at least 1".into())),
        SampleSize::Finite(n) => n,
    };
    let l = to_f64(space.bound());
    match mode {
        GenIidMode::Massart => Ok(2.0 * l * (2.0 * (space.len() as f64).ln() / n as f64).sqrt()),
        GenIidMode::MonteCarlo { trials } => {
            if trials == 0 {
                return Err(Error::InvalidInput("at least one trial is needed".into()));
            }
            let sampler = DatasetSampler::new(measures, split, None)?;
            let sups = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = stream(seed, &format!("rademacher/{t}"));
                    let d = sampler.draw(&mut rng, n)?;
                    let signs: Vec<f64> = (0..n).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect();
                    let best = space
                        .floats()
                        .iter()
                        .map(|f| d.samples.iter().zip(&signs).map(|(s, g)| g * f[s.element]).sum::<f64>())
                        .fold(f64::NEG_INFINITY, f64::max);
                    Ok(best / n as f64)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(2.0 * sups.iter().sum::<f64>() / trials as f64)
        }
    }
}

/// err_U(f) − err_S(f) for every function, exactly. Zero when U is empty.
pub fn gap_profile(measures: &CellMeasures, split: &Split, space: &FunctionSpace) -> Result<Vec<Rational>> {
    space
        .functions()
        .iter()
        .map(|f| {
            if split.is_full() {
                return Ok(Rational::from_integer(0.into()));
            }
            Ok(measures.err_mixture(split.unknown(), f)? - measures.err_mixture(split.support(), f)?)
        })
        .collect()
}

/// |E_{f∼A(P_S)} [err_U(f) − err_S(f)]|, exactly.
pub fn measured_gap(
    learner: &Learner,
    measures: &CellMeasures,
    split: &Split,
    space: &FunctionSpace,
    truth: Option<usize>,
) -> Result<Rational> {
    let out = run_learner(learner, measures, split, space, truth)?;
    Ok(out.expect(&gap_profile(measures, split, space)?)?.abs())
}

/// κ_n: the finite-sample expected gap over its population counterpart.
/// The numerator averages `trials` datasets of size `n` drawn uniformly over S.
#[allow(clippy::too_many_arguments)]
pub fn kappa(
    learner: &Learner,
    measures: &CellMeasures,
    split: &Split,
    space: &FunctionSpace,
    truth: Option<usize>,
    n: SampleSize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let gaps: Vec<f64> = gap_profile(measures, split, space)?.iter().map(to_f64).collect();
    let expect = |d: &FiniteDistribution| -> f64 { d.support().map(|i| to_f64(d.weight(i)) * gaps[i]).sum() };
    let den = expect(&run_learner(learner, measures, split, space, truth)?).abs();
    if den < GAP_EPS {
        return Err(Error::DegenerateGap(den));
    }
    let n = match n {
        SampleSize::Infinite => return Ok(1.0),
        SampleSize::Finite(n) => n,
    };
    if trials == 0 {
        return Err(Error::InvalidInput("at least one trial is needed".into()));
    }
    let sampler = DatasetSampler::new(measures, split, None)?;
    let vals = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, &format!("kappa/{t}"));
            let d = sampler.draw(&mut rng, n)?;
            if let LearnerKind::UniformErm = learner.kind {
                // Skips building an exact output law over a large space.
                let set = dataset_erm(&d, space)?;
                return Ok(set.iter().map(|&i| gaps[i]).sum::<f64>() / set.len() as f64);
            }
            Ok(expect(&run_learner_on_dataset(learner, &d, space, truth)?))
        })
        .collect::<Result<Vec<f64>>>()?;
    let num = (vals.iter().sum::<f64>() / trials as f64).abs();
    Ok(num / den)
}

/// 2 · sup over pairs of |P_U(f ≠ f') − P_S(f ≠ f')|, where two functions
/// disagree at a point when their values differ by more than `tol`.
pub fn bendavid_divergence<F: AsRef<[f64]> + Sync>(functions: &[F], p_s: &[f64], p_u: &[f64], tol: f64) -> Result<f64> {
    super::divergence::check_pair(p_s, p_u)?;
    if let Some(f) = functions.iter().find(|f| f.as_ref().len() != p_s.len()) {
        return Err(Error::DimensionMismatch { expected: p_s.len(), found: f.as_ref().len() });
    }
    let best = (0..functions.len())
        .into_par_iter()
        .map(|i| {
            let f = functions[i].as_ref();
            let mut best = 0.0f64;
            for g in &functions[i + 1..] {
                let g = g.as_ref();
                let mut diff = 0.0;
                for z in 0..f.len() {
                    if (f[z] - g[z]).abs() > tol {
                        diff += p_u[z] - p_s[z];
                    }
                }
                best = best.max(diff.abs());
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(2.0 * best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bendavid_examples() {
        let fs = vec![vec![0.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(bendavid_divergence(&fs, &[0.5, 0.5], &[0.5, 0.5], 1e-9).unwrap(), 0.0);
        assert_abs_diff_eq!(bendavid_divergence(&fs, &[1.0, 0.0], &[0.0, 1.0], 1e-9).unwrap(), 2.0);
    }
}
