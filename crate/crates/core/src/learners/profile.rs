//! Learners over error profiles: a function is represented only by its error
//! on each cell (linear cell index).

use crate::domain::{FactorSizes, Split};
use crate::error::{Error, Result};
use crate::prob::to_f64;

use super::learner::{Learner, LearnerKind, TIE_TOL};

#[derive(Clone, Debug)]
pub enum ProfileSpace {
    /// A listed set of profiles, each with one error per cell.
    Explicit(Vec<Vec<f64>>),
    /// Every 0/1 profile over the grid, represented implicitly.
    Complete(FactorSizes),
}

/// Each cell independently has error 0 with probability `zero_prob[cell]`,
/// and error 1 otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct IndependentLaw {
    pub zero_prob: Vec<f64>,
}

impl IndependentLaw {
    /// Probability that the sampled profile is identically zero.
    pub fn all_zero_prob(&self) -> f64 {
        self.zero_prob.iter().product()
    }

    pub fn expected_error(&self, cell: usize) -> f64 {
        1.0 - self.zero_prob[cell]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProfileOutput {
    /// Output weight per profile of an explicit space.
    Mixture(Vec<f64>),
    Law(IndependentLaw),
}

fn split_cells(sizes: FactorSizes, split: &Split) -> Result<Vec<usize>> {
    if split.sizes() != sizes {
        return Err(Error::InvalidSplit("split grid does not match the profile grid".into()));
    }
    Ok(split.support().iter().map(|&c| sizes.index(c)).collect())
}

fn uniform_on(n: usize, set: &[usize]) -> Vec<f64> {
    let mut w = vec![0.0; n];
    for &i in set {
        w[i] = 1.0 / set.len() as f64;
    }
    w
}

pub fn run_learner_on_profiles(
    learner: &Learner,
    space: &ProfileSpace,
    sizes: FactorSizes,
    split: &Split,
) -> Result<ProfileOutput> {
    let s_cells = split_cells(sizes, split)?;
    match space {
        ProfileSpace::Explicit(profiles) => {
            if profiles.is_empty() {
                return Err(Error::InvalidInput("empty profile space".into()));
            }
            if let Some(p) = profiles.iter().find(|p| p.len() != sizes.cell_count()) {
                return Err(Error::DimensionMismatch { expected: sizes.cell_count(), found: p.len() });
            }
            let risk = |p: &Vec<f64>| s_cells.iter().map(|&i| p[i]).sum::<f64>() / s_cells.len() as f64;
            let risks: Vec<f64> = profiles.iter().map(risk).collect();
            let best = risks.iter().copied().fold(f64::INFINITY, f64::min);
            let erm: Vec<usize> = (0..profiles.len()).filter(|&i| risks[i] - best <= TIE_TOL).collect();
            match &learner.kind {
                LearnerKind::UniformErm => Ok(ProfileOutput::Mixture(uniform_on(profiles.len(), &erm))),
                LearnerKind::BiasedErm(w) => {
                    if w.len() != profiles.len() {
                        return Err(Error::DimensionMismatch { expected: profiles.len(), found: w.len() });
                    }
                    let mut out = vec![0.0; profiles.len()];
                    let total: f64 = erm.iter().map(|&i| to_f64(&w[i])).sum();
                    for &i in &erm {
                        out[i] = to_f64(&w[i]) / total;
                    }
                    Ok(ProfileOutput::Mixture(out))
                }
                LearnerKind::RandomPick => {
                    Ok(ProfileOutput::Mixture(vec![1.0 / profiles.len() as f64; profiles.len()]))
                }
                LearnerKind::CheatingOracle | LearnerKind::ProfileSampler(_) => Err(Error::UnsupportedCombination(
                    format!("{} cannot run on an explicit profile space", learner.name),
                )),
            }
        }
        ProfileSpace::Complete(grid) => {
            if *grid != sizes {
                return Err(Error::InvalidInput("profile space grid does not match".into()));
            }
            let n = sizes.cell_count();
            let mut zero_prob = vec![0.0; n];
            for &i in &s_cells {
                zero_prob[i] = 1.0;
            }
            match &learner.kind {
                LearnerKind::UniformErm => {
                    for p in zero_prob.iter_mut().filter(|p| **p == 0.0) {
                        *p = 0.5;
                    }
                }
                LearnerKind::ProfileSampler(params) => {
                    if params.c.len() != n {
                        return Err(Error::DimensionMismatch { expected: n, found: params.c.len() });
                    }
                    let frac = s_cells.len() as f64 / n as f64;
                    for (i, p) in zero_prob.iter_mut().enumerate() {
                        if *p == 0.0 {
                            *p = (params.c[i] * frac).clamp(0.0, 1.0);
                        }
                    }
                }
                _ => {
                    return Err(Error::UnsupportedCombination(format!(
                        "{} is not defined on the complete profile space",
                        learner.name
                    )))
                }
            }
            Ok(ProfileOutput::Law(IndependentLaw { zero_prob }))
        }
    }
}
