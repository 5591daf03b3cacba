use num_traits::{Signed, Zero};

use crate::domain::{CellMeasures, Dataset, Split};
use crate::error::{Error, Result};
use crate::prob::{ratio, FiniteDistribution, Rational};

use super::FunctionSpace;

/// Ties in float-mode risk comparisons.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum LearnerKind {
    /// Uniform over the empirical risk minimizers.
    UniformErm,
    /// Minimizers weighted by a fixed positive weight per function.
    BiasedErm(Vec<Rational>),
    /// Point mass on the true function; needs to be told which one it is.
    CheatingOracle,
    /// Uniform over the whole space, ignoring the data.
    RandomPick,
    /// Per-cell independent error law on the complete 0/1 profile space.
    ProfileSampler(ProfileSamplerParams),
}

/// Unseen cell `u` is solved with probability `c[u] * |S| / |E|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileSamplerParams {
    pub c: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Learner {
    pub name: String,
    pub kind: LearnerKind,
    /// Declares that trained on every cell, the learner lands on the
    /// minimizers of the full-grid risk.
    pub convergent: bool,
}

impl Learner {
    pub fn uniform_erm() -> Self {
        Self { name: "uniform-erm".into(), kind: LearnerKind::UniformErm, convergent: true }
    }

    pub fn biased_erm(weights: Vec<Rational>) -> Self {
        Self { name: "biased-erm".into(), kind: LearnerKind::BiasedErm(weights), convergent: true }
    }

    pub fn cheating_oracle() -> Self {
        Self { name: "cheating-oracle".into(), kind: LearnerKind::CheatingOracle, convergent: true }
    }

    pub fn random_pick() -> Self {
        Self { name: "random-pick".into(), kind: LearnerKind::RandomPick, convergent: false }
    }

    pub fn profile_sampler(c: Vec<f64>) -> Self {
        Self {
            name: "profile-sampler".into(),
            kind: LearnerKind::ProfileSampler(ProfileSamplerParams { c }),
            convergent: false,
        }
    }

    /// Whether the output never depends on the training data.
    pub fn ignores_data(&self) -> bool {
        matches!(self.kind, LearnerKind::CheatingOracle | LearnerKind::RandomPick)
    }
}

/// Indices minimizing the uniform-mixture risk over the support cells.
pub fn erm_set(measures: &CellMeasures, split: &Split, space: &FunctionSpace) -> Result<Vec<usize>> {
    let risks =
        space.functions().iter().map(|f| measures.err_mixture(split.support(), f)).collect::<Result<Vec<_>>>()?;
    let best = risks.iter().min().expect("space is nonempty").clone();
    Ok(risks.iter().enumerate().filter(|(_, r)| **r == best).map(|(i, _)| i).collect())
}

fn weighted_over(n: usize, set: &[usize], weights: Option<&[Rational]>) -> Result<FiniteDistribution> {
    let mut w = vec![Rational::zero(); n];
    for &i in set {
        w[i] = match weights {
            Some(ws) => ws[i].clone(),
            None => ratio(1, 1),
        };
    }
    FiniteDistribution::normalized(w)
}

fn check_bias(weights: &[Rational], space: &FunctionSpace) -> Result<()> {
    if weights.len() != space.len() {
        return Err(Error::DimensionMismatch { expected: space.len(), found: weights.len() });
    }
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::InvalidInput("bias weights must be positive".into()));
    }
    Ok(())
}

/// The learner's output law over the space when it sees the population
/// distributions of the support cells.
pub fn run_learner(
    learner: &Learner,
    measures: &CellMeasures,
    split: &Split,
    space: &FunctionSpace,
    truth: Option<usize>,
) -> Result<FiniteDistribution> {
    if measures.space_size() != space.space_size() {
        return Err(Error::DimensionMismatch { expected: measures.space_size(), found: space.space_size() });
    }
    match &learner.kind {
        LearnerKind::UniformErm => weighted_over(space.len(), &erm_set(measures, split, space)?, None),
        LearnerKind::BiasedErm(w) => {
            check_bias(w, space)?;
            weighted_over(space.len(), &erm_set(measures, split, space)?, Some(w))
        }
        LearnerKind::CheatingOracle => oracle(space, truth),
        LearnerKind::RandomPick => FiniteDistribution::uniform(space.len()),
        LearnerKind::ProfileSampler(_) => {
            Err(Error::UnsupportedCombination("profile-sampler only runs on the complete profile space".into()))
        }
    }
}

fn oracle(space: &FunctionSpace, truth: Option<usize>) -> Result<FiniteDistribution> {
    let t = truth.ok_or_else(|| Error::UnsupportedCombination("cheating-oracle needs the true function".into()))?;
    FiniteDistribution::point_mass(space.len(), t)
}

/// The learner's output law on a finite sample. Risks are compared in float
/// mode with ties within [`TIE_TOL`].
pub fn run_learner_on_dataset(
    learner: &Learner,
    dataset: &Dataset,
    space: &FunctionSpace,
    truth: Option<usize>,
) -> Result<FiniteDistribution> {
    match &learner.kind {
        LearnerKind::UniformErm => weighted_over(space.len(), &dataset_erm(dataset, space)?, None),
        LearnerKind::BiasedErm(w) => {
            check_bias(w, space)?;
            weighted_over(space.len(), &dataset_erm(dataset, space)?, Some(w))
        }
        LearnerKind::CheatingOracle => oracle(space, truth),
        LearnerKind::RandomPick => FiniteDistribution::uniform(space.len()),
        LearnerKind::ProfileSampler(_) => {
            Err(Error::UnsupportedCombination("profile-sampler only runs on the complete profile space".into()))
        }
    }
}

/// Empirical risk minimizers of a sample, float mode.
pub fn dataset_erm(dataset: &Dataset, space: &FunctionSpace) -> Result<Vec<usize>> {
    if dataset.is_empty() {
        return Err(Error::InvalidInput("empty dataset".into()));
    }
    let hist: Vec<(usize, f64)> = dataset.histogram().into_iter().map(|(z, n)| (z, n as f64)).collect();
    if let Some((z, _)) = hist.iter().find(|(z, _)| *z >= space.space_size()) {
        return Err(Error::IndexOutOfRange { index: *z, size: space.space_size() });
    }
    let n = dataset.len() as f64;
    let risks: Vec<f64> = space.floats().iter().map(|f| hist.iter().map(|(z, c)| c * f[*z]).sum::<f64>() / n).collect();
    let best = risks.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(risks.iter().enumerate().filter(|(_, r)| **r - best <= TIE_TOL).map(|(i, _)| i).collect())
}

/// Checks a learner that declares convergence: trained on every cell it must
/// put all its mass on full-grid risk minimizers.
pub fn check_convergence(
    learner: &Learner,
    measures: &CellMeasures,
    space: &FunctionSpace,
    truth: Option<usize>,
) -> Result<()> {
    if !learner.convergent {
        return Ok(());
    }
    let full = Split::full(measures.factors());
    let out = run_learner(learner, measures, &full, space, truth)?;
    let minimizers = erm_set(measures, &full, space)?;
    if let Some(i) = out.support().find(|i| !minimizers.contains(i)) {
        return Err(Error::ConvergenceViolated(format!(
            "{} puts mass on function {i}, which does not minimize the full-grid risk",
            learner.name
        )));
    }
    Ok(())
}
