use num_traits::Zero;
use rayon::prelude::*;

use crate::domain::Split;
use crate::error::{Error, Result};
use crate::learners::{run_learner, Learner, RuleIndexedSpace};
use crate::prob::{to_f64, FiniteDistribution, Rational};

/// Output law of the learner for every rule, in rule order.
pub fn learner_outputs(learner: &Learner, space: &RuleIndexedSpace, split: &Split) -> Result<Vec<FiniteDistribution>> {
    split.require_base(space.rules().skeleton().base_cell())?;
    (0..space.len())
        .into_par_iter()
        .map(|t| {
            let m = space.measures(t)?;
            run_learner(learner, &m, split, space.space(), Some(t))
        })
        .collect()
}

/// I(f_S ; T | P_S) in nats, with T drawn from `prior` over the rule space.
///
/// P_S is a function of T's restriction to the support cells, so the
/// conditional information splits over restriction classes: within each
/// class it is the prior-weighted KL of each rule's output law from the
/// class mixture.
pub fn conditional_mi(
    learner: &Learner,
    space: &RuleIndexedSpace,
    split: &Split,
    prior: &FiniteDistribution,
) -> Result<f64> {
    if prior.len() != space.len() {
        return Err(Error::DimensionMismatch { expected: space.len(), found: prior.len() });
    }
    let outputs = learner_outputs(learner, space, split)?;
    Ok(mi_from_outputs(&outputs, &space.rules().restriction_classes(split), prior))
}

pub(crate) fn mi_from_outputs(
    outputs: &[FiniteDistribution],
    classes: &[Vec<usize>],
    prior: &FiniteDistribution,
) -> f64 {
    let mut total = 0.0;
    for class in classes {
        let mass: Rational = class.iter().map(|&t| prior.weight(t).clone()).sum();
        if mass.is_zero() {
            continue;
        }
        let n = outputs[class[0]].len();
        let mut mixture = vec![Rational::zero(); n];
        for &t in class {
            let w = prior.weight(t) / &mass;
            for (i, p) in outputs[t].weights().iter().enumerate() {
                if !p.is_zero() {
                    mixture[i] += &w * p;
                }
            }
        }
        for &t in class {
            let pt = prior.weight(t);
            if pt.is_zero() || outputs[t].weights() == mixture.as_slice() {
                continue;
            }
            let kl: f64 = outputs[t]
                .weights()
                .iter()
                .zip(&mixture)
                .filter(|(p, _)| !p.is_zero())
                .map(|(p, m)| {
                    let p = to_f64(p);
                    p * (p / to_f64(m)).ln()
                })
                .sum();
            total += to_f64(pt) * kl.max(0.0);
        }
    }
    total.max(0.0)
}
