use std::sync::Arc;

use serde::Serialize;

use crate::bounds::{kappa, SampleSize};
use crate::domain::{Cell, FactorSizes, Split};
use crate::error::Result;
use crate::learners::{build_rule_indexed_space, Learner, RuleIndexedSpace};
use crate::rules::{enumerate_rules, tasks::uniform_family, DEFAULT_CAP};

/// A rule-indexed problem with a fixed true rule and split.
pub struct KappaTask {
    pub space: RuleIndexedSpace,
    pub truth: usize,
    pub split: Split,
}

/// 2x2 grid, four equally weighted elements per cell (13824 rules), truth =
/// the identity rule, S = {(0,0), (0,1), (1,0)}. With twelve support
/// elements a sample of ten misses several, so κ_10 sits well below 1.
pub fn reference_kappa_task() -> Result<KappaTask> {
    let sizes = FactorSizes::new(2, 2)?;
    let family = uniform_family(sizes, 4)?;
    let rules = enumerate_rules(&Arc::clone(family.skeleton()), DEFAULT_CAP)?;
    let truth = rules.index_of(family.rule()).expect("identity rule is enumerated");
    let split = Split::new(sizes, [Cell::new(0, 0), Cell::new(0, 1), Cell::new(1, 0)])?;
    Ok(KappaTask { space: build_rule_indexed_space(rules)?, truth, split })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KappaRow {
    /// `inf` for the analytic limit.
    pub n: String,
    pub kappa: f64,
}

/// κ_n for each requested n, followed by the n = ∞ row (exactly 1).
pub fn kappa_sweep(
    task: &KappaTask,
    learner: &Learner,
    n_values: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<KappaRow>> {
    let measures = task.space.measures(task.truth)?;
    let mut rows = Vec::with_capacity(n_values.len() + 1);
    for &n in n_values.iter().chain(std::iter::once(&0)) {
        let size = if n == 0 { SampleSize::Infinite } else { SampleSize::Finite(n) };
        let k = kappa(learner, &measures, &task.split, task.space.space(), Some(task.truth), size, trials, seed)?;
        rows.push(KappaRow { n: if n == 0 { "inf".into() } else { n.to_string() }, kappa: k });
    }
    Ok(rows)
}
