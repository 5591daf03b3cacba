//! Exhaustive no-free-lunch sums over an enumerated rule space.
//!
//! For every rule T the learner is shown the support distributions generated
//! by T and the mass it puts on T's own indicator function is summed. A
//! learner only ever observes P_S, which is shared by all rules in T's
//! restriction class, so its output is taken as the uniform-prior average of
//! its outputs over that class. For learners that already depend on P_S
//! alone this changes nothing; for the cheating oracle it turns "always the
//! truth" into "uniform over the rules consistent with P_S".

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;

use crate::bounds::learner_outputs;
use crate::domain::{Cell, Split};
use crate::error::{Error, Result};
use crate::learners::{check_convergence, Learner, RuleIndexedSpace};
use crate::prob::{format_rational, ratio, FiniteDistribution, Rational};

/// Per restriction class: the class members and the mass placed on them.
pub fn nfl_class_contributions(
    learner: &Learner,
    space: &RuleIndexedSpace,
    split: &Split,
) -> Result<Vec<(Vec<usize>, Rational)>> {
    let outputs = learner_outputs(learner, space, split)?;
    Ok(space
        .rules()
        .restriction_classes(split)
        .into_iter()
        .map(|class| {
            let contrib = class_contribution(&outputs, &class);
            (class, contrib)
        })
        .collect())
}

fn class_contribution(outputs: &[FiniteDistribution], class: &[usize]) -> Rational {
    let m = ratio(class.len() as i64, 1);
    let mut total = Rational::zero();
    for &t in class {
        for &s in class {
            total += outputs[s].weight(t);
        }
    }
    total / m
}

/// Σ_T Pr(learner picks T's function | P_S generated by T).
pub fn nfl_sum(learner: &Learner, space: &RuleIndexedSpace, split: &Split) -> Result<Rational> {
    Ok(nfl_class_contributions(learner, space, split)?.into_iter().map(|(_, c)| c).sum())
}

/// Adding `cell` to the support refines each class; the refined
/// contributions inside a coarse class must total (number of refined
/// classes) × (the coarse contribution).
pub fn induction_mirror(learner: &Learner, space: &RuleIndexedSpace, split: &Split, cell: Cell) -> Result<bool> {
    let finer = split.with_cell(cell)?;
    let coarse = nfl_class_contributions(learner, space, split)?;
    let fine = nfl_class_contributions(learner, space, &finer)?;
    let mut owner = BTreeMap::new();
    for (k, (class, _)) in coarse.iter().enumerate() {
        for &t in class {
            owner.insert(t, k);
        }
    }
    let mut acc: Vec<(usize, Rational)> = vec![(0, Rational::zero()); coarse.len()];
    for (class, c) in fine {
        let k = owner[&class[0]];
        acc[k].0 += 1;
        acc[k].1 += c;
    }
    Ok(acc.iter().zip(&coarse).all(|((n, s), (_, c))| *s == ratio(*n as i64, 1) * c))
}

pub struct NflMethod<'a> {
    pub learner: Learner,
    pub space: &'a RuleIndexedSpace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NflOutcome {
    Skipped(String),
    Evaluated { class_count: usize, sums: Vec<Rational> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NflRow {
    pub support: Vec<Cell>,
    pub outcome: NflOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NflReport {
    /// Method name and whether it declares convergence.
    pub methods: Vec<(String, bool)>,
    pub rows: Vec<NflRow>,
}

impl NflReport {
    /// Rows where two convergent methods disagree or one misses class_count.
    pub fn violations(&self) -> Vec<&NflRow> {
        self.rows
            .iter()
            .filter(|row| match &row.outcome {
                NflOutcome::Skipped(_) => false,
                NflOutcome::Evaluated { class_count, sums } => {
                    let target = ratio(*class_count as i64, 1);
                    self.methods.iter().zip(sums).any(|((_, conv), s)| *conv && *s != target)
                }
            })
            .collect()
    }

    pub fn convergent_methods_agree(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("split,status,class_count");
        for (name, conv) in &self.methods {
            let _ = write!(out, ",{name}{}", if *conv { "" } else { " (non-convergent)" });
        }
        out.push_str(",convergent_equal\n");
        for row in &self.rows {
            let cells: Vec<String> = row.support.iter().map(|c| c.to_string()).collect();
            let _ = write!(out, "\"{}\"", cells.join(" "));
            match &row.outcome {
                NflOutcome::Skipped(reason) => {
                    let _ = write!(out, ",\"skipped: {reason}\",");
                    for _ in &self.methods {
                        out.push(',');
                    }
                    out.push_str(",\n");
                }
                NflOutcome::Evaluated { class_count, sums } => {
                    let _ = write!(out, ",evaluated,{class_count}");
                    for s in sums {
                        let _ = write!(out, ",{}", format_rational(s));
                    }
                    let target = ratio(*class_count as i64, 1);
                    let ok = self.methods.iter().zip(sums).all(|((_, conv), s)| !*conv || *s == target);
                    let _ = writeln!(out, ",{ok}");
                }
            }
        }
        out
    }
}

/// Runs every method on every split. Splits without the base cell are kept
/// in the report as skipped rows.
pub fn nfl_check(methods: &[NflMethod<'_>], splits: &[Split]) -> Result<NflReport> {
    let first = methods.first().ok_or(Error::InvalidInput("no methods given".into()))?;
    let skeleton = first.space.rules().skeleton();
    for m in methods {
        if m.space.len() != first.space.len() {
            return Err(Error::DimensionMismatch { expected: first.space.len(), found: m.space.len() });
        }
        if m.space.rules().skeleton() != skeleton {
            return Err(Error::SkeletonMismatch("methods use different skeletons".into()));
        }
        if m.learner.convergent {
            for t in 0..m.space.len() {
                check_convergence(&m.learner, &m.space.measures(t)?, m.space.space(), Some(t))?;
            }
        }
    }
    let base = skeleton.base_cell();
    let rows = splits
        .iter()
        .map(|split| {
            let support: Vec<Cell> = split.support().iter().copied().collect();
            if !split.contains(base) {
                return Ok(NflRow { support, outcome: NflOutcome::Skipped(format!("base cell {base} not in S")) });
            }
            let class_count = first.space.rules().restriction_classes(split).len();
            let sums = methods.iter().map(|m| nfl_sum(&m.learner, m.space, split)).collect::<Result<_>>()?;
            Ok(NflRow { support, outcome: NflOutcome::Evaluated { class_count, sums } })
        })
        .collect::<Result<_>>()?;
    Ok(NflReport { methods: methods.iter().map(|m| (m.learner.name.clone(), m.learner.convergent)).collect(), rows })
}
