use std::collections::HashSet;

use num_traits::{Signed, Zero};

use crate::domain::{labeled_index, CellMeasures, CompositionRule, Skeleton};
use crate::error::{Error, Result};
use crate::prob::{int, to_f64, Rational};
use crate::rules::RuleSpace;

/// A finite set of bounded, pairwise distinct functions on a data space.
#[derive(Clone, Debug)]
pub struct FunctionSpace {
    values: Vec<Vec<Rational>>,
    floats: Vec<Vec<f64>>,
    bound: Rational,
}

impl FunctionSpace {
    pub fn new(values: Vec<Vec<Rational>>, bound: Rational) -> Result<Self> {
        let first = values.first().ok_or(Error::InvalidInput("empty function space".into()))?;
        let n = first.len();
        for (i, f) in values.iter().enumerate() {
            if f.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: f.len() });
            }
            if f.iter().any(|v| v.is_negative() || *v > bound) {
                return Err(Error::InvalidInput(format!("function {i} leaves the range [0, L]")));
            }
        }
        let distinct: HashSet<&Vec<Rational>> = values.iter().collect();
        if distinct.len() != values.len() {
            return Err(Error::InvalidInput("functions must be pairwise distinct".into()));
        }
        let floats = values.iter().map(|f| f.iter().map(to_f64).collect()).collect();
        Ok(Self { values, floats, bound })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn space_size(&self) -> usize {
        self.values[0].len()
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn functions(&self) -> &[Vec<Rational>] {
        &self.values
    }

    pub fn function(&self, i: usize) -> Result<&[Rational]> {
        self.values.get(i).map(Vec::as_slice).ok_or(Error::IndexOutOfRange { index: i, size: self.len() })
    }

    pub fn floats(&self) -> &[Vec<f64>] {
        &self.floats
    }
}

/// Indicator, on the labeled space, of disagreeing with `rule`: zero on
/// `(c, i, map_c(i))`, one elsewhere.
pub fn disagreement_indicator(sk: &Skeleton, rule: &CompositionRule) -> Result<Vec<Rational>> {
    let k =
        sk.uniform_cardinality().ok_or_else(|| Error::Malformed("labeled space needs equal support sizes".into()))?;
    let sizes = sk.factors();
    let mut f = vec![int(1); sizes.cell_count() * k * k];
    for (ci, c) in sizes.cells().enumerate() {
        let m = rule.map(sizes, c);
        for i in 0..k {
            f[labeled_index(k, ci, i, m.apply(i))] = Rational::zero();
        }
    }
    Ok(f)
}

/// One disagreement indicator per enumerated rule, in rule order, with L = 1.
#[derive(Clone, Debug)]
pub struct RuleIndexedSpace {
    rules: RuleSpace,
    space: FunctionSpace,
}

impl RuleIndexedSpace {
    pub fn rules(&self) -> &RuleSpace {
        &self.rules
    }

    pub fn space(&self) -> &FunctionSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn function_index(&self, rule: &CompositionRule) -> Option<usize> {
        self.rules.index_of(rule)
    }

    pub fn induced_rule(&self, i: usize) -> Result<&CompositionRule> {
        self.rules.get(i)
    }

    /// Labeled cell measures of the family generated by rule `truth`.
    pub fn measures(&self, truth: usize) -> Result<CellMeasures> {
        self.rules.family(truth)?.labeled_measures()
    }
}

pub fn build_rule_indexed_space(rules: RuleSpace) -> Result<RuleIndexedSpace> {
    let sk = rules.skeleton().clone();
    let values = rules.rules().iter().map(|r| disagreement_indicator(&sk, r)).collect::<Result<Vec<_>>>()?;
    let space = FunctionSpace::new(values, int(1))?;
    Ok(RuleIndexedSpace { rules, space })
}
