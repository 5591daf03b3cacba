use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use itertools::Itertools;

use crate::domain::{Bijection, Cell, CompositionRule, CompositionalFamily, FactorSizes, Skeleton, Split};
use crate::error::{Error, Result};
use crate::prob::Rational;

/// Default enumeration cap; override with `CGTHEORY_CAP` in the CLI.
pub const DEFAULT_CAP: u128 = 1_000_000;

/// All composition rules admissible for a skeleton, in lexicographic order
/// of their map tables.
#[derive(Clone, Debug)]
pub struct RuleSpace {
    skeleton: Arc<Skeleton>,
    rules: Vec<CompositionRule>,
    index: HashMap<Vec<Bijection>, usize>,
}

impl RuleSpace {
    pub fn skeleton(&self) -> &Arc<Skeleton> {
        &self.skeleton
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> &[CompositionRule] {
        &self.rules
    }

    pub fn get(&self, i: usize) -> Result<&CompositionRule> {
        self.rules.get(i).ok_or(Error::IndexOutOfRange { index: i, size: self.rules.len() })
    }

    pub fn index_of(&self, rule: &CompositionRule) -> Option<usize> {
        self.index.get(&rule.maps).copied()
    }

    pub fn family(&self, i: usize) -> Result<CompositionalFamily> {
        CompositionalFamily::new(self.skeleton.clone(), self.get(i)?.clone())
    }

    /// Groups rule indices by their maps on the support cells, in order of
    /// first appearance.
    pub fn restriction_classes(&self, split: &Split) -> Vec<Vec<usize>> {
        let sizes = self.skeleton.factors();
        let mut order: Vec<Vec<usize>> = Vec::new();
        let mut seen: HashMap<Vec<&Bijection>, usize> = HashMap::new();
        for (i, r) in self.rules.iter().enumerate() {
            let key: Vec<&Bijection> = split.support().iter().map(|&c| r.map(sizes, c)).collect();
            match seen.get(&key) {
                Some(&k) => order[k].push(i),
                None => {
                    seen.insert(key, order.len());
                    order.push(vec![i]);
                }
            }
        }
        order
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, x| acc.saturating_mul(x))
}

/// Bijections base -> cell that carry the base weights onto `target`;
/// `None` when the weight multisets differ.
pub fn weight_preserving(base: &[Rational], target: &[Rational], cap: u128) -> Result<Option<Vec<Bijection>>> {
    let mut by_weight: BTreeMap<&Rational, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, w) in base.iter().enumerate() {
        by_weight.entry(w).or_default().0.push(i);
    }
    for (j, w) in target.iter().enumerate() {
        by_weight.entry(w).or_default().1.push(j);
    }
    if by_weight.values().any(|(src, dst)| src.len() != dst.len()) {
        return Ok(None);
    }
    let count = by_weight.values().fold(1u128, |acc, (src, _)| acc.saturating_mul(factorial(src.len())));
    if count > cap {
        return Err(Error::ExplosionGuard { count, cap });
    }
    let classes: Vec<&(Vec<usize>, Vec<usize>)> = by_weight.values().collect();
    let mut out: Vec<Bijection> = classes
        .iter()
        .map(|(src, dst)| dst.iter().copied().permutations(src.len()).collect::<Vec<_>>())
        .multi_cartesian_product()
        .map(|choice| {
            let mut table = vec![0; base.len()];
            for ((src, _), dsts) in classes.iter().zip(&choice) {
                for (&i, &j) in src.iter().zip(dsts) {
                    table[i] = j;
                }
            }
            Bijection(table)
        })
        .collect();
    if classes.is_empty() {
        out.push(Bijection(vec![]));
    }
    out.sort();
    Ok(Some(out))
}

/// Every rule whose maps are bijections pushing the base measure onto each
/// cell's declared weights (any bijection where no weights are declared).
pub fn enumerate_rules(skeleton: &Arc<Skeleton>, cap: u128) -> Result<RuleSpace> {
    let sizes = skeleton.factors();
    let base = skeleton.base_weights();
    let k = base.len();
    let mut per_cell: Vec<Vec<Bijection>> = Vec::with_capacity(sizes.cell_count());
    let mut total: u128 = 1;
    for c in sizes.cells() {
        if c == skeleton.base_cell() {
            per_cell.push(vec![Bijection::identity(k)]);
            continue;
        }
        let n = skeleton.support(c).len();
        if n != k {
            return Err(Error::Malformed(format!("cell {c} has {n} elements, base has {k}")));
        }
        let options = match skeleton.declared_weights(c) {
            Some(target) => weight_preserving(base, target, cap)?
                .ok_or_else(|| Error::Malformed(format!("no measure-preserving bijection onto cell {c}")))?,
            None => {
                let count = factorial(k);
                if count > cap {
                    return Err(Error::ExplosionGuard { count, cap });
                }
                (0..k).permutations(k).map(Bijection).collect()
            }
        };
        total = total.saturating_mul(options.len() as u128);
        per_cell.push(options);
    }
    if total > cap {
        return Err(Error::ExplosionGuard { count: total, cap });
    }
    let rules: Vec<CompositionRule> =
        per_cell.into_iter().multi_cartesian_product().map(CompositionRule::new).collect();
    let index = rules.iter().enumerate().map(|(i, r)| (r.maps.clone(), i)).collect();
    Ok(RuleSpace { skeleton: skeleton.clone(), rules, index })
}

/// `map_to ∘ map_from⁻¹`: carries positions of cell `from` to cell `to`.
pub fn pairwise_map(rule: &CompositionRule, sizes: FactorSizes, from: Cell, to: Cell) -> Result<Bijection> {
    sizes.check(from)?;
    sizes.check(to)?;
    rule.map(sizes, to).after(&rule.map(sizes, from).inverse()?)
}

/// Whether two rules agree on every listed cell.
pub fn rules_equal<'a>(
    t1: &CompositionRule,
    t2: &CompositionRule,
    sizes: FactorSizes,
    cells: impl IntoIterator<Item = &'a Cell>,
) -> Result<bool> {
    if t1.maps.len() != t2.maps.len() || t1.maps.len() != sizes.cell_count() {
        return Err(Error::SkeletonMismatch(format!("{} vs {} cell maps", t1.maps.len(), t2.maps.len())));
    }
    if t1.maps.iter().zip(&t2.maps).any(|(a, b)| a.len() != b.len()) {
        return Err(Error::SkeletonMismatch("support sizes differ".into()));
    }
    for &c in cells {
        sizes.check(c)?;
        if t1.map(sizes, c) != t2.map(sizes, c) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{CellSpec, Geometry};
    use crate::prob::ratio;

    fn skeleton(sizes: (usize, usize), base: Vec<Rational>, declared: bool) -> Arc<Skeleton> {
        let sizes = FactorSizes::new(sizes.0, sizes.1).unwrap();
        let k = base.len();
        let cells = (0..sizes.cell_count())
            .map(|i| CellSpec {
                support: (i * k..(i + 1) * k).collect(),
                weights: (i == 0 || declared).then(|| base.clone()),
                coords: None,
            })
            .collect();
        Arc::new(Skeleton::new(sizes.cell_count() * k, sizes, Cell::new(0, 0), cells, Geometry::Positional).unwrap())
    }

    #[test]
    fn uniform_two_by_two_has_eight_rules() {
        let sk = skeleton((2, 2), vec![ratio(1, 2), ratio(1, 2)], true);
        let rs = enumerate_rules(&sk, DEFAULT_CAP).unwrap();
        assert_eq!(rs.len(), 8);
        let mut sorted = rs.rules().to_vec();
        sorted.sort_by(|a, b| a.maps.cmp(&b.maps));
        assert_eq!(sorted, rs.rules());
    }

    #[test]
    fn distinct_weights_pin_the_rule() {
        let sk = skeleton((2, 2), vec![ratio(3, 5), ratio(2, 5)], true);
        assert_eq!(enumerate_rules(&sk, DEFAULT_CAP).unwrap().len(), 1);
    }

    #[test]
    fn tied_classes_multiply() {
        let sk = skeleton((1, 2), vec![ratio(1, 4), ratio(1, 4), ratio(1, 2)], true);
        assert_eq!(enumerate_rules(&sk, DEFAULT_CAP).unwrap().len(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let w = vec![ratio(1, 4); 4];
        let sk = skeleton((3, 3), w, true);
        assert!(matches!(enumerate_rules(&sk, 1000), Err(Error::ExplosionGuard { .. })));
    }

    #[test]
    fn restriction_classes_partition() {
        let sk = skeleton((2, 2), vec![ratio(1, 2), ratio(1, 2)], true);
        let rs = enumerate_rules(&sk, DEFAULT_CAP).unwrap();
        let split = Split::new(sk.factors(), [Cell::new(0, 0), Cell::new(0, 1)]).unwrap();
        let classes = rs.restriction_classes(&split);
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|c| c.len() == 4));
    }

    #[test]
    fn pairwise_and_equality() {
        let sk = skeleton((1, 2), vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)], true);
        let rs = enumerate_rules(&sk, DEFAULT_CAP).unwrap();
        let sizes = sk.factors();
        let r = rs.get(3).unwrap();
        let p = pairwise_map(r, sizes, Cell::new(0, 0), Cell::new(0, 1)).unwrap();
        assert_eq!(&p, r.map(sizes, Cell::new(0, 1)));
        assert!(rules_equal(rs.get(0).unwrap(), rs.get(3).unwrap(), sizes, &[Cell::new(0, 0)]).unwrap());
        assert!(!rules_equal(rs.get(0).unwrap(), rs.get(3).unwrap(), sizes, &[Cell::new(0, 1)]).unwrap());
        let other = CompositionRule::new(vec![Bijection::identity(2)]);
        assert!(matches!(rules_equal(r, &other, sizes, &[]), Err(Error::SkeletonMismatch(_))));
    }
}
