//! Reference values recomputed from first principles, without the crate's
//! enumeration, class grouping or learner code.

use std::collections::HashMap;
use std::path::Path;

use itertools::Itertools;

use cgtheory::bounds::{conditional_mi, w1_emd, MetricTable};
use cgtheory::domain::{FactorSizes, Split};
use cgtheory::learners::{build_rule_indexed_space, Learner};
use cgtheory::nfl::nfl_sum;
use cgtheory::prob::{ratio, FiniteDistribution, Rational};
use cgtheory::rules::enumerate_rules;
use cgtheory::taskfile::load_skeleton;

/// All rules for a grid with `cells` cells of `k` tied-weight elements: the
/// base map is the identity, every other cell takes any permutation.
fn brute_rules(cells: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    let perms: Vec<Vec<usize>> = (0..k).permutations(k).collect();
    (1..cells)
        .map(|_| perms.clone())
        .multi_cartesian_product()
        .map(|rest| std::iter::once((0..k).collect()).chain(rest).collect())
        .collect()
}

/// Σ_T Pr(uniform ERM returns T | T generated the support cells): the ERM
/// set is the rules with the fewest mismatched support positions.
fn brute_uniform_erm_sum(rules: &[Vec<Vec<usize>>], support: &[usize]) -> Rational {
    let mut total = ratio(0, 1);
    for t in rules {
        let errs: Vec<usize> = rules
            .iter()
            .map(|u| support.iter().map(|&c| t[c].iter().zip(&u[c]).filter(|(x, y)| x != y).count()).sum())
            .collect();
        let best = *errs.iter().min().unwrap();
        let set = errs.iter().filter(|&&e| e == best).count();
        let own = errs[rules.iter().position(|u| u == t).unwrap()];
        if own == best {
            total += ratio(1, set as i64);
        }
    }
    total
}

fn brute_classes(rules: &[Vec<Vec<usize>>], support: &[usize]) -> HashMap<Vec<Vec<usize>>, usize> {
    let mut m = HashMap::new();
    for t in rules {
        *m.entry(support.iter().map(|&c| t[c].clone()).collect()).or_insert(0) += 1;
    }
    m
}

fn check_reference(file: &str, a: usize, b: usize) {
    let sk = load_skeleton(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(file)).unwrap();
    let space = build_rule_indexed_space(enumerate_rules(&sk, 10_000).unwrap()).unwrap();
    let cells = a * b;
    let rules = brute_rules(cells, 2);
    assert_eq!(space.len(), rules.len());
    assert_eq!(space.len(), 1 << (cells - 1));
    let sizes = FactorSizes::new(a, b).unwrap();
    for mask in 0..(1usize << cells) {
        if mask & 1 == 0 {
            continue;
        }
        let support: Vec<usize> = (0..cells).filter(|i| mask & (1 << i) != 0).collect();
        let split = Split::new(sizes, support.iter().map(|&i| sizes.cell(i))).unwrap();
        let classes = brute_classes(&rules, &support);
        let count = ratio(classes.len() as i64, 1);
        assert_eq!(count, ratio(1 << (support.len() - 1), 1));
        assert_eq!(brute_uniform_erm_sum(&rules, &support), count);
        assert_eq!(nfl_sum(&Learner::uniform_erm(), &space, &split).unwrap(), count);
        assert_eq!(nfl_sum(&Learner::cheating_oracle(), &space, &split).unwrap(), count);
        assert_eq!(nfl_sum(&Learner::random_pick(), &space, &split).unwrap(), ratio(1, 1));

        // The oracle reveals the rule, so its information is the entropy of
        // the rule within its class: the mean of ln |class|.
        let n = rules.len() as f64;
        let expected: f64 = classes.values().map(|&m| m as f64 * (m as f64).ln()).sum::<f64>() / n;
        let prior = FiniteDistribution::uniform(space.len()).unwrap();
        let mi = conditional_mi(&Learner::cheating_oracle(), &space, &split, &prior).unwrap();
        assert!((mi - expected).abs() < 1e-12, "{file} {mask}: {mi} vs {expected}");
        assert!(conditional_mi(&Learner::uniform_erm(), &space, &split, &prior).unwrap().abs() < 1e-12);
    }
}

#[test]
fn reference_2x2_against_brute_force() {
    check_reference("reference_2x2.json", 2, 2);
}

#[test]
fn reference_2x3_against_brute_force() {
    check_reference("reference_2x3.json", 2, 3);
}

/// On a line, W1 is the area between the two CDFs.
#[test]
fn transport_on_a_line_matches_cdf_area() {
    let mut state = 12345u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) % 1000) as f64 + 1.0
    };
    for _ in 0..300 {
        let n = 2 + (next() as usize) % 8;
        let xs: Vec<f64> = {
            let mut acc = 0.0;
            (0..n)
                .map(|_| {
                    acc += next() / 100.0;
                    acc
                })
                .collect()
        };
        let mut p: Vec<f64> = (0..n).map(|_| next()).collect();
        let mut q: Vec<f64> = (0..n).map(|_| next()).collect();
        let (sp, sq): (f64, f64) = (p.iter().sum(), q.iter().sum());
        p.iter_mut().for_each(|x| *x /= sp);
        q.iter_mut().for_each(|x| *x /= sq);
        let (mut cp, mut cq, mut area) = (0.0f64, 0.0f64, 0.0f64);
        for i in 0..n - 1 {
            cp += p[i];
            cq += q[i];
            area += (cp - cq).abs() * (xs[i + 1] - xs[i]);
        }
        let m = MetricTable::from_fn(n, |i, j| (xs[i] - xs[j]).abs()).unwrap();
        let d = w1_emd(&p, &q, &m).unwrap();
        assert!((d - area).abs() < 1e-9, "{d} vs {area}");
    }
}
