//! Exhaustive no-free-lunch sums on the 2x2 reference skeleton.

use std::sync::Arc;

use cgtheory::domain::{FactorSizes, Split};
use cgtheory::learners::{build_rule_indexed_space, Learner};
use cgtheory::nfl::{induction_mirror, nfl_check, NflMethod};
use cgtheory::prob::int;
use cgtheory::rules::{enumerate_rules, tasks::uniform_family, DEFAULT_CAP};

fn main() -> cgtheory::Result<()> {
    let sizes = FactorSizes::new(2, 2)?;
    let skeleton = Arc::clone(uniform_family(sizes, 2)?.skeleton());
    let space = build_rule_indexed_space(enumerate_rules(&skeleton, DEFAULT_CAP)?)?;
    let learners = [
        Learner::uniform_erm(),
        Learner::biased_erm((1..=space.len() as i64).map(int).collect()),
        Learner::cheating_oracle(),
        Learner::random_pick(),
    ];
    let methods: Vec<NflMethod> = learners.iter().map(|l| NflMethod { learner: l.clone(), space: &space }).collect();
    let report = nfl_check(&methods, &Split::enumerate_all(sizes)?)?;
    print!("{}", report.to_csv());
    println!("convergent methods hit class_count on every split: {}", report.convergent_methods_agree());

    let s = Split::new(sizes, [cgtheory::domain::Cell::new(0, 0)])?;
    for c in s.unknown().clone() {
        println!(
            "adding {c} to {s}: refined sums mirror the coarse one: {}",
            induction_mirror(&learners[0], &space, &s, c)?
        );
    }
    Ok(())
}
