//! Enumerates the rules consistent with a skeleton and groups them by their
//! restriction to a support set.

use std::sync::Arc;

use cgtheory::domain::{Cell, FactorSizes, Split};
use cgtheory::rules::{enumerate_rules, tasks::uniform_family, DEFAULT_CAP};

fn main() -> cgtheory::Result<()> {
    let sizes = FactorSizes::new(2, 3)?;
    let family = uniform_family(sizes, 2)?;
    let rules = enumerate_rules(&Arc::clone(family.skeleton()), DEFAULT_CAP)?;
    println!("{} rules on a 2x3 grid with two elements per cell", rules.len());
    for split in [
        Split::new(sizes, [Cell::new(0, 0)])?,
        Split::new(sizes, [Cell::new(0, 0), Cell::new(0, 1), Cell::new(1, 0)])?,
        Split::full(sizes),
    ] {
        let classes = rules.restriction_classes(&split);
        println!("S = {split}: {} classes of size {}", classes.len(), classes[0].len());
    }

    // Tied weights on three elements: every permutation preserves the measure.
    let rules3 = enumerate_rules(&Arc::clone(uniform_family(FactorSizes::new(2, 2)?, 3)?.skeleton()), DEFAULT_CAP)?;
    println!("2x2 grid, three elements per cell: {} rules", rules3.len());
    match enumerate_rules(&Arc::clone(uniform_family(FactorSizes::new(3, 3)?, 4)?.skeleton()), 1000) {
        Ok(r) => println!("unexpected: {} rules", r.len()),
        Err(e) => println!("with cap 1000 on a 3x3 grid of 4 elements: {e}"),
    }
    Ok(())
}
