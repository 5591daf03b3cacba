//! Builds a small family by hand, validates it, then breaks it.

use std::sync::Arc;

use cgtheory::domain::{
    validate_family, Bijection, Cell, CellSpec, CompositionRule, CompositionalFamily, FactorSizes, Geometry, Skeleton,
};
use cgtheory::prob::ratio;

fn main() -> cgtheory::Result<()> {
    let sizes = FactorSizes::new(2, 2)?;
    let weights = vec![ratio(2, 3), ratio(1, 3)];
    let cells = sizes
        .cells()
        .enumerate()
        .map(|(i, _)| CellSpec { support: vec![2 * i, 2 * i + 1], weights: None, coords: None })
        .map(|mut s| {
            if s.support[0] == 0 {
                s.weights = Some(weights.clone());
            }
            s
        })
        .collect();
    let sk = Arc::new(Skeleton::new(8, sizes, Cell::new(0, 0), cells, Geometry::Positional)?);
    let swap = Bijection(vec![1, 0]);
    let id = Bijection::identity(2);
    let family = CompositionalFamily::new(sk.clone(), CompositionRule::new(vec![id.clone(), swap.clone(), id, swap]))?;
    println!("report: {:?}", validate_family(&family).violations);
    for c in sizes.cells() {
        println!("{c}: {:?}", family.cell_distribution(c)?.weights().iter().map(|w| w.to_string()).collect::<Vec<_>>());
    }

    // A non-bijective map is rejected at validation.
    let broken = CompositionalFamily::new(
        sk,
        CompositionRule::new(vec![
            Bijection::identity(2),
            Bijection(vec![0, 0]),
            Bijection::identity(2),
            Bijection::identity(2),
        ]),
    );
    match broken {
        Ok(f) => println!(
            "violations: {:?}",
            validate_family(&f).violations.iter().map(|v| v.to_string()).collect::<Vec<_>>()
        ),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
