//! Recovers factor maps from support cells and synthesizes the unseen cells.

use cgtheory::domain::{Cell, FactorSizes, Split};
use cgtheory::irm_solver::{check_c_support, solve_and_eval};
use cgtheory::rng::stream;
use cgtheory::rules::tasks::{multiplication_task, random_irm_lattice, random_irm_positional};
use cgtheory::rules::DEFAULT_CAP;

fn main() -> cgtheory::Result<()> {
    let sizes = FactorSizes::new(4, 4)?;
    let mut rng = stream(5, "irm-solve");
    let diagonal = Split::new(sizes, (0..4).map(|i| Cell::new(i, i)))?;
    let l_shape = Split::new(sizes, sizes.cells().filter(|c| c.a == 0 || c.b == 0))?;
    println!("diagonal covers every factor value: {}", check_c_support(&diagonal, sizes).holds);

    let lattice = random_irm_lattice(&mut rng, sizes, 3, false)?;
    let r = solve_and_eval(&lattice, &diagonal, DEFAULT_CAP)?;
    println!("lattice task, diagonal split: max unseen error {} over {} cells", r.max_err, r.cells.len());

    let positional = random_irm_positional(&mut rng, sizes, 4)?;
    let r = solve_and_eval(&positional, &l_shape, DEFAULT_CAP)?;
    println!("positional task, L split: max unseen error {}", r.max_err);
    match solve_and_eval(&positional, &diagonal, DEFAULT_CAP) {
        Ok(r) => println!("positional task, diagonal split: max error {}", r.max_err),
        Err(e) => println!("positional task, diagonal split: {e}"),
    }

    let mult = multiplication_task()?;
    let big = FactorSizes::new(10, 10)?;
    let l10 = Split::new(big, big.cells().filter(|c| c.a == 0 || c.b == 0))?;
    match solve_and_eval(&mult, &l10, DEFAULT_CAP) {
        Ok(r) => println!("multiplication: solved = {}, max error {}", r.solved, r.max_err),
        Err(e) => println!("multiplication: {e}"),
    }
    Ok(())
}
