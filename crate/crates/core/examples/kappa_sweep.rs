//! κ_n on the reference task approaches 1 as n grows.

use cgtheory::experiments::{kappa_sweep, reference_kappa_task};
use cgtheory::learners::Learner;

fn main() -> cgtheory::Result<()> {
    let task = reference_kappa_task()?;
    let rows = kappa_sweep(&task, &Learner::uniform_erm(), &[5, 10, 30, 100, 300, 1000], 500, 11)?;
    for r in rows {
        println!("n = {:>5}  kappa = {:.4}  |kappa - 1| = {:.4}", r.n, r.kappa, (r.kappa - 1.0).abs());
    }
    Ok(())
}
