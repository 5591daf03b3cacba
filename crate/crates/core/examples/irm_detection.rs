//! Additive generation has the invariant-rule property; multiplication does not.

use cgtheory::domain::FactorSizes;
use cgtheory::rng::stream;
use cgtheory::rules::tasks::{multiplication_task, random_generic, random_irm_lattice, random_irm_positional};
use cgtheory::rules::{is_irm, IrmVerdict};

fn show(name: &str, v: &IrmVerdict) {
    match v {
        IrmVerdict::Irm(_) => println!("{name}: IRM"),
        IrmVerdict::GenerativeEffect(cx) => println!("{name}: generative effect, {cx}"),
    }
}

fn main() -> cgtheory::Result<()> {
    let sizes = FactorSizes::new(3, 4)?;
    let mut rng = stream(3, "irm-detection");
    show("multiplication", &is_irm(&multiplication_task()?)?);
    show("additive", &is_irm(&random_irm_lattice(&mut rng, sizes, 4, false)?)?);
    show("cyclic positional", &is_irm(&random_irm_positional(&mut rng, sizes, 4)?)?);
    show("independent random maps", &is_irm(&random_generic(&mut rng, sizes, 4, true)?)?);
    Ok(())
}
