use std::fmt;

use super::enumerate::pairwise_map;
use super::motion::{derive_motion, motion_position_map, FactorMaps, Motion};
use crate::domain::{Bijection, Cell, CompositionalFamily};
use crate::error::{Error, Result};

/// A pair of cells whose pairwise map is not the composition of the factor
/// motions forced by the rest of the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub from: Cell,
    pub to: Cell,
    /// The pairwise map read as a motion (`None` if it is not one).
    pub found: Option<Motion>,
    /// The composition the factor maps demand.
    pub expected: Option<Motion>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "quadruple (a1={}, b1={}, a2={}, b2={}): pairwise map ",
            self.from.a, self.from.b, self.to.a, self.to.b
        )?;
        match &self.found {
            Some(m) => write!(f, "{m:?}")?,
            None => write!(f, "is not a single motion")?,
        }
        match &self.expected {
            Some(m) => write!(f, ", factor maps give {m:?}"),
            None => write!(f, ", factor maps give no motion onto the target"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrmVerdict {
    Irm(FactorMaps),
    GenerativeEffect(Counterexample),
}

impl IrmVerdict {
    pub fn is_irm(&self) -> bool {
        matches!(self, IrmVerdict::Irm(_))
    }
}

/// Decides whether every pairwise map factors as an A-motion composed with a
/// B-motion, in either order.
///
/// Self-motions are the identity, so `a_map(0→a)` is forced to be the motion
/// from (0,0) to (a,0) and `b_map(0→b)` the one from (0,0) to (0,b). Those
/// generators fix every table entry; the family is IRM exactly when the
/// forced tables reproduce all pairwise maps in both composition orders.
pub fn is_irm(family: &CompositionalFamily) -> Result<IrmVerdict> {
    let sk = family.skeleton();
    let sizes = family.factors();
    let rule = family.rule();
    if let Some(c) = sizes.cells().find(|&c| !family.map(c).is_bijective()) {
        return Err(Error::Malformed(format!("map of cell {c} is not a bijection")));
    }
    let origin = Cell::new(0, 0);
    let generator = |to: Cell| -> Result<std::result::Result<Motion, Counterexample>> {
        let pm = pairwise_map(rule, sizes, origin, to)?;
        Ok(derive_motion(sk, &pm, origin, to).ok_or(Counterexample { from: origin, to, found: None, expected: None }))
    };
    let mut s = Vec::with_capacity(sizes.a);
    for a in 0..sizes.a {
        match generator(Cell::new(a, 0))? {
            Ok(m) => s.push(m),
            Err(ce) => return Ok(IrmVerdict::GenerativeEffect(ce)),
        }
    }
    let mut t = Vec::with_capacity(sizes.b);
    for b in 0..sizes.b {
        match generator(Cell::new(0, b))? {
            Ok(m) => t.push(m),
            Err(ce) => return Ok(IrmVerdict::GenerativeEffect(ce)),
        }
    }
    let maps = FactorMaps::from_generators(&s, &t)
        .ok_or_else(|| Error::Malformed("factor motions are not invertible".into()))?;

    for c1 in sizes.cells() {
        for c2 in sizes.cells() {
            let pm = pairwise_map(rule, sizes, c1, c2)?;
            let sigma = maps.a_map(c1.a, c2.a);
            let tau = maps.b_map(c1.b, c2.b);
            for composed in [sigma.after(tau), tau.after(sigma)] {
                let via: Option<Bijection> = composed.as_ref().and_then(|m| motion_position_map(sk, m, c1, c2));
                if via.as_ref() != Some(&pm) {
                    return Ok(IrmVerdict::GenerativeEffect(Counterexample {
                        from: c1,
                        to: c2,
                        found: derive_motion(sk, &pm, c1, c2),
                        expected: composed,
                    }));
                }
            }
        }
    }
    Ok(IrmVerdict::Irm(maps))
}
