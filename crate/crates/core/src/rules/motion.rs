use serde::{Deserialize, Serialize};

use crate::domain::{Bijection, Cell, Geometry, Skeleton};

/// How one cell's support is carried onto another's.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Motion {
    /// Position `j` goes to position `p[j]`.
    Permutation(Bijection),
    /// Every coordinate is translated by the vector.
    Shift(Vec<i64>),
}

impl Motion {
    pub fn identity(geometry: &Geometry, k: usize) -> Self {
        match geometry {
            Geometry::Positional => Motion::Permutation(Bijection::identity(k)),
            Geometry::Lattice { dims, .. } => Motion::Shift(vec![0; *dims]),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Motion::Permutation(p) => p.is_identity(),
            Motion::Shift(d) => d.iter().all(|x| *x == 0),
        }
    }

    /// `self ∘ inner`; `None` when the two are of different kinds or sizes.
    pub fn after(&self, inner: &Motion) -> Option<Motion> {
        match (self, inner) {
            (Motion::Permutation(p), Motion::Permutation(q)) if p.len() == q.len() => {
                p.after(q).ok().map(Motion::Permutation)
            }
            (Motion::Shift(a), Motion::Shift(b)) if a.len() == b.len() => {
                Some(Motion::Shift(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
            _ => None,
        }
    }

    pub fn inverse(&self) -> Option<Motion> {
        match self {
            Motion::Permutation(p) => p.inverse().ok().map(Motion::Permutation),
            Motion::Shift(d) => Some(Motion::Shift(d.iter().map(|x| -x).collect())),
        }
    }
}

/// The position map that `motion` induces from cell `from` to cell `to`,
/// or `None` when it leaves the target support.
pub fn motion_position_map(sk: &Skeleton, motion: &Motion, from: Cell, to: Cell) -> Option<Bijection> {
    let (n_from, n_to) = (sk.support(from).len(), sk.support(to).len());
    match motion {
        Motion::Permutation(p) => (p.len() == n_from && n_from == n_to && p.is_bijective()).then(|| p.clone()),
        Motion::Shift(delta) => {
            if n_from != n_to {
                return None;
            }
            let mut table = Vec::with_capacity(n_from);
            for j in 0..n_from {
                let src = sk.coords(from, j)?;
                let moved: Vec<i64> = src.iter().zip(delta).map(|(x, d)| x + d).collect();
                table.push(sk.position_of_coord(to, &moved)?);
            }
            Some(Bijection(table))
        }
    }
}

/// Reads a position map between two cells as a motion of the skeleton's
/// geometry. Lattice maps that are not a single translation give `None`.
pub fn derive_motion(sk: &Skeleton, map: &Bijection, from: Cell, to: Cell) -> Option<Motion> {
    match sk.geometry() {
        Geometry::Positional => Some(Motion::Permutation(map.clone())),
        Geometry::Lattice { .. } => {
            let delta_at = |j: usize| -> Option<Vec<i64>> {
                let a = sk.coords(from, j)?;
                let b = sk.coords(to, map.apply(j))?;
                Some(b.iter().zip(a).map(|(y, x)| y - x).collect())
            };
            let delta = delta_at(0)?;
            (1..map.len()).all(|j| delta_at(j).as_ref() == Some(&delta)).then_some(Motion::Shift(delta))
        }
    }
}

/// Factor-level motions: `a_map(a1, a2)` carries row `a1` to row `a2` and
/// `b_map(b1, b2)` carries column `b1` to column `b2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorMaps {
    a_size: usize,
    b_size: usize,
    a_maps: Vec<Motion>,
    b_maps: Vec<Motion>,
}

impl FactorMaps {
    /// Builds all pairwise motions from per-value generators: `s[a]` moves the
    /// reference row to row `a`, `t[b]` the reference column to column `b`.
    pub fn from_generators(s: &[Motion], t: &[Motion]) -> Option<Self> {
        let table = |g: &[Motion]| -> Option<Vec<Motion>> {
            let mut out = Vec::with_capacity(g.len() * g.len());
            for x in g {
                let inv = x.inverse()?;
                for y in g {
                    out.push(y.after(&inv)?);
                }
            }
            Some(out)
        };
        Some(Self { a_size: s.len(), b_size: t.len(), a_maps: table(s)?, b_maps: table(t)? })
    }

    pub fn a_map(&self, a1: usize, a2: usize) -> &Motion {
        &self.a_maps[a1 * self.a_size + a2]
    }

    pub fn b_map(&self, b1: usize, b2: usize) -> &Motion {
        &self.b_maps[b1 * self.b_size + b2]
    }

    pub fn a_size(&self) -> usize {
        self.a_size
    }

    pub fn b_size(&self) -> usize {
        self.b_size
    }

    /// `a_map(a1→a2) ∘ b_map(b1→b2)`.
    pub fn motion_between(&self, from: Cell, to: Cell) -> Option<Motion> {
        if from.a >= self.a_size || to.a >= self.a_size || from.b >= self.b_size || to.b >= self.b_size {
            return None;
        }
        self.a_map(from.a, to.a).after(self.b_map(from.b, to.b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifts_compose_and_invert() {
        let a = Motion::Shift(vec![1, -2]);
        let b = Motion::Shift(vec![3, 5]);
        assert_eq!(a.after(&b), Some(Motion::Shift(vec![4, 3])));
        assert!(a.after(&a.inverse().unwrap()).unwrap().is_identity());
        assert_eq!(a.after(&Motion::Permutation(Bijection::identity(2))), None);
    }

    #[test]
    fn generators_give_consistent_tables() {
        let s = vec![Motion::Shift(vec![0]), Motion::Shift(vec![10]), Motion::Shift(vec![25])];
        let t = vec![Motion::Shift(vec![0]), Motion::Shift(vec![1])];
        let fm = FactorMaps::from_generators(&s, &t).unwrap();
        assert_eq!(fm.a_map(1, 2), &Motion::Shift(vec![15]));
        assert_eq!(fm.a_map(2, 1), &Motion::Shift(vec![-15]));
        assert_eq!(fm.motion_between(Cell::new(0, 1), Cell::new(2, 0)), Some(Motion::Shift(vec![24])));
    }
}
