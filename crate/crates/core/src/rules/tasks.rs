//! Reference task generators.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::motion::{FactorMaps, Motion};
use crate::domain::{Bijection, Cell, CellSpec, CompositionRule, CompositionalFamily, FactorSizes, Geometry, Skeleton};
use crate::error::{Error, Result};
use crate::prob::{ratio, Rational};
use crate::rng::Rng;

/// A positional family with sequential element ids (`cell * k + position`).
/// With `declare` set, every cell's pushforward weights are declared, which
/// pins the rule space to measure-preserving maps.
pub fn positional_family(
    sizes: FactorSizes,
    base_weights: Vec<Rational>,
    maps: Vec<Bijection>,
    declare: bool,
) -> Result<CompositionalFamily> {
    let k = base_weights.len();
    let base = Cell::new(0, 0);
    let cells = (0..sizes.cell_count())
        .map(|i| CellSpec { support: (i * k..(i + 1) * k).collect(), weights: None, coords: None })
        .collect::<Vec<_>>();
    let mut with_base = cells;
    with_base[0].weights = Some(base_weights);
    let sk = Arc::new(Skeleton::new(sizes.cell_count() * k, sizes, base, with_base, Geometry::Positional)?);
    let family = CompositionalFamily::new(sk, CompositionRule::new(maps))?;
    if declare {
        declare_pushforward(&family)
    } else {
        Ok(family)
    }
}

/// The same family with every cell's current weights written into the skeleton.
pub fn declare_pushforward(family: &CompositionalFamily) -> Result<CompositionalFamily> {
    let sk = family.skeleton();
    let sizes = family.factors();
    let cells = sizes
        .cells()
        .map(|c| {
            let mut spec = sk.cell(c).clone();
            spec.weights = Some(family.position_weights(c));
            spec
        })
        .collect();
    let skeleton = Skeleton::new(sk.data_space_size(), sizes, sk.base_cell(), cells, sk.geometry().clone())?;
    CompositionalFamily::new(Arc::new(skeleton), family.rule().clone())
}

/// `|A| x |B|` grid, `k` equally weighted elements per cell, identity maps.
pub fn uniform_family(sizes: FactorSizes, k: usize) -> Result<CompositionalFamily> {
    positional_family(sizes, vec![ratio(1, k as i64); k], vec![Bijection::identity(k); sizes.cell_count()], true)
}

/// The 10x10 multiplication task: cell (a-1, b-1) is a point mass whose one
/// element has coordinate a·b. Element ids are `10(a-1) + (b-1)`, so products
/// that coincide (2·3 and 3·2) still live on distinct elements.
pub fn multiplication_task() -> Result<CompositionalFamily> {
    let sizes = FactorSizes::new(10, 10)?;
    let cells = sizes
        .cells()
        .map(|c| CellSpec {
            support: vec![10 * c.a + c.b],
            weights: Some(vec![ratio(1, 1)]),
            coords: Some(vec![vec![((c.a + 1) * (c.b + 1)) as i64]]),
        })
        .collect();
    let sk = Skeleton::new(100, sizes, Cell::new(0, 0), cells, Geometry::Lattice { dims: 1, a_axes: None })?;
    CompositionalFamily::new(Arc::new(sk), CompositionRule::new(vec![Bijection::identity(1); 100]))
}

/// Additive task: cell (a, b) holds the points `Φ1(a) + Φ2(b) + ζ` for each
/// noise offset ζ, carrying ζ's weight. Φ2 is indexed by b alone, so the
/// generation cannot depend on a.
pub fn additive_task(
    phi1: &[Vec<i64>],
    phi2: &[Vec<i64>],
    noise: &[(Vec<i64>, Rational)],
    a_axes: Option<Vec<bool>>,
) -> Result<CompositionalFamily> {
    let sizes = FactorSizes::new(phi1.len(), phi2.len())?;
    if noise.is_empty() {
        return Err(Error::InvalidInput("noise has no offsets".into()));
    }
    let dims = noise[0].0.len();
    if phi1.iter().chain(phi2).chain(noise.iter().map(|(z, _)| z)).any(|v| v.len() != dims) {
        return Err(Error::InvalidInput("all coordinate vectors must share one dimension".into()));
    }
    let k = noise.len();
    let mut seen = HashSet::new();
    let mut cells = Vec::with_capacity(sizes.cell_count());
    for (i, c) in sizes.cells().enumerate() {
        let coords: Vec<Vec<i64>> =
            noise.iter().map(|(z, _)| (0..dims).map(|d| phi1[c.a][d] + phi2[c.b][d] + z[d]).collect()).collect();
        for v in &coords {
            if !seen.insert(v.clone()) {
                return Err(Error::Collision(format!("coordinate {v:?} is produced twice (second time in cell {c})")));
            }
        }
        cells.push(CellSpec {
            support: (i * k..(i + 1) * k).collect(),
            weights: (i == 0).then(|| noise.iter().map(|(_, w)| w.clone()).collect()),
            coords: Some(coords),
        });
    }
    let sk = Skeleton::new(sizes.cell_count() * k, sizes, Cell::new(0, 0), cells, Geometry::Lattice { dims, a_axes })?;
    let shift = |v: &Vec<i64>, o: &Vec<i64>| Motion::Shift(v.iter().zip(o).map(|(x, y)| x - y).collect());
    let s: Vec<Motion> = phi1.iter().map(|v| shift(v, &phi1[0])).collect();
    let t: Vec<Motion> = phi2.iter().map(|v| shift(v, &phi2[0])).collect();
    let fm = FactorMaps::from_generators(&s, &t).expect("shifts are invertible");
    let rule = CompositionRule::with_factors(vec![Bijection::identity(k); sizes.cell_count()], fm);
    CompositionalFamily::new(Arc::new(sk), rule)
}

fn random_weights(rng: &mut Rng, k: usize, distinct: bool) -> Vec<Rational> {
    let raw: Vec<i64> = if distinct {
        let mut pool: Vec<i64> = (1..=(4 * k as i64).max(8)).collect();
        pool.shuffle(rng);
        pool.truncate(k);
        pool
    } else {
        (0..k).map(|_| rng.gen_range(1..=2)).collect()
    };
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| ratio(w, total)).collect()
}

/// IRM task on a 2-D lattice: A moves the first axis, B the second, each by
/// randomly spaced offsets wider than the noise footprint. Noise weights may
/// tie unless `distinct` is set.
pub fn random_irm_lattice(
    rng: &mut Rng,
    sizes: FactorSizes,
    noise_len: usize,
    distinct: bool,
) -> Result<CompositionalFamily> {
    let reach = 4i64.max(noise_len as i64);
    let mut noise_pts = HashSet::new();
    while noise_pts.len() < noise_len {
        noise_pts.insert(vec![rng.gen_range(0..reach), rng.gen_range(0..reach)]);
    }
    let mut noise_pts: Vec<Vec<i64>> = noise_pts.into_iter().collect();
    noise_pts.sort();
    let weights = random_weights(rng, noise_len, distinct);
    let noise: Vec<(Vec<i64>, Rational)> = noise_pts.into_iter().zip(weights).collect();
    let mut offsets = |n: usize| -> Vec<i64> {
        let mut acc = 0;
        (0..n)
            .map(|i| {
                if i > 0 {
                    acc += reach + rng.gen_range(0..=5);
                }
                acc
            })
            .collect()
    };
    let xs = offsets(sizes.a);
    let ys = offsets(sizes.b);
    let phi1: Vec<Vec<i64>> = xs.into_iter().map(|x| vec![x, 0]).collect();
    let phi2: Vec<Vec<i64>> = ys.into_iter().map(|y| vec![0, y]).collect();
    additive_task(&phi1, &phi2, &noise, Some(vec![true, false]))
}

/// Positional IRM task: distinct weights and maps `c^(i_a + j_b)` for a random
/// k-cycle `c`, so A- and B-motions commute.
pub fn random_irm_positional(rng: &mut Rng, sizes: FactorSizes, k: usize) -> Result<CompositionalFamily> {
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(rng);
    let mut cycle = vec![0; k];
    for i in 0..k {
        cycle[order[i]] = order[(i + 1) % k];
    }
    let cycle = Bijection(cycle);
    let power = |e: usize| -> Bijection {
        let mut p = Bijection::identity(k);
        for _ in 0..e % k.max(1) {
            p = cycle.after(&p).expect("same size");
        }
        p
    };
    let ia: Vec<usize> = (0..sizes.a).map(|a| if a == 0 { 0 } else { rng.gen_range(0..k) }).collect();
    let jb: Vec<usize> = (0..sizes.b).map(|b| if b == 0 { 0 } else { rng.gen_range(0..k) }).collect();
    let maps = sizes.cells().map(|c| power(ia[c.a] + jb[c.b])).collect();
    let s: Vec<Motion> = ia.iter().map(|&e| Motion::Permutation(power(e))).collect();
    let t: Vec<Motion> = jb.iter().map(|&e| Motion::Permutation(power(e))).collect();
    let fm = FactorMaps::from_generators(&s, &t).expect("permutations are invertible");
    let family = positional_family(sizes, random_weights(rng, k, true), maps, true)?;
    let rule = CompositionRule::with_factors(family.rule().maps.clone(), fm);
    CompositionalFamily::new(family.skeleton().clone(), rule)
}

/// Positional family with independent random maps per cell; weights are tied
/// unless `distinct` is set.
pub fn random_generic(rng: &mut Rng, sizes: FactorSizes, k: usize, distinct: bool) -> Result<CompositionalFamily> {
    let maps = sizes
        .cells()
        .map(|c| {
            let mut p: Vec<usize> = (0..k).collect();
            if c != Cell::new(0, 0) {
                p.shuffle(rng);
            }
            Bijection(p)
        })
        .collect();
    positional_family(sizes, random_weights(rng, k, distinct), maps, true)
}
