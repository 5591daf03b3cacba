//! Recovering factor motions from the support cells alone and synthesizing
//! the unseen cells from them.
//!
//! Recovery works on population distributions. Every pair of support cells
//! must admit exactly one measure-preserving motion between them. Motions
//! from an anchor cell (the smallest support cell) are then split into an
//! A-part and a B-part, either by projecting onto the declared lattice axes
//! or by walking the bipartite graph of factor values joined by support
//! cells. Any disagreement aborts; nothing is decided by majority.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use num_traits::Zero;

use crate::domain::{Bijection, Cell, CompositionRule, CompositionalFamily, FactorSizes, Geometry, Skeleton, Split};
use crate::error::{Error, Result};
use crate::learners::disagreement_indicator;
use crate::prob::Rational;
use crate::rules::{motion_position_map, weight_preserving, FactorMaps, Motion};

/// What a learner may see: the skeleton's geometry and the support cells'
/// distributions, nothing about the unseen cells' weights or the rule.
#[derive(Clone, Debug)]
pub struct SupportView {
    skeleton: Arc<Skeleton>,
    split: Split,
    weights: BTreeMap<Cell, Vec<Rational>>,
}

impl SupportView {
    pub fn observe(family: &CompositionalFamily, split: &Split) -> Result<Self> {
        if split.sizes() != family.factors() {
            return Err(Error::InvalidSplit("split grid does not match the family".into()));
        }
        let weights = split.support().iter().map(|&c| (c, family.position_weights(c))).collect();
        Ok(Self { skeleton: family.skeleton().clone(), split: split.clone(), weights })
    }

    pub fn split(&self) -> &Split {
        &self.split
    }

    pub fn skeleton(&self) -> &Arc<Skeleton> {
        &self.skeleton
    }

    pub fn weights(&self, c: Cell) -> Option<&[Rational]> {
        self.weights.get(&c).map(Vec::as_slice)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CSupport {
    pub holds: bool,
    pub missing_a: Vec<usize>,
    pub missing_b: Vec<usize>,
}

pub fn check_c_support(split: &Split, sizes: FactorSizes) -> CSupport {
    let seen_a: BTreeSet<usize> = split.support().iter().map(|c| c.a).collect();
    let seen_b: BTreeSet<usize> = split.support().iter().map(|c| c.b).collect();
    let missing_a: Vec<usize> = (0..sizes.a).filter(|a| !seen_a.contains(a)).collect();
    let missing_b: Vec<usize> = (0..sizes.b).filter(|b| !seen_b.contains(b)).collect();
    CSupport { holds: missing_a.is_empty() && missing_b.is_empty(), missing_a, missing_b }
}

/// Pushes `weights` on `from` through a position map onto a cell of size `n`.
fn push(weights: &[Rational], map: &Bijection, n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (j, w) in weights.iter().enumerate() {
        out[map.apply(j)] += w;
    }
    out
}

/// Every motion carrying the distribution of `from` exactly onto that of `to`.
fn transport_candidates(view: &SupportView, from: Cell, to: Cell, cap: u128) -> Result<Vec<Motion>> {
    let sk = &view.skeleton;
    let (w1, w2) = (view.weights(from).expect("support cell"), view.weights(to).expect("support cell"));
    match sk.geometry() {
        Geometry::Positional => {
            Ok(weight_preserving(w1, w2, cap)?.unwrap_or_default().into_iter().map(Motion::Permutation).collect())
        }
        Geometry::Lattice { .. } => {
            if w1.len() != w2.len() {
                return Ok(vec![]);
            }
            let min_coord =
                |c: Cell| (0..sk.support(c).len()).filter_map(|j| sk.coords(c, j)).min().map(<[i64]>::to_vec);
            let (Some(lo1), Some(lo2)) = (min_coord(from), min_coord(to)) else {
                return Ok(vec![]);
            };
            let m = Motion::Shift(lo2.iter().zip(&lo1).map(|(b, a)| b - a).collect());
            let ok = motion_position_map(sk, &m, from, to).is_some_and(|pm| push(w1, &pm, w2.len()) == w2);
            Ok(if ok { vec![m] } else { vec![] })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryReport {
    pub anchor: Cell,
    /// `s[a]` carries the anchor's row to row `a`.
    pub a_generators: Vec<Motion>,
    /// `t[b]` carries the anchor's column to column `b`.
    pub b_generators: Vec<Motion>,
    pub maps: FactorMaps,
    /// Unseen cells with at least one derivation route.
    pub coverage: Vec<Cell>,
    pub pairs_checked: usize,
}

impl RecoveryReport {
    /// The recovered motion from the anchor to `c`.
    pub fn motion_to(&self, c: Cell) -> Option<Motion> {
        self.a_generators[c.a].after(&self.b_generators[c.b])
    }
}

pub fn recover_factor_maps(view: &SupportView, cap: u128) -> Result<RecoveryReport> {
    let sk = view.skeleton.clone();
    let sizes = sk.factors();
    let cs = check_c_support(&view.split, sizes);
    if !cs.holds {
        return Err(Error::InvalidSplit(format!(
            "no C-support: missing a = {:?}, missing b = {:?}",
            cs.missing_a, cs.missing_b
        )));
    }
    let cells: Vec<Cell> = view.split.support().iter().copied().collect();
    let anchor = cells[0];

    let mut from_anchor: BTreeMap<Cell, Motion> = BTreeMap::new();
    let mut witnesses = Vec::new();
    let mut pairs_checked = 0;
    for (i, &c1) in cells.iter().enumerate() {
        for &c2 in &cells[i + 1..] {
            pairs_checked += 1;
            let mut cands = transport_candidates(view, c1, c2, cap)?;
            match cands.len() {
                0 => return Err(Error::Inconsistent(format!("no measure-preserving motion carries {c1} onto {c2}"))),
                1 => {
                    if c1 == anchor {
                        from_anchor.insert(c2, cands.pop().expect("one candidate"));
                    }
                }
                _ => witnesses.push((c1, c2)),
            }
        }
    }
    if !witnesses.is_empty() {
        return Err(Error::NotIdentifiable {
            reason: format!("{} support pairs admit more than one motion", witnesses.len()),
            witnesses,
        });
    }
    from_anchor.insert(anchor, Motion::identity(sk.geometry(), sk.base_support().len()));

    let (s, t) = match sk.geometry() {
        Geometry::Lattice { dims, a_axes: Some(axes) } => project(&from_anchor, anchor, sizes, *dims, axes)?,
        _ => stitch(&from_anchor, anchor, sizes)?,
    };

    for (&c, g) in &from_anchor {
        for composed in [s[c.a].after(&t[c.b]), t[c.b].after(&s[c.a])] {
            if composed.as_ref() != Some(g) {
                return Err(Error::Inconsistent(format!(
                    "recovered factor motions do not reproduce the motion from {anchor} to {c}"
                )));
            }
        }
    }
    for (a, sa) in s.iter().enumerate() {
        for (b, tb) in t.iter().enumerate() {
            if sa.after(tb) != tb.after(sa) {
                return Err(Error::Inconsistent(format!("recovered motions for a={a} and b={b} do not commute")));
            }
        }
    }
    let maps =
        FactorMaps::from_generators(&s, &t).ok_or_else(|| Error::Inconsistent("motions are not invertible".into()))?;

    // Soundness: every support cell maps onto every other one exactly.
    for &c1 in &cells {
        for &c2 in &cells {
            let m = maps.motion_between(c1, c2).expect("in range");
            let w1 = view.weights(c1).expect("support cell");
            let ok = motion_position_map(&sk, &m, c1, c2)
                .is_some_and(|pm| push(w1, &pm, sk.support(c2).len()) == view.weights(c2).expect("support cell"));
            if !ok {
                return Err(Error::Inconsistent(format!("recovered maps do not carry {c1} onto {c2}")));
            }
        }
    }

    let coverage =
        view.split.unknown().iter().copied().filter(|u| cells.iter().any(|c| c.a == u.a || c.b == u.b)).collect();
    Ok(RecoveryReport { anchor, a_generators: s, b_generators: t, maps, coverage, pairs_checked })
}

/// Splits anchor-relative shifts by the declared A axes.
fn project(
    from_anchor: &BTreeMap<Cell, Motion>,
    anchor: Cell,
    sizes: FactorSizes,
    dims: usize,
    a_axes: &[bool],
) -> Result<(Vec<Motion>, Vec<Motion>)> {
    let mut s: Vec<Option<Vec<i64>>> = vec![None; sizes.a];
    let mut t: Vec<Option<Vec<i64>>> = vec![None; sizes.b];
    for (&c, m) in from_anchor {
        let Motion::Shift(d) = m else {
            return Err(Error::Inconsistent("lattice motion is not a shift".into()));
        };
        let pa: Vec<i64> = (0..dims).map(|i| if a_axes[i] { d[i] } else { 0 }).collect();
        let pb: Vec<i64> = (0..dims).map(|i| if a_axes[i] { 0 } else { d[i] }).collect();
        for (slot, v, what) in [(&mut s[c.a], pa, "a"), (&mut t[c.b], pb, "b")] {
            match slot {
                Some(prev) if *prev != v => {
                    return Err(Error::Inconsistent(format!(
                        "support cells disagree on the {what}-motion from the anchor {anchor} (seen at {c})"
                    )))
                }
                _ => *slot = Some(v),
            }
        }
    }
    let s = s.into_iter().map(|v| Motion::Shift(v.expect("C-support"))).collect();
    let t = t.into_iter().map(|v| Motion::Shift(v.expect("C-support"))).collect();
    Ok((s, t))
}

/// Breadth-first stitching over factor values, starting from the anchor's
/// row and column with identity motions.
fn stitch(
    from_anchor: &BTreeMap<Cell, Motion>,
    anchor: Cell,
    sizes: FactorSizes,
) -> Result<(Vec<Motion>, Vec<Motion>)> {
    let identity = from_anchor[&anchor].clone();
    let mut s: Vec<Option<Motion>> = vec![None; sizes.a];
    let mut t: Vec<Option<Motion>> = vec![None; sizes.b];
    s[anchor.a] = Some(identity.clone());
    t[anchor.b] = Some(identity);
    // Queue entries: (is_a, value).
    let mut queue = VecDeque::from([(true, anchor.a), (false, anchor.b)]);
    let invert = |m: &Motion| m.inverse().ok_or_else(|| Error::Inconsistent("motion is not invertible".into()));
    while let Some((is_a, v)) = queue.pop_front() {
        for (&c, g) in from_anchor {
            if is_a && c.a == v && t[c.b].is_none() {
                let sa = s[v].as_ref().expect("visited");
                t[c.b] = Some(invert(sa)?.after(g).ok_or_else(|| Error::Inconsistent("motion kinds differ".into()))?);
                queue.push_back((false, c.b));
            } else if !is_a && c.b == v && s[c.a].is_none() {
                let tb = t[v].as_ref().expect("visited");
                s[c.a] = Some(g.after(&invert(tb)?).ok_or_else(|| Error::Inconsistent("motion kinds differ".into()))?);
                queue.push_back((true, c.a));
            }
        }
    }
    let unreached: Vec<String> = s
        .iter()
        .enumerate()
        .filter(|(_, m)| m.is_none())
        .map(|(a, _)| format!("a={a}"))
        .chain(t.iter().enumerate().filter(|(_, m)| m.is_none()).map(|(b, _)| format!("b={b}")))
        .collect();
    if !unreached.is_empty() {
        return Err(Error::NotIdentifiable {
            reason: format!(
                "factor values {} are not linked to the anchor through support cells",
                unreached.join(", ")
            ),
            witnesses: vec![],
        });
    }
    Ok((s.into_iter().map(Option::unwrap).collect(), t.into_iter().map(Option::unwrap).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesizedCell {
    pub cell: Cell,
    /// Weight per support position of the cell.
    pub weights: Vec<Rational>,
    pub a_routes: usize,
    pub b_routes: usize,
}

impl SynthesizedCell {
    /// Both an A-route and a B-route were derived, and they agreed.
    pub fn routes_agree(&self) -> bool {
        self.a_routes > 0 && self.b_routes > 0
    }
}

/// Derives every unseen cell from each support cell in its column (moving a)
/// and in its row (moving b); all derivations must coincide.
pub fn synthesize_unseen(view: &SupportView, report: &RecoveryReport) -> Result<Vec<SynthesizedCell>> {
    let sk = &view.skeleton;
    let mut out = Vec::new();
    for &u in view.split.unknown() {
        let n = sk.support(u).len();
        let mut result: Option<Vec<Rational>> = None;
        let (mut a_routes, mut b_routes) = (0, 0);
        for &c in view.split.support() {
            let motion = if c.b == u.b {
                a_routes += 1;
                report.maps.a_map(c.a, u.a).clone()
            } else if c.a == u.a {
                b_routes += 1;
                report.maps.b_map(c.b, u.b).clone()
            } else {
                continue;
            };
            let pm = motion_position_map(sk, &motion, c, u)
                .ok_or_else(|| Error::Inconsistent(format!("the route from {c} leaves the support of {u}")))?;
            let w = push(view.weights(c).expect("support cell"), &pm, n);
            match &result {
                Some(prev) if *prev != w => {
                    return Err(Error::Inconsistent(format!("routes into {u} disagree (route from {c})")))
                }
                Some(_) => {}
                None => result = Some(w),
            }
        }
        let weights = result.ok_or(Error::Unreachable(u))?;
        out.push(SynthesizedCell { cell: u, weights, a_routes, b_routes });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct CellError {
    pub cell: Cell,
    pub err: Rational,
    /// The synthesized distribution equals the true one.
    pub distribution_match: bool,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub anchor: Cell,
    pub cells: Vec<CellError>,
    pub max_err: Rational,
    /// max_err ≤ ε, where ε = 0 because the true rule's indicator is in the
    /// finite function space.
    pub solved: bool,
}

impl SolveReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("a,b,err,distribution_match\n");
        for c in &self.cells {
            s.push_str(&format!(
                "{},{},{},{}\n",
                c.cell.a,
                c.cell.b,
                crate::prob::format_rational(&c.err),
                c.distribution_match
            ));
        }
        s
    }
}

/// Recovers from the support cells only, synthesizes a rule anchored at the
/// recovery anchor, and scores its disagreement indicator on the true
/// family's unseen cells.
pub fn solve_and_eval(family: &CompositionalFamily, split: &Split, cap: u128) -> Result<SolveReport> {
    let view = SupportView::observe(family, split)?;
    let report = recover_factor_maps(&view, cap)?;
    let synthesized = synthesize_unseen(&view, &report)?;
    let anchor = report.anchor;
    let truth = family.rebase(anchor)?;
    let sk = truth.skeleton();
    let sizes = family.factors();
    let maps = sizes
        .cells()
        .map(|c| {
            let m = report.motion_to(c).ok_or_else(|| Error::Inconsistent("motion kinds differ".into()))?;
            motion_position_map(sk, &m, anchor, c)
                .ok_or_else(|| Error::Inconsistent(format!("recovered motion leaves the support of {c}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let predictor = disagreement_indicator(sk, &CompositionRule::new(maps))?;
    let measures = truth.labeled_measures()?;
    let cells = synthesized
        .iter()
        .map(|s| {
            Ok(CellError {
                cell: s.cell,
                err: measures.err_cell(s.cell, &predictor)?,
                distribution_match: s.weights == family.position_weights(s.cell),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_err = cells.iter().map(|c| c.err.clone()).max().unwrap_or_else(Rational::zero);
    Ok(SolveReport { anchor, solved: max_err.is_zero(), cells, max_err })
}
