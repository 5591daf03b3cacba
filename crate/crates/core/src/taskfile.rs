//! JSON task, skeleton and split files.
//!
//! Weights are strings (`"3/5"`, `"0.6"`) or JSON numbers; both are read as
//! exact decimals. A skeleton file is a task file whose cells carry no maps.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::domain::{
    Bijection, Cell, CellSpec, CompositionRule, CompositionalFamily, FactorSizes, Geometry, Skeleton, Split,
};
use crate::error::{Error, Result};
use crate::prob::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightRepr {
    Text(String),
    Number(serde_json::Number),
}

impl WeightRepr {
    fn parse(&self) -> Result<Rational> {
        match self {
            WeightRepr::Text(s) => parse_rational(s),
            WeightRepr::Number(n) => parse_rational(&n.to_string()),
        }
    }

    fn of(r: &Rational) -> Self {
        WeightRepr::Text(format_rational(r))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorsRepr {
    #[serde(rename = "A")]
    pub a: usize,
    #[serde(rename = "B")]
    pub b: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseAtom {
    pub element: usize,
    pub weight: WeightRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellRepr {
    pub a: usize,
    pub b: usize,
    pub support: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<WeightRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeometryRepr {
    Positional,
    Lattice {
        dims: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a_axes: Option<Vec<bool>>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TaskFile {
    pub data_space_size: usize,
    pub factors: FactorsRepr,
    pub base_cell: Cell,
    pub base_support: Vec<BaseAtom>,
    pub cells: Vec<CellRepr>,
    #[serde(default = "positional")]
    pub geometry: GeometryRepr,
}

fn positional() -> GeometryRepr {
    GeometryRepr::Positional
}

impl TaskFile {
    fn skeleton(&self) -> Result<Skeleton> {
        let sizes = FactorSizes::new(self.factors.a, self.factors.b)?;
        sizes.check(self.base_cell)?;
        let geometry = match &self.geometry {
            GeometryRepr::Positional => Geometry::Positional,
            GeometryRepr::Lattice { dims, a_axes } => Geometry::Lattice { dims: *dims, a_axes: a_axes.clone() },
        };
        let mut specs: Vec<Option<CellSpec>> = vec![None; sizes.cell_count()];
        let base_weights = self.base_support.iter().map(|x| x.weight.parse()).collect::<Result<Vec<_>>>()?;
        let base_coords: Option<Vec<Vec<i64>>> = self.base_support.iter().map(|x| x.coords.clone()).collect();
        specs[sizes.index(self.base_cell)] = Some(CellSpec {
            support: self.base_support.iter().map(|x| x.element).collect(),
            weights: Some(base_weights),
            coords: base_coords,
        });
        for c in &self.cells {
            let cell = Cell::new(c.a, c.b);
            sizes.check(cell)?;
            let slot = &mut specs[sizes.index(cell)];
            if slot.is_some() {
                return Err(Error::Malformed(format!("cell {cell} is listed twice (or duplicates the base cell)")));
            }
            let weights =
                c.weights.as_ref().map(|w| w.iter().map(WeightRepr::parse).collect::<Result<Vec<_>>>()).transpose()?;
            *slot = Some(CellSpec { support: c.support.clone(), weights, coords: c.coords.clone() });
        }
        let cells = specs
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::Malformed(format!("cell {} is missing", sizes.cell(i)))))
            .collect::<Result<Vec<_>>>()?;
        Skeleton::new(self.data_space_size, sizes, self.base_cell, cells, geometry)
    }

    fn rule(&self, sizes: FactorSizes, k: usize) -> Result<CompositionRule> {
        let mut maps: Vec<Option<Bijection>> = vec![None; sizes.cell_count()];
        maps[sizes.index(self.base_cell)] = Some(Bijection::identity(k));
        for c in &self.cells {
            let cell = Cell::new(c.a, c.b);
            let m = c.map.clone().ok_or_else(|| Error::Malformed(format!("cell {cell} has no map")))?;
            maps[sizes.index(cell)] = Some(Bijection(m));
        }
        Ok(CompositionRule::new(maps.into_iter().map(|m| m.expect("every cell filled")).collect()))
    }

    pub fn from_family(family: &CompositionalFamily) -> Self {
        let sk = family.skeleton();
        let sizes = family.factors();
        let base = sk.base_cell();
        let base_support = sk
            .base_support()
            .iter()
            .enumerate()
            .map(|(j, &element)| BaseAtom {
                element,
                weight: WeightRepr::of(&sk.base_weights()[j]),
                coords: sk.coords(base, j).map(<[i64]>::to_vec),
            })
            .collect();
        let cells = sizes
            .cells()
            .filter(|&c| c != base)
            .map(|c| {
                let spec = sk.cell(c);
                CellRepr {
                    a: c.a,
                    b: c.b,
                    support: spec.support.clone(),
                    map: Some(family.map(c).0.clone()),
                    weights: spec.weights.as_ref().map(|w| w.iter().map(WeightRepr::of).collect()),
                    coords: spec.coords.clone(),
                }
            })
            .collect();
        let geometry = match sk.geometry() {
            Geometry::Positional => GeometryRepr::Positional,
            Geometry::Lattice { dims, a_axes } => GeometryRepr::Lattice { dims: *dims, a_axes: a_axes.clone() },
        };
        Self {
            data_space_size: sk.data_space_size(),
            factors: FactorsRepr { a: sizes.a, b: sizes.b },
            base_cell: base,
            base_support,
            cells,
            geometry,
        }
    }
}

fn read(path: &Path) -> Result<TaskFile> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn parse_skeleton(text: &str) -> Result<Arc<Skeleton>> {
    let tf: TaskFile = serde_json::from_str(text)?;
    Ok(Arc::new(tf.skeleton()?))
}

pub fn parse_family(text: &str) -> Result<CompositionalFamily> {
    let tf: TaskFile = serde_json::from_str(text)?;
    family_of(&tf)
}

fn family_of(tf: &TaskFile) -> Result<CompositionalFamily> {
    let sk = tf.skeleton()?;
    let rule = tf.rule(sk.factors(), sk.base_support().len())?;
    CompositionalFamily::new(Arc::new(sk), rule)
}

pub fn load_skeleton(path: &Path) -> Result<Arc<Skeleton>> {
    Ok(Arc::new(read(path)?.skeleton()?))
}

pub fn load_family(path: &Path) -> Result<CompositionalFamily> {
    family_of(&read(path)?)
}

pub fn family_to_json(family: &CompositionalFamily) -> Result<String> {
    Ok(serde_json::to_string_pretty(&TaskFile::from_family(family))? + "\n")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplitFile {
    pub support: Vec<Cell>,
}

pub fn parse_split(text: &str, sizes: FactorSizes) -> Result<Split> {
    let sf: SplitFile = serde_json::from_str(text)?;
    Split::new(sizes, sf.support)
}

/// A single split object, or a JSON array of them.
pub fn parse_splits(text: &str, sizes: FactorSizes) -> Result<Vec<Split>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let files: Vec<SplitFile> =
        if value.is_array() { serde_json::from_value(value)? } else { vec![serde_json::from_value(value)?] };
    files.into_iter().map(|f| Split::new(sizes, f.support)).collect()
}

pub fn load_split(path: &Path, sizes: FactorSizes) -> Result<Split> {
    parse_split(&std::fs::read_to_string(path)?, sizes)
}

pub fn split_to_json(split: &Split) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SplitFile { support: split.support().iter().copied().collect() })? + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::validate_family;
    use crate::prob::ratio;
    use crate::rng::stream;
    use crate::rules::tasks::{multiplication_task, random_generic, random_irm_lattice};

    #[test]
    fn round_trips() {
        let mut rng = stream(9, "io");
        let sizes = FactorSizes::new(2, 3).unwrap();
        for f in [
            multiplication_task().unwrap(),
            random_irm_lattice(&mut rng, sizes, 3, false).unwrap(),
            random_generic(&mut rng, sizes, 3, false).unwrap(),
        ] {
            let text = family_to_json(&f).unwrap();
            let g = parse_family(&text).unwrap();
            assert_eq!(f.rule().maps, g.rule().maps);
            assert_eq!(f.skeleton(), g.skeleton());
            assert!(validate_family(&g).is_valid());
        }
    }

    #[test]
    fn decimal_weights_are_exact() {
        let text = r#"{
            "data_space_size": 4, "factors": {"A": 1, "B": 2}, "base_cell": {"a": 0, "b": 0},
            "base_support": [{"element": 0, "weight": "0.6"}, {"element": 1, "weight": 0.4}],
            "cells": [{"a": 0, "b": 1, "support": [2, 3], "map": [1, 0]}]
        }"#;
        let f = parse_family(text).unwrap();
        assert_eq!(f.skeleton().base_weights(), &[ratio(3, 5), ratio(2, 5)]);
        assert_eq!(f.position_weights(Cell::new(0, 1)), vec![ratio(2, 5), ratio(3, 5)]);
    }

    #[test]
    fn missing_cell_is_reported() {
        let text = r#"{
            "data_space_size": 4, "factors": {"A": 1, "B": 2}, "base_cell": {"a": 0, "b": 0},
            "base_support": [{"element": 0, "weight": "1"}], "cells": []
        }"#;
        assert!(matches!(parse_family(text), Err(Error::Malformed(_))));
    }
}
