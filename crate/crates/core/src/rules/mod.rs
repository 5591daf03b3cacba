//! Rule enumeration, factor motions and the IRM check.

mod enumerate;
mod irm;
mod motion;
pub mod tasks;

pub use enumerate::{enumerate_rules, pairwise_map, rules_equal, weight_preserving, RuleSpace, DEFAULT_CAP};
pub use irm::{is_irm, Counterexample, IrmVerdict};
pub use motion::{derive_motion, motion_position_map, FactorMaps, Motion};
