//! Cells, splits, skeletons, compositional families and their measures.

mod bijection;
mod cell;
mod family;
mod measures;

pub use bijection::Bijection;
pub use cell::{Cell, FactorSizes, Split};
pub use family::{
    labeled_index, validate_family, CellSpec, CompositionRule, CompositionalFamily, Geometry, Skeleton,
    ValidationReport, Violation,
};
pub use measures::{
    epsilon, err, err_dataset, sample_dataset, sample_dataset_with, subdistribution, CellMeasures, Dataset,
    DatasetSampler, Sample,
};
