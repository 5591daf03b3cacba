//! Bound-tightness sweeps on the 10 x 10 toy problems and the κ_n study.

mod kappa;
mod plot;
mod sweep;

pub use kappa::{kappa_sweep, reference_kappa_task, KappaRow, KappaTask};
pub use plot::{emit_plot, write_sweep_csv, Panel, PlotSummary};
pub use sweep::{
    example1_profiles, example1_row, example2_row, means_by_size, run_example1, run_example2, run_sweep, spearman,
    Example, SweepConfig, SweepRow, ERR_CELLS, GRID,
};
