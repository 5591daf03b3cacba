//! Divergences, optimal transport, mutual information and the gap bound.

mod complexity;
mod divergence;
mod info;
mod report;
mod transport;

pub use complexity::{bendavid_divergence, gap_profile, gen_iid, kappa, measured_gap, GenIidMode, SampleSize, GAP_EPS};
pub use divergence::{kl, phi, tv, w1_discrete};
pub use info::{conditional_mi, learner_outputs};
pub use report::{gap_bound, BoundConfig, BoundReport, DISAGREEMENT_TOL};
pub use transport::{w1_emd, MetricTable};
