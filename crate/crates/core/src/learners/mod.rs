//! Function spaces and the learners that pick from them.

mod learner;
mod profile;
mod space;

pub use learner::{
    check_convergence, dataset_erm, erm_set, run_learner, run_learner_on_dataset, Learner, LearnerKind,
    ProfileSamplerParams, TIE_TOL,
};
pub use profile::{run_learner_on_profiles, IndependentLaw, ProfileOutput, ProfileSpace};
pub use space::{build_rule_indexed_space, disagreement_indicator, FunctionSpace, RuleIndexedSpace};
