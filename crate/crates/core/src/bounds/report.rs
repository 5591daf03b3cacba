use serde::Serialize;

use super::complexity::{bendavid_divergence, gap_profile, gen_iid, kappa, GenIidMode, SampleSize};
use super::divergence::{kl, phi, tv};
use super::info::conditional_mi;
use crate::domain::{epsilon, Split};
use crate::error::{Error, Result};
use crate::learners::{run_learner, Learner, RuleIndexedSpace};
use crate::prob::{to_f64, FiniteDistribution};

/// Disagreement threshold for the Ben-David baseline.
pub const DISAGREEMENT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct BoundConfig {
    pub n: SampleSize,
    pub gen_iid: GenIidMode,
    pub kappa_trials: usize,
    pub seed: u64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self { n: SampleSize::Infinite, gen_iid: GenIidMode::Massart, kappa_trials: 200, seed: 0 }
    }
}

/// Every term of the gap bound, the measured gap, and two comparison bounds.
///
/// `total_bound` is `gen_iid + κ·L·Φ(mi) + ε` and is absent when κ is
/// undefined (zero population gap); `total_bound_without_kappa` drops κ.
/// The `*_chain_*` fields bound the gap through the learner's output laws on
/// S and on the full grid directly: `|E_{f_E} g| + osc(g)·TV(P_{f_S}, P_{f_E})`
/// and the same with TV replaced by Φ(KL(P_{f_E} ‖ P_{f_S})).
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub learner: String,
    pub n: String,
    pub gen_iid: f64,
    pub mi: f64,
    pub phi_mi: f64,
    pub kappa_n: Option<f64>,
    pub epsilon: f64,
    pub lipschitz: f64,
    pub l_phi: f64,
    pub kappa_l_phi: Option<f64>,
    pub total_bound: Option<f64>,
    pub total_bound_without_kappa: f64,
    pub measured_gap: f64,
    pub bendavid: f64,
    pub tv_fs_fe: f64,
    pub kl_fe_fs: Option<f64>,
    pub tv_chain_bound: f64,
    pub kl_chain_bound: Option<f64>,
}

impl BoundReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(self)?;
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub fn gap_bound(
    learner: &Learner,
    space: &RuleIndexedSpace,
    split: &Split,
    prior: &FiniteDistribution,
    truth: usize,
    config: &BoundConfig,
) -> Result<BoundReport> {
    split.require_base(space.rules().skeleton().base_cell())?;
    let measures = space.measures(truth)?;
    let fs = space.space();
    let gen = gen_iid(fs, &measures, split, config.n, config.gen_iid, config.seed)?;
    let mi = conditional_mi(learner, space, split, prior)?;
    let phi_mi = phi(mi)?;
    let kappa_n = match kappa(learner, &measures, split, fs, Some(truth), config.n, config.kappa_trials, config.seed) {
        Ok(k) => Some(k),
        Err(Error::DegenerateGap(_)) => None,
        Err(e) => return Err(e),
    };
    let eps = to_f64(&epsilon(&measures, fs)?);
    let l = to_f64(fs.bound());
    let l_phi = l * phi_mi;
    let kappa_l_phi = kappa_n.map(|k| k * l_phi);

    let gaps: Vec<f64> = gap_profile(&measures, split, fs)?.iter().map(to_f64).collect();
    let out_s = run_learner(learner, &measures, split, fs, Some(truth))?;
    let out_e = run_learner(learner, &measures, &Split::full(split.sizes()), fs, Some(truth))?;
    let measured: f64 = out_s.support().map(|i| to_f64(out_s.weight(i)) * gaps[i]).sum::<f64>().abs();
    let at_e: f64 = out_e.support().map(|i| to_f64(out_e.weight(i)) * gaps[i]).sum::<f64>().abs();
    let involved: Vec<f64> = out_s.support().chain(out_e.support()).map(|i| gaps[i]).collect();
    let osc = involved.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - involved.iter().copied().fold(f64::INFINITY, f64::min);
    let (ps, pe) = (out_s.to_f64(), out_e.to_f64());
    let tv_fs_fe = tv(&ps, &pe)?;
    let kl_fe_fs = match kl(&pe, &ps) {
        Ok(v) => Some(v),
        Err(Error::InfiniteKl { .. }) => None,
        Err(e) => return Err(e),
    };
    let kl_chain_bound = match kl_fe_fs {
        Some(v) => Some(at_e + osc * phi(v)?),
        None => None,
    };

    let bendavid = if split.is_full() {
        0.0
    } else {
        let p_s = measures.mixture(split.support())?.to_f64();
        let p_u = measures.mixture(split.unknown())?.to_f64();
        bendavid_divergence(fs.floats(), &p_s, &p_u, DISAGREEMENT_TOL)?
    };

    Ok(BoundReport {
        learner: learner.name.clone(),
        n: match config.n {
            SampleSize::Finite(n) => n.to_string(),
            SampleSize::Infinite => "inf".into(),
        },
        gen_iid: gen,
        mi,
        phi_mi,
        kappa_n,
        epsilon: eps,
        lipschitz: l,
        l_phi,
        kappa_l_phi,
        total_bound: kappa_l_phi.map(|k| gen + k + eps),
        total_bound_without_kappa: gen + l_phi + eps,
        measured_gap: measured,
        bendavid,
        tv_fs_fe,
        kl_fe_fs,
        tv_chain_bound: at_e + osc * tv_fs_fe,
        kl_chain_bound,
    })
}
