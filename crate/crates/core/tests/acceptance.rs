//! One pass/fail line per acceptance criterion. Exits nonzero if any fails.

mod common;

use std::time::Instant;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use cgtheory::bounds::{kl, phi, gap_bound, tv, w1_discrete, w1_emd, BoundConfig, MetricTable};
use cgtheory::domain::{Bijection, Cell, FactorSizes, Split};
use cgtheory::experiments::{
    kappa_sweep, means_by_size, reference_kappa_task, run_sweep, spearman, Example, SweepConfig,
};
use cgtheory::irm_solver::{check_c_support, solve_and_eval};
use cgtheory::learners::{build_rule_indexed_space, run_learner, Learner};
use cgtheory::nfl::nfl_sum;
use cgtheory::prob::{int, ratio, to_f64, FiniteDistribution, Rational};
use cgtheory::rng::{stream, Rng as ChaRng};
use cgtheory::rules::tasks::{
    additive_task, multiplication_task, positional_family, random_irm_lattice, random_irm_positional,
};
use cgtheory::rules::{enumerate_rules, is_irm, motion_position_map, pairwise_map, IrmVerdict, DEFAULT_CAP};
use cgtheory::taskfile::load_skeleton;
use cgtheory::Error;

/// Slack on the gap-bound inequality.
const BOUND_TOL: f64 = 1e-9;
/// Agreement of TV with both W1 forms.
const METRIC_TOL: f64 = 1e-9;
/// Rounding slack on TV ≤ Φ(KL).
const PINSKER_TOL: f64 = 1e-12;
/// Slack on Example 1's monotone means.
const MONOTONE_TOL: f64 = 1e-12;
/// Mutual information treated as zero.
const MI_ZERO: f64 = 1e-12;
const KAPPA_TRIALS: usize = 500;
const SEED: u64 = 20240607;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 NFL exactness", nfl_exactness),
        ("2 bound validity (n = inf)", bound_validity),
        ("3 solvability corollary", corollary),
        ("4 metric identities", metric_identities),
        ("5 kappa limit", kappa_limit),
        ("6 IRM round trip", irm_round_trip),
        ("7 additive generation has IRM", additive_irm),
        ("8 tightness trends", tightness_trends),
        ("9 CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("{} {name}: {} [{:.2}s]", if o.pass { "PASS" } else { "FAIL" }, o.detail, t.elapsed().as_secs_f64());
    }
    println!("{failed} criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}

fn nfl_exactness() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for file in ["reference_2x2.json", "reference_2x3.json"] {
        let sk = load_skeleton(&common::data(file)).expect("reference skeleton loads");
        let space = build_rule_indexed_space(enumerate_rules(&sk, DEFAULT_CAP).expect("enumerates")).expect("space");
        let mut rng = stream(SEED, "bias-weights");
        let bias: Vec<Rational> = (0..space.len()).map(|_| int(rng.gen_range(1..=9))).collect();
        let learners = [Learner::uniform_erm(), Learner::biased_erm(bias), Learner::cheating_oracle()];
        for split in Split::enumerate_all(sk.factors()).expect("splits") {
            if !split.contains(sk.base_cell()) {
                continue;
            }
            checked += 1;
            let classes = space.rules().restriction_classes(&split).len();
            // Two tied elements per cell: each non-base support cell doubles the classes.
            if classes != 1 << (split.support().len() - 1) {
                bad.push(format!("{file} {split}: {classes} classes"));
            }
            let target = int(classes as i64);
            for l in &learners {
                let s = nfl_sum(l, &space, &split).expect("nfl sum");
                if s != target {
                    bad.push(format!("{file} {split} {}: {s} != {target}", l.name));
                }
            }
            let rp = nfl_sum(&Learner::random_pick(), &space, &split).expect("nfl sum");
            if classes > 1 && rp == target {
                bad.push(format!("{file} {split}: random-pick matched class_count"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: bad.is_empty() && secs < 10.0,
        detail: format!(
            "{checked} splits with the base cell, {} mismatches, {secs:.2}s (limit 10s){}",
            bad.len(),
            first(&bad)
        ),
    }
}

fn first(v: &[String]) -> String {
    v.first().map(|s| format!("; first: {s}")).unwrap_or_default()
}

/// One exhaustive instance for criteria 2 and 3.
struct Instance {
    gap: f64,
    mi: f64,
    eps: f64,
    l: f64,
    chain_tv: f64,
    support_err: Rational,
    unseen_err: Rational,
}

fn random_instances() -> &'static [Instance] {
    use std::sync::OnceLock;
    static CACHE: OnceLock<Vec<Instance>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut rng = stream(SEED, "bound-instances");
        (0..120).map(|_| random_instance(&mut rng)).collect()
    })
}

fn random_instance(rng: &mut ChaRng) -> Instance {
    let (sizes, k) = match rng.gen_range(0..3) {
        0 => (FactorSizes::new(2, 2).unwrap(), 2),
        1 => (FactorSizes::new(2, 2).unwrap(), 3),
        _ => (FactorSizes::new(2, 3).unwrap(), 2),
    };
    let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=2)).collect();
    let total: i64 = raw.iter().sum();
    let weights = raw.iter().map(|&w| ratio(w, total)).collect();
    let family = positional_family(sizes, weights, vec![Bijection::identity(k); sizes.cell_count()], false).unwrap();
    let space = build_rule_indexed_space(enumerate_rules(family.skeleton(), DEFAULT_CAP).unwrap()).unwrap();
    let truth = rng.gen_range(0..space.len());
    let mut cells: Vec<Cell> = sizes.cells().filter(|&c| c != Cell::new(0, 0) && rng.gen_bool(0.5)).collect();
    cells.push(Cell::new(0, 0));
    let split = Split::new(sizes, cells).unwrap();
    let learner = Learner::uniform_erm();
    let prior = FiniteDistribution::uniform(space.len()).unwrap();
    let r = gap_bound(&learner, &space, &split, &prior, truth, &BoundConfig::default()).unwrap();
    let measures = space.measures(truth).unwrap();
    let out = run_learner(&learner, &measures, &split, space.space(), Some(truth)).unwrap();
    let expect_over = |cells: Vec<Cell>| -> Rational {
        if cells.is_empty() {
            return Rational::zero();
        }
        out.support()
            .map(|i| out.weight(i) * measures.err_mixture(cells.iter(), space.space().function(i).unwrap()).unwrap())
            .sum()
    };
    Instance {
        gap: r.measured_gap,
        mi: r.mi,
        eps: r.epsilon,
        l: r.lipschitz,
        chain_tv: r.tv_chain_bound,
        support_err: expect_over(split.support().iter().copied().collect()),
        unseen_err: expect_over(split.unknown().iter().copied().collect()),
    }
}

fn bound_validity() -> Outcome {
    let start = Instant::now();
    let inst = random_instances();
    let violations = inst.iter().filter(|i| i.gap > i.l * phi(i.mi).unwrap() + i.eps + BOUND_TOL).count();
    let chain_violations = inst.iter().filter(|i| i.gap > i.chain_tv + BOUND_TOL).count();
    let worst = inst.iter().map(|i| i.gap - i.l * phi(i.mi).unwrap() - i.eps).fold(f64::NEG_INFINITY, f64::max);
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: violations == 0 && inst.len() >= 100 && secs < 120.0,
        detail: format!(
            "{} instances, uniform-erm: gap > L*phi(mi) + eps on {violations} (worst excess {worst:.4}, tol {BOUND_TOL:e}); \
             the TV chain bound through the output laws holds on {} of {}",
            inst.len(),
            inst.len() - chain_violations,
            inst.len()
        ),
    }
}

fn corollary() -> Outcome {
    let inst = random_instances();
    let premise: Vec<&Instance> = inst.iter().filter(|i| i.mi.abs() <= MI_ZERO && i.support_err.is_zero()).collect();
    let bad = premise.iter().filter(|i| !i.unseen_err.is_zero()).count();
    let worst = premise.iter().map(|i| to_f64(&i.unseen_err)).fold(0.0, f64::max);
    Outcome {
        pass: bad == 0,
        detail: format!(
            "{} instances with mi = 0 and zero support error; unseen error is positive on {bad} (largest {worst:.4})",
            premise.len()
        ),
    }
}

fn random_dist(rng: &mut ChaRng, n: usize, zeros: bool) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..n).map(|_| if zeros && rng.gen_bool(0.2) { 0.0 } else { rng.gen::<f64>() }).collect();
        let s: f64 = raw.iter().sum();
        if s > 0.0 {
            return raw.into_iter().map(|x| x / s).collect();
        }
    }
}

fn metric_identities() -> Outcome {
    let mut rng = stream(SEED, "metric-pairs");
    let (mut metric_bad, mut pinsker_bad, mut finite) = (0, 0, 0);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=10);
        let p = random_dist(&mut rng, n, true);
        let q = random_dist(&mut rng, n, true);
        let t = tv(&p, &q).unwrap();
        let d1 = (t - w1_discrete(&p, &q).unwrap()).abs();
        let d2 = (t - w1_emd(&p, &q, &MetricTable::discrete(n)).unwrap()).abs();
        worst = worst.max(d1).max(d2);
        if d1 > METRIC_TOL || d2 > METRIC_TOL {
            metric_bad += 1;
        }
        match kl(&p, &q) {
            Ok(k) => {
                finite += 1;
                if t > phi(k).unwrap() + PINSKER_TOL {
                    pinsker_bad += 1;
                }
            }
            Err(Error::InfiniteKl { .. }) => {}
            Err(e) => panic!("unexpected KL error {e}"),
        }
    }
    Outcome {
        pass: metric_bad == 0 && pinsker_bad == 0,
        detail: format!(
            "1000 pairs: {metric_bad} TV/W1 mismatches (max {worst:.1e}, tol {METRIC_TOL:e}); \
             {pinsker_bad} Pinsker violations over {finite} finite-KL pairs"
        ),
    }
}

fn kappa_limit() -> Outcome {
    let task = reference_kappa_task().unwrap();
    let rows = kappa_sweep(&task, &Learner::uniform_erm(), &[10, 1000], KAPPA_TRIALS, SEED).unwrap();
    let d10 = (rows[0].kappa - 1.0).abs();
    let d1000 = (rows[1].kappa - 1.0).abs();
    let band = 3.0 / (KAPPA_TRIALS as f64).sqrt();
    let inf = rows[2].kappa;
    Outcome {
        pass: d10 - d1000 > band && inf == 1.0,
        detail: format!(
            "|k_10 - 1| = {d10:.4}, |k_1000 - 1| = {d1000:.4}, decrease exceeds band 3/sqrt({KAPPA_TRIALS}) = {band:.4}: {}; k_inf = {inf}",
            d10 - d1000 > band
        ),
    }
}

/// A random split covering every A and every B value, containing (0,0).
fn random_c_support(rng: &mut ChaRng, sizes: FactorSizes) -> Split {
    let mut cells: Vec<Cell> = sizes.cells().filter(|_| rng.gen_bool(0.2)).collect();
    cells.push(Cell::new(0, 0));
    for a in 0..sizes.a {
        if !cells.iter().any(|c| c.a == a) {
            cells.push(Cell::new(a, rng.gen_range(0..sizes.b)));
        }
    }
    for b in 0..sizes.b {
        if !cells.iter().any(|c| c.b == b) {
            cells.push(Cell::new(rng.gen_range(0..sizes.a), b));
        }
    }
    Split::new(sizes, cells).unwrap()
}

fn irm_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = stream(SEED, "irm-round-trip");
    let mut bad = Vec::new();
    for t in 0..100 {
        let sizes = FactorSizes::new(rng.gen_range(2..=4), rng.gen_range(2..=4)).unwrap();
        let k = rng.gen_range(2..=4);
        // Lattice tasks separate A and B by axis, so any C-support split
        // works; positional tasks need the A and B motions observed apart,
        // which a split containing row 0 and column 0 guarantees.
        let (family, split) = if t % 2 == 0 {
            (random_irm_lattice(&mut rng, sizes, k, true).unwrap(), random_c_support(&mut rng, sizes))
        } else {
            let l: Vec<Cell> = sizes.cells().filter(|c| c.a == 0 || c.b == 0 || rng.gen_bool(0.3)).collect();
            (random_irm_positional(&mut rng, sizes, k).unwrap(), Split::new(sizes, l).unwrap())
        };
        assert!(check_c_support(&split, sizes).holds);
        match solve_and_eval(&family, &split, DEFAULT_CAP) {
            Ok(r) if r.max_err.is_zero() && r.cells.iter().all(|c| c.distribution_match) => {}
            Ok(r) => bad.push(format!("task {t}: max error {}", r.max_err)),
            Err(e) => bad.push(format!("task {t}: {e}")),
        }
    }
    let mult = multiplication_task().unwrap();
    let big = mult.factors();
    let mut splits = vec![
        Split::new(big, big.cells().filter(|c| c.a == 0 || c.b == 0)).unwrap(),
        Split::new(big, (0..10).map(|i| Cell::new(i, i))).unwrap(),
        Split::full(big),
    ];
    splits.extend((0..17).map(|_| random_c_support(&mut rng, big)));
    let mut silent = 0;
    for s in &splits {
        if let Ok(r) = solve_and_eval(&mult, s, DEFAULT_CAP) {
            if r.solved {
                silent += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: bad.is_empty() && silent == 0 && secs < 60.0,
        detail: format!(
            "{} of 100 IRM tasks solved with zero unseen error; multiplication silently solved on {silent} of {} splits; {secs:.2}s{}",
            100 - bad.len(),
            splits.len(),
            first(&bad)
        ),
    }
}

fn random_table(rng: &mut ChaRng, n: usize, dims: usize, spacing: i64) -> Vec<Vec<i64>> {
    let mut acc = vec![0i64; dims];
    (0..n)
        .map(|i| {
            if i > 0 {
                for x in acc.iter_mut() {
                    *x += spacing + rng.gen_range(0..=7);
                }
            }
            acc.clone()
        })
        .collect()
}

fn additive_irm() -> Outcome {
    let mut rng = stream(SEED, "additive");
    let mut irm = 0;
    let mut exact = 0;
    let mut attempts = 0;
    let mut built = 0;
    while built < 100 {
        attempts += 1;
        let sizes = (rng.gen_range(2..=5), rng.gen_range(2..=5));
        let dims = rng.gen_range(1..=2);
        let noise_len = rng.gen_range(1..=4);
        let mut noise: Vec<Vec<i64>> = Vec::new();
        while noise.len() < noise_len {
            let z: Vec<i64> = (0..dims).map(|_| rng.gen_range(-3..=3)).collect();
            if !noise.contains(&z) {
                noise.push(z);
            }
        }
        let noise: Vec<(Vec<i64>, Rational)> = noise.into_iter().map(|z| (z, ratio(1, noise_len as i64))).collect();
        // Random tables, with spacings sometimes too tight so collisions are
        // exercised and rejected.
        let (s1, s2) = (rng.gen_range(0..=20), rng.gen_range(0..=20));
        let phi1 = random_table(&mut rng, sizes.0, dims, s1);
        let phi2: Vec<Vec<i64>> = {
            let mut t = random_table(&mut rng, sizes.1, dims, s2);
            t.shuffle(&mut rng);
            t
        };
        let family = match additive_task(&phi1, &phi2, &noise, None) {
            Ok(f) => f,
            Err(Error::Collision(_)) | Err(Error::InvalidInput(_)) => continue,
            Err(e) => panic!("unexpected construction error {e}"),
        };
        built += 1;
        if let IrmVerdict::Irm(fm) = is_irm(&family).unwrap() {
            irm += 1;
            let sk = family.skeleton();
            let sz = family.factors();
            let all = sz.cells().all(|c1| {
                sz.cells().all(|c2| {
                    let m = fm.motion_between(c1, c2);
                    let via = m.and_then(|m| motion_position_map(sk, &m, c1, c2));
                    via.as_ref() == Some(&pairwise_map(family.rule(), sz, c1, c2).unwrap())
                })
            });
            if all {
                exact += 1;
            }
        }
    }
    Outcome {
        pass: irm == 100 && exact == 100,
        detail: format!("{built} collision-free constructions ({attempts} drawn): IRM on {irm}, witness maps reproduce every pairwise map on {exact}"),
    }
}

fn tightness_trends() -> Outcome {
    let start = Instant::now();
    let ex1 = run_sweep(&SweepConfig::new(Example::One)).unwrap();
    let means: Vec<f64> = means_by_size(&ex1).iter().map(|m| m.2).collect();
    let monotone = means.windows(2).all(|w| w[1] <= w[0] + MONOTONE_TOL);
    let ex2 = run_sweep(&SweepConfig::new(Example::Two)).unwrap();
    let measured: Vec<f64> = ex2.iter().map(|r| r.measured).collect();
    let ours = spearman(&ex2.iter().map(|r| r.our_bound).collect::<Vec<_>>(), &measured);
    let bd = spearman(&ex2.iter().map(|r| r.bendavid_bound).collect::<Vec<_>>(), &measured);
    let secs = start.elapsed().as_secs_f64();
    let shown: Vec<String> = means.iter().map(|m| format!("{m:.3}")).collect();
    Outcome {
        pass: monotone && ours > bd && secs < 300.0,
        detail: format!(
            "Example 1 mean bound by |S| = [{}] nonincreasing: {monotone}; Example 2 rank correlation ours {ours:.3} vs Ben-David {bd:.3}; {secs:.1}s",
            shown.join(", ")
        ),
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let failures = common::determinism_failures(dir.path());
    let verbs = common::verb_invocations(dir.path()).len();
    Outcome {
        pass: failures.is_empty(),
        detail: format!("{verbs} invocations run twice, {} differences{}", failures.len(), first(&failures)),
    }
}
