//! The `cgtheory` command line.
//!
//! Exit status: 0 on success, 1 on a domain error or a failed check (invalid
//! task, NFL violation, unsolved IRM task, generative effect), 2 on a usage
//! error. Every verb that writes files also writes `manifest.json` beside
//! them (`ex1.manifest.json` and `ex2.manifest.json` for the sweeps, which
//! may share a directory, and `<file>.manifest.json` for `generate`).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng as _;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::bounds::{gap_bound, BoundConfig, GenIidMode, SampleSize};
use crate::domain::{validate_family, FactorSizes, Split};
use crate::error::{Error, Result};
use crate::experiments::{
    emit_plot, kappa_sweep, means_by_size, reference_kappa_task, run_sweep, spearman, Example, Panel, SweepConfig, GRID,
};
use crate::learners::{build_rule_indexed_space, Learner, RuleIndexedSpace};
use crate::nfl::{nfl_check, NflMethod, NflOutcome};
use crate::prob::{format_rational, int, parse_rational, FiniteDistribution};
use crate::rng::stream;
use crate::rules::tasks::{multiplication_task, random_generic, random_irm_lattice, random_irm_positional};
use crate::rules::{enumerate_rules, is_irm, IrmVerdict, DEFAULT_CAP};
use crate::taskfile::{family_to_json, load_family, load_skeleton, load_split, parse_splits};

#[derive(Parser, Debug)]
#[command(name = "cgtheory", version, about = "Compositional generalization on finite spaces", long_about = None)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a task file against the family invariants.
    Validate {
        task: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive no-free-lunch sums over every rule consistent with a skeleton.
    Nfl {
        #[arg(long)]
        skeleton: PathBuf,
        /// `all`, or a JSON file with one split or a list of splits.
        #[arg(long, default_value = "all")]
        splits: String,
        #[arg(long, value_delimiter = ',', default_value = "uniform-erm,biased-erm,cheating-oracle,random-pick")]
        learners: Vec<LearnerName>,
        #[command(flatten)]
        learner_opts: LearnerOpts,
        #[arg(long, env = "CGTHEORY_CAP")]
        cap: Option<u128>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every term of the gap bound for one task, split and learner.
    Bound {
        #[arg(long)]
        task: PathBuf,
        #[arg(long)]
        split: PathBuf,
        #[arg(long, default_value = "uniform-erm")]
        learner: LearnerName,
        #[command(flatten)]
        learner_opts: LearnerOpts,
        /// Sample size, or `inf`.
        #[arg(long, default_value = "inf", allow_hyphen_values = true, value_parser = parse_sample_size)]
        n: SampleSize,
        /// `uniform`, or a JSON array of weights over the enumerated rules.
        #[arg(long, default_value = "uniform")]
        prior: String,
        #[arg(long, value_enum, default_value = "massart")]
        gen_iid: GenIidArg,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "CGTHEORY_CAP")]
        cap: Option<u128>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariant-rule detection and solving.
    Irm {
        #[command(subcommand)]
        command: IrmCommand,
    },
    /// Bound-tightness sweeps and the κ_n study.
    Experiment {
        #[command(subcommand)]
        command: ExperimentCommand,
    },
    /// Write a generated task file.
    Generate {
        #[arg(value_enum)]
        kind: GenerateKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        a: usize,
        #[arg(long, default_value_t = 3)]
        b: usize,
        /// Support size per cell.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum IrmCommand {
    /// Recover factor maps from the support cells and score the synthesized unseen cells.
    Solve {
        #[arg(long)]
        task: PathBuf,
        #[arg(long)]
        split: PathBuf,
        #[arg(long, env = "CGTHEORY_CAP")]
        cap: Option<u128>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether the task's rule factors into A- and B-motions.
    Check {
        #[arg(long)]
        task: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExperimentCommand {
    /// Example 1: finite function space with random error profiles.
    Ex1(SweepArgs),
    /// Example 2: per-cell error laws on the complete profile space.
    Ex2(SweepArgs),
    /// κ_n on the 2x2 reference task.
    Kappa {
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value = "uniform-erm")]
        learner: LearnerName,
        #[command(flatten)]
        learner_opts: LearnerOpts,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub seeds: usize,
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,40,50,60,70,80,90,100")]
    pub support_sizes: Vec<usize>,
    /// Example 1 only: nonzero error profiles in the function space.
    #[arg(long, default_value_t = 200)]
    pub function_count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct LearnerOpts {
    /// Comma-separated positive weights for biased-erm, one per function;
    /// drawn from the seed when absent.
    #[arg(long, value_delimiter = ',')]
    pub bias_weights: Option<Vec<String>>,
    /// Seed for the profile-sampler's per-cell constants.
    #[arg(long, default_value_t = 0)]
    pub profile_seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LearnerName {
    UniformErm,
    BiasedErm,
    CheatingOracle,
    RandomPick,
    ProfileSampler,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenIidArg {
    Massart,
    Mc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenerateKind {
    Multiplication,
    Additive,
    RandomIrm,
    RandomGeneric,
}

fn parse_sample_size(s: &str) -> std::result::Result<SampleSize, String> {
    if s == "inf" {
        return Ok(SampleSize::Infinite);
    }
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(SampleSize::Finite(n)),
        _ => Err("sample size must be a positive integer or `inf`".into()),
    }
}

/// Parses `args` (program name first) and runs the command; returns the exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match dispatch(&cli.command, argv) {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Files written by one run, plus what goes into its manifest.
struct Run {
    verb: &'static str,
    argv: Vec<String>,
    seed: Option<u64>,
    inputs: Vec<PathBuf>,
    outputs: Vec<String>,
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest {
    tool: &'static str,
    version: &'static str,
    verb: &'static str,
    seed: Option<u64>,
    argv: Vec<String>,
    inputs: Vec<InputDigest>,
    outputs: Vec<String>,
    /// Seconds since the epoch; `SOURCE_DATE_EPOCH` when set.
    timestamp: u64,
}

impl Run {
    fn new(verb: &'static str, argv: Vec<String>, seed: Option<u64>) -> Self {
        Self { verb, argv, seed, inputs: Vec::new(), outputs: Vec::new() }
    }

    fn input(&mut self, p: &Path) {
        self.inputs.push(p.to_path_buf());
    }

    fn write(&mut self, dir: &Path, name: &str, contents: &[u8]) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(name), contents)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    fn manifest(&self) -> Result<String> {
        let inputs = self
            .inputs
            .iter()
            .map(|p| {
                let digest = Sha256::digest(fs::read(p)?);
                let sha256 = digest.iter().fold(String::new(), |mut s, b| {
                    let _ = write!(s, "{b:02x}");
                    s
                });
                Ok(InputDigest { path: p.display().to_string(), sha256 })
            })
            .collect::<Result<Vec<_>>>()?;
        let m = RunManifest {
            tool: "cgtheory",
            version: env!("CARGO_PKG_VERSION"),
            verb: self.verb,
            seed: self.seed,
            argv: self.argv.clone(),
            inputs,
            outputs: self.outputs.clone(),
            timestamp: timestamp(),
        };
        Ok(serde_json::to_string_pretty(&m)? + "\n")
    }

    fn finish(self, dir: Option<&Path>) -> Result<()> {
        self.finish_as(dir, "manifest.json")
    }

    fn finish_as(mut self, dir: Option<&Path>, name: &str) -> Result<()> {
        if let Some(dir) = dir {
            let m = self.manifest()?;
            self.write(dir, name, m.as_bytes())?;
        }
        Ok(())
    }
}

fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0))
}

fn cap_or_default(cap: Option<u128>) -> u128 {
    cap.unwrap_or(DEFAULT_CAP)
}

fn build_learner(name: LearnerName, opts: &LearnerOpts, space_len: usize, seed: u64) -> Result<Learner> {
    Ok(match name {
        LearnerName::UniformErm => Learner::uniform_erm(),
        LearnerName::CheatingOracle => Learner::cheating_oracle(),
        LearnerName::RandomPick => Learner::random_pick(),
        LearnerName::BiasedErm => {
            let weights = match &opts.bias_weights {
                Some(ws) => {
                    if ws.len() != space_len {
                        return Err(Error::InvalidInput(format!(
                            "--bias-weights has {} entries but the function space has {space_len}",
                            ws.len()
                        )));
                    }
                    ws.iter().map(|w| parse_rational(w)).collect::<Result<Vec<_>>>()?
                }
                None => {
                    let mut rng = stream(seed, "bias-weights");
                    (0..space_len).map(|_| int(rng.gen_range(1..=9))).collect()
                }
            };
            Learner::biased_erm(weights)
        }
        LearnerName::ProfileSampler => {
            let mut rng = stream(opts.profile_seed, "profile-sampler");
            Learner::profile_sampler((0..GRID.cell_count()).map(|_| rng.gen_range(0.8..=1.0)).collect())
        }
    })
}

fn rule_space(skeleton_path: &Path, cap: u128) -> Result<RuleIndexedSpace> {
    let sk = load_skeleton(skeleton_path)?;
    build_rule_indexed_space(enumerate_rules(&sk, cap)?)
}

fn dispatch(command: &Command, argv: Vec<String>) -> Result<i32> {
    match command {
        Command::Validate { task, out } => validate(task, out.as_deref(), argv),
        Command::Nfl { skeleton, splits, learners, learner_opts, cap, seed, out } => {
            nfl(skeleton, splits, learners, learner_opts, cap_or_default(*cap), *seed, out.as_deref(), argv)
        }
        Command::Bound { task, split, learner, learner_opts, n, prior, gen_iid, trials, seed, cap, out } => {
            let gen_iid = match gen_iid {
                GenIidArg::Massart => GenIidMode::Massart,
                GenIidArg::Mc => GenIidMode::MonteCarlo { trials: *trials },
            };
            let config = BoundConfig { n: *n, gen_iid, kappa_trials: *trials, seed: *seed };
            bound(task, split, *learner, learner_opts, prior, &config, cap_or_default(*cap), out.as_deref(), argv)
        }
        Command::Irm { command: IrmCommand::Solve { task, split, cap, out } } => {
            irm_solve(task, split, cap_or_default(*cap), out.as_deref(), argv)
        }
        Command::Irm { command: IrmCommand::Check { task, out } } => irm_check(task, out.as_deref(), argv),
        Command::Experiment { command: ExperimentCommand::Ex1(args) } => sweep(Example::One, args, argv),
        Command::Experiment { command: ExperimentCommand::Ex2(args) } => sweep(Example::Two, args, argv),
        Command::Experiment { command: ExperimentCommand::Kappa { n, trials, learner, learner_opts, seed, out } } => {
            kappa(n, *trials, *learner, learner_opts, *seed, out.as_deref(), argv)
        }
        Command::Generate { kind, seed, a, b, k, out } => generate(*kind, *seed, *a, *b, *k, out.as_deref(), argv),
    }
}

fn validate(task: &Path, out: Option<&Path>, argv: Vec<String>) -> Result<i32> {
    let mut run = Run::new("validate", argv, None);
    run.input(task);
    let violations: Vec<String> = match load_family(task) {
        Ok(family) => validate_family(&family).violations.iter().map(|v| v.to_string()).collect(),
        Err(e) => vec![e.to_string()],
    };
    let valid = violations.is_empty();
    if valid {
        println!("valid");
    } else {
        println!("invalid: {} violation(s)", violations.len());
        for v in &violations {
            println!("  {v}");
        }
    }
    if let Some(dir) = out {
        let body = serde_json::to_string_pretty(&json!({ "valid": valid, "violations": violations }))? + "\n";
        run.write(dir, "validation.json", body.as_bytes())?;
    }
    run.finish(out)?;
    Ok(if valid { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn nfl(
    skeleton: &Path,
    splits: &str,
    learners: &[LearnerName],
    opts: &LearnerOpts,
    cap: u128,
    seed: u64,
    out: Option<&Path>,
    argv: Vec<String>,
) -> Result<i32> {
    let mut run = Run::new("nfl", argv, Some(seed));
    run.input(skeleton);
    let space = rule_space(skeleton, cap)?;
    let sizes = space.rules().skeleton().factors();
    let splits = if splits == "all" {
        Split::enumerate_all(sizes)?
    } else {
        let p = Path::new(splits);
        run.input(p);
        parse_splits(&fs::read_to_string(p)?, sizes)?
    };
    let methods = learners
        .iter()
        .map(|&l| Ok(NflMethod { learner: build_learner(l, opts, space.len(), seed)?, space: &space }))
        .collect::<Result<Vec<_>>>()?;
    let report = nfl_check(&methods, &splits)?;
    let csv = report.to_csv();
    let evaluated = report.rows.iter().filter(|r| matches!(r.outcome, NflOutcome::Evaluated { .. })).count();
    let ok = report.convergent_methods_agree();
    match out {
        Some(dir) => {
            run.write(dir, "nfl.csv", csv.as_bytes())?;
            println!(
                "{} rules, {evaluated} splits evaluated, {} skipped; convergent methods match class_count: {ok}",
                space.len(),
                report.rows.len() - evaluated
            );
        }
        None => print!("{csv}"),
    }
    run.finish(out)?;
    if !ok {
        eprintln!("error: {} split(s) violate the no-free-lunch identity", report.violations().len());
    }
    Ok(if ok { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn bound(
    task: &Path,
    split: &Path,
    learner: LearnerName,
    opts: &LearnerOpts,
    prior: &str,
    config: &BoundConfig,
    cap: u128,
    out: Option<&Path>,
    argv: Vec<String>,
) -> Result<i32> {
    let mut run = Run::new("bound", argv, Some(config.seed));
    run.input(task);
    run.input(split);
    let family = load_family(task)?;
    let space = build_rule_indexed_space(enumerate_rules(family.skeleton(), cap)?)?;
    let truth = space
        .rules()
        .index_of(family.rule())
        .ok_or_else(|| Error::InvalidInput("the task's rule is not among the enumerated rules".into()))?;
    let split = load_split(split, family.factors())?;
    let prior = if prior == "uniform" {
        FiniteDistribution::uniform(space.len())?
    } else {
        let p = Path::new(prior);
        run.input(p);
        let raw: Vec<serde_json::Value> = serde_json::from_str(&fs::read_to_string(p)?)?;
        let weights = raw
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => parse_rational(s),
                other => parse_rational(&other.to_string()),
            })
            .collect::<Result<Vec<_>>>()?;
        if weights.len() != space.len() {
            return Err(Error::DimensionMismatch { expected: space.len(), found: weights.len() });
        }
        FiniteDistribution::new(weights)?
    };
    let learner = build_learner(learner, opts, space.len(), config.seed)?;
    let report = gap_bound(&learner, &space, &split, &prior, truth, config)?;
    let csv = report.to_csv()?;
    print!("{csv}");
    if let Some(dir) = out {
        run.write(dir, "bound.csv", csv.as_bytes())?;
    }
    run.finish(out)?;
    Ok(0)
}

fn irm_diagnostic(family: &crate::domain::CompositionalFamily) -> String {
    match is_irm(family) {
        Ok(IrmVerdict::GenerativeEffect(cx)) => format!("generative effect: {cx}"),
        Ok(IrmVerdict::Irm(_)) => "the full family has IRM; the split does not determine it".into(),
        Err(e) => format!("IRM check failed: {e}"),
    }
}

fn irm_solve(task: &Path, split: &Path, cap: u128, out: Option<&Path>, argv: Vec<String>) -> Result<i32> {
    let mut run = Run::new("irm solve", argv, None);
    run.input(task);
    run.input(split);
    let family = load_family(task)?;
    let split = load_split(split, family.factors())?;
    let report = match crate::irm_solver::solve_and_eval(&family, &split, cap) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("{}", irm_diagnostic(&family));
            if let Some(dir) = out {
                let body = serde_json::to_string_pretty(&json!({
                    "solved": false,
                    "error": e.to_string(),
                    "diagnostic": irm_diagnostic(&family),
                }))? + "\n";
                run.write(dir, "solve.json", body.as_bytes())?;
            }
            run.finish(out)?;
            return Ok(1);
        }
    };
    let summary = json!({
        "solved": report.solved,
        "anchor": report.anchor,
        "max_err": format_rational(&report.max_err),
        "unseen_cells": report.cells.len(),
        "distributions_match": report.cells.iter().all(|c| c.distribution_match),
    });
    let summary = serde_json::to_string_pretty(&summary)? + "\n";
    print!("{summary}");
    if let Some(dir) = out {
        run.write(dir, "solve.json", summary.as_bytes())?;
        run.write(dir, "solve.csv", report.to_csv().as_bytes())?;
    } else {
        print!("{}", report.to_csv());
    }
    run.finish(out)?;
    if !report.solved {
        eprintln!("error: synthesized cells have positive error");
        eprintln!("{}", irm_diagnostic(&family));
        return Ok(1);
    }
    Ok(0)
}

fn irm_check(task: &Path, out: Option<&Path>, argv: Vec<String>) -> Result<i32> {
    let mut run = Run::new("irm check", argv, None);
    run.input(task);
    let family = load_family(task)?;
    let verdict = is_irm(&family)?;
    let line = match &verdict {
        IrmVerdict::Irm(_) => "IRM".to_string(),
        IrmVerdict::GenerativeEffect(cx) => format!("generative effect: {cx}"),
    };
    println!("{line}");
    if let Some(dir) = out {
        let body = serde_json::to_string_pretty(&json!({ "irm": verdict.is_irm(), "verdict": line }))? + "\n";
        run.write(dir, "irm.json", body.as_bytes())?;
    }
    run.finish(out)?;
    Ok(if verdict.is_irm() { 0 } else { 1 })
}

fn sweep(example: Example, args: &SweepArgs, argv: Vec<String>) -> Result<i32> {
    let (verb, stem, title) = match example {
        Example::One => ("experiment ex1", "ex1", "Example 1"),
        Example::Two => ("experiment ex2", "ex2", "Example 2"),
    };
    let mut run = Run::new(verb, argv, Some(args.seed));
    let mut config = SweepConfig::new(example);
    config.seeds = args.seeds;
    config.support_sizes = args.support_sizes.clone();
    config.function_count = args.function_count;
    config.seed = args.seed;
    let rows = run_sweep(&config)?;
    fs::create_dir_all(&args.out)?;
    emit_plot(&[Panel { title, rows: &rows }], &args.out.join(format!("{stem}.svg")))?;
    run.outputs.push(format!("{stem}.svg"));
    run.outputs.push(format!("{stem}.csv"));
    println!("|S|,measured,ours,bendavid");
    for (s, m, o, b) in means_by_size(&rows) {
        println!("{s},{m:.6},{o:.6},{b:.6}");
    }
    let measured: Vec<f64> = rows.iter().map(|r| r.measured).collect();
    let ours: Vec<f64> = rows.iter().map(|r| r.our_bound).collect();
    let bd: Vec<f64> = rows.iter().map(|r| r.bendavid_bound).collect();
    println!("spearman(ours, measured) = {:.6}", spearman(&ours, &measured));
    println!("spearman(bendavid, measured) = {:.6}", spearman(&bd, &measured));
    run.finish_as(Some(&args.out), &format!("{stem}.manifest.json"))?;
    Ok(0)
}

fn kappa(
    n: &[usize],
    trials: usize,
    learner: LearnerName,
    opts: &LearnerOpts,
    seed: u64,
    out: Option<&Path>,
    argv: Vec<String>,
) -> Result<i32> {
    if n.contains(&0) {
        return Err(Error::InvalidInput("sample sizes must be positive".into()));
    }
    let mut run = Run::new("experiment kappa", argv, Some(seed));
    let task = reference_kappa_task()?;
    let learner = build_learner(learner, opts, task.space.len(), seed)?;
    let rows = kappa_sweep(&task, &learner, n, trials, seed)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
    print!("{}", String::from_utf8_lossy(&bytes));
    if let Some(dir) = out {
        run.write(dir, "kappa.csv", &bytes)?;
    }
    run.finish(out)?;
    Ok(0)
}

fn generate(
    kind: GenerateKind,
    seed: u64,
    a: usize,
    b: usize,
    k: usize,
    out: Option<&Path>,
    argv: Vec<String>,
) -> Result<i32> {
    let sizes = FactorSizes::new(a, b)?;
    if k == 0 {
        return Err(Error::InvalidInput("--k must be positive".into()));
    }
    let mut rng = stream(seed, "generate");
    let family = match kind {
        GenerateKind::Multiplication => multiplication_task()?,
        GenerateKind::Additive => random_irm_lattice(&mut rng, sizes, k, false)?,
        GenerateKind::RandomIrm => random_irm_positional(&mut rng, sizes, k)?,
        GenerateKind::RandomGeneric => random_generic(&mut rng, sizes, k, false)?,
    };
    let text = family_to_json(&family)?;
    match out {
        None => print!("{text}"),
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(path, &text)?;
            let mut run = Run::new("generate", argv, Some(seed));
            run.outputs.push(path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default());
            let manifest = run.manifest()?;
            fs::write(PathBuf::from(format!("{}.manifest.json", path.display())), manifest)?;
        }
    }
    Ok(0)
}
