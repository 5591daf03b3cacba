mod common;

use common::{data, run};

use cgtheory::domain::{validate_family, FactorSizes};
use cgtheory::rng::stream;
use cgtheory::rules::tasks::{multiplication_task, random_generic, random_irm_lattice, random_irm_positional};
use cgtheory::taskfile::{family_to_json, parse_family};

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["nfl"]).status.code(), Some(2));
    let out = run(&["bound", "--task", "t.json", "--split", "s.json", "--n", "-5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("positive integer"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    let text = String::from_utf8_lossy(&help.stdout);
    for verb in ["validate", "nfl", "bound", "irm", "experiment", "generate"] {
        assert!(text.contains(verb), "help lists {verb}");
    }
}

#[test]
fn validate_reports_violations() {
    let ok = run(&["validate", data("task_2x2.json").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(&["validate", data("corrupt_overlap.json").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("support overlap at element"));
    let missing = run(&["validate", "/nonexistent/task.json"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn nfl_on_reference_instance() {
    let out = run(&["nfl", "--skeleton", data("reference_2x2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let mut evaluated = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        if &rec[1] != "evaluated" {
            continue;
        }
        evaluated += 1;
        let count = &rec[2];
        assert_eq!(&rec[3], count);
        assert_eq!(&rec[4], count);
        assert_eq!(&rec[5], count);
        assert_eq!(&rec[6], "1");
    }
    assert_eq!(evaluated, 8);
}

#[test]
fn cap_comes_from_the_environment() {
    let out = std::process::Command::new(common::bin())
        .args(["nfl", "--skeleton", data("reference_2x3.json").to_str().unwrap()])
        .env("CGTHEORY_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("above the cap"));
}

#[test]
fn irm_verbs_on_generated_tasks() {
    let dir = tempfile::tempdir().unwrap();
    let mult = dir.path().join("mult.json");
    let add = dir.path().join("add.json");
    assert_eq!(run(&["generate", "multiplication", "--out", mult.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(run(&["generate", "additive", "--seed", "2", "--out", add.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(run(&["validate", mult.to_str().unwrap()]).status.code(), Some(0));

    let check = run(&["irm", "check", "--task", mult.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&check.stdout).contains("generative effect"));
    assert_eq!(run(&["irm", "check", "--task", add.to_str().unwrap()]).status.code(), Some(0));

    let solve = run(&[
        "irm",
        "solve",
        "--task",
        mult.to_str().unwrap(),
        "--split",
        data("split_10x10_l.json").to_str().unwrap(),
    ]);
    assert_eq!(solve.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&solve.stderr).contains("generative effect"));
    let solve = run(&[
        "irm",
        "solve",
        "--task",
        add.to_str().unwrap(),
        "--split",
        data("split_3x3_diag.json").to_str().unwrap(),
    ]);
    assert_eq!(solve.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&solve.stdout).contains("\"max_err\": \"0\""));
}

#[test]
fn bound_rejects_unsupported_learner() {
    let out = run(&[
        "bound",
        "--task",
        data("task_2x2.json").to_str().unwrap(),
        "--split",
        data("split_2x2_l.json").to_str().unwrap(),
        "--learner",
        "profile-sampler",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn every_verb_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let failures = common::determinism_failures(dir.path());
    assert!(failures.is_empty(), "{failures:?}");
    assert!(dir.path().join("out/exp/ex1.svg").exists());
    assert!(dir.path().join("out/nfl/manifest.json").exists());
}

#[test]
fn generated_tasks_round_trip_and_validate() {
    let sizes = FactorSizes::new(3, 3).unwrap();
    for seed in 0..100 {
        let mut rng = stream(seed, "generate");
        for family in [
            random_irm_lattice(&mut rng, sizes, 3, false).unwrap(),
            random_irm_positional(&mut rng, sizes, 3).unwrap(),
            random_generic(&mut rng, sizes, 3, false).unwrap(),
        ] {
            let text = family_to_json(&family).unwrap();
            let back = parse_family(&text).unwrap();
            assert!(validate_family(&back).is_valid(), "seed {seed}");
            assert_eq!(family_to_json(&back).unwrap(), text);
        }
    }
    let m = parse_family(&family_to_json(&multiplication_task().unwrap()).unwrap()).unwrap();
    assert!(validate_family(&m).is_valid());
}
