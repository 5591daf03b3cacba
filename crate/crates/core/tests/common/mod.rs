//! Helpers shared by the CLI tests and the acceptance runner.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const EPOCH: &str = "1700000000";

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_cgtheory"))
}

pub fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env("SOURCE_DATE_EPOCH", EPOCH)
        .env_remove("CGTHEORY_CAP")
        .output()
        .expect("binary runs")
}

fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).expect("readable dir") {
            let p = entry.expect("dir entry").path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.clone(), std::fs::read(&p).expect("readable file"));
            }
        }
    }
    out
}

/// Every verb with the arguments used for the determinism check; `{out}`
/// is replaced by a scratch directory and `{gen}` by a generated task path.
pub fn verb_invocations(scratch: &Path) -> Vec<(String, Vec<String>)> {
    let out = scratch.join("out");
    let d = |n: &str| data(n).display().to_string();
    let o = |n: &str| out.join(n).display().to_string();
    let mut v: Vec<(String, Vec<String>)> = vec![
        ("validate".into(), vec!["validate".into(), d("task_2x2.json"), "--out".into(), o("validate")]),
        (
            "nfl".into(),
            vec![
                "nfl".into(),
                "--skeleton".into(),
                d("reference_2x3.json"),
                "--out".into(),
                o("nfl"),
                "--seed".into(),
                "3".into(),
            ],
        ),
        (
            "bound".into(),
            [
                "bound",
                "--task",
                &d("task_2x2.json"),
                "--split",
                &d("split_2x2_l.json"),
                "--n",
                "20",
                "--gen-iid",
                "mc",
                "--trials",
                "50",
                "--seed",
                "9",
                "--out",
                &o("bound"),
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        ),
        (
            "irm check".into(),
            vec!["irm".into(), "check".into(), "--task".into(), o("gen-additive.json"), "--out".into(), o("check")],
        ),
        (
            "irm solve".into(),
            vec![
                "irm".into(),
                "solve".into(),
                "--task".into(),
                o("gen-additive.json"),
                "--split".into(),
                d("split_3x3_diag.json"),
                "--out".into(),
                o("solve"),
            ],
        ),
        (
            "experiment ex1".into(),
            [
                "experiment",
                "ex1",
                "--out",
                &o("exp"),
                "--seeds",
                "3",
                "--support-sizes",
                "10,50,90",
                "--function-count",
                "40",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        ),
        (
            "experiment ex2".into(),
            ["experiment", "ex2", "--out", &o("exp"), "--seeds", "3", "--support-sizes", "10,50,90"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        ),
        (
            "experiment kappa".into(),
            ["experiment", "kappa", "--n", "5,20", "--trials", "20", "--out", &o("kappa")]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        ),
    ];
    for kind in ["multiplication", "random-irm", "random-generic"] {
        v.push((
            format!("generate {kind}"),
            vec![
                "generate".into(),
                kind.into(),
                "--seed".into(),
                "4".into(),
                "--out".into(),
                o(&format!("gen-{kind}.json")),
            ],
        ));
    }
    // The additive task feeds the IRM verbs, so it goes first.
    v.insert(
        0,
        (
            "generate additive".into(),
            vec![
                "generate".into(),
                "additive".into(),
                "--seed".into(),
                "4".into(),
                "--out".into(),
                o("gen-additive.json"),
            ],
        ),
    );
    v
}

/// Runs every verb twice in the same directory and reports which ones
/// changed their stdout, exit status or any file they wrote.
pub fn determinism_failures(scratch: &Path) -> Vec<String> {
    let invocations = verb_invocations(scratch);
    let out = scratch.join("out");
    let mut first = Vec::new();
    for (_, args) in &invocations {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        first.push(run(&args));
    }
    let files_first = snapshot(&out);
    let mut failures = Vec::new();
    for ((name, args), before) in invocations.iter().zip(&first) {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let again = run(&args);
        if again.stdout != before.stdout || again.status.code() != before.status.code() {
            failures.push(format!("{name}: stdout or status differs"));
        }
    }
    let files_second = snapshot(&out);
    if files_first.keys().ne(files_second.keys()) {
        failures.push("the set of written files differs".into());
    }
    for (p, bytes) in &files_first {
        if files_second.get(p) != Some(bytes) {
            failures.push(format!("{} differs", p.display()));
        }
    }
    failures
}
