use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn biharm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biharm"))
        .args(args)
        .output()
        .unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn verify_corollary_flat_passes() {
    let out = biharm(&["verify", "--immersion", "corollary-flat", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = lines(&out);
    let checks: Vec<&str> = v.iter().filter_map(|r| r["check"].as_str()).collect();
    for c in [
        "legendrian",
        "c-parallel",
        "bitension",
        "flat-curvature",
        "shape-pattern",
        "corrected-identity",
    ] {
        assert!(checks.contains(&c), "{c} missing from {checks:?}");
    }
    let last = v.last().unwrap();
    assert_eq!(last["summary"]["failed"], 0);
    assert_eq!(
        last["summary"]["passed"].as_u64().unwrap() as usize,
        checks.len()
    );
    assert_eq!(last["config"]["immersion"], "corollary-flat");
    assert!(last["version"].is_string());
}

#[test]
fn unknown_immersion_is_a_usage_error() {
    let out = biharm(&["verify", "--immersion", "klein-bottle"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("klein-bottle"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(biharm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(biharm(&["solve", "--epsilon", "1"]).status.code(), Some(2));
    assert_eq!(
        biharm(&[
            "verify",
            "--immersion",
            "corollary-flat",
            "--tol-nonsense",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        biharm(&["verify", "--immersion", "thm1-flat", "--lambda", "-0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        biharm(&["solve", "--flat", "--epsilon", "-3.5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn tight_tolerance_fails_with_exit_one() {
    let out = biharm(&[
        "verify",
        "--immersion",
        "corollary-flat",
        "--samples",
        "4",
        "--tol-bitension",
        "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = lines(&out);
    let b = v.iter().find(|r| r["check"] == "bitension").unwrap();
    assert_eq!(b["pass"], false);
    assert!((b["tolerance"].as_f64().unwrap() / 1e-30 - 1.0).abs() < 1e-12);
    assert_eq!(v.last().unwrap()["summary"]["failed"], 1);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# run settings\nimmersion=great-sphere\nsamples=3\nseed=9\ntol-legendrian=1e-11\n",
    )
    .unwrap();
    let out = biharm(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--samples",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = lines(&out);
    let c = &v.last().unwrap()["config"];
    assert_eq!(c["immersion"], "great-sphere");
    assert_eq!(c["samples"], 4);
    assert_eq!(c["seed"], 9);
    assert_eq!(c["tolerances"]["legendrian"], 1e-11);

    fs::write(&cfg, "samples\n").unwrap();
    let bad = biharm(&[
        "verify",
        "--immersion",
        "great-sphere",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, args: &[&str]| {
        let p = dir.path().join(name);
        let mut full: Vec<&str> = args.to_vec();
        let ps = p.to_str().unwrap().to_string();
        full.extend(["--out", &ps]);
        assert_eq!(biharm(&full).status.code(), Some(0));
        fs::read(&p).unwrap()
    };
    let v = [
        "verify",
        "--immersion",
        "thm2-nonflat-plus",
        "--samples",
        "8",
        "--seed",
        "3",
    ];
    assert_eq!(run("a.jsonl", &v), run("b.jsonl", &v));
    let s = [
        "solve",
        "--flat",
        "--epsilon",
        "1",
        "--grid",
        "8",
        "--samples",
        "5",
    ];
    assert_eq!(run("c.jsonl", &s), run("d.jsonl", &s));
}

#[test]
fn solve_flat_reports_the_corollary_root() {
    let out = biharm(&["solve", "--flat", "--epsilon", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = lines(&out);
    let target = [
        -1.0 / 5f64.sqrt(),
        3.0 * 3f64.sqrt() / 10f64.sqrt(),
        -(3f64.sqrt()) / 10f64.sqrt(),
        2f64.sqrt(),
    ];
    let hit = v.iter().filter(|r| r["bucket"] == "validated").any(|r| {
        ["lambda", "a", "c", "d"]
            .iter()
            .zip(&target)
            .all(|(k, t)| (r[*k].as_f64().unwrap() - t).abs() < 1e-8)
    });
    assert!(hit);
    for r in v.iter().filter(|r| r["bucket"].is_string()) {
        for k in [
            "epsilon",
            "residual_printed",
            "residual_corrected",
            "bitension",
        ] {
            assert!(r.get(k).is_some(), "{k}");
        }
    }
}

#[test]
fn solve_nonflat_lists_both_branches() {
    let out = biharm(&["solve", "--nonflat", "--epsilon", "2", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = lines(&out);
    let corrected: Vec<&Value> = v.iter().filter(|r| r["branch"] == "corrected").collect();
    assert_eq!(corrected.len(), 2);
    assert!(corrected
        .iter()
        .all(|r| r["bitension"].as_f64().unwrap() < 1e-6));
    let printed = v.iter().find(|r| r["branch"] == "printed").unwrap();
    assert!(printed["bitension"].as_f64().unwrap() > 1.0);
}

#[test]
fn scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("scan.csv");
    let out = biharm(&[
        "scan",
        "--nonflat",
        "--epsilon",
        "2",
        "--mu2-min",
        "0.5",
        "--mu2-max",
        "3",
        "--steps",
        "50",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&p).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("mu2,residual"));
    let data: Vec<(f64, f64)> = rows
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(data.len(), 51);
    let best = data.iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    // grid minimum sits next to the corrected root (12+√69)/15
    assert!(
        (best.0 - (12.0 + 69f64.sqrt()) / 15.0).abs() < 0.05,
        "{best:?}"
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("local minimum"));
}

#[test]
fn scan_requires_the_nonflat_switch() {
    let out = biharm(&[
        "scan",
        "--epsilon",
        "2",
        "--mu2-min",
        "0.5",
        "--mu2-max",
        "3",
        "--steps",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_covers_every_shipped_immersion() {
    let out = biharm(&["report", "--samples", "4"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let v = lines(&out);
    let names: std::collections::BTreeSet<&str> =
        v.iter().filter_map(|r| r["immersion"].as_str()).collect();
    assert!(names.len() >= 10, "{names:?}");
}
