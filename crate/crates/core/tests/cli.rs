use std::process::{Command, Output};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qeuler-verify"))
        .args(args)
        .output()
        .expect("qeuler-verify runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

const SMALL: [&str; 8] = [
    "--n-max",
    "2",
    "--r-max",
    "1",
    "--q-samples",
    "2",
    "--truncation",
    "30",
];

#[test]
fn unit_weights_give_exact_symmetry() {
    let out = verify(&["--suite", "thm3", "--w-pair", "1,1", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let entries = report["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    assert!(entries.iter().all(|e| e["status"] == "pass_exact"));
    assert_eq!(report["summary"]["fail"], 0);
}

#[test]
fn reports_are_byte_identical_without_timings() {
    for suite in ["qbinom", "fermint", "thm4", "limit"] {
        let mut args = vec!["--suite", suite, "--omit-timings"];
        args.extend(SMALL);
        let a = verify(&args);
        let b = verify(&args);
        assert_eq!(a.status.code(), Some(0), "{suite}");
        assert_eq!(a.stdout, b.stdout, "{suite}");
    }
}

#[test]
fn report_shape() {
    let mut args = vec!["--suite", "representations", "--h", "-1", "--h", "2"];
    args.extend(SMALL);
    let report = json(&verify(&args));
    assert_eq!(report["spec_revision"], "1");
    assert_eq!(report["config"]["h_values"], serde_json::json!([-1, 2]));
    let entries = report["entries"].as_array().unwrap();
    for e in entries {
        for key in ["identity", "params", "lhs", "rhs", "status", "elapsed_ms"] {
            assert!(e.get(key).is_some(), "missing {key}");
        }
        let lhs = e["lhs"].as_str().unwrap();
        assert!(
            lhs.contains('/') && !lhs.contains('.') && !lhs.contains('e'),
            "{lhs}"
        );
    }
    let summary = &report["summary"];
    let total = ["pass_exact", "pass_within_bound", "fail"]
        .iter()
        .map(|k| summary[k].as_u64().unwrap())
        .sum::<u64>();
    assert_eq!(total as usize, entries.len());
    assert!(summary["per_suite"]["representations"].is_object());
}

#[test]
fn entries_are_sorted_by_params() {
    let mut args = vec!["--suite", "limit", "--omit-timings"];
    args.extend(SMALL);
    let report = json(&verify(&args));
    let keys: Vec<String> = report["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let p = e["params"].as_object().unwrap();
            p.iter()
                .map(|(k, v)| format!("{k}={}", v.as_str().unwrap()))
                .collect::<Vec<_>>()
                .join(";")
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn csv_and_markdown_formats() {
    let mut args = vec!["--suite", "qbinom", "--format", "csv", "--omit-timings"];
    args.extend(SMALL);
    let out = verify(&args);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("identity,params,lhs,rhs,status,bound,elapsed_ms")
    );
    assert!(lines.all(|l| l.starts_with("q_binomial_")));

    let mut args = vec!["--suite", "limit", "--format", "md"];
    args.extend(SMALL);
    let text = String::from_utf8(verify(&args).stdout).unwrap();
    assert!(text.contains("| identity | params |"));
    assert!(text.contains("| classical_limit |"));
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("qeuler-report-{}.json", std::process::id()));
    let path_str = path.to_str().unwrap();
    let mut args = vec!["--suite", "limit", "--out", path_str];
    args.extend(SMALL);
    let out = verify(&args);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["summary"]["fail"], 0);
    std::fs::remove_file(path).ok();
}

#[test]
fn injected_fault_fails_with_code_one() {
    let mut args = vec!["--suite", "thm3", "--inject-fault", "thm3-rhs-sign"];
    args.extend(SMALL);
    let out = verify(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["summary"]["fail"].as_u64().unwrap() >= 1);
}

#[test]
fn configuration_errors_exit_with_code_two() {
    for bad in [
        vec!["--w-pair", "2,3"],
        vec!["--w-pair", "3"],
        vec!["--suite", "everything"],
        vec!["--q-samples", "0"],
        vec!["--r-max", "0"],
        vec!["--format", "xml"],
        vec!["--truncation", "0"],
        vec!["--inject-fault", "nonsense"],
        vec!["--n-max", "-1"],
    ] {
        let out = verify(&bad);
        assert_eq!(out.status.code(), Some(2), "{bad:?}");
        assert!(out.stdout.is_empty(), "{bad:?}");
    }
}

#[test]
fn default_grid_has_no_failures() {
    let out = verify(&["--omit-timings"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["summary"]["fail"], 0);
    let suites = report["summary"]["per_suite"].as_object().unwrap();
    assert_eq!(suites.len(), 7);
}
