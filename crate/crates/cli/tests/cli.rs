use std::process::{Command, Output};

use serde_json::Value;

fn coarse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn witness_of_a_finitely_generated_group() {
    let out = coarse(&["witness", "--descriptor", "Z^2 + Z_6"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["target"], "Z^2");
    assert_eq!(v["witness"], "projection");
    assert_eq!(v["passed"], true);
    assert_eq!(v["window"]["radius_x"], 6);
    assert_eq!(v["config"]["descriptor"], "Z^2 + Z_6");
}

#[test]
fn witness_of_torsion_is_a_chain_match() {
    let out = coarse(&["witness", "--descriptor", "Z_2^inf"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["target"], "Q/Z");
    assert_eq!(v["witness"], "chain_match");
    assert!(v["chain_match"]["level_u"].as_u64().unwrap() > 0);
}

#[test]
fn asdim_of_the_plane() {
    let out = coarse(&[
        "asdim",
        "--descriptor",
        "Z^2",
        "--radius",
        "60",
        "--D",
        "3",
        "--colors-witness",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let cover = &v["covers"][0];
    assert_eq!(cover["colors"], 3);
    assert_eq!(cover["passed"], true);
    assert!(cover["cover"].as_array().unwrap().len() > 10);
    assert_eq!(v["passed"], true);
}

#[test]
fn asdim_falls_back_to_the_exact_search() {
    let out = coarse(&[
        "asdim",
        "--descriptor",
        "Z",
        "--radius",
        "10",
        "--D",
        "5",
        "--M",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "5,4,,,,,2"), "{text}");
}

#[test]
fn growth_of_the_heisenberg_group() {
    let out = coarse(&[
        "growth",
        "--descriptor",
        "UT3",
        "--N",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# schema 1 "));
    assert_eq!(lines.next(), Some("n,size"));
    assert!(text.lines().any(|l| l == "2,17"), "{text}");
}

#[test]
fn growthfit_labels_fitted_values() {
    let out = coarse(&["growthfit", "--descriptor", "Z^2", "--N", "40"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let d = v["fitted"]["degree"].as_f64().unwrap();
    assert!((d - 2.0).abs() < 0.1, "{d}");
    assert_eq!(v["tail"], serde_json::json!([20, 40]));
}

#[test]
fn reports_are_reproducible() {
    for args in [
        &[
            "verify",
            "--target",
            "axioms",
            "--descriptor",
            "UT3",
            "--radius",
            "3",
            "--samples",
            "500",
            "--seed",
            "9",
        ][..],
        &[
            "asdim",
            "--descriptor",
            "Z",
            "--radius",
            "16",
            "--D",
            "2",
            "--M",
            "3",
        ][..],
        &["modulus", "--descriptor", "Q/Z"][..],
    ] {
        let (a, b) = (coarse(args), coarse(args));
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    // the seed changes the samples but not the verdict
    let a = coarse(&[
        "verify",
        "--target",
        "axioms",
        "--descriptor",
        "Z^2",
        "--samples",
        "100",
        "--seed",
        "1",
    ]);
    assert_eq!(json(&a)["violations"], 0);
}

#[test]
fn every_subcommand_succeeds_on_a_small_case() {
    let cases: &[&[&str]] = &[
        &["ball", "--descriptor", "Z + Z_2", "--radius", "2", "--list"],
        &["growth", "--descriptor", "Z", "--N", "5"],
        &["growthfit", "--descriptor", "Z", "--N", "20"],
        &[
            "section",
            "--descriptor",
            "Z_2^inf",
            "--level",
            "6",
            "--eps",
            "4",
        ],
        &["section", "--descriptor", "Z", "--index", "3"],
        &["witness", "--descriptor", "Z + Z_3"],
        &["verify", "--target", "z-times-zn", "--n", "2"],
        &[
            "verify",
            "--target",
            "classification",
            "--descriptor",
            "Z_4 + Z_6",
        ],
        &[
            "verify",
            "--target",
            "axioms",
            "--descriptor",
            "Z_2^inf",
            "--radius",
            "6",
            "--samples",
            "200",
        ],
        &["modulus", "--descriptor", "Z^2 + Z_6"],
        &["asdim", "--descriptor", "Q/Z", "--radius", "4", "--D", "2"],
        &["orbit", "--descriptor", "UT3", "--x", "[0,1,0]"],
        &[
            "orbit",
            "--descriptor",
            "Z^2",
            "--x",
            "[1,2]",
            "--acting",
            "[[1,0]]",
        ],
        &[
            "distortion",
            "--descriptor",
            "Z^2",
            "--sub",
            "[[1,1]]",
            "--N",
            "10",
        ],
        &["doubling", "--descriptor", "Z", "--radius", "20"],
    ];
    for args in cases {
        let out = coarse(args);
        assert_eq!(
            code(&out),
            0,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = json(&out);
        assert_eq!(v["schema"], 1, "{args:?}");
        assert_eq!(v["status"], "ok", "{args:?}");
    }
}

#[test]
fn failed_verifications_exit_with_one() {
    let out = coarse(&["verify", "--target", "t4-center", "--radius", "6"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert_eq!(v["status"], "failed");
    assert!(!v["modulus_witness"].is_null());
    let grows = v["failures"]
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f.as_str().unwrap().starts_with("f: omega(1) grows"));
    assert!(grows, "{}", v["failures"]);
}

#[test]
fn budget_and_config_errors_exit_with_two() {
    let cases: &[&[&str]] = &[
        &["ball", "--descriptor", "Z^2 + ;"],
        &["growth", "--descriptor", "Q/Z"],
        &[
            "growth",
            "--descriptor",
            "UT3",
            "--N",
            "20",
            "--budget",
            "100",
        ],
        &[
            "growthfit",
            "--descriptor",
            "UT3",
            "--N",
            "20",
            "--budget",
            "100",
        ],
        &["section", "--descriptor", "UT3"],
        &["witness", "--descriptor", "UT3"],
        &["verify", "--target", "z-times-zn", "--n", "1"],
        &["modulus", "--descriptor", "Z^inf + Z_2"],
        &["asdim", "--descriptor", "Z^2", "--radius", "5", "--D", "3"],
        &["asdim", "--descriptor", "UT3", "--D", "3"],
        &["orbit", "--descriptor", "UT3", "--x", "not json"],
        &["distortion", "--descriptor", "Z", "--sub", "[[1, 2]]"],
        &["doubling", "--descriptor", "Z", "--radius", "1"],
    ];
    for args in cases {
        let out = coarse(args);
        assert_eq!(
            code(&out),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    // unknown flags are rejected by the parser
    assert_eq!(code(&coarse(&["ball", "--no-such-flag"])), 2);
}

#[test]
fn budget_errors_name_the_limit() {
    let out = coarse(&[
        "growth",
        "--descriptor",
        "UT3",
        "--N",
        "20",
        "--budget",
        "100",
    ]);
    let v = json(&out);
    assert_eq!(v["truncated"], true);
    assert!(v["error"].as_str().unwrap().contains("100"));
}

#[test]
fn reports_can_go_to_a_file() {
    let path = std::env::temp_dir().join(format!("coarse-report-{}.csv", std::process::id()));
    let out = coarse(&[
        "doubling",
        "--descriptor",
        "Z^2",
        "--radius",
        "8",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.lines().any(|l| l == "1,13/5"), "{text}");
}
