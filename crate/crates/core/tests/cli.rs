use std::process::{Command, Output};

fn ptmoments(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptmoments"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_bell() {
    let r = json(&ptmoments(&["analyze", "--family", "bell"]));
    let p3 = r["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["token"] == "p3ppt")
        .unwrap();
    assert_eq!(p3["violated"], true);
    assert!((r["negativity"]["A"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn analyze_ghz_separable() {
    let r = json(&ptmoments(&[
        "analyze",
        "--family",
        "ghz-noise",
        "--param",
        "alpha=0.9",
    ]));
    assert!(r["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .all(|v| v["violated"] == false));
    assert_eq!(r["oracle"]["entangled"], false);
}

#[test]
fn analyze_maximally_mixed_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mixed.json");
    let mut entries = vec!["[0,0]"; 16];
    for i in 0..4 {
        entries[i * 5] = "[0.25,0]";
    }
    std::fs::write(
        &path,
        format!("{{\"dims\":[2,2],\"matrix\":[{}]}}", entries.join(",")),
    )
    .unwrap();
    let r = json(&ptmoments(&[
        "analyze",
        "--file",
        path.to_str().unwrap(),
        "--criteria",
        "p3ppt,p3oppt,p5ppt",
    ]));
    let verdicts = r["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 6);
    assert!(verdicts
        .iter()
        .all(|v| v["margin"].as_f64().unwrap() >= -1e-15));
}

#[test]
fn oracle_reports_spectra() {
    let r = json(&ptmoments(&["oracle", "--family", "bell"]));
    let pt = r["partial_transposes"][0]["eigenvalues"]
        .as_array()
        .unwrap();
    assert!((pt[0].as_f64().unwrap() + 0.5).abs() < 1e-12);
    let r = json(&ptmoments(&[
        "oracle",
        "--family",
        "ghz-noise",
        "--param",
        "alpha=0.5",
    ]));
    assert!(
        (r["partial_transposes"][0]["min_eigenvalue"]
            .as_f64()
            .unwrap()
            + 0.1875)
            .abs()
            < 1e-12
    );
}

#[test]
fn sweep_writes_csv_and_footer() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let status = ptmoments(&[
        "sweep",
        "--family",
        "w-noise",
        "--steps",
        "25",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("beta,p1,p2,p3,p4,p5,margin_p3ppt"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 27);
    let b2: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# margin_p5ppt,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!((b2 - 0.778).abs() < 5e-4);
}

#[test]
fn sweep_knoll_over_gamma() {
    let out = ptmoments(&[
        "sweep",
        "--family",
        "knoll",
        "--param",
        "omega=0.12",
        "--param",
        "eta=0.21",
        "--step",
        "0.05",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let c: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# concurrence,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!((c - 0.649).abs() < 0.005);
}

#[test]
fn validation_failures_exit_2() {
    assert_eq!(
        ptmoments(&["analyze", "--family", "ghz-noise", "--param", "alpha=1.2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ptmoments(&["analyze", "--family", "bell", "--criteria", "p9ppt"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ptmoments(&[
            "analyze",
            "--family",
            "bell",
            "--kmax",
            "3",
            "--criteria",
            "p5ppt"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        ptmoments(&["sweep", "--family", "ghz-noise", "--to", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(ptmoments(&["analyze"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        "{\"dims\": [2],\n\"matrix\": [[1,0],[0,0],[0,0],[0,0], }",
    )
    .unwrap();
    let out = ptmoments(&["analyze", "--file", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let non_psd = dir.path().join("npsd.json");
    std::fs::write(
        &non_psd,
        r#"{"dims":[2],"matrix":[[1.5,0],[0,0],[0,0],[-0.5,0]]}"#,
    )
    .unwrap();
    assert_eq!(
        ptmoments(&["oracle", "--file", non_psd.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
