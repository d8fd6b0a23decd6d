//! End-to-end checks of the binary: exit codes, output formats, and
//! byte-level determinism.

use std::process::{Command, Output};

fn flaglab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flaglab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn weights_check_passes_on_the_default_preset() {
    let out = flaglab(&["weights-check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["module"], "weights");
    let items = v["report"].as_array().unwrap();
    assert_eq!(items.len(), 6);
    for item in items {
        assert_ne!(item["report"]["verdict"], "FAIL");
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let a = flaglab(&["weights-check", "--K", "4096"]);
    let b = flaglab(&["weights-check", "--K", "4096"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn op_build_dumps_the_identity_for_unit_coupling_on_equal_spaces() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("same.toml");
    std::fs::write(
        &cfg,
        "N = 8\n\n[alpha]\nkind = \"power\"\nexponent = 0.0\n\n[beta]\nkind = \"power\"\nexponent = 0.0\n",
    )
    .unwrap();
    let out = flaglab(&["op-build", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let real = v["report"]["real"].as_array().unwrap();
    for (r, row) in real.iter().enumerate() {
        for (c, x) in row.as_array().unwrap().iter().enumerate() {
            let expected = if r == c { 1.0 } else { 0.0 };
            assert_eq!(x.as_f64().unwrap(), expected, "entry ({r}, {c})");
        }
    }
    assert_eq!(v["report"]["exactness"], "exact-compression");
}

#[test]
fn degenerate_witness_exits_one() {
    // At N = 64 the Möbius conjugation's condition estimate is infinite,
    // so the witness verdict is FAIL.
    let out = flaglab(&["sim-moebius", "--N", "64"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["verdict"], "FAIL");
}

#[test]
fn config_problems_exit_two() {
    let out = flaglab(&["weights-check", "--preset", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));

    let out = flaglab(&["weights-check", "--config", "/no/such/file.toml"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "this is not toml at all [").unwrap();
    let out = flaglab(&["weights-check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // CSV has no defined layout for single witness reports.
    let out = flaglab(&["weights-check", "--csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("CSV"));
}

#[test]
fn sweep_emits_an_rfc_style_table() {
    let out = flaglab(&["sim-moebius", "--sweep", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.split("\r\n");
    assert_eq!(
        lines.next().unwrap(),
        "N,residual,condition-estimate,verdict"
    );
    let rows: Vec<&str> = lines.filter(|l| !l.is_empty()).collect();
    assert_eq!(rows.len(), 7);
    for row in rows {
        assert_eq!(row.split(',').count(), 4);
    }
}

#[test]
fn out_directory_gets_a_default_file_name() {
    let dir = tempfile::tempdir().unwrap();
    let out = flaglab(&[
        "obstruct",
        "--sweep",
        "--csv",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("obstruct.csv")).unwrap();
    assert!(text.starts_with("K,bound,t,k,k'\r\n"));
}

#[test]
fn matrix_csv_writes_real_and_imaginary_files() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("m.csv");
    let out = flaglab(&[
        "op-build",
        "--csv",
        "--N",
        "8",
        "--out",
        base.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let real = std::fs::read_to_string(dir.path().join("m.real.csv")).unwrap();
    let imag = std::fs::read_to_string(dir.path().join("m.imag.csv")).unwrap();
    assert!(real.starts_with("c0,c1,"));
    assert_eq!(real.lines().count(), 9);
    assert_eq!(imag.lines().count(), 9);

    // Without --out there is nowhere to put two files.
    let out = flaglab(&["op-build", "--csv", "--N", "8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn strict_weights_stops_on_unresolved_ratio_trend() {
    // Forward-ratio deviations 0.1, 0.15, 0.05, 0.02, 0.01 at the dyadic
    // checkpoints 1, 2, 4, 8, 16: the early bump breaks the
    // non-increasing trend (so basic-ratio is INCONCLUSIVE) while every
    // other condition stays clean — the growth index is attained at
    // k = 3 and the late ratios are flat.
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("wobble.toml");
    std::fs::write(
        &cfg,
        concat!(
            "N = 16\nK = 16\n\n[alpha]\nkind = \"explicit\"\n",
            "table = [1.0, 1.0, 1.1, 0.935, 0.935, 0.98175, 0.98175, 0.98175, 0.98175, ",
            "1.001385, 1.001385, 1.001385, 1.001385, 1.001385, 1.001385, 1.001385, 1.001385, ",
            "1.01139885]\n",
            "tail-ratio = 1.0\n\n[beta]\nkind = \"power\"\nexponent = -0.5\n",
        ),
    )
    .unwrap();
    let lenient = flaglab(&["weights-check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(lenient.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&lenient.stderr).contains("INCONCLUSIVE"));

    let strict = flaglab(&[
        "weights-check",
        "--config",
        cfg.to_str().unwrap(),
        "--strict-weights",
    ]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn thm41_composite_fails_cleanly_on_the_wide_gap_preset() {
    let out = flaglab(&["thm41", "--preset", "wide-gap"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["overall"], "FAIL");
    let steps = v["report"]["steps"].as_array().unwrap();
    assert_eq!(steps[2]["name"], "obstruction-growth");
    assert_eq!(steps[2]["verdict"], "FAIL");
}
