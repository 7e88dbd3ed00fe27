use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_refcov"));
    c.env_remove("REFCOV_CACHE_DIR");
    c
}

fn tmpdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("refcov-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(c: &mut Command) -> (i32, String, String) {
    let out = c.output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn verify_b2_all_passes() {
    let d = tmpdir("b2");
    let (code, out, err) = run(bin().args(["verify", "--group", "B2", "--checks", "all", "--cache-dir"]).arg(&d));
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
    assert!(v["records"].as_array().unwrap().len() > 20);
}

#[test]
fn h4_refused_without_flag() {
    let (code, _, err) = run(bin().args(["verify", "--group", "H4", "--no-cache"]));
    assert_eq!(code, 2);
    assert!(err.contains("--allow-long"), "{err}");
}

#[test]
fn invalid_check_for_group_is_usage_error() {
    let (code, _, err) = run(bin().args(["verify", "--group", "A2", "--checks", "little-adjoint", "--no-cache"]));
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = run(bin().args(["verify", "--group", "Z9", "--no-cache"]));
    assert_eq!(code, 2);
    let (code, _, _) = run(bin().args(["verify", "--bogus-flag"]));
    assert_eq!(code, 2);
}

#[test]
fn series_a2_reflection() {
    let (code, out, _) = run(bin().args(["series", "--group", "A2", "--char", "reflection"]));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    // (1+u^3)(u+u^2+u^3+u^4)
    assert_eq!(v["coefficients"], serde_json::json!([0, 1, 1, 1, 2, 1, 1, 1]));
    assert_eq!(v["offset"], 0);
}

#[test]
fn constants_b2() {
    let d = tmpdir("const");
    let (code, out, err) = run(bin().args(["constants", "--group", "B2", "--cache-dir"]).arg(&d));
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["constants"]["k"][0][0], "2");
}

#[test]
fn cache_build_inspect_purge() {
    let d = tmpdir("cache");
    let (code, out, _) = run(bin().args(["cache", "build", "--group", "A2"]).env("REFCOV_CACHE_DIR", &d));
    assert_eq!(code, 0);
    assert!(out.contains("6 elements, 3 roots"), "{out}");
    let (_, out, _) = run(bin().args(["cache", "build", "--group", "A2"]).env("REFCOV_CACHE_DIR", &d));
    assert!(out.contains("up to date"), "{out}");
    let (_, out, _) = run(bin().args(["cache", "inspect", "--cache-dir"]).arg(&d));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["entries"][0]["order"], 6);
    assert_eq!(v["entries"][0]["roots"], 3);
    let (code, out, _) = run(bin().args(["cache", "purge", "--cache-dir"]).arg(&d));
    assert_eq!(code, 0);
    assert!(out.contains("removed 1"));
    let (code, _, _) = run(bin().args(["verify", "--group", "A2", "--checks", "molien", "--cache-dir"]).arg(&d));
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_dir(&d).unwrap().count(), 1);
}

#[test]
fn config_file_and_flag_precedence() {
    let d = tmpdir("cfg");
    let cfg = d.join("suite.toml");
    std::fs::write(&cfg, "groups = [\"A1\"]\nchecks = \"molien,solomon\"\nseed = 4\nemit = \"text\"\n").unwrap();
    let (code, out, err) = run(bin().args(["verify", "--no-cache", "--config"]).arg(&cfg));
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("PASS") && out.contains("A1"), "{out}");
    let (code, out, _) = run(bin().args(["verify", "--no-cache", "--emit", "json", "--group", "A2", "--config"]).arg(&cfg));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["config"]["groups"], serde_json::json!(["A2"]));
    assert_eq!(v["config"]["seed"], 4);
}

#[test]
fn reports_are_byte_identical() {
    let d = tmpdir("det");
    let args = ["verify", "--group", "A2,I2(5)", "--checks", "differentials,constants,j2-invariance", "--seed", "7"];
    let (c1, a, _) = run(bin().args(args).arg("--cache-dir").arg(&d));
    let (c2, b, _) = run(bin().args(args).arg("--cache-dir").arg(&d));
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
}
