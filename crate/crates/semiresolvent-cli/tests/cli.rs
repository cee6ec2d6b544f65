use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiresolvent"))
        .args(args)
        .env("SEMIRESOLVENT_OUT", out)
        .output()
        .expect("binary runs")
}

fn text(o: &Output) -> (String, String) {
    (String::from_utf8_lossy(&o.stdout).into_owned(), String::from_utf8_lossy(&o.stderr).into_owned())
}

fn only_run_dir(root: &Path) -> std::path::PathBuf {
    let dirs: Vec<_> = std::fs::read_dir(root).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(dirs.len(), 1, "{dirs:?}");
    dirs[0].clone()
}

#[test]
fn free_escape_margin() {
    let tmp = tempfile::tempdir().unwrap();
    let o = cli(&["certify-escape", "--model", "free", "--E", "1"], tmp.path());
    let (out, _) = text(&o);
    assert_eq!(o.status.code(), Some(0));
    assert!(out.contains("margin c = 2.0"), "{out}");
    assert!(out.contains("[model]"), "the resolved config is echoed");
    let dir = only_run_dir(tmp.path());
    assert!(dir.file_name().unwrap().to_string_lossy().starts_with("certify-escape-"));
    assert!(dir.join("certify_escape.json").exists());
}

#[test]
fn weight_exponent_half_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = cli(&["resolvent-sweep", "--model", "M1", "--s", "0.5"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o).1.contains("requires s > 1/2"));
}

#[test]
fn misspelled_key_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.cfg");
    std::fs::write(&cfg, "[model]\nmodel = M1\ndimention = 1\n[energy]\nenergy = 1\n[sweep]\nh_list = 0.4, 0.2\n").unwrap();
    let o = cli(&["resolvent-sweep", "--config", cfg.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    let (_, err) = text(&o);
    assert!(err.contains("dimention") && err.contains("hint:"), "{err}");
}

#[test]
fn override_supersedes_file_and_reruns_are_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("free.cfg");
    std::fs::write(&cfg, "[model]\nmodel = M1\n[energy]\nenergy = 1\n[sweep]\nh_list = 0.3, 0.2, 0.1\n").unwrap();
    let out = tmp.path().join("runs");
    let args = ["resolvent-sweep", "--config", cfg.to_str().unwrap(), "--set", "h_list=0.4,0.2,0.1,0.05"];
    let first = cli(&args, &out);
    let (stdout, _) = text(&first);
    assert_eq!(first.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("h_list = 0.4, 0.2, 0.1, 0.05\n"));
    assert!(stdout.contains("global_power") && stdout.contains("truncated_power"));
    let dir = only_run_dir(&out);
    let json = std::fs::read(dir.join("resolvent_sweep.json")).unwrap();
    let csv = std::fs::read_to_string(dir.join("resolvent_sweep_norms.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert_eq!(cli(&args, &out).status.code(), Some(0));
    assert_eq!(only_run_dir(&out), dir);
    assert_eq!(std::fs::read(dir.join("resolvent_sweep.json")).unwrap(), json);

    let o = cli(&["report", dir.to_str().unwrap()], &out);
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o).0.contains("truncated_power [power]"));
}

#[test]
fn failed_certificate_still_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let o = cli(&["region-check", "--model", "M3", "--set", "diagnostic=false"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    let dir = only_run_dir(tmp.path());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("region_check.json")).unwrap()).unwrap();
    assert_eq!(v["certificates"][0]["pass"], serde_json::json!(false));
}

#[test]
fn identity_check_passes_on_coupled_model() {
    let tmp = tempfile::tempdir().unwrap();
    let o = cli(&["identity-check", "--model", "M4", "--set", "h_list=0.4,0.2"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", text(&o).0);
}

#[test]
fn usage_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(cli(&["no-such-command"], tmp.path()).status.code(), Some(2));
    assert_eq!(cli(&["region-check"], tmp.path()).status.code(), Some(2));
    assert_eq!(cli(&["report", tmp.path().join("missing").to_str().unwrap()], tmp.path()).status.code(), Some(2));
    assert_eq!(semiresolvent_cli::run(["semiresolvent", "window-scan", "--model", "M9"]), 2);
}
