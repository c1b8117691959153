use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sc-arrays"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(pres: &Path, args: &[&str]) -> (i32, String) {
    let out = bin().arg("--presentation").arg(pres).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn check_verdicts_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.txt", "gens: a b\nlambda: 1/33\na^34\nb^35\n");
    let comm = write(&dir, "comm.txt", "gens: a b\nlambda: 1/6\na b A B\n");
    let bad = write(&dir, "bad.txt", "gens: a b\nlambda: 1/6\na q\n");
    assert_eq!(run(&good, &["check"]).0, 0);
    assert_eq!(run(&comm, &["check"]).0, 1);
    assert_eq!(run(&bad, &["check"]).0, 2);
    assert_eq!(run(&dir.path().join("missing.txt"), &["check"]).0, 2);
    assert_eq!(run(&good, &["--mode", "paper", "--mu", "1/5", "check"]).0, 2);
    assert_eq!(run(&good, &["no-such-command"]).0, 2);
}

#[test]
fn family_eight_fails_the_check() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("gens: a b\nlambda: 1/6\n");
    for k in 1..=7 {
        text.push_str(&format!("a b^{k} "));
    }
    text.push('\n');
    let p8 = write(&dir, "p8.txt", &text);
    let out = dir.path().join("p8.json");
    let (code, _) = run(&p8, &["--report", out.to_str().unwrap(), "check"]);
    assert_eq!(code, 1);
    let r = report(&out);
    assert_eq!(r["summary"]["fail"], 1);
}

#[test]
fn report_schema() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.txt", "gens: a b\nlambda: 1/33\na^34\nb^35\n");
    let out = dir.path().join("r.json");
    let (code, _) = run(&p, &["--samples", "5", "--report", out.to_str().unwrap(), "verify", "--suite", "xi-drift"]);
    assert_eq!(code, 0);
    let r = report(&out);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["checks", "command", "config", "schema", "summary"]);
    assert_eq!(r["schema"], "sc-arrays-report/1");
    for c in r["checks"].as_array().unwrap() {
        for k in ["name", "params", "pairs_tested", "bound", "max_observed", "verdict"] {
            assert!(c.get(k).is_some(), "check lacks {k}: {c}");
        }
        if let Some(b) = c["bound"].as_object() {
            assert!(b.contains_key("exact") && b.contains_key("decimal"));
        }
    }
    let s = &r["summary"];
    assert_eq!(s["fail"], 0);
    assert!(s["pass"].as_u64().unwrap() > 0);
}

#[test]
fn free_group_drift_is_vacuous() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "free.txt", "gens: a b\nlambda: 1/33\n");
    let (code, _) = run(&p, &["--samples", "5", "verify", "--suite", "xi-drift"]);
    assert_eq!(code, 0);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.txt", "gens: a b\nlambda: 1/33\n(a b)^17\n");
    let mut texts = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("r{i}.json"));
        let (code, _) = run(&p, &["--seed", "7", "--samples", "6", "--report", out.to_str().unwrap(), "verify", "--suite", "phi"]);
        assert_eq!(code, 0);
        texts.push(std::fs::read_to_string(&out).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    let other = dir.path().join("r2.json");
    run(&p, &["--seed", "8", "--samples", "6", "--report", other.to_str().unwrap(), "verify", "--suite", "phi"]);
    assert_eq!(report(&other)["schema"], "sc-arrays-report/1");
}

#[test]
fn embed_writes_a_presentation() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "short.txt", "gens: x y\nlambda: 1/1000\n(x y)^17\n");
    let (code, stdout) = run(&p, &["embed", "--N", "1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("gens: a1 a2 b c a1' a2' b' c'"), "{}", &stdout[..stdout.len().min(200)]);
}
