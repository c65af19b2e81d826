use std::path::Path;
use std::process::{Command, Output};

use kmono::SectionFile;
use kmono_core::{MonogenicComplex, Section, Tag};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn kmono(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmono")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn dims_table_for_spin_six() {
    let out = kmono(&["dims", "--k", "6"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for row in [
        "l = 0: dim V = 84, dim scriptV = 84",
        "l = 1: dim V = 224, dim scriptV = 189",
        "l = 2: dim V = 210, dim scriptV = 140",
        "l = 3: dim V = 80, dim scriptV = 35",
        "l = 4: dim V = 10, dim scriptV = 0",
    ] {
        assert!(text.contains(row), "missing {row:?} in\n{text}");
    }
    assert_eq!(code(&kmono(&["dims", "--k", "0"])), 2);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&kmono(&["verify", "complex", "--k", "3"])), 2);
    assert_eq!(code(&kmono(&["verify", "nonsense", "--k", "6"])), 2);
    assert_eq!(code(&kmono(&["verify", "estimate", "--k", "5"])), 2);
    assert_eq!(code(&kmono(&["symbol", "exactness", "--k", "6", "--v", "0,0,0,0,0,0"])), 2);
    assert_eq!(code(&kmono(&["symbol", "exactness", "--k", "6", "--v", "1,2"])), 2);
    assert_eq!(code(&kmono(&["symbol", "exactness", "--k", "6"])), 2);
    assert_eq!(code(&kmono(&["symbol", "preimage", "--k", "6", "--level", "3", "--v", "1,0,0,0,0,0"])), 2);
    assert_eq!(code(&kmono(&["--bogus"])), 2);
}

#[test]
fn verification_suites_pass() {
    let out = kmono(&["verify", "commutator", "--k", "6", "--degree", "2"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = kmono(&["--json", "verify", "estimate", "--k", "6", "--l", "1", "--trials", "4", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["pass"], true);
    assert_eq!(r["seed"], 1);
    let out = kmono(&["verify", "estimate", "--k", "5", "--l", "2", "--trials", "2", "--exploratory"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("outside hypothesis"));
    let out = kmono(&["verify", "complex", "--k", "4", "--trials", "2", "--degree", "2"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn symbol_commands() {
    let out = kmono(&["--json", "symbol", "exactness", "--k", "6", "--samples", "2", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["pass"], true);
    let out = kmono(&["symbol", "preimage", "--k", "6", "--level", "2", "--v", "1,0,0,0,0,0"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("[pass] sigma_2 Xi = xi"));
    let out = kmono(&["symbol", "preimage", "--k", "6", "--level", "1", "--v", "1/2,-1,0,0,2,0", "--count", "2"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn random_field_is_reproducible_and_contraction_free() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = kmono(&["random-field", "--k", "6", "--level", "1", "--degree", "2", "--seed", "9", "--output", p(path)]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let s = SectionFile::read(&a).unwrap();
    assert_eq!(s.tag(), Tag::ScriptV);
    assert!(s.contract().unwrap().is_zero());
    assert_eq!(s.degree(), Some(2));
    let c = dir.path().join("c.json");
    kmono(&["random-field", "--k", "6", "--level", "1", "--degree", "2", "--seed", "10", "--output", p(&c)]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn solve_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let f_path = dir.path().join("f.json");
    let u_path = dir.path().join("u.json");
    let out = kmono(&[
        "random-field", "--k", "6", "--level", "0", "--degree", "2", "--seed", "3", "--apply-d", "--output", p(&f_path),
    ]);
    assert_eq!(code(&out), 0);
    let out = kmono(&["--json", "solve", "--k", "6", "--level", "0", "--input", p(&f_path), "--output", p(&u_path)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let r = json(&out);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "degree of u" && c["witness"] == "2"));
    assert!(checks.iter().any(|c| c["name"] == "weighted norm |u|^2"));
    // independent check of the written solution
    let cx = MonogenicComplex::new(6).unwrap();
    let f = SectionFile::read(&f_path).unwrap();
    let u = SectionFile::read(&u_path).unwrap();
    assert_eq!(cx.d(0, &u).unwrap(), f);
}

#[test]
fn solve_zero_gives_zero() {
    let dir = tempfile::tempdir().unwrap();
    let f_path = dir.path().join("zero.json");
    let u_path = dir.path().join("u.json");
    let cx = MonogenicComplex::new(6).unwrap();
    SectionFile::write(&Section::zero(cx.profile(2).unwrap(), Tag::ScriptV), &f_path).unwrap();
    let out = kmono(&["solve", "--k", "6", "--level", "1", "--input", p(&f_path), "--output", p(&u_path)]);
    assert_eq!(code(&out), 0);
    assert!(SectionFile::read(&u_path).unwrap().is_zero());
}

#[test]
fn solve_failures_and_refusals() {
    let dir = tempfile::tempdir().unwrap();
    let cx = MonogenicComplex::new(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let bad = dir.path().join("bad.json");
    SectionFile::write(&cx.random_section(2, 1, &mut rng).unwrap(), &bad).unwrap();
    let u = dir.path().join("u.json");
    let out = kmono(&["solve", "--k", "6", "--level", "1", "--input", p(&bad), "--output", p(&u)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("[FAIL] compatibility D_2 f = 0: upper"));
    assert!(!u.exists());

    // wrong level for the file, malformed JSON, missing file
    assert_eq!(code(&kmono(&["solve", "--k", "6", "--level", "0", "--input", p(&bad), "--output", p(&u)])), 2);
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{\"k\": 6, \"l\": 2, \"tag\": \"V\"}").unwrap();
    assert_eq!(code(&kmono(&["solve", "--k", "6", "--level", "1", "--input", p(&garbage), "--output", p(&u)])), 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&kmono(&["solve", "--k", "6", "--level", "1", "--input", p(&missing), "--output", p(&u)])), 2);

    let cx5 = MonogenicComplex::new(5).unwrap();
    let g = cx5.random_section(1, 2, &mut rng).unwrap();
    let f5 = dir.path().join("f5.json");
    SectionFile::write(&cx5.d(1, &g).unwrap(), &f5).unwrap();
    let out = kmono(&["solve", "--k", "5", "--level", "1", "--input", p(&f5), "--output", p(&u)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("k >= 6"));
    let out = kmono(&["solve", "--k", "5", "--level", "1", "--input", p(&f5), "--output", p(&u), "--exploratory"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("outside hypothesis"));
    assert_eq!(cx5.d(1, &SectionFile::read(&u).unwrap()).unwrap(), cx5.d(1, &g).unwrap());
}

#[test]
fn section_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for k in [4usize, 6] {
        let cx = MonogenicComplex::new(k).unwrap();
        for l in 0..=3 {
            let s = cx.random_section(l, 1, &mut rng).unwrap();
            let path = dir.path().join(format!("s{k}{l}.json"));
            SectionFile::write(&s, &path).unwrap();
            assert_eq!(SectionFile::read(&path).unwrap(), s);
            let raw = cx.random_v_section(l, 1, &mut rng).unwrap();
            SectionFile::write(&raw, &path).unwrap();
            let back = SectionFile::read(&path).unwrap();
            assert_eq!(back, raw);
            assert_eq!(back.tag(), Tag::V);
        }
    }
}
