//! Command-line behavior: exit codes, byte-stable JSON, and
//! schedule-independent search output.

use std::io::Write;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_newton-shape"))
}

fn write_tmp(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("newton-shape-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "{contents}").unwrap();
    path
}

#[test]
fn parse_round_trips_and_reports_errors() {
    let good = write_tmp("good.txt", "x^(-1/3) + 2*x*y^2");
    let out = bin().arg("parse").arg(&good).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim(), "2*x*y^2 + x^(-1/3)");

    let bad = write_tmp("bad.txt", "x + + y");
    let out = bin().arg("parse").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "parse errors exit with 2");
}

#[test]
fn usage_errors_exit_with_one() {
    let out = bin().arg("search").arg("--max").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin()
        .args(["search", "--min", "9", "--max", "3", "--profile", "table1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn pipeline_violation_exits_with_three() {
    // A wrong-shaped pair trips the stage-0 guard.
    let p = write_tmp("pl_p.txt", "x + y");
    let q = write_tmp("pl_q.txt", "x - y");
    let out = bin()
        .arg("pipeline")
        .arg(&p)
        .arg(&q)
        .args(["--m", "3", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("assumption violated at stage shape-guard"));
}

#[test]
fn json_output_is_byte_stable() {
    let run = || {
        bin()
            .args(["search", "--max", "15", "--profile", "table1", "--json"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
    let x = |threads: &str| {
        bin()
            .args(["xlist", "--bound", "40", "--json"])
            .env("NEWTON_SHAPE_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    // Output is independent of the parallel schedule.
    assert_eq!(x("1"), x("4"));
}

#[test]
fn bracket_command_reports_the_constant() {
    let p = write_tmp("br_p.txt", "x^2*y + x^6*y^2 + 6*x^8*y^3 + 9*x^10*y^4");
    let q = write_tmp(
        "br_q.txt",
        "x^-1 + 2*x^3*y + 18*x^5*y^2 + 36*x^7*y^3 \
         + 8*x^9*y^3 + 72*x^11*y^4 + 216*x^13*y^5 + 216*x^15*y^6",
    );
    let out = bin().arg("bracket").arg(&p).arg(&q).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "1");
    assert!(text.contains("jacobian pair: yes (constant 1)"));
}

#[test]
fn auto_applies_flips_and_shifts() {
    let p = write_tmp("auto_p.txt", "x^12*y^4 + 5*x^8*y^3");
    let out = bin()
        .arg("auto")
        .arg(&p)
        .args(["--flip", "psi3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "5*x*y^3 + y^4"
    );
    let p = write_tmp("auto_q.txt", "y^2");
    let out = bin()
        .arg("auto")
        .arg(&p)
        .args(["--elem", "2", "-1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "y^2 + 4*x^-1*y + 4*x^-2"
    );
}

#[test]
fn rand_pair_is_deterministic_in_the_seed() {
    let run = || {
        bin()
            .args(["rand-pair", "--seed", "11", "--steps", "9"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("[P,Q] = 1"));
}

#[test]
fn analyze_reports_directions() {
    let p = write_tmp("an_p.txt", "x^2 + y^3 + 1");
    let out = bin().arg("analyze").arg(&p).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("hull: (0,0) (2,0) (0,3)"));
    assert!(text.contains("Dir(P): {(3,2), (-1,0), (0,-1)}"));
}
