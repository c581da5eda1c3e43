//! End-to-end tests of the command-line interface: pinned outputs, exit
//! statuses, round-trips and cache behavior.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cyclic-hall"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .env_remove("CYCLIC_HALL_CACHE")
        .output()
        .expect("binary runs")
}

fn run_cold(args: &[&str]) -> Output {
    let tmp = tempfile::tempdir().unwrap();
    run_in(tmp.path(), args)
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn version_banner() {
    let out = run_cold(&["--version"]);
    let text = stdout_of(&out);
    assert!(text.starts_with("cyclic-hall 0.1.0"), "got {text:?}");
}

#[test]
fn order_examples() {
    assert_eq!(stdout_of(&run_cold(&["order", "per(2){[0,1]:1}"])), "2\n");
    assert_eq!(stdout_of(&run_cold(&["order", "{[0,2]:2}"])), "6\n");
}

#[test]
fn fold_and_unfold() {
    let out = stdout_of(&run_cold(&["fold", "--m", "2", "{[0,1]:1;[2,3]:1}"]));
    assert_eq!(out, "per(2){[0,1]:2}\n");
    let out = stdout_of(&run_cold(&[
        "unfold",
        "--window",
        "-2:2",
        "per(2){[0,0]:2}",
    ]));
    assert_eq!(out.lines().count(), 6);
    // every line re-parses and folds back
    for line in out.lines() {
        let folded = stdout_of(&run_cold(&["fold", "--m", "2", line]));
        assert_eq!(folded, "per(2){[0,0]:2}\n");
    }
}

#[test]
fn closure_examples() {
    assert_eq!(
        stdout_of(&run_cold(&["closure", "per(1){[0,0]:2}", "per(1){[0,1]:1}"])),
        "true\n"
    );
    assert_eq!(
        stdout_of(&run_cold(&["closure", "per(1){[0,1]:1}", "per(1){[0,0]:2}"])),
        "false\n"
    );
}

#[test]
fn hallpoly_length_two_semisimple() {
    let out = stdout_of(&run_cold(&[
        "hallpoly",
        "--M",
        "per(1){[0,0]:2}",
        "--N",
        "per(1){[0,0]:1}",
        "--P",
        "per(1){[0,0]:1}",
    ]));
    assert_eq!(out, "1+1*q\n");
}

#[test]
fn mult_single_value_with_stability() {
    let out = stdout_of(&run_cold(&[
        "mult",
        "--m",
        "2",
        "--x",
        "per(2){[0,0]:1}",
        "--xbar",
        "{[0,0]:1}",
    ]));
    assert_eq!(out, "1\nstable=yes\n");
    let out = stdout_of(&run_cold(&[
        "--format",
        "tsv",
        "mult",
        "--m",
        "2",
        "--x",
        "per(2){[0,0]:1}",
        "--xbar",
        "{[0,0]:1}",
    ]));
    assert_eq!(out, "1\tstable=yes\n");
}

#[test]
fn pik_a2_level_one() {
    let out = stdout_of(&run_cold(&["pik", "--type", "A2", "--k", "1"]));
    assert_eq!(out, "(1,0;0)\n(0,1;0)\n(-1,-1;1)\n");
}

#[test]
fn dim_and_orbit_examples() {
    assert_eq!(stdout_of(&run_cold(&["dim", "--type", "A2", "--k", "2"])), "4\n");
    assert_eq!(stdout_of(&run_cold(&["dim", "--type", "A3", "--k", "5"])), "125\n");
    assert_eq!(
        stdout_of(&run_cold(&["orbits", "--type", "A3", "--k", "1"])),
        "16\n"
    );
    assert_eq!(
        stdout_of(&run_cold(&["orbits", "--type", "A1", "--k", "1", "--direct"])),
        "4\n"
    );
}

#[test]
fn canonical_pair_round_trip() {
    let out = stdout_of(&run_cold(&[
        "canonical-pair",
        "pair(-1){(per(2){[0,2]:1},a,-1)}",
    ]));
    assert_eq!(out, "pair(-1){(per(2){[1,3]:1},a,0)}\n");
    // idempotent through the CLI
    let again = stdout_of(&run_cold(&["canonical-pair", out.trim()]));
    assert_eq!(again, out);
}

#[test]
fn exit_codes() {
    // parse error -> 2
    let out = run_cold(&["order", "{[1,0]:1}"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty(), "no partial output on error");
    // size limit -> 3
    let out = run_cold(&["canon", "--m", "1", "--dv", "9"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    // precondition violation -> 4
    let out = run_cold(&[
        "mult",
        "--x",
        "per(2){[0,0]:1}",
        "--xbar",
        "{[0,1]:1}",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(out.stdout.is_empty());
    // clap usage error -> 2
    let out = run_cold(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn structured_output_is_json() {
    let out = stdout_of(&run_cold(&[
        "--format",
        "structured",
        "order",
        "per(3){[0,0]:1}",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "order");
    assert_eq!(v["order"], 1);
}

#[test]
fn decomp_matrix_m1_d2() {
    let out = stdout_of(&run_cold(&["decomp", "--m", "1", "--dv", "2"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[1], "label\t0\tper(1){[0,0]:2}");
    assert_eq!(lines[2], "label\t1\tper(1){[0,1]:1}");
    assert_eq!(lines[3], "1\t0");
    assert_eq!(lines[4], "1\t1");
}

#[test]
fn linear_quiver_canon_and_decomp() {
    let out = stdout_of(&run_cold(&["decomp", "--window", "0:1", "--dv", "1,1"]));
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("# algebra=inf[0,1] dv=1,1"));
    assert_eq!(lines[3], "1\t0");
    assert_eq!(lines[4], "1\t1");
    let out = stdout_of(&run_cold(&["canon", "--window", "0:1", "--dv", "1,1"]));
    assert!(out.contains("F->B"));
    assert!(out.contains("B->F"));
    // the nonsplit class corrects by v against the split one
    assert!(out.contains("(1:1)"));
    // dimension vector arity is validated against the window
    let bad = run_cold(&["canon", "--window", "0:2", "--dv", "1,1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn cache_warm_and_cold_runs_agree() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["canon", "--m", "2", "--dv", "1,1"];
    let cold = stdout_of(&run_in(tmp.path(), &args));
    assert!(tmp.path().join("canon.cache").exists());
    assert!(tmp.path().join("hallpoly.cache").exists());
    let warm = stdout_of(&run_in(tmp.path(), &args));
    assert_eq!(cold, warm);
    // a no-cache run in a fresh directory matches as well
    let fresh = stdout_of(&run_cold(&["--no-cache", "canon", "--m", "2", "--dv", "1,1"]));
    assert_eq!(cold, fresh);
}

#[test]
fn corrupt_cache_is_ignored() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("hallpoly.cache"), "garbage\nnoise|line\n").unwrap();
    std::fs::write(tmp.path().join("canon.cache"), "cyclic-hall canon v1 0000\nbad|rec\n").unwrap();
    let out = stdout_of(&run_in(tmp.path(), &["decomp", "--m", "1", "--dv", "2"]));
    assert!(out.contains("1\t1"));
}

#[test]
fn hostile_cache_records_with_matching_header_are_skipped() {
    // records under a valid header but with malformed bodies (wrong dv
    // arity, bogus matrices, truncated fields) must not disturb results
    let tmp = tempfile::tempdir().unwrap();
    let good = stdout_of(&run_in(tmp.path(), &["canon", "--m", "2", "--dv", "1,1"]));
    let canon_path = tmp.path().join("canon.cache");
    let mut contents = std::fs::read_to_string(&canon_path).unwrap();
    contents.push_str("2|1,1,1|0000000000000000|(0:1)\n");
    contents.push_str("2|1|ffffffffffffffff|not,a;matrix\n");
    contents.push_str("1|2|\n");
    std::fs::write(&canon_path, contents).unwrap();
    let again = stdout_of(&run_in(tmp.path(), &["canon", "--m", "2", "--dv", "1,1"]));
    assert_eq!(good, again);
}

#[test]
fn cache_env_var_is_honored() {
    let tmp = tempfile::tempdir().unwrap();
    let cache_dir = tmp.path().join("cachehome");
    let out = bin()
        .args(["hallpoly", "--M", "per(1){[0,1]:1}", "--N", "per(1){[0,0]:1}", "--P", "per(1){[0,0]:1}"])
        .current_dir(tmp.path())
        .env("CYCLIC_HALL_CACHE", &cache_dir)
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1\n");
    assert!(cache_dir.join("hallpoly.cache").exists());
    // flag overrides environment
    let flag_dir = tmp.path().join("flagged");
    let out = bin()
        .args([
            "--cache-dir",
            flag_dir.to_str().unwrap(),
            "hallpoly",
            "--M",
            "per(1){[0,1]:1}",
            "--N",
            "per(1){[0,0]:1}",
            "--P",
            "per(1){[0,0]:1}",
        ])
        .current_dir(tmp.path())
        .env("CYCLIC_HALL_CACHE", tmp.path().join("ignored"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(flag_dir.join("hallpoly.cache").exists());
    assert!(!tmp.path().join("ignored").exists());
}

#[test]
fn induce_report_format() {
    let out = stdout_of(&run_cold(&["induce", "--m", "2", "--xbar", "{[0,1]:1}"]));
    let mut lines = out.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# xbar={[0,1]:1} m=2 window="));
    assert!(header.ends_with("stable=yes"));
    for line in lines {
        let (label, mult) = line.split_once('\t').unwrap();
        let _: cyclic_hall_core::multiseg::PeriodicMultisegment = label.parse().unwrap();
        let _: u64 = mult.parse().unwrap();
    }
}

#[test]
fn delta_report() {
    let out = stdout_of(&run_cold(&[
        "delta",
        "--x",
        "per(2){[0,0]:1}",
        "--window",
        "-2:3",
    ]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[1], "{[-2,-2]:1}\t1");
    assert_eq!(lines[2], "{[0,0]:1}\t1");
    assert_eq!(lines[3], "{[2,2]:1}\t1");
}
