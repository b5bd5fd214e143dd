use std::path::PathBuf;
use std::process::{Command, Output};

const FIG1_WORD: &str = "$0 t1 ah $1 a t2 ah ah $0 a a t3 ah ah $z a a t4 ah ah bh $1 \
                         a a b t5 ah bh $0 a b t6 ah bh bh $1 ; #";

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

fn fltl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fltl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn eval_verdicts_and_exit_codes() {
    let out = fltl(&["eval", "a U{1/2} b", "c b a a b b ; c"]);
    assert_eq!(stdout(&out), "true\n");
    assert_eq!(out.status.code(), Some(0));

    let out = fltl(&["eval", "a U{3/4} b", "c b a a b b ; c"]);
    assert_eq!(stdout(&out), "false\n");
    assert_eq!(out.status.code(), Some(1));

    let out = fltl(&["eval", "true", "x ; x"]);
    assert_eq!(stdout(&out), "true\n");
}

#[test]
fn eval_witness_and_table() {
    let out = fltl(&[
        "eval",
        "a U{1/2} b",
        "c b a a b b ; c",
        "--witness",
        "--table",
    ]);
    let text = stdout(&out);
    assert!(text.contains("witness j=4 count=2  a U{1/2} b"), "{text}");
    assert!(text.contains("1111110  a U{1/2} b"), "{text}");
}

#[test]
fn eval_errors_exit_2() {
    let out = fltl(&["eval", "a U{", "a ; a"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at byte"));

    let out = fltl(&["eval", "a", "a ; z", "--alphabet", "a,b"]);
    assert_eq!(out.status.code(), Some(2));

    let out = fltl(&["eval", "a"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn encode_by_search() {
    let out = fltl(&["encode", &fixture("fig1.mm"), "--search", "10", "4"]);
    assert_eq!(stdout(&out).trim(), FIG1_WORD);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn decode_example_word() {
    let out = fltl(&["decode", &fixture("fig1.mm"), FIG1_WORD]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 8);
    assert!(text.contains("t6 (l5,inc2,l6) -> C6 = (1,2)"));
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn decode_reports_violation() {
    let bad = FIG1_WORD.replacen("$1 a t2", "$1 a a t2", 1);
    let out = fltl(&["decode", &fixture("fig1.mm"), &bad]);
    assert_eq!(
        stdout(&out).trim(),
        "kind=carryover i=1 expected=(1,0) actual=(2,0)"
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn pipeline_identity() {
    let ids = ["t1", "t2", "t3", "t4", "t5", "t6"];
    let machine = fixture("fig1.mm");
    let mut args = vec!["encode", machine.as_str()];
    args.extend(ids);
    let word = stdout(&fltl(&args));
    let decoded = stdout(&fltl(&["decode", &machine, word.trim()]));
    let mut args = vec!["simulate", machine.as_str()];
    args.extend(ids);
    assert_eq!(decoded, stdout(&fltl(&args)));
}

#[test]
fn check_membership() {
    let machine = fixture("fig1.mm");
    assert_eq!(fltl(&["check", &machine, FIG1_WORD]).status.code(), Some(0));
    let bad = FIG1_WORD.replacen("$z", "$1", 1);
    let out = fltl(&["check", &machine, &bad]);
    assert_eq!(stdout(&out), "false\n");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reduce_output_is_satisfied_by_the_encoding() {
    let machine = fixture("fig1.mm");
    let dir = std::env::temp_dir().join(format!("fltl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_path = dir.join("fig1.fltl");
    let out_str = out_path.to_string_lossy().into_owned();
    assert_eq!(
        fltl(&["reduce", &machine, "--out", &out_str]).status.code(),
        Some(0)
    );
    let out = fltl(&["eval", &out_str, FIG1_WORD, "--machine", &machine]);
    assert_eq!(stdout(&out), "true\n");
    let bad = FIG1_WORD.replacen("t5 ah bh", "t5 ah ah bh", 1);
    let out = fltl(&["eval", &out_str, &bad, "--machine", &machine]);
    assert_eq!(stdout(&out), "false\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn machine_errors_name_the_file_and_line() {
    let out = fltl(&["simulate", &fixture("broken.mm"), "t1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("broken.mm") && err.contains("line 3"), "{err}");
}

#[test]
fn simulate_blocked_run() {
    let out = fltl(&[
        "simulate",
        &fixture("fig1.mm"),
        "t1",
        "t2",
        "t3",
        "t4",
        "t5",
        "t5",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftest_is_deterministic() {
    let a = fltl(&["selftest", "--seed", "42", "--budget", "small"]);
    assert_eq!(a.status.code(), Some(0));
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.contains(": ok (")), "{text}");
    let b = fltl(&["selftest", "--seed", "42", "--budget", "small"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timing_goes_to_stderr() {
    let out = fltl(&["eval", "a", "a ; a", "--timing"]);
    assert_eq!(stdout(&out), "true\n");
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("elapsed"));
}
