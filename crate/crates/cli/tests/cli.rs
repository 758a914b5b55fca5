use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn elcompl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elcompl")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("elcompl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn member_on_t1() {
    let t1 = fixture("t1.hoa");
    let o = elcompl(&["member", "-i", t1.to_str().unwrap(), "--period", "a"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "accepted\n");
}

#[test]
fn complement_then_check() {
    for name in ["buchi_nondet.hoa", "rabin_two_pairs.hoa", "general_el.hoa", "parity_min_odd4.hoa"] {
        let input = fixture(name);
        let out = tmp(&format!("c-{name}"));
        let o = elcompl(&["complement", "-i", input.to_str().unwrap(), "-o", out.to_str().unwrap(), "--report"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty(), "report goes to stderr");
        let o = elcompl(&["check", "-i", input.to_str().unwrap(), "-c", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        let text = stdout(&o);
        assert!(text.contains("\n0 violations\n") && text.contains("disjoint: yes"), "{name}: {text}");
    }
}

#[test]
fn check_reports_a_wrong_complement() {
    let a = fixture("buchi_infinitely_p.hoa");
    let o = elcompl(&["check", "-i", a.to_str().unwrap(), "-c", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("violation: "));
    assert!(text.contains("disjoint: no"));
}

#[test]
fn complement_reads_stdin_and_emits_hoa() {
    let text = std::fs::read_to_string(fixture("t2_cobuchi.hoa")).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_elcompl"))
        .args(["complement", "--to-ba"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("HOA: v1"));
    assert!(out.contains("Acceptance: 1 Inf(0)"), "{out}");
}

#[test]
fn selftest_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        let o = elcompl(&["selftest", "--classes", "ba,rabin", "--count", "6", "--seed", "5", "--threads", threads, "--json"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        stdout(&o)
    };
    let one = run("1");
    assert!(one.lines().count() > 0);
    for line in one.lines() {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
    assert_eq!(run("4"), one);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(elcompl(&["complement", "--backend", "magic"]).status.code(), Some(2));
    assert_eq!(elcompl(&["frobnicate"]).status.code(), Some(2));
    let bad = tmp("bad.hoa");
    std::fs::write(&bad, "HOA: v1\nStates: two\n--BODY--\n--END--\n").unwrap();
    assert_eq!(elcompl(&["classify", "-i", bad.to_str().unwrap()]).status.code(), Some(2));
    let t1 = fixture("t1.hoa");
    assert_eq!(elcompl(&["member", "-i", t1.to_str().unwrap(), "--period", "z"]).status.code(), Some(2));
    assert_eq!(elcompl(&["member", "-i", "/nonexistent.hoa", "--period", "a"]).status.code(), Some(2));
}

#[test]
fn budget_exceeded_exits_3() {
    let a = fixture("rabin_two_pairs.hoa");
    let o = elcompl(&["complement", "-i", a.to_str().unwrap(), "--budget", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn classify_prints_condition_data() {
    let a = fixture("rabin_two_pairs.hoa");
    let o = elcompl(&["classify", "-i", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("class: "));
    assert!(text.contains("dnf clauses: "));
    assert!(text.contains("minimal dual models: "));
}

#[test]
fn rundag_labels_and_exports_dot() {
    let a = fixture("buchi_infinitely_p.hoa");
    let dot = tmp("dag.dot");
    let o = elcompl(&["rundag", "-i", a.to_str().unwrap(), "--prefix", "a", "--period", "b", "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("labelled: ") || text.starts_with("stuck: "), "{text}");
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));
}

#[test]
fn stats_json_is_one_object() {
    let a = fixture("gba_two.hoa");
    let o = elcompl(&["stats", "-i", a.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v.is_object());
}
