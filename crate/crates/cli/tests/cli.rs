use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigUint;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_degencount"))
}

fn write(text: &str) -> PathBuf {
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let dir = std::env::temp_dir().join(format!("degencount-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("g{}.txt", NEXT.fetch_add(1, Ordering::Relaxed)));
    std::fs::write(&path, text).unwrap();
    path
}

fn cycle(n: usize) -> PathBuf {
    let body: String = (0..n).map(|i| format!("{} {}\n", i, (i + 1) % n)).collect();
    write(&body)
}

fn complete(n: usize) -> PathBuf {
    let mut body = format!("n {n}\n");
    for u in 0..n {
        for v in u + 1..n {
            body.push_str(&format!("{u} {v}\n"));
        }
    }
    write(&body)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn count(mode: &str, pattern: &PathBuf, host: &PathBuf, extra: &[&str]) -> Output {
    let mut args = vec!["count", mode, "--pattern", pattern.to_str().unwrap(), "--host", host.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn last_line(o: &Output) -> String {
    stdout(o).lines().last().unwrap_or("").trim().to_string()
}

#[test]
fn small_counts() {
    let k2 = write("0 1\n");
    let p3 = write("0 1\n1 2\n");
    let c5 = cycle(5);
    let c6 = cycle(6);
    let o = count("sub", &k2, &c6, &[]);
    assert!(o.status.success());
    assert_eq!(last_line(&o), "6");
    assert_eq!(last_line(&count("ind", &p3, &c5, &[])), "5");
    assert_eq!(last_line(&count("hom", &complete(3), &c5, &[])), "0");
    assert_eq!(last_line(&count("hom", &k2, &c6, &[])), "12");
    assert_eq!(last_line(&count("sub", &cycle(5), &complete(5), &[])), "12");
}

#[test]
fn json_output() {
    let o = count("sub", &cycle(4), &complete(6), &["--json", "--threads", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c: BigUint = v["count"].as_str().unwrap().parse().unwrap();
    assert_eq!(c, BigUint::from(45u32));
    assert_eq!(v["mode"], "sub");
    assert_eq!(v["degeneracy"], 5);
    assert!(v["orientations"].as_array().is_some_and(|a| !a.is_empty()));
    assert!(v["max_recursion_depth"].as_u64().is_some());
}

#[test]
fn oracle_agreement() {
    let host = complete(5);
    for mode in ["hom", "sub", "ind"] {
        let o = count(mode, &write("0 1\n1 2\n2 3\n"), &host, &["--oracle", "--json"]);
        assert!(o.status.success(), "{mode}: {}", stderr(&o));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["oracle"]["agrees"], true, "{mode}");
    }
}

#[test]
fn literal_policy_agrees() {
    let p = cycle(4);
    let h = complete(5);
    assert_eq!(last_line(&count("hom", &p, &h, &[])), last_line(&count("hom", &p, &h, &["--literal"])));
}

#[test]
fn expansion_lines() {
    let o = count("ind", &write("0 1\n1 2\n"), &cycle(5), &["--emit-expansion"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert!(lines.len() >= 2);
    for l in &lines[..lines.len() - 1] {
        let coeff = l.split_whitespace().next().unwrap();
        assert!(coeff.contains('/'), "{l}");
    }
}

#[test]
fn parse_errors_exit_two() {
    let bad = write("0 1\n1 2 3\n");
    let o = count("hom", &bad, &cycle(4), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    let dup = write("0 1\n1 0\n");
    assert_eq!(count("hom", &dup, &cycle(4), &[]).status.code(), Some(2));
    let missing = PathBuf::from("/nonexistent/degencount.txt");
    assert_eq!(count("hom", &missing, &cycle(4), &[]).status.code(), Some(2));
}

#[test]
fn size_bound_exits_three() {
    let o = count("hom", &complete(14), &cycle(4), &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("14"));
}

#[test]
fn gen_respects_degeneracy() {
    let o = run(&["gen", "--n", "4", "--d", "3"]);
    assert!(o.status.success());
    let edges = stdout(&o).lines().filter(|l| !l.starts_with('#') && !l.starts_with('n')).count();
    assert_eq!(edges, 6);

    let o = run(&["gen", "--n", "300", "--d", "2", "--seed", "5"]);
    let host = write(&stdout(&o));
    let json = count("hom", &write("0 1\n"), &host, &["--json"]);
    let v: Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert!(v["degeneracy"].as_u64().unwrap() <= 2);
    assert_eq!(v["host_vertices"], 300);

    assert_eq!(run(&["gen", "--n", "0", "--d", "1"]).status.code(), Some(2));
}

#[test]
fn analyze_reports() {
    let o = run(&["analyze", "--pattern", cycle(6).to_str().unwrap(), "--json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dtd_graph"], 3);
    assert_eq!(v["dtw_graph"], 2);

    let o = run(&["analyze", "--pattern", complete(6).to_str().unwrap(), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dtd_graph"], 1);
    assert_eq!(v["dtw_graph"], 1);

    let o = run(&["analyze", "--pattern", cycle(6).to_str().unwrap()]);
    assert!(stdout(&o).contains("c6"), "{}", stdout(&o));
}

#[test]
fn verify_passes_and_catches_mutation() {
    let o = run(&["verify", "--seeds", "4", "--max-pattern", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("0 failures"));

    let o = run(&["verify", "--seeds", "4", "--max-pattern", "3", "--inject-mutation"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL hom"), "{}", stdout(&o));

    let o = run(&["verify", "--seeds", "0"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("0 checks"));
}

#[test]
fn obstructions_written() {
    let dir = std::env::temp_dir().join(format!("degencount-obs-{}", std::process::id()));
    let o = run(&["obstructions", "--out", dir.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let files = std::fs::read_dir(&dir).unwrap().filter(|e| {
        e.as_ref().unwrap().path().extension().is_some_and(|x| x == "edges")
    });
    assert_eq!(files.count(), 16);
}

#[test]
fn bench_prints_slope() {
    let o = run(&["bench", "--pattern", write("0 1\n0 2\n").to_str().unwrap(), "--n", "200,400", "--json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["slope"].as_f64().is_some());
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}
