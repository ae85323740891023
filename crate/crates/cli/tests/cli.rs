use std::io::Write;
use std::process::{Command, Output, Stdio};

const WORKED_M1: &str = "n=12 m=1 blocks=(1:1)(2:3)(5:1)(6:1)(7:3)(10:1)(11:2)";
const WORKED_M2: &str = "n=12 m=2 blocks=(1:1)(2:3)(3:1)(5:1)(7:3)(8:1)(10:2)";

fn znap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_znap"))
        .args(args)
        .env_remove("ZNAP_MAX_NODES")
        .output()
        .expect("failed to run znap")
}

fn znap_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_znap"))
        .args(args)
        .env_remove("ZNAP_MAX_NODES")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("failed to run znap");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn count_subcommands() {
    let cases: [(&[&str], &str); 4] = [
        (&["count", "kaplansky", "--n", "6", "--k", "2"], "9"),
        (&["count", "generalized", "--n", "10", "--p", "2", "--k", "2"], "25"),
        (&["count", "msun", "--n", "13", "--m", "2", "--p", "1", "--k", "2"], "65"),
        (&["count", "cyclic-multinomial", "--n", "20", "--type", "1^8,2^3,3^2"], "19800"),
    ];
    for (args, want) in cases {
        let o = znap(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        assert_eq!(stdout(&o).trim(), want, "{args:?}");
    }
}

#[test]
fn out_of_regime_exits_two() {
    let o = znap(&["count", "msun", "--n", "12", "--m", "2", "--p", "2", "--k", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("out of regime"), "{}", stderr(&o));

    let o = znap(&["count", "cyclic-multinomial", "--n", "11", "--type", "1^4,2^1,3^2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_counts_and_listings() {
    let o = znap(&["enumerate", "partitions", "--n", "12", "--m", "2", "--type", "1^4,2^1,3^2", "--count-only"]);
    assert_eq!(stdout(&o).trim(), "180");

    let o = znap(&["enumerate", "dissections", "--n", "12", "--type", "1^4,2^1,3^2"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 180);
    assert!(lines.contains(&WORKED_M1.to_string()));

    let o = znap(&["enumerate", "partitions", "--n", "4", "--m", "1", "--type", "1^4"]);
    assert_eq!(stdout(&o), "n=4 m=1 blocks=(1:1)(2:1)(3:1)(4:1)\n");

    let o = znap(&["enumerate", "subsets", "--n", "6", "--m", "1", "--p", "1", "--k", "2"]);
    assert_eq!(stdout(&o).lines().count(), 9);
    assert!(stdout(&o).lines().any(|l| l == "{1,3}"));
}

#[test]
fn enumerate_json_lines_parse() {
    let o = znap(&["enumerate", "partitions", "--n", "4", "--m", "2", "--type", "2^2", "--format", "json"]);
    let heads: Vec<Vec<u64>> = stdout(&o)
        .lines()
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            assert_eq!(v["n"], 4);
            assert_eq!(v["m"], 2);
            v["blocks"]
                .as_array()
                .unwrap()
                .iter()
                .map(|b| b["head"].as_u64().unwrap())
                .collect()
        })
        .collect();
    assert_eq!(heads, vec![vec![1, 2], vec![1, 4], vec![2, 3], vec![3, 4]]);
}

#[test]
fn separate_worked_example_with_trace() {
    let o = znap(&["separate", WORKED_M1, "--to", "2", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), WORKED_M2);
    let trace = stderr(&o);
    assert!(trace.starts_with("start 7 (difference 1 -> 2)"), "{trace}");
    assert!(trace.contains("(7,9,11),(8),(10,12),(1),(2,4,6),(3),(5)"));
}

#[test]
fn separate_round_trips_through_stdin() {
    let forward = znap(&["separate", WORKED_M1, "--to", "2"]);
    let back = znap_stdin(&["separate", "--to", "1"], &stdout(&forward));
    assert_eq!(back.status.code(), Some(0), "{}", stderr(&back));
    assert_eq!(stdout(&back).trim(), WORKED_M1);

    let same = znap(&["separate", WORKED_M1, "--to", "1"]);
    assert_eq!(stdout(&same).trim(), WORKED_M1);
}

#[test]
fn separate_rejects_bad_inputs() {
    let shuffled = "n=12 m=1 blocks=(2:3)(1:1)(5:1)(6:1)(7:3)(10:1)(11:2)";
    let o = znap(&["separate", shuffled, "--to", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("normalize"));

    let o = znap(&["separate", shuffled, "--to", "2", "--normalize"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), WORKED_M2);

    // Technical condition fails for a difference of 3.
    let o = znap(&["separate", WORKED_M1, "--to", "3"]);
    assert_eq!(o.status.code(), Some(2));

    let o = znap(&["separate", WORKED_M1, "--to", "2", "--start", "2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = znap(&["separate", "n=4 m=1 blocks=(1:2)(2:2)", "--to", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn separate_accepts_json() {
    let json = r#"{"n":12,"m":1,"blocks":[{"head":1,"len":1},{"head":2,"len":3},{"head":5,"len":1},{"head":6,"len":1},{"head":7,"len":3},{"head":10,"len":1},{"head":11,"len":2}]}"#;
    let o = znap(&["separate", json, "--to", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["m"], 2);
    assert_eq!(v["blocks"][5]["head"], 8);
}

#[test]
fn inspect_lists_g_values() {
    let o = znap(&["inspect", WORKED_M2]);
    let out = stdout(&o);
    assert!(out.contains("type 1^4,2^1,3^2"));
    assert!(out.contains("head 7 block g=2"));
    assert!(out.contains("starting points 7"));
}

#[test]
fn budget_exhaustion_exits_four_and_truncate_succeeds() {
    let args = ["--max-nodes", "5", "enumerate", "partitions", "--n", "12", "--m", "1", "--type", "1^4,2^1,3^2"];
    let o = znap(&args);
    assert_eq!(o.status.code(), Some(4));

    let mut truncated = args.to_vec();
    truncated.insert(0, "--truncate");
    let o = znap(&truncated);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().count() < 180);

    let o = Command::new(env!("CARGO_BIN_EXE_znap"))
        .args(&args[2..])
        .arg("--count-only")
        .env("ZNAP_MAX_NODES", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn verify_sweeps_pass_and_emit_json() {
    for theorem in ["lemma1", "thm1", "thm2", "thm4", "prop2", "prop4"] {
        let o = znap(&["verify", theorem, "--n-max", "7", "--m-max", "2", "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{theorem}: {}", stderr(&o));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["theorem"], theorem);
        assert_eq!(v["all_pass"], true);
        assert_eq!(v["failed"], 0);
    }
}

#[test]
fn verify_output_is_deterministic_across_jobs() {
    let run = |jobs: &str| znap(&["verify", "thm4", "--n-max", "8", "--m-max", "3", "--jobs", jobs]).stdout;
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("1"));
    assert_eq!(one, run("4"));
}
