use std::fs;
use std::process::{Command, Output};

use noisy_games::tables::{p_grid, read_sweep_csv, sweep, SweepFamily};
use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noisy-games")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn csv_row<'a>(text: &'a str, p: &str) -> Vec<&'a str> {
    let line = text.lines().find(|l| l.starts_with(&format!("{p},"))).expect("row present");
    line.split(',').collect()
}

#[test]
fn solve_nim_three_chips() {
    let out = cli(&["solve", "--game", "nim1", "--chips", "3", "--p", "0.3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("start 3 chips: value 0.607692307692308"), "{text}");
    assert!(text.contains("optimal: leave 0 chips"), "{text}");
}

#[test]
fn solve_chomp_json() {
    let out =
        cli(&["solve", "--game", "chomp", "--rows", "2", "--cols", "2", "--variant", "n8", "--p", "0.8", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let listing: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((listing["start_value"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    let start = &listing["positions"][listing["start"].as_u64().unwrap() as usize];
    let best = start["optimal_moves"][0].as_u64().unwrap() as usize;
    assert_eq!(start["optimal_moves"].as_array().unwrap().len(), 1);
    assert_eq!(start["move_labels"][best], "chomp at (1,1)");
}

#[test]
fn solve_spec_file_and_validation_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(&good, r#"{"family": "nim1", "k": 2, "p": 0.25}"#).unwrap();
    let out = cli(&["solve", "--spec", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("value 0.750000000000000"));

    let cycle = dir.path().join("cycle.json");
    fs::write(
        &cycle,
        r#"{"graph": {"followers": [[1], [0]], "start": 0, "labels": []},
            "model": [[[1.0]], [[1.0]]]}"#,
    )
    .unwrap();
    let out = cli(&["solve", "--spec", cycle.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cycle"), "{}", stderr(&out));

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\n  \"family\": \"nim1\",\n  \"k\": \"three\",\n  \"p\": 0.1\n}").unwrap();
    let out = cli(&["solve", "--spec", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["solve", "--game", "nim1", "--p", "0.3"][..],
        &["solve"][..],
        &["solve", "--game", "nim1", "--chips", "3", "--p", "1.5"][..],
        &["sweep", "--game", "nim", "--piles", "1,2"][..],
        &["sweep", "--game", "nim1", "--chips", "3", "--points", "1"][..],
        &["simulate", "--game", "nim1", "--chips", "3", "--p", "0.3", "--games", "0"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(cli(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn sweep_rows_and_reference_values() {
    let out = cli(&["sweep", "--game", "nim1", "--chips", "4", "--points", "101"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("p,N,optimal_moves"));
    assert_eq!(text.lines().count(), 102);
    assert_eq!(csv_row(&text, "0.50"), ["0.50", "0.500000000000000", "0;1;2;3"]);

    let text = stdout(&cli(&["sweep", "--game", "nim1", "--chips", "10", "--points", "101"]));
    let row = csv_row(&text, "0.30");
    assert!((row[1].parse::<f64>().unwrap() - 0.527252488101950).abs() < 1e-9);
    assert_eq!(row[2], "0");

    let text = stdout(&cli(&["sweep", "--game", "nim1", "--chips", "5", "--points", "2"]));
    let ps: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ps, ["0.00", "1.00"]);
}

#[test]
fn sweep_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chomp.csv");
    let out = cli(&[
        "sweep",
        "--game",
        "chomp",
        "--rows",
        "3",
        "--cols",
        "3",
        "--variant",
        "n4",
        "--points",
        "51",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let parsed = read_sweep_csv(fs::File::open(&path).unwrap()).unwrap();
    let direct =
        sweep(SweepFamily::Chomp { n: 3, m: 3, variant: "n4".parse().unwrap() }, &p_grid(51).unwrap()).unwrap();
    assert_eq!(parsed.len(), direct.len());
    for (a, b) in parsed.iter().zip(&direct) {
        assert!((a.p - b.p).abs() < 1e-12);
        assert!((a.value - b.value).abs() <= 1e-15);
        assert_eq!(a.optimal_moves, b.optimal_moves);
    }
}

#[test]
fn sweep_to_unwritable_path_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let out = cli(&["sweep", "--game", "nim1", "--chips", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cannot write"));
}

#[test]
fn verify_lists_every_reference_value() {
    let text = stdout(&cli(&["verify-appendix"]));
    assert_eq!(text.lines().count(), 18);
    let line = text.lines().find(|l| l.contains("N_8(0.99)")).unwrap();
    assert!(line.starts_with("ok") && line.contains("0.970694959999281") && line.contains("optimal [7]"), "{line}");
}

#[test]
fn verify_with_expectation_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(&good, r#"[{"k": 8, "percent": 99, "value": 0.970694959999281, "optimal_moves": [7]}]"#).unwrap();
    let out = cli(&["verify-appendix", "--expected", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let corrupt = dir.path().join("corrupt.json");
    fs::write(&corrupt, r#"[{"k": 8, "percent": 99, "value": 0.970694, "optimal_moves": [7]}]"#).unwrap();
    let out = cli(&["verify-appendix", "--expected", corrupt.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL") && text.contains("|error| 9.6e-7"), "{text}");
}

#[test]
fn conjecture_scan_report() {
    let out = cli(&["conjecture-scan", "--max-chips", "10", "--points", "101"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("counterexample candidates: none"), "{text}");
    assert!(text.contains("k=5   p 0.76 -> 0.77: 3 -> 4"), "{text}");

    let json: Value = serde_json::from_slice(&cli(&["conjecture-scan", "--max-chips", "8", "--json"]).stdout).unwrap();
    assert_eq!(json["counterexamples"].as_array().unwrap().len(), 0);
    assert_eq!(json["max_chips"], 8);
}

#[test]
fn simulate_is_seeded_and_close_to_the_solution() {
    let args =
        ["simulate", "--game", "nim1", "--chips", "3", "--p", "0.3", "--games", "100000", "--seed", "11", "--json"];
    let (a, b) = (cli(&args), cli(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["games_played"], 100_000);
    assert!((report["solved_value"].as_f64().unwrap() - 0.79 / 1.3).abs() < 1e-12);
    assert!(report["z_score"].as_f64().unwrap() <= 4.0);
}
