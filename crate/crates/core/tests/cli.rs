use std::path::PathBuf;
use std::process::Command;

use roabp_pit::cli::{parse, run, serialize};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn fixtures() -> Vec<PathBuf> {
    let mut all: Vec<PathBuf> = std::fs::read_dir(fixture(""))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "roabp"))
        .collect();
    all.sort();
    all
}

/// Runs the CLI in-process; returns (exit code, stdout, stderr).
fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("roabp-pit").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json_lines(stdout: &str) -> Vec<Value> {
    stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn fixtures_round_trip() {
    let files = fixtures();
    assert!(files.len() >= 5);
    for path in files {
        let text = std::fs::read_to_string(&path).unwrap();
        let inst = parse(&text, None).unwrap();
        let canon = serialize(&inst);
        let again = parse(&canon, None).unwrap();
        assert_eq!(again, inst, "{}", path.display());
        assert_eq!(serialize(&again), canon, "{}", path.display());
    }
}

/// Each fixture records `# eval <point> = <value>` in a comment.
#[test]
fn eval_matches_recorded_values() {
    for path in fixtures() {
        let text = std::fs::read_to_string(&path).unwrap();
        let line = text.lines().find(|l| l.starts_with("# eval ")).expect("recorded value");
        let (point, value) = line["# eval ".len()..].split_once(" = ").unwrap();
        let (code, stdout, _) = cli(&["eval", path.to_str().unwrap(), "--point", point]);
        let report = &json_lines(&stdout)[0];
        assert_eq!(
            report["value"].as_u64().unwrap(),
            value.parse::<u64>().unwrap(),
            "{}",
            path.display()
        );
        assert_eq!(code, if value == "0" { 1 } else { 0 });
        assert_eq!(report["op"], "eval");
    }
}

#[test]
fn gen_hitting_set_for_4_2_2_has_33_points() {
    let (code, stdout, _) = cli(&["gen-hitting-set", "-n", "4", "-d", "2", "-w", "2"]);
    assert_eq!(code, 0);
    let report = &json_lines(&stdout)[0];
    assert_eq!(report["count"], 33);
    assert_eq!(report["degree_bound"], "32");
    assert_eq!(report["params"]["prime"], 37);
    assert_eq!(report["points"].as_array().unwrap().len(), 33);

    let dir = std::env::temp_dir().join(format!("roabp-pit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("points.txt");
    let (code, stdout, _) = cli(&[
        "--prime",
        "10007",
        "gen-hitting-set",
        "-n",
        "4",
        "-d",
        "2",
        "-w",
        "2",
        "--points-out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(json_lines(&stdout)[0].get("points").is_none());
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written.lines().count(), 33);
    assert!(written.lines().all(|l| l.split(' ').count() == 4));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn characteristic_two_fixture_reports_zero_with_a_warning() {
    let path = fixture("char2_counterexample.roabp");
    let (code, stdout, stderr) = cli(&["--prime", "2", "pit-known-order", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("characteristic precondition violated"));
    let report = &json_lines(&stdout)[0];
    assert_eq!(report["verdict"], "zero");
    assert_eq!(report["truncated"], true);
    assert_eq!(report["points"], 2);
    assert!(report.get("witness").is_none());

    // The same polynomial over a large field is hit.
    let (code, stdout, stderr) = cli(&["--prime", "10007", "pit-known-order", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stderr.is_empty());
    assert_eq!(json_lines(&stdout)[0]["verdict"], "nonzero");
}

#[test]
fn verdicts_and_exit_codes_on_fixtures() {
    let cases = [
        ("sum_x1_x2.roabp", "pit-known-order", 0),
        ("product.roabp", "pit-known-order", 0),
        ("zero.roabp", "pit-known-order", 1),
        ("zero.roabp", "pit-commutative", 1),
        ("zero.roabp", "expand", 1),
        ("commutative.roabp", "pit-commutative", 0),
        ("setml.roabp", "pit-commutative", 0),
        ("commutative.roabp", "search-isolating", 0),
        ("sum_x1_x2.roabp", "rank", 0),
        ("product.roabp", "rank", 2),
    ];
    for (file, op, expected) in cases {
        let path = fixture(file);
        let (code, stdout, _) = cli(&[op, path.to_str().unwrap()]);
        assert_eq!(code, expected, "{op} {file}: {stdout}");
        let report = &json_lines(&stdout)[0];
        assert_eq!(report["op"], op);
        match expected {
            0 => assert!(report["witness"].is_array() || op != "pit-known-order"),
            2 => assert_eq!(report["verdict"], "error"),
            _ => {}
        }
    }
}

#[test]
fn concentration_subcommands() {
    let path = fixture("sum_x1_x2.roabp");
    let p = path.to_str().unwrap();
    // x1 + x2 as a scalar polynomial: no constant term, so not 1-concentrated.
    let (code, stdout, _) = cli(&["check-concentration", p, "--ell", "1"]);
    assert_eq!(code, 1);
    assert_eq!(json_lines(&stdout)[0]["verdict"], "not-concentrated");
    // Shifting by t^1, t^1 creates a constant term.
    let (code, _, _) = cli(&["check-concentration", p, "--ell", "1", "--weights", "1,1"]);
    assert_eq!(code, 0);
    let (code, stdout, _) = cli(&["search-isolating", p]);
    assert_eq!(code, 0);
    assert_eq!(json_lines(&stdout)[0]["weights"], serde_json::json!([0, 1]));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = std::env::temp_dir().join(format!("roabp-pit-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.roabp");
    let text = std::fs::read_to_string(fixture("sum_x1_x2.roabp"))
        .unwrap()
        .replace("deg 1\n1 0", "deg 1\n1 zero");
    std::fs::write(&bad, text).unwrap();
    let (code, stdout, stderr) = cli(&["expand", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("parse error at line 14"), "{stderr}");
    assert_eq!(json_lines(&stdout)[0]["verdict"], "error");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn randomized_subcommands_are_reproducible() {
    let a = cli(&["--seed", "42", "probe-conjecture", "--count", "20"]);
    let b = cli(&["--seed", "42", "probe-conjecture", "--count", "20"]);
    assert_eq!(a, b);
    assert_eq!(json_lines(&a.1)[0]["params"]["seed"], 42);

    // Without a seed, the chosen one is reported and replays the run.
    let (_, stdout, _) = cli(&["probe-conjecture", "--count", "5", "-n", "2"]);
    let seed = json_lines(&stdout)[0]["params"]["seed"].as_u64().unwrap().to_string();
    let (_, replay, _) = cli(&["--seed", &seed, "probe-conjecture", "--count", "5", "-n", "2"]);
    assert_eq!(stdout, replay);

    let g1 = cli(&[
        "--seed",
        "3",
        "generate",
        "--kind",
        "commutative",
        "-n",
        "3",
        "-d",
        "2",
        "-w",
        "2",
    ]);
    let g2 = cli(&[
        "--seed",
        "3",
        "generate",
        "--kind",
        "commutative",
        "-n",
        "3",
        "-d",
        "2",
        "-w",
        "2",
    ]);
    assert_eq!(g1, g2);
    assert!(parse(&g1.1, None).unwrap().to_roabp().is_ok());
}

#[test]
fn exit_codes_are_deterministic() {
    for path in fixtures() {
        for op in ["pit-known-order", "pit-commutative", "check-concentration"] {
            let first = cli(&[op, path.to_str().unwrap()]);
            let second = cli(&[op, path.to_str().unwrap()]);
            assert_eq!(first, second);
        }
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&["no-such-command"]).0, 2);
    assert_eq!(cli(&["eval"]).0, 2);
    assert_eq!(cli(&["--help"]).0, 0);
}

#[test]
fn binary_honours_environment_overrides() {
    let exe = env!("CARGO_BIN_EXE_roabp-pit");
    let out = Command::new(exe)
        .args(["gen-hitting-set", "-n", "2", "-d", "1", "-w", "1"])
        .env("ROABP_PIT_PRIME", "101")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["params"]["prime"], 101);

    let out = Command::new(exe)
        .args(["expand", fixture("product.roabp").to_str().unwrap()])
        .env("ROABP_PIT_MAX_TERMS", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("capacity exceeded"));
}
