use std::path::Path;
use std::process::{Command, Output};

const LEAP: &str = "((i<c-1)+((b<i)∧(i<c+1)))%3";

fn mapseek(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mapseek")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn gen(dir: &Path, n: u32, refined: bool) -> String {
    let path = dir.join(format!("inst-{n}-{refined}.json"));
    let p = path.to_str().unwrap().to_string();
    let n = n.to_string();
    let mut args = vec!["gen-dataset", &n, "3", "--out", &p];
    if refined {
        args.push("--refined");
    }
    let o = mapseek(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    p
}

#[test]
fn enumerate_counts() {
    let o = mapseek(&["enumerate", "4", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 6);
    assert_eq!(mapseek(&["enumerate", "14", "3"]).stdout.iter().filter(|&&b| b == b'\n').count(), 2366);
    assert_eq!(stdout(&mapseek(&["enumerate", "2", "2", "--objects", "pp"])).lines().count(), 3);
}

#[test]
fn stat_csv() {
    let o = mapseek(&["stat", "--stat", "skip", "--n", "4", "--k", "3"]);
    let mut values: Vec<u32> =
        stdout(&o).lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    values.sort();
    assert_eq!(values, vec![0, 0, 0, 1, 1, 2]);
    let o = mapseek(&["stat", "--stat", "mingarc", "--n", "6", "--k", "4"]);
    assert!(stdout(&o).lines().any(|l| l == "\"1,6|2,3|4,5\",1"), "{}", stdout(&o));
    assert_eq!(mapseek(&["stat", "--stat", "nope", "--n", "4", "--k", "3"]).status.code(), Some(2));
}

#[test]
fn narayana_and_pairing() {
    let o = mapseek(&["narayana", "4", "3"]);
    assert_eq!(stdout(&o).trim(), "1*q^0*t^0 + 1*q^0*t^1 + 1*q^0*t^2 + 1*q^1*t^0 + 1*q^1*t^1 + 1*q^2*t^0");
    let ok = mapseek(&["verify-pairing", "--s1", "skip", "--s2", "leap", "--n", "12", "--k", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report["match"], true);
    let bad = mapseek(&["verify-pairing", "--s1", "skip", "--s2", "warmstart", "--n", "5", "--k", "3"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn dataset_and_formula() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("i.json");
    let p = path.to_str().unwrap();
    let o = mapseek(&["gen-dataset", "14", "3", "--refined", "--out", p]);
    assert!(stderr(&o).contains("2366 objects, 144 bags"));
    let o = mapseek(&["eval-formula", "--formula", LEAP, "--instance", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("delta=0"));

    let file = dir.path().join("f.txt");
    std::fs::write(&file, "#notation: rpn\nc i < 3 %\na b + 3 %\n").unwrap();
    let o = mapseek(&["eval-formula", "--file", file.to_str().unwrap(), "--instance", p]);
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert_eq!(rows[0]["formula"], "(c<i)%3");

    assert_eq!(mapseek(&["eval-formula", "--formula", "(a", "--instance", p]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    let o = mapseek(&["eval-formula", "--formula", "a%3", "--instance", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    std::fs::write(&missing, "{ not json").unwrap();
    let o = mapseek(&["eval-formula", "--formula", "a%3", "--instance", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bijection_table() {
    let o = mapseek(&["bijection", "--n", "4", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(String::from).collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows.iter().filter(|r| r.ends_with("fixed")).count(), 2);
    assert!(stderr(&o).contains("2 fixed points, 2 two-cycles"));
    assert_eq!(mapseek(&["bijection", "--n", "9", "--check"]).status.code(), Some(0));
}

#[test]
fn search_is_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen(dir.path(), 6, false);
    let run = |method: &str, workers: &str| {
        let o = mapseek(&[
            "search",
            "--method",
            method,
            "--instance",
            &inst,
            "--seed",
            "7",
            "--budget",
            "3",
            "--population",
            "300",
            "--workers",
            workers,
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        o.stdout
    };
    for method in ["cem", "ga"] {
        let one = run(method, "1");
        assert_eq!(one, run(method, "4"));
        let report: serde_json::Value = serde_json::from_slice(&one).unwrap();
        assert_eq!(report["method"], method);
        assert_eq!(report["seed"], 7);
    }
    let trace = dir.path().join("t.csv");
    let o = mapseek(&[
        "search",
        "--instance",
        &inst,
        "--budget",
        "2",
        "--population",
        "200",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&trace).unwrap().starts_with("iteration,population,best_distance"));
    assert_eq!(mapseek(&["search", "--instance", &inst, "--preset", "nope"]).status.code(), Some(2));
}

#[test]
fn selftrain_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen(dir.path(), 8, true);
    let labels = dir.path().join("labels.csv");
    let o = mapseek(&[
        "selftrain",
        "--instance",
        &inst,
        "--scorer",
        "oracle:leap",
        "--h",
        "1",
        "--labels-csv",
        labels.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let run: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(run["success"], true);
    assert_eq!(run["iterations"], 1);
    let leap = stdout(&mapseek(&["stat", "--stat", "leap", "--n", "8", "--k", "3"]));
    let by_text = run["labels"].as_object().unwrap();
    assert_eq!(by_text.len(), leap.lines().count() - 1);
    for line in leap.lines().skip(1) {
        let (p, v) = line.rsplit_once(',').unwrap();
        assert_eq!(by_text[p.trim_matches('"')], v.parse::<i64>().unwrap());
    }
    assert!(std::fs::read_to_string(&labels).unwrap().starts_with("partition,label\n"));

    let o = mapseek(&["selftrain", "--instance", &inst, "--scorer", "constant:0", "--max-iters", "3"]);
    let run: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(run["success"], false);
    let o = mapseek(&["selftrain", "--instance", &inst, "--scorer", "baseline", "--max-iters", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(mapseek(&["selftrain", "--instance", &inst, "--scorer", "magic"]).status.code(), Some(2));
    assert_eq!(mapseek(&["selftrain", "--instance", &inst, "--h", "3"]).status.code(), Some(2));
}
