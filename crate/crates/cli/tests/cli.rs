use std::process::{Command, Output};

use serde_json::Value;

fn racah(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_racah"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json_report(args: &[&str]) -> (Option<i32>, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = racah(&full);
    (o.status.code(), serde_json::from_str(&stdout(&o)).expect("valid json"))
}

fn strip_timing(mut v: Value) -> Value {
    for c in v["checks"].as_array_mut().unwrap() {
        c["ms"] = Value::from(0.0);
    }
    v
}

#[test]
fn embedding_n4_reports_six_passing_pairs() {
    let (code, v) = json_report(&["verify", "--suite", "embedding", "--n", "4"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["suite"], "embedding");
    assert_eq!(v["context"]["n"], 4);
    assert_eq!(v["context"]["k_mode"], "symbolic");
    let checks = v["checks"].as_array().unwrap();
    let pairs: Vec<&Value> = checks
        .iter()
        .filter(|c| c["id"].as_str().unwrap().starts_with("pair["))
        .collect();
    assert_eq!(pairs.len(), 6);
    assert!(pairs.iter().all(|c| c["equal"] == true));
    assert_eq!(v["summary"]["passed"].as_u64().unwrap() as usize, checks.len());
    assert_eq!(v["summary"]["failed"], 0);
}

#[test]
fn report_schema_fields() {
    let (_, v) = json_report(&["verify", "--suite", "lemma1", "--n", "3"]);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["id"].is_string());
        assert!(c["desc"].is_string());
        assert!(c["equal"].is_boolean());
        assert!(c["ms"].is_number());
    }
    assert_eq!(v["checks"].as_array().unwrap().len(), 2 * 3 * 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(racah(&["verify", "--suite", "embedding", "--n", "2"]).status.code(), Some(2));
    assert_eq!(racah(&["verify", "--suite", "racah", "--n", "1"]).status.code(), Some(2));
    assert_eq!(racah(&["verify", "--suite", "sln", "--n", "1"]).status.code(), Some(2));
    assert_eq!(racah(&["verify", "--suite", "bogus", "--n", "4"]).status.code(), Some(2));
    assert_eq!(racah(&["verify", "--suite", "embedding"]).status.code(), Some(2));
    assert_eq!(
        racah(&["verify", "--suite", "embedding", "--n", "4", "--mutate", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(racah(&["normalize", "--n", "4", "--expr", "d1 +"]).status.code(), Some(2));
    assert_eq!(racah(&["normalize", "--n", "4", "--expr", "u7"]).status.code(), Some(2));
    assert_eq!(
        racah(&["matrix", "--n", "4", "--k", "1", "--nu", "1,2", "--op", "u1 d1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        racah(&["matrix", "--n", "4", "--k", "1", "--nu", "1,x,3,4", "--op", "u1 d1"]).status.code(),
        Some(2)
    );
    let o = racah(&["normalize", "--n", "4", "--expr", "d1 $"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 3"));
}

#[test]
fn normalize_and_commute() {
    let o = racah(&["normalize", "--n", "4", "--expr", "d1 u1 - u1 d1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1\n");
    let o = racah(&["normalize", "--n", "4", "--expr", "d1 u1"]);
    assert_eq!(stdout(&o), "u1 d1 + 1\n");
    let o = racah(&["commute", "--n", "4", "--lhs", "d2", "--rhs", "u2^2"]);
    assert_eq!(stdout(&o), "2 u2\n");
    let o = racah(&["commute", "--n", "4", "--lhs", "C[1,2]", "--rhs", "C[{1,2,3,4}]"]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn matrix_dump_and_leakage() {
    let o = racah(&["matrix", "--n", "4", "--k", "1", "--nu", "1/2,3/2,5/2,7/2", "--op", "C[1,2]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "6/1 1/1 0/1\n0/1 2/1 0/1\n0/1 0/1 2/1\n");
    let o = racah(&["matrix", "--n", "4", "--k", "0", "--nu", "-1/2,0,1,2", "--op", "E"]);
    assert_eq!(stdout(&o), "0/1\n");
    let o = racah(&["matrix", "--n", "4", "--k", "1", "--nu", "1,2,3,4", "--op", "u1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("leakage"));
}

#[test]
fn text_and_json_verdicts_agree() {
    for (suite, n) in [("sln", "3"), ("lemma1", "4"), ("racah", "4"), ("embedding", "5")] {
        let text = stdout(&racah(&["verify", "--suite", suite, "--n", n]));
        let (_, v) = json_report(&["verify", "--suite", suite, "--n", n]);
        let from_text: Vec<(String, bool)> = text
            .lines()
            .filter_map(|l| {
                let (verdict, rest) = l.split_once(' ')?;
                let id = rest.split(' ').next()?.to_string();
                match verdict {
                    "PASS" => Some((id, true)),
                    "FAIL" => Some((id, false)),
                    _ => None,
                }
            })
            .collect();
        let from_json: Vec<(String, bool)> = v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| (c["id"].as_str().unwrap().to_string(), c["equal"].as_bool().unwrap()))
            .collect();
        assert_eq!(from_text, from_json, "{suite}");
    }
    let (code, v) = json_report(&["verify", "--suite", "embedding", "--n", "4", "--mutate", "c1j-nu1"]);
    assert_eq!(code, Some(1));
    let text = racah(&["verify", "--suite", "embedding", "--n", "4", "--mutate", "c1j-nu1"]);
    assert_eq!(text.status.code(), Some(1));
    let failed = stdout(&text).lines().filter(|l| l.starts_with("FAIL ")).count();
    assert_eq!(failed as u64, v["summary"]["failed"].as_u64().unwrap());
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "--suite", "all", "--n", "4"];
    let (c1, a) = json_report(&args);
    let (c2, b) = json_report(&args);
    assert_eq!(c1, Some(0));
    assert_eq!(c1, c2);
    let (a, b) = (strip_timing(a), strip_timing(b));
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let ids: Vec<&str> = a["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    for prefix in ["sln/", "lemma1/", "racah/", "embedding/"] {
        assert!(ids.iter().any(|id| id.starts_with(prefix)), "{prefix}");
    }

    let untimed = |o: Output| -> String {
        stdout(&o)
            .lines()
            .map(|l| l.rsplit_once(" [").map_or(l, |(head, _)| head))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let text_args = ["verify", "--suite", "embedding", "--n", "5"];
    assert_eq!(untimed(racah(&text_args)), untimed(racah(&text_args)));
}

#[test]
fn golden_lemma1_m2() {
    let (_, v) = json_report(&["verify", "--suite", "lemma1", "--n", "2"]);
    let expected = r#"{
  "suite": "lemma1",
  "context": {
    "n": 2,
    "k_mode": "symbolic"
  },
  "checks": [
    {
      "id": "uBE{1}:d1",
      "desc": "[u_B E, d1] = -u_B d1 - delta E, B={1}",
      "lhs": "-2 u1 d1 + k",
      "rhs": "-2 u1 d1 + k",
      "equal": true,
      "ms": 0.0
    },
    {
      "id": "uA{1}:d1",
      "desc": "[u_A, d1] = -delta, A={1}",
      "lhs": "-1",
      "rhs": "-1",
      "equal": true,
      "ms": 0.0
    }
  ],
  "summary": {
    "passed": 2,
    "failed": 0
  }
}"#;
    assert_eq!(strip_timing(v), serde_json::from_str::<Value>(expected).unwrap());
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("racah-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = racah(&["verify", "--suite", "racah", "--n", "3", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["suite"], "racah");
    assert_eq!(v["summary"]["failed"], 0);
    std::fs::remove_dir_all(&dir).unwrap();
}
