use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn genpres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genpres")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn records(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn temp_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn eval_reference_sequence() {
    let o = genpres(&["eval", "nint(beta*n*nint(alpha*n))", "--n", "0..5"]);
    assert_eq!(o.status.code(), Some(0));
    // Decimal oracle for n·⌊2^{1/3} n⌉.
    let want: Vec<String> = (0..=5)
        .map(|n: i64| format!("{n}\t{}", n * (2f64.cbrt() * n as f64).round() as i64))
        .collect();
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), want);
    assert_eq!(stdout(&genpres(&["eval", "n", "--n", "3..3"])), "3\t3\n");
}

#[test]
fn eval_errors_exit_two() {
    let o = genpres(&["eval", "gamma*n", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("UnknownConstant"));
    let o = genpres(&["eval", "n +* 2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("byte 3"));
    assert_eq!(genpres(&["eval", "n", "--n", "5..1"]).status.code(), Some(2));
    assert_eq!(genpres(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn real_values_print_exactly() {
    let o = genpres(&["eval", "alpha*n", "--n", "2"]);
    let line = stdout(&o);
    assert!(line.starts_with("2\t(2)·θ\t2.5198"), "{line}");
}

#[test]
fn compile_examples() {
    let o = genpres(&["compile", "x1 - 2", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("exists m in"));
    assert!(out.contains("witness: x1 = 2 "), "{out}");

    let o = genpres(&["compile", "x1*x2 - 6", "--check"]);
    let out = stdout(&o);
    let w = out.lines().find(|l| l.starts_with("witness:")).expect("a witness");
    let xs: Vec<i64> = w["witness: ".len()..w.find(" (").unwrap()]
        .split(", ")
        .map(|kv| kv.split(" = ").nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(xs[0] * xs[1], 6);
    assert!(w.contains("p(x) = 0 checked"));

    let o = genpres(&["compile", "x1*x1 - 2", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no witness within bounds"));
    assert_eq!(genpres(&["compile", "x1 ^ 2"]).status.code(), Some(2));
}

#[test]
fn verify_examples_pass() {
    let o = genpres(&["verify", "3.7", "--m-max", "100", "--h-factor", "30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(records(&o).iter().all(|r| r["lemma"] == "3.7" && r["status"] == "pass"));
    let o = genpres(&["verify", "4.5", "--max", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = records(&o);
    assert_eq!(recs.iter().filter(|r| r["status"] == "pass").count(), 144);
    assert!(stderr(&o).contains("0 violations"));
}

#[test]
fn verify_usage_errors() {
    assert_eq!(genpres(&["verify", "9.9"]).status.code(), Some(2));
    assert_eq!(genpres(&["verify", "3.7", "--max", "3"]).status.code(), Some(2));
    assert_eq!(genpres(&["verify", "all", "--m-max", "3"]).status.code(), Some(2));
    assert_eq!(genpres(&["verify", "3.7", "--set", "suite.nope=1"]).status.code(), Some(2));
    assert_eq!(genpres(&["verify", "3.7", "--set", "suite.lemma37_m_max=abc"]).status.code(), Some(2));
    let q = temp_file("4,4,4,4\n");
    assert_eq!(genpres(&["verify", "3.7", "--from", q.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn quadruples_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("q.csv");
    let csv_s = csv.to_str().unwrap();
    let o = genpres(&["quadruples", "export", "--m-max", "20", "--h-factor", "30", "--out", csv_s]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let quads: Vec<Vec<i128>> = text.lines().map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert!(!quads.is_empty());
    assert!(quads.windows(2).all(|w| w[0] < w[1]), "sorted and distinct");
    assert!(quads.iter().all(|q| q[0] * q[3] == q[1] * q[2]));

    let o = genpres(&["verify", "Q1", "--from", csv_s]);
    assert_eq!(o.status.code(), Some(0));
    // Moduli up to 20 cover F = {1,2}² but not {1..4}².
    let o = genpres(&["quadruples", "import", csv_s, "--q2-k-max", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = genpres(&["quadruples", "import", csv_s]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(records(&o)[2]["lemma"], "Q2");

    let bad = format!("{text}3,3,3,7\n");
    std::fs::write(&csv, bad).unwrap();
    let o = genpres(&["verify", "Q1", "--from", csv_s]);
    assert_eq!(o.status.code(), Some(1));
    let first = &records(&o)[0];
    assert_eq!(first["witness"]["violations"][0], serde_json::json!([3, 3, 3, 7]));

    std::fs::write(&csv, "1,2,3\n").unwrap();
    assert_eq!(genpres(&["verify", "Q1", "--from", csv_s]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_and_thread_independent() {
    let a = genpres(&["verify", "all", "--quick"]);
    let b = genpres(&["verify", "all", "--quick", "--threads", "3"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("runtime_ms"));
    let c = genpres(&["verify", "all", "--quick", "--seed", "11"]);
    assert_eq!(c.status.code(), Some(0));
    let d = genpres(&["verify", "all", "--quick", "--seed", "11"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn timing_and_out_flags() {
    let o = genpres(&["verify", "4.5", "--max", "3", "--timing"]);
    assert!(records(&o).iter().all(|r| r["runtime_ms"].is_u64()));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let o = genpres(&["verify", "4.5", "--max", "3", "--out", path.to_str().unwrap()]);
    assert!(o.stdout.is_empty());
    let plain = genpres(&["verify", "4.5", "--max", "3"]);
    assert_eq!(std::fs::read(&path).unwrap(), plain.stdout);
}

#[test]
fn session_config_constants_and_overrides() {
    let cfg = temp_file(
        "# square root of two, halved beta\n\
         alpha = algebraic { minpoly = [-2, 0, 1], interval = [\"1\", \"2\"] }\n\
         beta = rational \"1/2\"\n\
         seed = 7\n\
         suite.lemma37_m_max = 5\n",
    );
    let p = cfg.path().to_str().unwrap();
    let o = genpres(&["--config", p, "eval", "nint(beta*n*nint(alpha*n))", "--n", "1..6"]);
    assert_eq!(o.status.code(), Some(0));
    let got: Vec<i64> = stdout(&o).lines().map(|l| l.split('\t').nth(1).unwrap().parse().unwrap()).collect();
    let want: Vec<i64> = (1..=6)
        .map(|n: i64| (0.5 * n as f64 * (std::f64::consts::SQRT_2 * n as f64).round()).round() as i64)
        .collect();
    assert_eq!(got, want);
    let o = genpres(&["--config", p, "verify", "3.7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(records(&o).iter().all(|r| r["caps"]["m_max"] == 5));
}

#[test]
fn session_config_errors() {
    for text in [
        "alpha = algebraic { minpoly = [-2, 0, 1], interval = [\"-2\", \"2\"] }\n",
        "alpha = algebraic { minpoly = [-2, 0, 1], interval = [\"1\", \"2\"] }\n\
         gam = algebraic { minpoly = [-2, 0, 0, 1], interval = [\"1\", \"2\"] }\n",
        "beta = rational \"1/0\"\n",
        "beta = 3\n",
        "bounds.nope = 3\n",
        "threads = 0\n",
        "just some words\n",
    ] {
        let cfg = temp_file(text);
        let o = genpres(&["--config", cfg.path().to_str().unwrap(), "eval", "n", "--n", "1"]);
        assert_eq!(o.status.code(), Some(2), "{text}");
    }
}

#[test]
fn search_examples() {
    let o = genpres(&["search", "cf", "alpha", "--terms", "6"]);
    assert_eq!(records(&o)[0]["quotients"], serde_json::json!(["1", "3", "1", "5", "1", "1"]));
    let o = genpres(&["search", "lemma32", "--n0", "3", "--n1", "7", "--c", "2"]);
    let r = &records(&o)[0];
    assert_eq!(r["result"], "found");
    assert!(r["n2"].as_i64().unwrap() >= 14);
    let o = genpres(&["search", "small-norm", "alpha", "--eps", "1/10", "--strategy", "exhaustive", "--budget", "100"]);
    let m = records(&o)[0]["m"].as_i64().unwrap();
    let norm = |k: i64| (2f64.cbrt() * k as f64 - (2f64.cbrt() * k as f64).round()).abs();
    assert!(norm(m) < 0.1 && (1..m).all(|k| norm(k) >= 0.1));
    let o = genpres(&["search", "small-norm", "alpha", "--eps", "1/1000000000", "--strategy", "exhaustive", "--budget", "5"]);
    assert_eq!(records(&o)[0]["result"], "not-found-within-budget");
    let o = genpres(&["search", "weyl", "--target", "alpha*n:1/10:2/10"]);
    let n = records(&o)[0]["n"].as_i64().unwrap();
    let f = 2f64.cbrt() * n as f64;
    assert!((f - f.round() - 0.15).abs() < 0.05);
}

#[test]
fn bohr_examples() {
    let o = genpres(&["bohr", "g", "--n", "0..2"]);
    assert_eq!(stdout(&o), "0\t1\n1\t0\n2\t0\n");
    let o = genpres(&["bohr", "mu", "--m", "54251", "--big-n", "10"]);
    assert_eq!(records(&o)[0]["mu"], true);
    let o = genpres(&["bohr", "divisibility", "--m", "2", "--m-tilde", "6"]);
    let r = &records(&o)[0];
    assert_eq!(r["divides"], true);
    assert_eq!(r["agrees"], true);
    assert_eq!(genpres(&["bohr", "mu", "--m", "-1", "--big-n", "3"]).status.code(), Some(2));
}

#[test]
fn equidist_report() {
    let o = genpres(&["equidist", "--orbit", "20000", "--samples", "50000", "--grid", "10", "--hist"]);
    let r = &records(&o)[0];
    assert_eq!(r["orbit_hist"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum::<u64>(), 20000);
    assert!(r["near_origin_fraction"].as_f64().unwrap() > 0.0);
    assert_eq!(genpres(&["equidist", "--d", "0"]).status.code(), Some(2));
}
