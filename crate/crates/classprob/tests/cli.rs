use std::path::Path;
use std::process::{Command, Output};

use classprob::report::{Kind, SimJson, Suite};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_classprob")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn suite(args: &[&str]) -> (i32, Suite) {
    let o = run(args);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).expect("suite json"))
}

#[test]
fn default_run_passes_and_is_byte_stable() {
    let a = run(&["--format", "json", "reproduce-all"]);
    let b = run(&["--format", "json", "reproduce-all", "--threads", "1"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let s: Suite = serde_json::from_slice(&a.stdout).unwrap();
    assert!(s.all_pass());
    assert_eq!(s.seed, 0x5EED);
    let ids: Vec<&str> = s.reports.iter().map(|r| r.scenario.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    assert_eq!(ids, sorted);
    for id in ["galileo-dice", "bayes-three-urns", "dml-local-erratum", "buffon-needle"] {
        assert!(ids.contains(&id), "{id}");
    }
    let exact = s.summary[&Kind::Exact];
    assert_eq!(exact.fail, 0);
    assert!(exact.pass > 0);
}

#[test]
fn json_round_trips() {
    let o = run(&["--format", "json", "reproduce-all", "--kind", "exact"]);
    let text = stdout(&o);
    let s: Suite = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&s).unwrap() + "\n", text);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = v["reports"][0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["computed", "elapsed_ms", "expected", "kind", "pass", "scenario", "section"]);
    assert!(s.reports.iter().all(|r| r.kind == Kind::Exact));
}

#[test]
fn named_scenarios() {
    let (code, s) = suite(&["--format", "json", "reproduce-all", "--id", "galileo-dice", "--id", "dml-local-erratum"]);
    assert_eq!(code, 0);
    assert_eq!(s.reports.len(), 2);
    assert_eq!(s.reports[0].scenario, "dml-local-erratum");
    assert!(s.reports[0].computed.starts_with("3.72678"));
    assert!(s.reports[0].expected.contains("13.9"));
    assert_eq!(s.reports[1].computed, "0.115741 (25/216), 0.125000 (1/8)");
}

#[test]
fn twenty_seed_sweep() {
    let (_, base) = suite(&["--format", "json", "reproduce-all", "--kind", "statistical"]);
    let mut failures = vec![];
    for seed in 1..=20u64 {
        let (_, s) = suite(&["--format", "json", "--seed", &seed.to_string(), "reproduce-all", "--kind", "statistical"]);
        assert_eq!(s.reports.len(), base.reports.len());
        for (r, b) in s.reports.iter().zip(&base.reports) {
            assert_ne!(r.computed, b.computed, "seed {seed} reproduced the default stream for {}", r.scenario);
            if !r.pass {
                failures.push(format!("seed {seed}: {} computed {}", r.scenario, r.computed));
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["reproduce-all", "--id", "galileo-dice"]).status.code(), Some(0));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "xml", "classic", "de-mere"]).status.code(), Some(2));
    assert_eq!(run(&["--seed", "-1", "classic", "de-mere"]).status.code(), Some(2));
    assert_eq!(run(&["reproduce-all", "--id", "missing"]).status.code(), Some(2));
    assert_eq!(run(&["classic", "points", "0", "0"]).status.code(), Some(2));
    assert_eq!(run(&["dist", "moments", "normal:0,0"]).status.code(), Some(2));
    assert_eq!(run(&["mc", "buffon", "1", "1"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn scenario_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(
        dir.path(),
        "good.toml",
        "[[scenario]]\nid = \"user-dice\"\nkind = \"exact\"\nop = \"dice_sum_count\"\nargs = [\"2\", \"6\", \"7\"]\nexpected = [\"6\"]\n",
    );
    let (code, s) = suite(&["--format", "json", "--scenarios", &good, "reproduce-all", "--id", "user-dice"]);
    assert_eq!(code, 0);
    assert_eq!(s.reports[0].section, "user");
    assert!(s.reports[0].pass);

    let wrong = write(
        dir.path(),
        "wrong.toml",
        "[[scenario]]\nid = \"user-urn\"\nkind = \"exact\"\nop = \"poisson_urn\"\nargs = [\"8\"]\nexpected = [\"1/3\"]\n",
    );
    assert_eq!(run(&["--scenarios", &wrong, "reproduce-all", "--id", "user-urn"]).status.code(), Some(1));
    assert_eq!(run(&["--scenarios", &wrong, "reproduce-all"]).status.code(), Some(1));

    let clash = write(dir.path(), "clash.toml", "[[scenario]]\nid = \"galileo-dice\"\nkind = \"exact\"\nop = \"de_mere\"\n");
    let o = run(&["--scenarios", &clash, "reproduce-all"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate"));
    assert_eq!(run(&["--scenarios", "/nonexistent/x.toml", "reproduce-all"]).status.code(), Some(2));
}

#[test]
fn normal_table_csv() {
    let o = run(&["table", "normal-table", "--from", "0", "--to", "3", "--step", "0.5"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 7);
    let last: Vec<&str> = rows[6].split(',').collect();
    assert_eq!(last[0], "3.00");
    assert!((last[1].parse::<f64>().unwrap() - 0.49865).abs() < 5e-5);

    assert_eq!(stdout(&run(&["table", "normal-table", "--from", "2", "--to", "1"])), "z,value\n");
    let full = stdout(&run(&["table", "normal-table"]));
    assert_eq!(full.lines().count(), 502);
    assert_eq!(full.lines().last().unwrap(), "5.00,0.4999997133");
    assert_eq!(run(&["table", "normal-table", "--step", "0"]).status.code(), Some(2));
}

/// Two-urn chain by enumerating every pair of balls drawn for the swap.
fn enumerated_chain(n: usize) -> Vec<Vec<(usize, usize)>> {
    (0..=n)
        .map(|w| {
            let urn1: Vec<bool> = (0..n).map(|i| i < w).collect();
            let urn2: Vec<bool> = (0..n).map(|i| i < n - w).collect();
            let mut counts = vec![0usize; n + 1];
            for a in &urn1 {
                for b in &urn2 {
                    let next = w - usize::from(*a) + usize::from(*b);
                    counts[next] += 1;
                }
            }
            counts.into_iter().map(|c| (c, n * n)).collect()
        })
        .collect()
}

fn reduce((c, t): (usize, usize)) -> String {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    let g = gcd(c, t);
    if c == 0 {
        "0".into()
    } else if c == t {
        "1".into()
    } else {
        format!("{}/{}", c / g, t / g)
    }
}

#[test]
fn matrix_csv() {
    let text = stdout(&run(&["table", "matrix", "2"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0].split(',').count(), 4);
    for (i, row) in enumerated_chain(2).into_iter().enumerate() {
        let cells: Vec<&str> = lines[i + 1].split(',').skip(1).collect();
        let want: Vec<String> = row.into_iter().map(reduce).collect();
        assert_eq!(cells, want);
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bl3.csv");
    assert_eq!(run(&["table", "matrix", "3", "--out", path.to_str().unwrap()]).status.code(), Some(0));
    let o = run(&["markov", "chain", path.to_str().unwrap(), "--steps", "1"]);
    let back = stdout(&o);
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(back.starts_with(&written));
    assert_eq!(back.lines().last().unwrap(), "stationary,1/20,9/20,9/20,1/20");
}

#[test]
fn grid_density_csv() {
    let text = stdout(&run(&["table", "grid-density", "normal:0,1", "--half-points", "50"]));
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (x, y) = l.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect();
    assert_eq!(text.lines().next(), Some("x,density"));
    assert_eq!(rows.len(), 101);
    let mass: f64 = rows.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum();
    assert!((mass - 1.0).abs() < 1e-6, "{mass}");
    assert_eq!(run(&["table", "grid-density", "binomial:4,1/2"]).status.code(), Some(2));
}

#[test]
fn fitting_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(dir.path(), "obs.csv", "x,w\n1,-1\n1,-2\n1,-4\n");
    let ls: serde_json::Value = serde_json::from_slice(&run(&["--format", "json", "fit", "ls", &csv]).stdout).unwrap();
    assert_eq!(ls["values"][0]["name"], "x1");
    assert_eq!(ls["values"][0]["value"], "2.33333");
    let mm = stdout(&run(&["fit", "minimax", &csv]));
    assert!(mm.contains("2.50000"), "{mm}");
    let bad = write(dir.path(), "bad.csv", "x,y\n1,2\n1,3\n");
    assert_eq!(run(&["fit", "ls", &bad]).status.code(), Some(2));
}

#[test]
fn simulation_json() {
    let a = run(&["--format", "json", "--reps", "20000", "mc", "bertrand", "radial_midpoint"]);
    let b = run(&["--format", "json", "--reps", "20000", "--threads", "3", "mc", "bertrand", "radial_midpoint"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let sim: SimJson = serde_json::from_value(v["simulation"].clone()).unwrap();
    assert_eq!((sim.seed, sim.n, sim.target), (0x5EED, 20_000, Some(0.5)));
    assert!(sim.z.unwrap().abs() < 4.0);
    let keys: Vec<&str> = v["simulation"].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["estimate", "n", "name", "se", "seed", "target", "z"]);
}

#[test]
fn direct_subcommands() {
    let cases: &[(&[&str], &str)] = &[
        (&["classic", "de-mere"], "0.491404"),
        (&["classic", "ruin", "12", "12", "5/14", "9/14"], "ratio"),
        (&["dist", "quantile", "normal:0,1", "0.75"], "0.674490"),
        (&["dist", "moments", "half-cauchy"], "inf"),
        (&["limit", "dml-local", "100", "1/6", "7"], "0.00247406"),
        (&["limit", "posterior", "2", "1", "1/2", "1"], "(11/16)"),
        (&["limit", "sample-size", "1/2", "1/10", "1/10"], "250"),
        (&["markov", "stationary", "2"], "(2/3)"),
        (&["markov", "expected-white", "3", "2"], "(5/3)"),
        (&["markov", "three-urn", "4", "100"], "urn3"),
        (&["mc", "petersburg", "--games", "64", "--batches", "11"], "median_mean"),
        (&["fit", "mean", "30,70"], "50.0000"),
        (&["classic", "suite"], "galileo-dice"),
    ];
    for (args, needle) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains(needle), "{args:?}: {}", stdout(&o));
    }
}
