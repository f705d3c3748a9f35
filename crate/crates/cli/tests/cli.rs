use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harmanlab"))
        .args(args)
        .env("HARMANLAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn buchstab_prints_a_plain_value() {
    let o = run(&["buchstab", "--u", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0.5");
}

#[test]
fn buchstab_dump_is_csv_with_a_config_header() {
    let o = run(&["--format", "csv", "buchstab", "--dump", "1", "2", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# harmanlab "));
    assert_eq!(lines.next(), Some("u,B(u)"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows, ["1,1", "1.5,0.6666666666666666", "2,0.5"]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--no-such-flag"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    // outside the implemented range of theta
    assert_eq!(run(&["ctheta", "--theta", "0.30"]).status.code(), Some(2));
    let o = run(&["sieve", "phi", "--field", "-1", "--N", "1e4", "--table-norm", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("10000"));
}

#[test]
fn identical_configs_give_identical_bytes() {
    let args = ["weights", "audit", "--cond", "keycond", "--field", "d=-1", "--N", "2e4"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["report"]["condition"], "keycond");
    assert_eq!(v["config"]["command"]["weights"]["audit"]["w"]["field"], -1);
}

#[test]
fn config_file_supplies_flags() {
    let dir = std::env::temp_dir().join(format!("harmanlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.toml");
    std::fs::write(&path, "field = -1\nN = 2e4\ncond = \"keycond\"\n").unwrap();
    let from_file = run(&["weights", "audit", "--config", path.to_str().unwrap()]);
    let direct = run(&["weights", "audit", "--cond", "keycond", "--field", "-1", "--N", "2e4"]);
    assert_eq!(from_file.status.code(), Some(0), "{}", String::from_utf8_lossy(&from_file.stderr));
    assert_eq!(json(&from_file)["report"], json(&direct)["report"]);
    // flags on the command line win over the file
    let overridden = run(&["weights", "audit", "--config", path.to_str().unwrap(), "--N", "1e4"]);
    assert_eq!(json(&overridden)["config"]["command"]["weights"]["audit"]["w"]["n"], 1e4);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn identity_residual_is_exactly_zero() {
    let o = run(&["sieve", "identity", "--field", "-1", "--N", "1e4", "--weight", "chi", "--p-rank", "3", "--q-rank", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["report"]["exact_residual"], 0);
}

#[test]
fn primes_csv_lists_split_and_ramified_primes() {
    let o = run(&["--format", "csv", "primes", "--d", "-1", "--z", "20"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    // 2 ramified, 5, 13 and 17 split twice, 3 inert with norm 9
    assert_eq!(rows.len(), 1 + 2 * 3 + 1);
    assert_eq!(rows[0], "2,2,ramified,1,1");
}

#[test]
fn nu_matches_the_smaller_branch() {
    let v = json(&run(&["nu", "--eta", "0.1"]));
    let nu = v["report"]["nu"].as_f64().unwrap();
    let first: f64 = (7.0 / 44.0 - 0.1) / 1.2;
    let second = (0.25 - 0.05) / 1.6;
    assert!((nu - first.min(second)).abs() < 1e-15);
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
