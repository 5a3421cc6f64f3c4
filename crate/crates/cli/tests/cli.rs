use std::process::{Command, Output};

fn fsdepth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsdepth")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV report, skipping `#` lines and the header.
fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn summary(o: &Output, key: &str) -> String {
    let prefix = format!("# summary {key}: ");
    stdout(o).lines().find_map(|l| l.strip_prefix(&prefix).map(str::to_string)).unwrap_or_default()
}

#[test]
fn identity_is_lossless() {
    let o = fsdepth(&["--machine", "builtin:identity", "il-check"]);
    assert!(o.status.success());
    assert_eq!(rows(&o)[0][0], "yes");
    assert_eq!(summary(&o, "delay_bound"), "0");
}

#[test]
fn silent_machine_gets_a_witness() {
    let o = fsdepth(&["--machine", "builtin:silent", "il-check"]);
    assert!(o.status.success());
    let r = &rows(&o)[0];
    assert_eq!(r[0], "no");
    assert_ne!(r[1], r[2]);
}

#[test]
fn complexity_of_zeros_falls_with_k() {
    let o = fsdepth(&["--kmin", "10", "--kmax", "12", "--ngrid", "16,64", "--input", "zeros", "complexity"]);
    assert!(o.status.success());
    for chunk in rows(&o).chunks(3) {
        let values: Vec<u64> = chunk.iter().map(|r| r[2].parse().unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0]), "{values:?}");
    }
}

#[test]
fn champernowne_is_deeper_than_zeros() {
    let run = |input| {
        let o = fsdepth(&["--k", "10", "--ngrid", "64,128", "--input", input, "depth-profile", "--kprime", "16"]);
        assert!(o.status.success());
        rows(&o).iter().map(|r| r[3].parse::<u64>().unwrap()).collect::<Vec<_>>()
    };
    let (zeros, champ) = (run("zeros"), run("champernowne"));
    assert!(zeros.iter().zip(&champ).all(|(z, c)| z <= c), "{zeros:?} {champ:?}");
}

#[test]
fn json_output_parses() {
    let o = fsdepth(&["--format", "json", "toy-he", "--queries", "64"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "toy-he");
    assert_eq!(v["summary"]["agreeing_queries"], "64");
}

#[test]
fn environment_sets_defaults() {
    let o = Command::new(env!("CARGO_BIN_EXE_fsdepth"))
        .env("FSDEPTH_FORMAT", "json")
        .args(["--machine", "builtin:identity", "il-check"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).trim_start().starts_with('{'));
}

#[test]
fn output_is_deterministic() {
    let args = ["--k", "10", "--ngrid", "32,96", "--input", "prng:7", "complexity"];
    assert_eq!(fsdepth(&args).stdout, fsdepth(&args).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(fsdepth(&["--no-such-flag"]).status.code(), Some(1));
    assert_eq!(fsdepth(&["--kmin", "12", "--kmax", "10", "complexity"]).status.code(), Some(1));
    assert_eq!(fsdepth(&["--machine", "/no/such/file", "il-check"]).status.code(), Some(2));
    assert_eq!(fsdepth(&["--k", "10", "depth-profile", "--kprime", "40"]).status.code(), Some(3));
    assert_eq!(fsdepth(&["--machine", "builtin:silent", "invert"]).status.code(), Some(4));
}

#[test]
fn machine_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inv = dir.path().join("inv.fst");
    let o = fsdepth(&["--machine", "builtin:doubler", "invert", "--emit-machine", inv.to_str().unwrap()]);
    assert!(o.status.success());
    let o = fsdepth(&["--machine", inv.to_str().unwrap(), "il-check"]);
    assert!(o.status.success());
}

#[test]
fn cache_survives_a_second_run() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let args = ["--cache", cache.to_str().unwrap(), "--k", "10", "--ngrid", "8,24", "--input", "zeros", "complexity"];
    let first = fsdepth(&args);
    assert!(first.status.success());
    assert!(cache.exists());
    let second = fsdepth(&args);
    assert!(second.status.success());
    assert_eq!(rows(&first), rows(&second));
}

#[test]
fn pt_sgl_chain_holds() {
    let o = fsdepth(&["pt-sgl", "--nmax", "24"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(rows(&o).iter().all(|r| r[5] == "true"));
}
