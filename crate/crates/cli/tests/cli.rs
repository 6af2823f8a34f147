use std::fs;
use std::process::{Command, Output};

fn majsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_majsim"))
        .args(args)
        .env_remove("MAJ_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(s: &str) -> Vec<&str> {
    s.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn cycle_edge_list() {
    let o = majsim(&["generate", "--family", "cycle", "--n", "6"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines = data_lines(&out);
    assert_eq!(lines, ["0 1", "0 5", "1 2", "2 3", "3 4", "4 5"]);
}

#[test]
fn odd_regular_degree_sum_is_a_usage_error() {
    let o = majsim(&["generate", "--family", "rrg", "--n", "5", "--d", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("even"), "{err}");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(majsim(&["generate", "--bogus"]).status.code(), Some(2));
    assert_eq!(majsim(&["sweep", "--family", "er", "--n", "10"]).status.code(), Some(2));
}

#[test]
fn complete_graph_needs_a_majority_of_elites() {
    // on K9 with r = 1 the top k win exactly when k > 9 - k
    let o = majsim(&["elites", "--family", "er", "--n", "9", "--q", "1", "--r", "1"]);
    assert!(o.status.success());
    assert_eq!(data_lines(&stdout(&o)), ["r,min_fraction,criterion", "1,0.555556,WINS"]);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let args = [
        "sweep", "--family", "er", "--n", "400", "--q", "0.03", "--step", "0.25", "--trials", "3", "--seed", "11",
    ];
    let a = majsim(&args);
    let b = majsim(&[&args[..], &["--jobs", "1"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = majsim(&[&args[..args.len() - 1], &["12"]].concat());
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn provenance_header_comes_first() {
    let o = majsim(&["simulate", "--family", "cycle", "--n", "8", "--coloring", "bbwwbbww"]);
    let out = stdout(&o);
    let first_data = out.lines().position(|l| !l.starts_with('#')).unwrap();
    assert!(out.lines().take(first_data).any(|l| l == "# coloring=bbwwbbww"));
    assert!(!out.contains("jobs"));
    assert_eq!(out.lines().nth(first_data), Some("n,initial_black,final_black_frac,stab_time,period,label"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# sweep defaults\nfamily = rrg\nn = 200\nd = 4\ntrials = 2\nstep = 0.5\nseed = 5\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let base = majsim(&["sweep", "--config", cfg]);
    assert!(base.status.success(), "{}", String::from_utf8_lossy(&base.stderr));
    let out = stdout(&base);
    assert!(out.contains("# seed=5\n") && out.contains("# trials=2\n"));
    assert_eq!(data_lines(&out).len(), 4);

    let over = majsim(&["--config", cfg, "sweep", "--trials", "3", "--d", "6"]);
    let out = stdout(&over);
    assert!(out.contains("# trials=3\n") && out.contains("# d=6\n"), "{out}");
    assert!(data_lines(&out)[1..].iter().all(|l| l.split(',').nth(3) == Some("3")));
}

#[test]
fn seed_precedence_flag_env_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    fs::write(&cfg, "seed=5\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_majsim"));
        cmd.args(["generate", "--family", "er", "--n", "50", "--q", "0.1", "--config", cfg])
            .args(extra)
            .env_remove("MAJ_SEED");
        if let Some(e) = env {
            cmd.env("MAJ_SEED", e);
        }
        stdout(&cmd.output().unwrap())
    };
    assert!(run(None, &[]).contains("# seed=5\n"));
    assert!(run(Some("7"), &[]).contains("# seed=7\n"));
    assert!(run(Some("7"), &["--seed", "9"]).contains("# seed=9\n"));
    assert_ne!(data_lines(&run(Some("7"), &[])), data_lines(&run(None, &[])));
}

#[test]
fn bad_env_seed_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_majsim"))
        .args(["generate", "--family", "cycle", "--n", "5"])
        .env("MAJ_SEED", "abc")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exhaustive_potential_check_passes() {
    let o = majsim(&["verify", "potential", "--n", "8", "--exhaustive", "--graphs", "4"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS potential"));
}

#[test]
fn period_and_stubbornness_suites_pass() {
    for args in [
        &["verify", "period", "--instances", "300", "--max-n", "60"][..],
        &["verify", "stubbornness", "--instances", "10"][..],
        &["verify", "cycle", "--n", "2000", "--trials", "4"][..],
    ] {
        let o = majsim(args);
        assert!(o.status.success(), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn single_certificate_goes_to_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.csv");
    let o = majsim(&[
        "verify",
        "potential",
        "--family",
        "cycle",
        "--n",
        "6",
        "--coloring",
        "bbwbww",
        "--psi",
        "3/5",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("t,phi1_num,phi1_den,phi2,flips\n0,"), "{csv}");
    assert!(csv.contains("PASS potential"));
}

#[test]
fn dataset_round_trip_and_manifest_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let g = majsim(&["generate", "--family", "pa", "--n", "300", "--m-out", "2", "-o", path.to_str().unwrap()]);
    assert!(g.status.success());
    let p = path.to_str().unwrap();
    let again = majsim(&["generate", "--dataset", p]);
    assert!(again.status.success());
    // ids are renumbered on load, so compare degree sequences
    let degrees = |text: &str| {
        let mut deg = std::collections::HashMap::<&str, usize>::new();
        for l in data_lines(text) {
            for v in l.split(' ') {
                *deg.entry(v).or_default() += 1;
            }
        }
        let mut d: Vec<usize> = deg.into_values().collect();
        d.sort_unstable();
        d
    };
    let (loaded, written) = (stdout(&again), fs::read_to_string(&path).unwrap());
    assert_eq!(data_lines(&loaded).len(), data_lines(&written).len());
    assert_eq!(degrees(&loaded), degrees(&written));
    let bad = majsim(&["generate", "--dataset", p, "--manifest", "FB"]);
    assert_eq!(bad.status.code(), Some(2));
    let matched = majsim(&["generate", "--dataset", p, "--matched", "rrg"]);
    assert!(stdout(&matched).contains("# d=4\n"), "{}", stdout(&matched));
}

#[test]
fn timeout_exits_with_failure() {
    // a long alternating run between solid blocks erodes one node per side each round
    let o = majsim(&[
        "simulate",
        "--family",
        "cycle",
        "--n",
        "20",
        "--coloring",
        "bbbbbwbwbwbwbwbwwwww",
        "--max-rounds",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
}
