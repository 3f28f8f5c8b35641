use std::fs;
use std::process::{Command, Output};

fn droppush(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_droppush")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn simulate_two_sites() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("summary.csv");
    let run = droppush(&["simulate", "--n", "2", "--reps", "3", "--mode", "exact-walk", "--seed", "9", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,rep,seed,C_total,L2_sum,LR2_sum,R2_sum,max_cluster");
    assert_eq!(lines.len(), 4);
    for (rep, line) in lines[1..].iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[..2], ["2", &rep.to_string()[..]]);
        assert_eq!(fields[3..], ["0", "1", "4", "1", "2"]);
    }
}

#[test]
fn simulate_is_reproducible_and_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str, threads: &str| {
        let out = dir.path().join(format!("{tag}.csv"));
        let alpha = dir.path().join(format!("{tag}-alpha.csv"));
        let moments = dir.path().join(format!("{tag}-moments.csv"));
        let res = droppush(&[
            "simulate", "--n", "300", "--reps", "10", "--mode", "expected-cost", "--seed", "4",
            "--alpha-grid", "0.2:0.6:0.2", "--threads", threads,
            "--out", out.to_str().unwrap(),
            "--alpha-out", alpha.to_str().unwrap(),
            "--moments-out", moments.to_str().unwrap(),
        ]);
        assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
        [out, alpha, moments].map(|p| fs::read(p).unwrap())
    };
    let a = run("a", "0");
    let b = run("b", "3");
    assert_eq!(a, b);
    let alpha = String::from_utf8(a[1].clone()).unwrap();
    assert!(alpha.starts_with("n,alpha,mean_C_over_n,se,phi,abs_err\n300,0.2,"));
    assert_eq!(alpha.lines().count(), 4);
    let moments = String::from_utf8(a[2].clone()).unwrap();
    assert!(moments.starts_with("n,k,estimate,se,theory,rel_err\n300,1,"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("from-file.csv");
    let conf = dir.path().join("run.conf");
    fs::write(
        &conf,
        format!("# experiment\nn = 50\nreps = 7\nmode = exact-walk\nseed = 1\nout = {}\n", out.display()),
    )
    .unwrap();
    let res = droppush(&["simulate", "--config", conf.to_str().unwrap(), "--reps", "2"]);
    assert_eq!(res.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 3);
}

#[test]
fn theory_commands() {
    let phi = stdout(&droppush(&["theory", "phi", "--alpha", "0.5"]));
    assert!(phi.lines().nth(1).unwrap().starts_with("0.5,0.5833333333333334,"));
    let xi = stdout(&droppush(&["theory", "xi-moments", "--k", "2"]));
    assert!(xi.contains("1,0.443113462726379,0.10444284477629169,(1/4)*sqrt(pi),"));
    let predator = stdout(&droppush(&["theory", "predator-law", "--m", "4"]));
    assert!(predator.contains("4,1,0.1875,3/16\n4,2,0.25,1/4\n4,3,0.5625,9/16\n"));
    let borel = stdout(&droppush(&["theory", "borel", "--a", "0.5", "--k", "1"]));
    assert_eq!(borel, "a,k,probability\n0.5,1,0.6065306597126334\n");
}

#[test]
fn verify_exit_codes() {
    let ok = droppush(&["verify", "--suite", "lemma1,lemma2", "--max-n", "5"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = stdout(&ok);
    assert!(text.starts_with("suite,criterion,check,status,detail\n"));
    assert!(text.lines().skip(1).all(|l| l.contains(",pass,")));
    assert_eq!(droppush(&["verify", "--suite", "thm23"]).status.code(), Some(2));
    assert_eq!(droppush(&["verify", "--suite", "lemma1", "--max-n", "9"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(droppush(&["simulate", "--n", "5"]).status.code(), Some(2));
    assert_eq!(droppush(&["simulate", "--n", "1", "--reps", "1", "--seed", "0", "--out", "x.csv"]).status.code(), Some(2));
    assert_eq!(droppush(&["theory", "borel", "--a", "2", "--k", "1"]).status.code(), Some(2));
    assert_eq!(droppush(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(droppush(&["simulate", "--config", "/nonexistent/droppush.conf"]).status.code(), Some(2));
}

#[test]
fn sweep_writes_moments() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let res = droppush(&["sweep", "--n-list", "100,200", "--reps", "20", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 7);
    assert!(rows[1].starts_with("100,1,") && rows[4].starts_with("200,1,"));
    assert!(rows[2].contains(",0.018487367987806497,"));
}
