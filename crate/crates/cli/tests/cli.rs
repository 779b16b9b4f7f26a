use std::path::Path;
use std::process::{Command, Output};

fn dioph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dioph")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn constants_table_has_exact_kappa() {
    let dir = tempfile::tempdir().unwrap();
    let o = dioph(&["constants", "--d", "1", "--eps", "1e-6", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    // (25/64 − 10⁻⁶)/11
    assert!(stdout(&o).contains("12207/343750"), "{}", stdout(&o));
    let csv = read(dir.path(), "constants.csv");
    assert!(csv.starts_with("name,value,exact\n"));
    assert!(csv.lines().last().unwrap().starts_with("# seed=0 version="));
}

#[test]
fn gap_sum_prints_closed_form_and_oracle() {
    let o = dioph(&["gap-sum", "--base", "3", "--digits", "0,2", "--n", "2", "--delta", "1", "--brute-force"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("5/36").count(), 2);
}

#[test]
fn identity_audit_passes() {
    let o = dioph(&["identity-audit", "--ifs", "missing:base=5,digits=0,1,2,3", "--max-word", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all identities verified"));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let o = dioph(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn failed_hypothesis_still_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let o =
        dioph(&["check-hypothesis", "--ifs", "missing:base=5,digits=0,1,2,3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(read(dir.path(), "hypothesis.csv").contains("gap_holds,false"));
}

#[test]
fn domain_errors_exit_two() {
    let o = dioph(&[
        "khintchine",
        "--ifs",
        "missing:base=5,digits=0,1,2,3",
        "--psi",
        "recip",
        "--n-min",
        "1",
        "--n-max",
        "3",
        "--samples",
        "-5",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("samples"));
    let o = dioph(&["simplex", "--center", "0.5", "--radius", "1/20", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_runs_are_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# khintchine control run\nifs = missing:base=5,digits=0,1,2,3\npsi = recip\nsource = fractal\nn_min = 1\nn_max = 10\nsamples = 300\nseed = 5\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("t{threads}"));
        let o = dioph(&[
            "khintchine",
            "--config",
            cfg.to_str().unwrap(),
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(read(&out, "khintchine.csv"));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(outputs[0].starts_with("n,t_n,r_tn,mu_an_hat,stderr,bracket_lo,bracket_hi,in_g0,cum_hit\n"));
    assert!(outputs[0].trim_end().ends_with("version=0.1.0") && outputs[0].contains("# seed=5 "));
}

#[test]
fn walk_with_unit_test_conserves_mass() {
    let dir = tempfile::tempdir().unwrap();
    let o = dioph(&[
        "walk",
        "--ifs",
        "missing:base=3,digits=0,2",
        "--n-max",
        "3",
        "--test",
        "one",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = read(dir.path(), "walk.csv");
    for line in csv.lines().skip(1).filter(|l| !l.starts_with('#')) {
        assert_eq!(line.split(',').nth(1), Some("1.0"), "{line}");
    }
}

#[test]
fn bc_verify_flags_spike() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("spike.fam");
    // μ = 10⁻⁶ at n = 10 followed by μ = 1 at n = 11
    std::fs::write(&fam, "mu = 1/2 + (n == 10) * (0.000001 - 1/2) + (n == 11) * (1/2)\npair = independent\n").unwrap();
    let out = dir.path().to_str().unwrap();
    let o = dioph(&["bc-verify", "--family", fam.to_str().unwrap(), "--n-max", "20", "--out", out]);
    assert_eq!(o.status.code(), Some(3), "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    let csv = read(dir.path(), "bc_report.csv");
    assert!(csv.contains("weak monotonicity,1..20,false,10:11"), "{csv}");
    let o = dioph(&["bc-verify", "--family", "const:1/2", "--n-max", "200", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn simplex_finds_hyperplane() {
    let o = dioph(&["simplex", "--center", "1/3,1/3", "--radius", "1/20", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rational points: 0"));
}

#[test]
fn profile_and_equidist_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = dioph(&["profile", "--psi", "recip", "--n-max", "10", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    assert!(read(dir.path(), "profile.csv").contains("dyadic,10,"));
    let o = dioph(&[
        "equidist",
        "--ifs",
        "missing:base=5,digits=0,1,2,3",
        "--t",
        "0,2",
        "--eps",
        "0.3",
        "--samples",
        "200",
        "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = read(dir.path(), "equidist.csv");
    assert!(csv.starts_with("t,eps,estimate,stderr,haar_lo,haar_hi\n0.0,0.3,0.0,"), "{csv}");
}
