use std::fs;
use std::process::{Command, Output};

fn vkg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vkg")).args(args).env("RUST_LOG", "warn").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_prints_csv_and_passes() {
    let o = vkg(&["check", "green"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,item,value,condition,status"));
    assert!(lines.all(|l| l.starts_with("green,") && l.ends_with(",pass")));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(vkg(&["check", "nonsense"]).status.code(), Some(2));
    assert_eq!(vkg(&["run", "--out", "x"]).status.code(), Some(2));
    assert_eq!(vkg(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    fs::write(&conf, "dim = 7\n").unwrap();
    let out = dir.path().join("a");
    let o = vkg(&["run", "--config", conf.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dim"));
}

#[test]
fn run_fit_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("small.conf");
    fs::write(
        &conf,
        "# small 1-D run\nhalf_length = 20\ngrid_points = 64\nvelocity_points = 64\ndt = 0.1\nhorizon = 12\noutput_every = 20\nalpha0 = 3\n",
    )
    .unwrap();
    let archive = dir.path().join("archive");
    let a = archive.to_str().unwrap();
    let o = vkg(&["run", "--config", conf.to_str().unwrap(), "--out", a]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(archive.join("manifest.csv").exists());
    assert!(archive.join("norms.csv").exists());

    let o = vkg(&["fit", "--archive", a, "--quantity", "rho", "--norm", "Linf", "--window", "6.3:12"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("exponent"));
    assert!(archive.join("fits/rho_Linf.csv").exists());

    let bad = vkg(&["fit", "--archive", a, "--quantity", "rho", "--norm", "Linf", "--window", "9:3"]);
    assert_eq!(bad.status.code(), Some(2));
    let missing = vkg(&["fit", "--archive", a, "--quantity", "nope", "--norm", "Linf", "--window", "1:3"]);
    assert_eq!(missing.status.code(), Some(2));

    let o = vkg(&["report", "--archive", a]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(archive.join("report/ledger.csv").exists());
    assert!(archive.join("report/fits.csv").exists());

    let again = vkg(&["run", "--config", conf.to_str().unwrap(), "--out", a]);
    assert_eq!(again.status.code(), Some(3));
}
