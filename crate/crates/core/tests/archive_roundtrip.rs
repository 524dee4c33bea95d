use vkg_core::driver::report::write_report;
use vkg_core::driver::{run, ArchiveWriter, RunArchive, RunConfig, RunOptions};

fn small() -> RunConfig {
    RunConfig {
        half_length: 20.0,
        grid_points: 64,
        velocity_points: 32,
        dt: 0.1,
        horizon: 8.0,
        output_every: 20,
        alpha0: 3,
        ..RunConfig::default()
    }
}

#[test]
fn archive_round_trips_run_output() {
    let dir = tempfile::tempdir().unwrap();
    let c = small();
    let mut w = ArchiveWriter::create(dir.path(), &c).unwrap();
    let out = run(&c, RunOptions { keep_history: false, record_norms: true }, &mut [&mut w]).unwrap();

    let a = RunArchive::open(dir.path()).unwrap();
    assert_eq!(a.config.hash(), c.hash());
    assert_eq!(a.norms().unwrap(), out.norms);

    let rho = a.snapshots("rho").unwrap();
    assert_eq!(rho.len(), 5);
    let last = rho.last().unwrap();
    assert_eq!(last.time, out.state.time());
    let grid = c.x_grid().unwrap();
    let direct = out.dist.density().unwrap();
    let stored = last.to_real_field(grid).unwrap();
    assert!(stored.sub(&direct).unwrap().max_coefficient() <= 1e-15 * direct.max_coefficient());

    let f = a.snapshots("f").unwrap();
    assert_eq!(f[0].axes, vec![64, 32]);

    assert!(ArchiveWriter::create(dir.path(), &c).is_err());
    let s = write_report(&a).unwrap();
    assert!(dir.path().join("report/ledger.csv").exists());
    assert!(!s.ledger.rows.is_empty());
}

#[test]
fn identical_configs_give_identical_norms() {
    let c = RunConfig { horizon: 4.0, ..small() };
    let a = run(&c, RunOptions::default(), &mut []).unwrap();
    let b = run(&c, RunOptions::default(), &mut []).unwrap();
    assert_eq!(a.norms, b.norms);
    assert_eq!(a.dist.values(), b.dist.values());
}
