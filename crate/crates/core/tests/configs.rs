use std::path::PathBuf;

use vkg_core::driver::{RunConfig, SolverMode};

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn shipped_configs_load_and_validate() {
    let mut seen = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("conf") {
            continue;
        }
        let c = RunConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        c.validate().unwrap();
        assert!(c.horizon <= c.wrap_time(), "{}", path.display());
        let again = RunConfig::parse(&c.to_text()).unwrap();
        assert_eq!(again.hash(), c.hash());
        seen += 1;
    }
    assert!(seen >= 3);
}

#[test]
fn reference_config_is_the_default() {
    let c = RunConfig::load(&configs_dir().join("reference_1d.conf")).unwrap();
    assert_eq!(c.hash(), RunConfig::default().hash());
}

#[test]
fn particle_config_is_three_dimensional() {
    let c = RunConfig::load(&configs_dir().join("particle_3d.conf")).unwrap();
    assert_eq!(c.dim, 3);
    assert_eq!(c.mode, SolverMode::Particle);
}

#[test]
fn malformed_configs_are_rejected() {
    for text in ["dim = 4", "grid_points = abc", "bogus = 1", "dt = 0.1\ndt = 0.2", "coupling = maybe", "dt"] {
        assert!(RunConfig::parse(text).and_then(|c| c.validate()).is_err(), "{text:?}");
    }
}
